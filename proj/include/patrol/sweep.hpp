#pragma once

// Parameter sweeps: Q(p) curves over a linear p grid for several attack
// durations, plus the per-duration optima, with byte-deterministic CSV
// serialization (17 significant digits, '\n' line endings).

#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "patrol/formulas.hpp"
#include "patrol/solver.hpp"

namespace patrol {

struct SweepRow {
    int n;
    int m;
    double p;
    double q;
};

struct OptimaRow {
    int n;
    int m;
    double p_hat;
    double r_hat;
    double value;
};

inline std::vector<SweepRow> sweep_rows(int n, const std::vector<int>& m_list,
                                        int p_steps) {
    if (p_steps < 2) throw std::invalid_argument("p_steps must be >= 2");
    std::vector<SweepRow> rows;
    rows.reserve(m_list.size() * static_cast<std::size_t>(p_steps));
    for (int m : m_list) {
        GameConfig game(n, m);
        for (int i = 1; i <= p_steps; ++i) {
            // p runs over (0, 1/n]; the last grid point is exactly 1/n
            const double p = (static_cast<double>(i) / p_steps) * (1.0 / n);
            rows.push_back({n, m, p, q_general(game, p)});
        }
    }
    return rows;
}

inline std::vector<OptimaRow> optima_rows(const std::vector<int>& n_list,
                                          const std::vector<int>& m_list) {
    std::vector<OptimaRow> rows;
    for (int n : n_list)
        for (int m : m_list) {
            const SolveResult sol = solve(GameConfig(n, m));
            rows.push_back({n, m, sol.p_hat, sol.r_hat, sol.value});
        }
    return rows;
}

namespace detail {

inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace detail

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "n,m,p,q\n";
    for (const SweepRow& r : rows)
        os << r.n << ',' << r.m << ',' << detail::format_g17(r.p) << ','
           << detail::format_g17(r.q) << '\n';
}

inline void write_optima_csv(std::ostream& os, const std::vector<OptimaRow>& rows) {
    os << "n,m,p_hat,r_hat,value\n";
    for (const OptimaRow& r : rows)
        os << r.n << ',' << r.m << ',' << detail::format_g17(r.p_hat) << ','
           << detail::format_g17(r.r_hat) << ',' << detail::format_g17(r.value) << '\n';
}

}  // namespace patrol
