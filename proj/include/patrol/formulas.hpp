#pragma once

// Closed-form machinery: the m = 2 solution, the odd-m random-walk value,
// the m = 4 evaluator with its quartic optimum, the general interception
// polynomial for s = 1 / d = 2, its companion recursion, and the large-n
// m = 4 limits.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "patrol/model.hpp"
#include "patrol/solve_result.hpp"

namespace patrol {

// Interception probability for m = 2 (s = 1, d = 2): Q = (1-np) p / (1-p).
inline double q_m2(int n, double p) {
    const PatrollerStrategy strat(n, p, 1.0);
    return center_fraction(n, p) * strat.p;
}

// m = 2 optimum: p_hat = 1 - sqrt(n(n-1))/n and V = (2n-1) - 2 sqrt(n(n-1)),
// both evaluated through their reciprocal forms, which stay fully accurate
// when n is large and the direct differences cancel catastrophically.
inline SolveResult solve_m2(int n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const double root = std::sqrt(static_cast<double>(n) * (n - 1.0));
    SolveResult out;
    out.p_hat = 1.0 / (n + root);
    out.r_hat = 1.0 - n * out.p_hat;
    out.value = 1.0 / ((2.0 * n - 1.0) + 2.0 * root);
    out.method = SolveMethod::closed_m2;
    return out;
}

// Odd-m value: the zero-holding random walk p = 1/n, s = 1 is optimal and
// V = 1 - ((n-1)/n)^((m-1)/2).
inline SolveResult value_odd(int n, int m) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (m < 3 || m % 2 == 0)
        throw std::invalid_argument("value_odd requires odd m >= 3");
    SolveResult out;
    out.p_hat = 1.0 / n;
    out.r_hat = 1.0 - n * out.p_hat;
    out.value = 1.0 - std::pow((n - 1.0) / n, (m - 1) / 2);
    out.method = SolveMethod::closed_odd;
    return out;
}

// Interception probability for m = 4 under delay d = 2 and any reflection
// probability s. Enumerates the patroller sequences that reach the attacked
// node inside the four-period window:
//   from C:  CA.. | CCA. | CCCA | CECA   ->  p (1 + r + r^2 + q s)
//   from E:  ECA. | ECCA | EECA          ->  p (s + s r + (1-s) s)
// weighted by the attack-start center probability c = (1-np)/(1-p).
inline double q_m4(int n, double p, double s) {
    PatrollerStrategy strat(n, p, s);
    const double c = center_fraction(n, p);
    const double from_center = p * (1.0 + strat.r + strat.r * strat.r + strat.q * s);
    const double from_end = p * (s + s * strat.r + (1.0 - s) * s);
    return c * from_center + (1.0 - c) * from_end;
}

// Numerator of dQ/dp for the m = 4, s = 1 value: the quartic
//   3 n^3 p^4 - 4 n (n^2+n+1) p^3 + 3 (2n^2+3n+1) p^2 - 6 (n+1) p + 3.
// Positive at 0+ and negative at 1/n, with the optimum as its unique root in
// between.
inline double m4_quartic(int n, double p) {
    const double nn = static_cast<double>(n);
    return (((3.0 * nn * nn * nn * p - 4.0 * nn * (nn * nn + nn + 1.0)) * p +
             3.0 * (2.0 * nn * nn + 3.0 * nn + 1.0)) *
                p -
            6.0 * (nn + 1.0)) *
               p +
           3.0;
}

// Intermediates of the closed-form root of the m = 4 quartic, following the
// standard resolvent-cubic solution. All radicands are nonnegative for
// n >= 2 (checked at construction).
struct M4Constants {
    double A, B, C, D, E, F, G;

    explicit M4Constants(int n_) {
        if (n_ < 2) throw std::invalid_argument("m4 constants require n >= 2");
        const double n = static_cast<double>(n_);
        A = 8.0 * std::pow(n, 6) - 18.0 * std::pow(n, 5) + 6.0 * std::pow(n, 4) +
            9.0 * std::pow(n, 3) - 3.0 * n * n;
        B = std::pow(n - 1.0, 6) * std::pow(n, 3) *
            (32.0 * n * n * n + 24.0 * n * n - 3.0 * n - 4.0);
        C = 8.0 * std::pow(n * n + n + 1.0, 2) - 12.0 * n * (2.0 * n * n + 3.0 * n + 1.0);
        if (B < 0.0) throw std::domain_error("negative radicand in m4 constant B");
        D = std::cbrt(A + 2.0 * std::sqrt(B) - 3.0 * n + 1.0);
        E = (4.0 * n * n - 1.0) * (n - 1.0) * (n - 1.0);
        F = (4.0 * std::pow(n, 4) + 2.0 * std::pow(n, 3) + 6.0 * n * n + 11.0 * n + 4.0) *
            (n - 1.0) * (n - 1.0);
        const double g2 = C - 6.0 * n * E / D + 6.0 * n * D;
        if (g2 < 0.0) throw std::domain_error("negative radicand in m4 constant G");
        G = std::sqrt(g2);
    }
};

// Radical form of the m = 4 optimum built from the constants above.
inline double phat_m4_radical(int n_) {
    const M4Constants k(n_);
    const double n = static_cast<double>(n_);
    const double n2 = n * n;
    const double inner = k.C / (9.0 * n2 * n2) + k.E / (3.0 * n2 * n * k.D) +
                         4.0 * std::sqrt(2.0) * k.F / (9.0 * n2 * n2 * k.G) -
                         k.D / (3.0 * n2 * n);
    if (inner < 0.0) throw std::domain_error("negative radicand in m4 root");
    return (2.0 * n2 + k.G / std::sqrt(2.0) - 3.0 * n2 * std::sqrt(inner) + 2.0 * n + 2.0) /
           (6.0 * n2);
}

struct M4Optimum {
    double p_numeric = 0.0;   // authoritative
    double p_radical = 0.0;
    double discrepancy = 0.0;
    bool radical_ok = false;  // discrepancy within 1e-6
};

// m = 4 optimum: bisection on the sign change of the quartic over (0, 1/n),
// reconciled against the radical form. The numeric root is returned; the
// radical value and their gap are reported alongside.
inline M4Optimum phat_m4_full(int n) {
    if (n < 2) throw std::invalid_argument("phat_m4 requires n >= 2");
    double lo = 0.0, hi = 1.0 / n;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (m4_quartic(n, mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    M4Optimum out;
    out.p_numeric = 0.5 * (lo + hi);
    out.p_radical = phat_m4_radical(n);
    out.discrepancy = std::fabs(out.p_numeric - out.p_radical);
    out.radical_ok = out.discrepancy <= 1e-6;
    return out;
}

inline double phat_m4(int n) { return phat_m4_full(n).p_numeric; }

// Large-n limits for m = 4, with t = sqrt(2) - 1:
//   r_inf = (1 - t^(-1/3) + t^(1/3)) / 2, the [0,1] root of 4r^3-6r^2+6r-1,
//   a = poly(r_inf) with poly(r) = -r^4 + 2r^3 - 3r^2 + r + 1,
// so that the optimal holding probability tends to r_inf and n times the
// value tends to a.
struct M4Asymptotics {
    double r_inf;
    double a;
};

inline double m4_value_poly(double r) {
    return ((-r + 2.0) * r - 3.0) * r * r + r + 1.0;
}

inline M4Asymptotics asymptotics_m4() {
    const double t = std::sqrt(2.0) - 1.0;
    const double t13 = std::cbrt(t);
    M4Asymptotics out;
    out.r_inf = 0.5 * (1.0 - 1.0 / t13 + t13);
    const double t43 = t * t13;
    const double t23 = t13 * t13;
    out.a = -3.0 *
            (5.0 - 4.0 * std::sqrt(2.0) - 7.0 * t43 + t23 * (2.0 * std::sqrt(2.0) - 1.0)) /
            (16.0 * t43);
    return out;
}

// General interception probability for s = 1, d = 2, any m >= 1:
//   Q = 1 - [(1-2p+np+u) w2^m - (1-2p+np-u) w1^m] / (2 (1-p) u),
// with u = sqrt((np+1)^2 - 4p) and w1,2 = (1 - np -+ u)/2. Powers go through
// repeated multiplication so the signed cancellation stays exact for m well
// past 10^3. p = 1 (possible only when n = 1) returns the limit value 1.
inline double q_general(int n, int m, double p) {
    const PatrollerStrategy strat(n, p, 1.0);
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    if (p == 1.0) return 1.0;
    const double np = 1.0 - strat.r;
    // (np+1)^2 - 4p rewritten without cancellation; for n = 1 this collapses
    // to u = 1 - p and the whole expression to the geometric 1 - (1-p)^(m-1)
    const double u = std::sqrt(strat.r * strat.r + 4.0 * (n - 1) * p);
    const double w1 = (1.0 - np - u) / 2.0;
    const double w2 = (1.0 - np + u) / 2.0;
    const double alpha = 1.0 - 2.0 * p + np;
    double pw1 = 1.0, pw2 = 1.0;
    for (int i = 0; i < m; ++i) {
        pw1 *= w1;
        pw2 *= w2;
    }
    return 1.0 - ((alpha + u) * pw2 - (alpha - u) * pw1) / (2.0 * (1.0 - p) * u);
}

inline double q_general(const GameConfig& game, double p) {
    return q_general(game.n, game.m, p);
}

// Survival recursion h(k) = Pr(an attack of length k starting with the
// patroller at the center is NOT intercepted), for s = 1:
//   h(1) = 1, h(2) = q + r, h(k) = r h(k-1) + q h(k-2).
// Returns the full prefix [h(1), ..., h(m)]; 1 - Q reconstructs as
// c h(m) + (1-c) h(m-1) with c = (1-np)/(1-p).
inline std::vector<double> h_recursion(int n, int m, double p) {
    PatrollerStrategy strat(n, p, 1.0);
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    std::vector<double> h(static_cast<std::size_t>(m));
    h[0] = 1.0;
    if (m >= 2) h[1] = strat.q + strat.r;
    for (int k = 3; k <= m; ++k)
        h[static_cast<std::size_t>(k - 1)] = strat.r * h[static_cast<std::size_t>(k - 2)] +
                                             strat.q * h[static_cast<std::size_t>(k - 3)];
    return h;
}

inline std::vector<double> h_recursion(const GameConfig& game, double p) {
    return h_recursion(game.n, game.m, p);
}

}  // namespace patrol
