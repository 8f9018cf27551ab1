#pragma once

// Monte Carlo ground truth: a simulator of the literal star walk with the
// observe-and-delay attack semantics (no state lumping), a coupled-path
// check of the reflection dominance, and a chi-square validation that the
// full walk's hitting times match the reduced three-state chain.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "patrol/detail/rng.hpp"
#include "patrol/detail/stats.hpp"
#include "patrol/hitting.hpp"
#include "patrol/model.hpp"

namespace patrol {

struct SimConfig {
    GameConfig game;
    PatrollerStrategy strat;
    AttackerStrategy attacker;
    std::int64_t trials = 1'000'000;
    std::uint64_t seed = 42;
    std::int64_t max_steps = 1'000'000;
    bool stationary_start = false;  // default: patroller starts at the attacked end
    int threads = 0;                // 0 = hardware concurrency

    SimConfig(const GameConfig& g, const PatrollerStrategy& st, const AttackerStrategy& a)
        : game(g), strat(st), attacker(a) {
        validate(game, strat);
        if (attacker.target > game.n)
            throw std::invalid_argument("attack target exceeds n");
    }
};

struct SimResult {
    std::int64_t intercept_count = 0;
    std::int64_t trials = 0;
    std::int64_t timeouts = 0;
    double q_hat = 0.0;
    double half_width_95 = 0.0;
    double mean_attack_start_time = 0.0;
};

namespace detail {

struct TrialResult {
    bool timeout = false;
    bool intercepted = false;
    std::int64_t attack_start = 0;  // period in which the absence count hit d
};

// One play-through against an arbitrary walk. next_pos maps the current
// position to the next one (0 = center, 1..n = ends); the attacker sits at
// `target`, counts consecutive absence periods, launches when the count
// first reaches d, and the attack spans m periods starting with that one.
template <typename WalkFn>
TrialResult run_trial(WalkFn&& next_pos, int start_pos, int target, int d, int m,
                      std::int64_t max_steps) {
    TrialResult out;
    int pos = start_pos;
    int counter = 0;
    std::int64_t period = 0;
    while (counter < d) {
        if (++period > max_steps) {
            out.timeout = true;
            return out;
        }
        pos = next_pos(pos);
        counter = (pos == target) ? 0 : counter + 1;
    }
    out.attack_start = period;
    // the patroller is away in the first attack period by construction
    for (int i = 1; i < m; ++i) {
        pos = next_pos(pos);
        if (pos == target) {
            out.intercepted = true;
            break;
        }
    }
    return out;
}

struct StarWalk {
    int n;
    double p, r, s;
    Rng* rng;

    int operator()(int pos) const {
        const double u = rng->next_unit();
        if (pos == 0) {
            if (u < r) return 0;
            int idx = static_cast<int>((u - r) / p);
            if (idx >= n) idx = n - 1;
            return idx + 1;
        }
        return u < s ? 0 : pos;
    }
};

}  // namespace detail

// Simulate the full game. Deterministic for fixed (seed, trials): every
// trial draws from its own counter-based stream, so the thread count never
// changes the tallies.
inline SimResult run(const SimConfig& cfg) {
    validate(cfg.game, cfg.strat);
    if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (cfg.attacker.target > cfg.game.n)
        throw std::invalid_argument("attack target exceeds n");
    if (cfg.max_steps < cfg.attacker.d + cfg.game.m)
        throw std::invalid_argument("max_steps must be >= d + m");

    struct Bucket {
        std::int64_t intercepts = 0;
        std::int64_t timeouts = 0;
        std::uint64_t start_sum = 0;
    };

    int threads = cfg.threads > 0
                      ? cfg.threads
                      : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = static_cast<int>(std::min<std::int64_t>(threads, cfg.trials));
    std::vector<Bucket> buckets(static_cast<std::size_t>(threads));

    auto worker = [&cfg](std::int64_t lo, std::int64_t hi, Bucket* out) {
        const double stat_center = cfg.strat.s / (cfg.strat.s + cfg.game.n * cfg.strat.p);
        for (std::int64_t t = lo; t < hi; ++t) {
            detail::Rng rng(cfg.seed, static_cast<std::uint64_t>(t));
            detail::StarWalk walk{cfg.game.n, cfg.strat.p, cfg.strat.r, cfg.strat.s, &rng};
            int start_pos = cfg.attacker.target;
            if (cfg.stationary_start) {
                const double u = rng.next_unit();
                start_pos = u < stat_center
                                ? 0
                                : 1 + std::min(cfg.game.n - 1,
                                               static_cast<int>((u - stat_center) /
                                                                (1.0 - stat_center) * cfg.game.n));
            }
            const detail::TrialResult res = detail::run_trial(
                walk, start_pos, cfg.attacker.target, cfg.attacker.d, cfg.game.m,
                cfg.max_steps);
            if (res.timeout) {
                ++out->timeouts;
            } else {
                if (res.intercepted) ++out->intercepts;
                out->start_sum += static_cast<std::uint64_t>(res.attack_start);
            }
        }
    };

    if (threads == 1) {
        worker(0, cfg.trials, &buckets[0]);
    } else {
        std::vector<std::thread> pool;
        const std::int64_t chunk = (cfg.trials + threads - 1) / threads;
        for (int i = 0; i < threads; ++i) {
            const std::int64_t lo = i * chunk;
            const std::int64_t hi = std::min<std::int64_t>(cfg.trials, lo + chunk);
            pool.emplace_back(worker, lo, hi, &buckets[static_cast<std::size_t>(i)]);
        }
        for (auto& th : pool) th.join();
    }

    Bucket total;
    for (const Bucket& b : buckets) {
        total.intercepts += b.intercepts;
        total.timeouts += b.timeouts;
        total.start_sum += b.start_sum;
    }

    if (total.timeouts * 1000 > cfg.trials)
        throw std::runtime_error("more than 0.1% of trials timed out before the attack began");

    SimResult res;
    res.trials = cfg.trials;
    res.intercept_count = total.intercepts;
    res.timeouts = total.timeouts;
    const std::int64_t counted = cfg.trials - total.timeouts;
    res.q_hat = static_cast<double>(total.intercepts) / static_cast<double>(counted);
    res.half_width_95 =
        1.96 * std::sqrt(res.q_hat * (1.0 - res.q_hat) / static_cast<double>(counted));
    res.mean_attack_start_time =
        static_cast<double>(total.start_sum) / static_cast<double>(counted);
    return res;
}

// Coupled-path dominance check for d = 2. Each sampled (p, s) reduced-chain
// path X yields its collapsed version (consecutive E's deleted), which is
// distributed as a (p, 1) path on shared randomness. The collapsed hitting
// time can never exceed the original one, so every violation is a hard
// logic failure, not a statistical event.
struct CouplingEntry {
    double s = 0.0;
    std::int64_t paths = 0;
    std::int64_t violations = 0;
    std::int64_t strict_count = 0;  // paths with collapsed T <= m < T
    std::int64_t truncated = 0;
    double q_s = 0.0;   // fraction with T <= m      (strategy (p, s))
    double q_s1 = 0.0;  // fraction with T~ <= m     (coupled s = 1 paths)
};

struct CouplingReport {
    std::vector<CouplingEntry> entries;
    bool passed = false;
};

inline CouplingReport coupling_check(const GameConfig& game, double p,
                                     const std::vector<double>& s_grid,
                                     std::int64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    constexpr std::int64_t kPathCap = 1'000'000;
    const double c = center_fraction(game.n, p);
    CouplingReport report;
    report.passed = true;

    for (std::size_t si = 0; si < s_grid.size(); ++si) {
        const PatrollerStrategy strat(game.n, p, s_grid[si]);
        CouplingEntry entry;
        entry.s = strat.s;
        entry.paths = trials;
        std::int64_t hits_T = 0, hits_Tt = 0;

        for (std::int64_t t = 0; t < trials; ++t) {
            detail::Rng rng(seed, static_cast<std::uint64_t>(si) *
                                          static_cast<std::uint64_t>(trials) +
                                      static_cast<std::uint64_t>(t));
            // state at the first attack period: 0 = C, 1 = E
            int state = rng.next_unit() < c ? 0 : 1;
            std::int64_t T = kPathCap + game.m;  // sentinel: not absorbed
            std::int64_t deletions = 0;
            bool prev_was_end = state == 1;
            for (std::int64_t i = 2; i <= kPathCap; ++i) {
                const double u = rng.next_unit();
                if (state == 0) {
                    if (u < strat.p) {
                        T = i;
                        break;
                    }
                    state = u < strat.p + strat.r ? 0 : 1;
                } else {
                    state = u < strat.s ? 0 : 1;
                }
                if (state == 1 && prev_was_end) ++deletions;
                prev_was_end = state == 1;
            }
            if (T > kPathCap) {
                ++entry.truncated;
                continue;
            }
            const std::int64_t T_tilde = T - deletions;
            if (T_tilde > T) {
                ++entry.violations;
                report.passed = false;
                throw std::logic_error("coupling violated: collapsed hitting time exceeds original");
            }
            if (T <= game.m) ++hits_T;
            if (T_tilde <= game.m) ++hits_Tt;
            if (T_tilde <= game.m && game.m < T) ++entry.strict_count;
        }

        entry.q_s = static_cast<double>(hits_T) / static_cast<double>(trials);
        entry.q_s1 = static_cast<double>(hits_Tt) / static_cast<double>(trials);
        if (entry.q_s1 < entry.q_s) report.passed = false;
        report.entries.push_back(entry);
    }
    return report;
}

// Chi-square comparison of the full-star simulated hitting time of the
// attacked end (walk started at the center) against the reduced chain's
// exact distribution, over the first 30 support points plus an overflow
// bucket. Buckets with expected count below 5 fold into the overflow.
struct LumpingReport {
    double chi_square = 0.0;
    int dof = 0;
    double p_value = 0.0;
    std::int64_t trials = 0;
    bool passed = false;
};

inline LumpingReport lumping_check(const GameConfig& game, const PatrollerStrategy& strat,
                                   std::int64_t trials, std::uint64_t seed) {
    validate(game, strat);
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    constexpr int kSupport = 30;
    constexpr std::int64_t kCap = 1'000'000;

    std::vector<std::int64_t> observed(kSupport + 1, 0);  // [0..29] = k-1, [30] = overflow
    for (std::int64_t t = 0; t < trials; ++t) {
        detail::Rng rng(seed, static_cast<std::uint64_t>(t));
        detail::StarWalk walk{game.n, strat.p, strat.r, strat.s, &rng};
        int pos = 0;
        std::int64_t k = 0;
        do {
            ++k;
            pos = walk(pos);
        } while (pos != 1 && k < kCap);
        if (pos == 1 && k <= kSupport)
            ++observed[static_cast<std::size_t>(k - 1)];
        else
            ++observed[kSupport];
    }

    const HittingTimeDistribution exact = pmf_matrix_power(strat, kSupport);
    std::vector<double> expected(kSupport + 1, 0.0);
    for (int k = 1; k <= kSupport; ++k)
        expected[static_cast<std::size_t>(k - 1)] = exact.pmf_at(k) * static_cast<double>(trials);
    expected[kSupport] = exact.tail_at(kSupport + 1) * static_cast<double>(trials);

    // fold sparse buckets into the overflow cell
    double chi = 0.0;
    int buckets = 1;
    double o_fold = static_cast<double>(observed[kSupport]);
    double e_fold = expected[kSupport];
    for (int k = 0; k < kSupport; ++k) {
        if (expected[static_cast<std::size_t>(k)] < 5.0) {
            o_fold += static_cast<double>(observed[static_cast<std::size_t>(k)]);
            e_fold += expected[static_cast<std::size_t>(k)];
        } else {
            const double diff =
                static_cast<double>(observed[static_cast<std::size_t>(k)]) -
                expected[static_cast<std::size_t>(k)];
            chi += diff * diff / expected[static_cast<std::size_t>(k)];
            ++buckets;
        }
    }
    if (e_fold > 0.0) {
        const double diff = o_fold - e_fold;
        chi += diff * diff / e_fold;
    } else if (o_fold > 0.0) {
        chi = std::numeric_limits<double>::infinity();  // mass where none should be
    } else {
        --buckets;  // empty overflow contributes nothing
    }

    LumpingReport rep;
    rep.trials = trials;
    rep.chi_square = chi;
    rep.dof = std::max(1, buckets - 1);
    rep.p_value = std::isinf(chi) ? 0.0 : detail::chi_square_tail(chi, rep.dof);
    rep.passed = rep.p_value >= 0.001;
    return rep;
}

}  // namespace patrol
