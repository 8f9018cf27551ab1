#pragma once

// Core domain types for the star-network patrol game: the game instance,
// the patroller's two-parameter Markov strategy, the attacker's delay rule,
// and the reduced three-state transition structure on {E, C, A}.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace patrol {

// Game instance: n end-node locations around a central base, attacks take
// m consecutive periods. m >= 2, otherwise the attacker wins trivially by
// starting the moment the patroller leaves.
struct GameConfig {
    int n;
    int m;

    GameConfig(int n_, int m_) : n(n_), m(m_) {
        if (n < 1) throw std::invalid_argument("n must be >= 1");
        if (m < 2) throw std::invalid_argument("m must be >= 2");
    }
};

// Markov patrol strategy on the star: from the center go to each end with
// probability p, stay with r = 1 - n*p; from an end return to the center
// with probability s. r and q = (n-1)*p are fixed once at construction and
// reused everywhere so that derived identities stay bit-stable.
struct PatrollerStrategy {
    int n;
    double p;
    double s;
    double r;
    double q;

    PatrollerStrategy(int n_, double p_, double s_)
        : n(n_), p(p_), s(s_), r(0.0), q(0.0) {
        if (n < 1) throw std::invalid_argument("n must be >= 1");
        if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
        if (p > 1.0 / n) throw std::invalid_argument("p exceeds 1/n");
        if (!(s > 0.0)) throw std::invalid_argument("s must be positive");
        if (s > 1.0) throw std::invalid_argument("s exceeds 1");
        r = 1.0 - n * p;
        q = (n - 1) * p;
    }
};

// Attack timing rule: wait for d consecutive periods of patroller absence,
// then attack. target is the end-node index, only the simulator reads it.
struct AttackerStrategy {
    int d;
    int target;

    explicit AttackerStrategy(int d_, int target_ = 1) : d(d_), target(target_) {
        if (d < 1) throw std::invalid_argument("d must be >= 1");
        if (target < 1) throw std::invalid_argument("target must be >= 1");
    }
};

inline void validate(const GameConfig& game, const PatrollerStrategy& strat) {
    if (game.n < 1) throw std::invalid_argument("n must be >= 1");
    if (game.m < 2) throw std::invalid_argument("m must be >= 2");
    if (strat.n != game.n)
        throw std::invalid_argument("strategy was built for a different n");
    if (!(strat.p > 0.0)) throw std::invalid_argument("p must be positive");
    if (strat.p > 1.0 / game.n) throw std::invalid_argument("p exceeds 1/n");
    if (!(strat.s > 0.0)) throw std::invalid_argument("s must be positive");
    if (strat.s > 1.0) throw std::invalid_argument("s exceeds 1");
}

// Row-stochastic transition matrix of the lumped chain on {E, C, A}:
// E = some end other than the attacked one, C = center, A = attacked end
// (absorbing). The C row's E-entry is nudged by at most a couple of ulps so
// that each row sums to exactly 1.0 when added left to right.
struct ReducedTransition {
    static constexpr int E = 0;
    static constexpr int C = 1;
    static constexpr int A = 2;

    std::array<std::array<double, 3>, 3> row;

    explicit ReducedTransition(const PatrollerStrategy& strat) {
        const double s = strat.s;
        const double r = strat.r;
        const double p = strat.p;
        // (fl(1-p) + p) rounds to 1 exactly, so steer the partial sum q + r
        // onto fl(1-p); the q that achieves it sits within a few ulps of
        // (n-1)p and is found by a short nextafter walk
        double q = 0.0;
        if (strat.n > 1) {
            const double y = 1.0 - p;
            auto exact = [&](double cand) {
                return (cand + r) == y && ((cand + r) + p) == 1.0;
            };
            q = y - r;
            if (!exact(q)) {
                bool found = false;
                for (double dir : {1.0, -1.0}) {
                    double cand = q;
                    for (int i = 0; i < 8 && !found; ++i) {
                        cand = std::nextafter(cand, cand + dir);
                        if (exact(cand)) {
                            q = cand;
                            found = true;
                        }
                    }
                    if (found) break;
                }
            }
        }
        row[E] = {1.0 - s, s, 0.0};
        row[C] = {q, r, p};
        row[A] = {0.0, 0.0, 1.0};
    }
};

// Probability that the patroller sits at the center one period later, given
// she is there now with probability c and has not shown up at the attacked
// node: f(c,s) = (c*r + (1-c)*s) / (1 - p*c).
inline double conditional_center_prob(double c, const PatrollerStrategy& strat) {
    if (!(c >= 0.0 && c <= 1.0))
        throw std::invalid_argument("c must be a probability in [0,1]");
    const double den = 1.0 - strat.p * c;
    // n = 1, p = 1, c = 1 conditions on a null event; take the c -> 1 limit
    if (den <= 0.0) return strat.s;
    return (c * strat.r + (1.0 - c) * strat.s) / den;
}

// c(1), ..., c(d_max): probability of being at the center after d consecutive
// periods away from the attacked node, under full reflection. c(1) = 1 and
// c(d) = f(c(d-1)). Only defined for s = 1; for general s the hitting-time
// machinery applies instead.
inline std::vector<double> center_prob_sequence(const PatrollerStrategy& strat,
                                                int d_max) {
    if (strat.s != 1.0)
        throw std::invalid_argument("center_prob_sequence requires s = 1");
    if (d_max < 1) throw std::invalid_argument("d_max must be >= 1");
    std::vector<double> c(static_cast<std::size_t>(d_max));
    c[0] = 1.0;
    for (int k = 1; k < d_max; ++k)
        c[static_cast<std::size_t>(k)] =
            conditional_center_prob(c[static_cast<std::size_t>(k - 1)], strat);
    return c;
}

// (1 - n*p)/(1 - p): the chance the patroller is at the center in the first
// attack period under delay d = 2. Equals 1 identically when n = 1, which
// also covers the p = 1 corner without a 0/0.
inline double center_fraction(int n, double p) {
    if (n == 1) return 1.0;
    return (1.0 - n * p) / (1.0 - p);
}

}  // namespace patrol
