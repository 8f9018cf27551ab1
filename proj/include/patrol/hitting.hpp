#pragma once

// Exact hitting-time distributions for the reduced chain on {E, C, A} and
// the delay-conditioned interception probability built on them.
//
// Time-indexing convention, fixed for the whole library: time 0 is the first
// period the patroller is away from the attacked node (she is then surely at
// the center), and T_C is the first k >= 1 at which the chain occupies A.
// Hence Pr(T_C = 1) = p. The attack triggered by delay d begins at time d-1
// and spans times d-1 .. d+m-2, so it is intercepted iff d <= T_C <= d+m-2,
// conditional on it beginning at all (T_C >= d). This is the unique
// convention under which the conditional formula reproduces the closed-form
// m = 2 value at d = 2.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "patrol/model.hpp"

namespace patrol {

enum class StartState { End, Center };

// PMF and tail of T = first hitting time of A, truncated at horizon K.
// pmf_at(k) = Pr(T = k) for k = 1..K; tail_at(k) = Pr(T >= k) for k = 1..K+1;
// truncated_mass = Pr(T > K) = tail_at(K+1).
struct HittingTimeDistribution {
    std::vector<double> pmf;
    std::vector<double> tail;
    int truncation = 0;
    double truncated_mass = 0.0;

    double pmf_at(int k) const { return pmf.at(static_cast<std::size_t>(k - 1)); }
    double tail_at(int k) const { return tail.at(static_cast<std::size_t>(k - 1)); }
};

// Non-unit eigenvalues of the reduced transition matrix, plus the s = 1
// characteristic-root data u, w1, w2 of z^2 - r z - q = 0 (these depend on
// n and p only). Under s = 1, theta_minus = w1 and theta_plus = w2.
struct SpectralData {
    double theta_minus = 0.0;
    double theta_plus = 0.0;
    double u = 0.0;
    double w1 = 0.0;
    double w2 = 0.0;
};

namespace detail {

inline constexpr int kMaxHorizon = 10'000'000;

// One step of the substochastic restriction to {E, C}. Mass that moves from
// C to A is the probability absorbed this step.
struct SubstochasticWalk {
    double vE;
    double vC;
    double one_minus_s, s, q, r, p;

    SubstochasticWalk(const PatrollerStrategy& strat, StartState start)
        : vE(start == StartState::End ? 1.0 : 0.0),
          vC(start == StartState::Center ? 1.0 : 0.0),
          one_minus_s(1.0 - strat.s),
          s(strat.s),
          q(strat.q),
          r(strat.r),
          p(strat.p) {}

    double step() {
        const double absorbed = p * vC;
        const double nE = vE * one_minus_s + vC * q;
        const double nC = vE * s + vC * r;
        vE = nE;
        vC = nC;
        return absorbed;
    }

    double alive() const { return vE + vC; }
};

}  // namespace detail

// Distribution of the hitting time of A by iterating the 2x2 substochastic
// block. Valid for every s in (0,1]. Deterministic.
inline HittingTimeDistribution pmf_matrix_power(const PatrollerStrategy& strat,
                                                int K,
                                                StartState start = StartState::Center) {
    if (K < 1) throw std::invalid_argument("horizon K must be >= 1");
    if (K > detail::kMaxHorizon)
        throw std::invalid_argument("horizon K exceeds the 1e7 memory budget");

    HittingTimeDistribution dist;
    dist.truncation = K;
    dist.pmf.resize(static_cast<std::size_t>(K));
    dist.tail.resize(static_cast<std::size_t>(K) + 1);
    dist.tail[0] = 1.0;

    detail::SubstochasticWalk walk(strat, start);
    for (int k = 1; k <= K; ++k) {
        const double absorbed = walk.step();
        dist.pmf[static_cast<std::size_t>(k - 1)] = absorbed;
        dist.tail[static_cast<std::size_t>(k)] =
            dist.tail[static_cast<std::size_t>(k - 1)] - absorbed;
    }
    dist.truncated_mass = dist.tail[static_cast<std::size_t>(K)];
    return dist;
}

// Smallest horizon whose truncated mass drops below 1e-15, capped at 1e6.
inline HittingTimeDistribution hitting_distribution(const PatrollerStrategy& strat,
                                                    StartState start = StartState::Center) {
    constexpr double kMassTol = 1e-15;
    constexpr int kCap = 1'000'000;
    detail::SubstochasticWalk probe(strat, start);
    int K = 1;
    while (K < kCap) {
        probe.step();
        if (probe.alive() < kMassTol) break;
        ++K;
    }
    return pmf_matrix_power(strat, K, start);
}

// Pr(T_C = k) = p (w2^k - w1^k) / u, the closed form available under full
// reflection. Rejects s != 1 and the (unreachable for n >= 2) repeated-root
// case u ~ 0.
inline double pmf_closed_form(const PatrollerStrategy& strat, int k) {
    if (strat.s != 1.0)
        throw std::invalid_argument("pmf_closed_form requires s = 1");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const double np = strat.n * strat.p;
    // cancellation-free form of sqrt((np+1)^2 - 4p)
    const double u = std::sqrt(strat.r * strat.r + 4.0 * strat.q);
    if (u < 1e-14)
        throw std::invalid_argument("repeated characteristic root (u ~ 0)");
    const double w1 = (1.0 - np - u) / 2.0;
    const double w2 = (1.0 - np + u) / 2.0;
    double pw1 = 1.0, pw2 = 1.0;
    for (int i = 0; i < k; ++i) {
        pw1 *= w1;
        pw2 *= w2;
    }
    return strat.p * (pw2 - pw1) / u;
}

inline SpectralData eigenvalues(const PatrollerStrategy& strat) {
    SpectralData out;
    const double s = strat.s;
    const double np = strat.n * strat.p;
    // (s+np)^2 - 4ps = (s-np)^2 + 4ps(n-1), which cannot cancel
    const double disc = std::sqrt((s - np) * (s - np) + 4.0 * strat.p * s * (strat.n - 1));
    out.theta_minus = 0.5 * (2.0 - s - np - disc);
    out.theta_plus = 0.5 * (2.0 - s - np + disc);
    out.u = std::sqrt(strat.r * strat.r + 4.0 * strat.q);
    out.w1 = (1.0 - np - out.u) / 2.0;
    out.w2 = (1.0 - np + out.u) / 2.0;
    return out;
}

// Probability generating function of T_C at z. Under s = 1 this is the
// rational form p z / (1 - z(1-np) - z^2(np-p)); otherwise the three-factor
// quotient of the start-at-E generating function by the geometric one.
inline double pgf_T_C(const PatrollerStrategy& strat, double z) {
    if (!(z >= 0.0 && z < 1.0))
        throw std::invalid_argument("z must lie in [0,1)");
    if (z == 0.0) return 0.0;
    constexpr double kPoleTol = 1e-12;
    if (strat.s == 1.0) {
        const double np = strat.n * strat.p;
        const double den = 1.0 - z * (1.0 - np) - z * z * (np - strat.p);
        if (std::fabs(den) < kPoleTol)
            throw std::invalid_argument("pgf evaluated too close to a pole");
        return strat.p * z / den;
    }
    const SpectralData eig = eigenvalues(strat);
    const double d1 = 1.0 - eig.theta_minus * z;
    const double d2 = 1.0 - eig.theta_plus * z;
    const double ds = strat.s * z;
    if (std::fabs(d1) < kPoleTol || std::fabs(d2) < kPoleTol || std::fabs(ds) < kPoleTol)
        throw std::invalid_argument("pgf evaluated too close to a pole");
    const double gE = ((1.0 - eig.theta_minus) * z / d1) * ((1.0 - eig.theta_plus) * z / d2);
    const double gS = ds / (1.0 - (1.0 - strat.s) * z);
    return gE / gS;
}

// Exact interception probability for delay d:
//   Q(d) = 1 - Pr(T_C >= d+m-1) / Pr(T_C >= d).
// Computed from the substochastic iteration, so valid for every s.
inline double interception_for_delay(const GameConfig& game,
                                     const PatrollerStrategy& strat, int d) {
    validate(game, strat);
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    detail::SubstochasticWalk walk(strat, StartState::Center);
    double tail_d = 1.0;      // Pr(T_C >= d)   = survival after d-1 steps
    double tail_dm = 1.0;     // Pr(T_C >= d+m-1) = survival after d+m-2 steps
    for (int k = 1; k <= d + game.m - 2; ++k) {
        walk.step();
        if (k == d - 1) tail_d = walk.alive();
        if (k == d + game.m - 2) tail_dm = walk.alive();
    }
    if (tail_d < 1e-300)
        throw std::invalid_argument("conditioning event Pr(T_C >= d) is numerically vacuous");
    return 1.0 - tail_dm / tail_d;
}

}  // namespace patrol
