#include <cmath>
#include <vector>

#include "doctest.h"
#include "patrol/formulas.hpp"
#include "patrol/hitting.hpp"
#include "patrol/model.hpp"
#include "patrol/solver.hpp"

using namespace patrol;

namespace {

// Taylor coefficients of the s = 1 generating function, derived in-test by
// long division of p z by 1 - r z - q z^2 (term recursion): a_1 = p,
// a_k = r a_{k-1} + q a_{k-2}.
std::vector<double> pgf_series_coeffs(const PatrollerStrategy& strat, int K) {
    std::vector<double> a(static_cast<std::size_t>(K) + 1, 0.0);
    a[1] = strat.p;
    for (int k = 2; k <= K; ++k)
        a[static_cast<std::size_t>(k)] = strat.r * a[static_cast<std::size_t>(k - 1)] +
                                         strat.q * a[static_cast<std::size_t>(k - 2)];
    return a;
}

// generic characteristic-polynomial oracle for the 3x3 matrix: the non-unit
// eigenvalues solve x^2 - (trace - 1) x + det = 0, with trace and det taken
// numerically from the constructed matrix
struct QuadRoots {
    double lo, hi;
};

QuadRoots nonunit_eigen_oracle(const PatrollerStrategy& strat) {
    const ReducedTransition P(strat);
    const auto& M = P.row;
    const double trace = M[0][0] + M[1][1] + M[2][2];
    const double det = M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
                       M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                       M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
    const double b = trace - 1.0;
    const double disc = std::sqrt(b * b - 4.0 * det);
    return {(b - disc) / 2.0, (b + disc) / 2.0};
}

}  // namespace

TEST_CASE("matrix-power pmf: first steps and tail bookkeeping") {
    for (const auto& strat :
         {PatrollerStrategy(10, 0.05, 1.0), PatrollerStrategy(3, 0.2, 0.4),
          PatrollerStrategy(2, 0.5, 0.9)}) {
        const auto dist = pmf_matrix_power(strat, 50);
        CHECK(dist.pmf_at(1) == strat.p);  // one step C -> A
        CHECK(dist.tail_at(1) == 1.0);
        double mass = 0.0;
        for (int k = 1; k <= 50; ++k) {
            CHECK(dist.pmf_at(k) >= 0.0);
            CHECK(dist.tail_at(k + 1) ==
                  doctest::Approx(dist.tail_at(k) - dist.pmf_at(k)).epsilon(1e-14));
            mass += dist.pmf_at(k);
        }
        CHECK(mass + dist.truncated_mass == doctest::Approx(1.0).epsilon(1e-12));
    }

    // under reflection the only two-step path is C -> C -> A
    const PatrollerStrategy reflect(10, 0.07, 1.0);
    CHECK(pmf_matrix_power(reflect, 3).pmf_at(2) ==
          doctest::Approx(reflect.r * reflect.p).epsilon(1e-15));

    CHECK_THROWS_AS(pmf_matrix_power(reflect, 0), std::invalid_argument);
    CHECK_THROWS_AS(pmf_matrix_power(reflect, 20'000'000), std::invalid_argument);
}

TEST_CASE("adaptive horizon leaves under 1e-15 of mass behind") {
    const auto dist = hitting_distribution(PatrollerStrategy(10, 0.05, 1.0));
    CHECK(dist.truncated_mass < 1e-15);
    CHECK(dist.truncation >= 1);
}

TEST_CASE("closed-form pmf equals the matrix powers") {
    {
        const PatrollerStrategy strat(10, 0.05, 1.0);
        CHECK(pmf_closed_form(strat, 1) == doctest::Approx(strat.p).epsilon(1e-15));
        CHECK(pmf_closed_form(strat, 2) ==
              doctest::Approx(strat.p * strat.r).epsilon(1e-15));
        const auto dist = pmf_matrix_power(strat, 10);
        CHECK(pmf_closed_form(strat, 7) == doctest::Approx(dist.pmf_at(7)).epsilon(1e-13));
    }
    {
        const PatrollerStrategy strat(10, 0.1, 1.0);
        const auto dist = pmf_matrix_power(strat, 100);
        for (int k = 1; k <= 100; ++k)
            CHECK(std::fabs(pmf_closed_form(strat, k) - dist.pmf_at(k)) <= 1e-13);
    }
    CHECK_THROWS_AS(pmf_closed_form(PatrollerStrategy(10, 0.05, 0.5), 3),
                    std::invalid_argument);
    // repeated root requires n = 1, p = 1; that corner stays on the matrix path
    CHECK_THROWS_AS(pmf_closed_form(PatrollerStrategy(1, 1.0, 1.0), 3),
                    std::invalid_argument);
}

TEST_CASE("single location: hitting time is geometric") {
    const PatrollerStrategy strat(1, 0.6, 1.0);
    const auto dist = pmf_matrix_power(strat, 40);
    for (int k = 1; k <= 40; ++k) {
        const double geo = 0.6 * std::pow(0.4, k - 1);
        CHECK(dist.pmf_at(k) == doctest::Approx(geo).epsilon(1e-13));
        CHECK(pmf_closed_form(strat, k) == doctest::Approx(geo).epsilon(1e-12));
    }
}

TEST_CASE("three-way pmf agreement across the s = 1 grid") {
    for (int n : {2, 5, 10, 20}) {
        for (double frac : {0.2, 0.5, 1.0}) {
            const PatrollerStrategy strat(n, frac / n, 1.0);
            const auto dist = pmf_matrix_power(strat, 200);
            const auto series = pgf_series_coeffs(strat, 200);
            for (int k = 1; k <= 200; ++k) {
                CHECK(std::fabs(dist.pmf_at(k) - pmf_closed_form(strat, k)) <= 1e-12);
                CHECK(std::fabs(dist.pmf_at(k) - series[static_cast<std::size_t>(k)]) <=
                      1e-10);
                CHECK(std::fabs(pmf_closed_form(strat, k) -
                                series[static_cast<std::size_t>(k)]) <= 1e-10);
            }
        }
    }
}

TEST_CASE("eigenvalues match the characteristic-polynomial oracle") {
    // s = 1, p = 1/n: theta = +- sqrt((n-1)/n)
    for (int n : {2, 5, 10}) {
        const auto eig = eigenvalues(PatrollerStrategy(n, 1.0 / n, 1.0));
        const double expect = std::sqrt((n - 1.0) / n);
        CHECK(eig.theta_plus == doctest::Approx(expect).epsilon(1e-12));
        CHECK(eig.theta_minus == doctest::Approx(-expect).epsilon(1e-12));
    }

    const std::vector<PatrollerStrategy> grid = {{2, 0.25, 1.0}, {10, 0.05, 0.6},
                                                 {4, 0.2, 0.3},  {7, 0.1, 0.85},
                                                 {2, 0.5, 0.5},  {30, 0.03, 1.0}};
    for (const auto& strat : grid) {
        const auto eig = eigenvalues(strat);
        const QuadRoots oracle = nonunit_eigen_oracle(strat);
        CHECK(eig.theta_minus == doctest::Approx(oracle.lo).epsilon(1e-12));
        CHECK(eig.theta_plus == doctest::Approx(oracle.hi).epsilon(1e-12));
        CHECK(eig.theta_minus >= -1.0);
        CHECK(eig.theta_plus < 1.0);
        // characteristic-root data of z^2 - r z - q
        CHECK(eig.w1 + eig.w2 == doctest::Approx(strat.r).epsilon(1e-12));
        CHECK(eig.w1 * eig.w2 == doctest::Approx(-strat.q).epsilon(1e-12));
        CHECK(eig.u >= 0.0);
        if (strat.s == 1.0) {
            CHECK(eig.w1 == doctest::Approx(eig.theta_minus).epsilon(1e-12));
            CHECK(eig.w2 == doctest::Approx(eig.theta_plus).epsilon(1e-12));
            CHECK(eig.w1 <= 0.0);
            CHECK(eig.w2 >= 0.0);
            CHECK(eig.w2 < 1.0);
        }
    }
}

TEST_CASE("generating function: boundary values and series consistency") {
    const PatrollerStrategy strat(5, 0.1, 1.0);
    CHECK(pgf_T_C(strat, 0.0) == 0.0);
    CHECK(pgf_T_C(strat, 1.0 - 1e-9) == doctest::Approx(1.0).epsilon(1e-6));

    // term-recursion coefficients against the closed-form pmf
    const auto series = pgf_series_coeffs(strat, 10);
    for (int k = 1; k <= 10; ++k)
        CHECK(std::fabs(series[static_cast<std::size_t>(k)] - pmf_closed_form(strat, k)) <=
              1e-10);

    // value-level check: G(z) equals the summed series, s = 1 and s < 1
    for (const auto& st : {PatrollerStrategy(5, 0.1, 1.0), PatrollerStrategy(5, 0.1, 0.6),
                           PatrollerStrategy(12, 0.04, 0.35)}) {
        const auto dist = pmf_matrix_power(st, 4000);
        for (double z : {0.1, 0.5, 0.9}) {
            double sum = 0.0;
            double zk = 1.0;
            for (int k = 1; k <= 4000; ++k) {
                zk *= z;
                sum += dist.pmf_at(k) * zk;
            }
            CHECK(pgf_T_C(st, z) == doctest::Approx(sum).epsilon(1e-10));
        }
    }

    CHECK_THROWS_AS(pgf_T_C(strat, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(pgf_T_C(strat, -0.2), std::invalid_argument);
}

TEST_CASE("interception probability for a given delay") {
    // m = 2, d = 2 reduces to r p / (1 - p)
    {
        const GameConfig game(10, 2);
        const PatrollerStrategy strat(10, 0.06, 1.0);
        const double expect = strat.r * strat.p / (1.0 - strat.p);
        CHECK(interception_for_delay(game, strat, 2) ==
              doctest::Approx(expect).epsilon(1e-14));
    }
    // d = 1 conditions on a sure event: Q = Pr(T_C <= m-1)
    for (const auto& strat : {PatrollerStrategy(5, 0.15, 0.7), PatrollerStrategy(5, 0.2, 1.0)}) {
        const GameConfig game(5, 6);
        const auto dist = pmf_matrix_power(strat, 6);
        double cdf = 0.0;
        for (int k = 1; k <= 5; ++k) cdf += dist.pmf_at(k);
        CHECK(interception_for_delay(game, strat, 1) ==
              doctest::Approx(cdf).epsilon(1e-13));
    }
    // agreement with the closed general formula at s = 1, d = 2
    {
        const GameConfig game(10, 4);
        const PatrollerStrategy strat(10, 0.05, 1.0);
        CHECK(std::fabs(interception_for_delay(game, strat, 2) -
                        q_general(10, 4, 0.05)) <= 1e-12);
    }
    CHECK_THROWS_AS(
        interception_for_delay(GameConfig(10, 4), PatrollerStrategy(10, 0.05, 1.0), 0),
        std::invalid_argument);
    // n = 1, p = 1: the patroller returns every other period, the delay-2
    // conditioning event is impossible
    CHECK_THROWS_AS(
        interception_for_delay(GameConfig(1, 4), PatrollerStrategy(1, 1.0, 1.0), 2),
        std::invalid_argument);
}

TEST_CASE("attacks launched from C dominate attacks launched from E") {
    // Pr(T <= m | first attack period at C) >= Pr(T <= m | at E), with the
    // chain evolving from the second attack period on; equality exactly for
    // s = 1, r = 0, odd m
    for (int n : {2, 5, 10}) {
        for (double frac : {0.2, 0.5, 1.0}) {
            for (double s : {0.4, 0.7, 1.0}) {
                const PatrollerStrategy strat(n, frac / n, s);
                const auto fromC = pmf_matrix_power(strat, 12, StartState::Center);
                const auto fromE = pmf_matrix_power(strat, 12, StartState::End);
                for (int m = 2; m <= 12; ++m) {
                    const double pc = 1.0 - fromC.tail_at(m);  // Pr(T <= m-1)
                    const double pe = 1.0 - fromE.tail_at(m);
                    const bool degenerate = s == 1.0 && frac == 1.0 && m % 2 == 1;
                    if (degenerate)
                        CHECK(std::fabs(pc - pe) <= 1e-12);
                    else if (m % 2 == 0)
                        CHECK(pc - pe > 1e-12);
                    else
                        CHECK(pc - pe > 0.0);
                }
            }
        }
    }
}

TEST_CASE("delay sweep bottoms out at d = 2, uniquely iff m is even") {
    for (int n : {2, 5, 10}) {
        for (int m = 2; m <= 8; ++m) {
            const GameConfig game(n, m);
            const double p_hat = solve(game).p_hat;
            const PatrollerStrategy strat(n, p_hat, 1.0);
            std::vector<double> q;
            for (int d = 1; d <= 30; ++d)
                q.push_back(interception_for_delay(game, strat, d));
            if (m % 2 == 0) {
                for (int d = 1; d <= 30; ++d)
                    if (d != 2) CHECK(q[static_cast<std::size_t>(d - 1)] - q[1] > 1e-12);
            } else {
                // boundary optimum p = 1/n: every delay ties
                for (int d = 1; d <= 30; ++d)
                    CHECK(std::fabs(q[static_cast<std::size_t>(d - 1)] - q[1]) <= 1e-12);
            }
        }
    }
}

TEST_CASE("reflection dominates: exact Q at s = 1 vs s < 1 under d = 2") {
    for (int n : {2, 5, 10}) {
        for (int m : {2, 3, 4, 7}) {
            const GameConfig game(n, m);
            for (double frac : {0.3, 0.8}) {
                const double p = frac / n;
                const double q1 =
                    interception_for_delay(game, PatrollerStrategy(n, p, 1.0), 2);
                for (int j = 1; j <= 9; ++j) {
                    const double qs = interception_for_delay(
                        game, PatrollerStrategy(n, p, j * 0.1), 2);
                    if (m == 2)
                        CHECK(std::fabs(q1 - qs) <= 1e-12);
                    else
                        CHECK(q1 - qs > 1e-12);
                }
            }
        }
    }
}
