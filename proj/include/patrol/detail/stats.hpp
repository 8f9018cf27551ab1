#pragma once

#include <cmath>
#include <stdexcept>

namespace patrol::detail {

// Regularized incomplete gamma functions, series + continued fraction split
// at x = a + 1 (Numerical Recipes style). Used for chi-square tail p-values.

inline double gamma_series_p(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_cf_q(double a, double x) {
    constexpr double kTiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Q(a, x) = Pr(Gamma(a) > x), the upper regularized incomplete gamma.
inline double gammq(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gammq domain error");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_series_p(a, x);
    return gamma_cf_q(a, x);
}

// Tail probability of a chi-square statistic with the given degrees of
// freedom.
inline double chi_square_tail(double statistic, int dof) {
    return gammq(0.5 * dof, 0.5 * statistic);
}

}  // namespace patrol::detail
