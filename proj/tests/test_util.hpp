#pragma once

// Test-side numeric oracles, deliberately independent of the library code.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace testutil {

// Adaptive Simpson quadrature on a finite interval.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double fa, double fm, double fb, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15 * tol)
        return left + right + (left + right - whole) / 15.0;
    const double sub = std::max(tol / 2, 1e-17);
    return simpson(f, a, m, fa, flm, fm, sub, depth - 1) +
           simpson(f, m, b, fm, frm, fb, sub, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
    const double m = 0.5 * (a + b);
    return simpson(f, a, b, f(a), f(m), f(b), tol, 22);
}

// Two-sided Kolmogorov-Smirnov statistic of samples against a continuous CDF.
inline double ks_stat(std::vector<double> xs, const std::function<double(double)>& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double F = cdf(xs[i]);
        d = std::max(d, std::max((i + 1) / n - F, F - i / n));
    }
    return d;
}

// Asymptotic KS p-value with the standard finite-sample correction.
inline double ks_pvalue(double d, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double t = (sn + 0.12 + 0.11 / sn) * d;
    double sum = 0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * t * t);
        sum += term;
        if (std::abs(term) < 1e-16) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

// Upper tail of the chi-squared distribution via the regularized upper
// incomplete gamma function (series / continued fraction).
inline double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) return 1;
    if (x == 0) return 1;
    auto gln = std::lgamma(a);
    if (x < a + 1) {  // series for P, return 1-P
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
    }
    double b = x + 1 - a, c = 1e300, dd = 1 / b, h = dd;  // Lentz continued fraction
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2;
        dd = an * dd + b;
        if (std::abs(dd) < 1e-300) dd = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        dd = 1 / dd;
        const double del = dd * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

inline double chi2_pvalue(double stat, int dof) { return gamma_q(dof / 2.0, stat / 2.0); }

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace testutil
