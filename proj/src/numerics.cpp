#include "gm2/numerics.hpp"

#include <algorithm>

namespace gm2::num {

namespace {

double pairwise(const double* xs, std::size_t n) noexcept
{
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += xs[i];
        return s;
    }
    const std::size_t m = n / 2;
    return pairwise(xs, m) + pairwise(xs + m, n - m);
}

constexpr double kTwoOverSqrtPi = 1.1283791670955125738961589031215452;
constexpr double kOneOverSqrtPi = 0.5641895835477562869480794515607726;
constexpr double kSeriesCut = 2.5;

// x >= 0, x < kSeriesCut.
double erf_series(double x) noexcept
{
    const double two_x2 = 2.0 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int n = 1; n < 400; ++n) {
        term *= two_x2 / (2.0 * n + 1.0);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return kTwoOverSqrtPi * x * std::exp(-x * x) * sum;
}

// x >= kSeriesCut. Continued fraction
//   erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
double erfc_fraction(double x) noexcept
{
    constexpr double tiny = 1e-300;
    double f = x;
    double c = x;
    double d = 0.0;
    for (int k = 1; k < 500; ++k) {
        const double ak = 0.5 * k;
        d = x + ak * d;
        if (d == 0.0) d = tiny;
        c = x + ak / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return kOneOverSqrtPi * std::exp(-x * x) / f;
}

}  // namespace

double pairwise_sum(std::span<const double> xs) noexcept
{
    return pairwise(xs.data(), xs.size());
}

std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    if (n > 1) out.back() = hi;
    return out;
}

double erf(double x) noexcept
{
    if (std::isnan(x)) return x;
    const double ax = std::abs(x);
    const double v = ax < kSeriesCut ? erf_series(ax) : 1.0 - erfc_fraction(ax);
    return x < 0 ? -v : v;
}

double erfc(double x) noexcept
{
    if (std::isnan(x)) return x;
    if (x >= kSeriesCut) return erfc_fraction(x);
    if (x > -kSeriesCut) return 1.0 - erf(x);
    return 2.0 - erfc_fraction(-x);
}

double gauss_integral(double a, double b) noexcept
{
    if (a > b) return -gauss_integral(b, a);
    constexpr double kScale = 1.2533141373155002512078826424055226;  // sqrt(pi/2)
    constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490;
    if (a >= 0.0) return kScale * (erfc(a * kInvSqrt2) - erfc(b * kInvSqrt2));
    if (b <= 0.0) return kScale * (erfc(-b * kInvSqrt2) - erfc(-a * kInvSqrt2));
    return kScale * (erf(b * kInvSqrt2) - erf(a * kInvSqrt2));
}

double normal_cdf(double x) noexcept
{
    return 0.5 * erfc(-x * 0.7071067811865475244008443621048490);
}

double normal_pdf(double x) noexcept
{
    return 0.3989422804014326779399460599343819 * std::exp(-0.5 * x * x);
}

double normal_quantile(double p)
{
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(ErrorKind::Domain, "normal_quantile: p must lie in (0, 1)");
    }
    if (p == 0.5) return 0.0;
    double x = find_root([p](double t) { return normal_cdf(t) - p; }, -40.0, 40.0,
                         {.abs_tol = 1e-15, .max_iter = 400});
    // Two Newton polishes on the bracketed value.
    for (int i = 0; i < 2; ++i) {
        const double pdf = normal_pdf(x);
        if (pdf <= 0.0) break;
        x -= (normal_cdf(x) - p) / pdf;
    }
    return x;
}

}  // namespace gm2::num
