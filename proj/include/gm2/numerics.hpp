#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "gm2/error.hpp"

namespace gm2::num {

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

struct RootOptions {
    double abs_tol = 1e-13;
    int max_iter = 200;
};

/**
 * Bracketed root of a continuous scalar function.
 *
 * Alternates safeguarded secant (false position) steps with bisection: a
 * secant step that fails to halve the bracket forces the next step to be a
 * bisection, so the bracket width at least halves every two evaluations.
 * Returns the midpoint of the final bracket (width <= abs_tol), or an exact
 * zero if one is hit. Throws Domain when f(a), f(b) do not bracket a root.
 */
template <class F>
double find_root(F&& f, double a, double b, const RootOptions& opt = {})
{
    if (a > b) std::swap(a, b);
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (!(std::signbit(fa) != std::signbit(fb)) || !std::isfinite(fa) || !std::isfinite(fb)) {
        throw Error(ErrorKind::Domain, "find_root: interval [" + std::to_string(a) + ", " +
                                           std::to_string(b) + "] does not bracket a root");
    }
    bool force_bisect = false;
    for (int it = 0; it < opt.max_iter && (b - a) > opt.abs_tol; ++it) {
        const double width = b - a;
        double x = 0.5 * (a + b);
        if (!force_bisect) {
            const double xs = a - fa * (b - a) / (fb - fa);
            if (xs > a && xs < b) x = xs;
        }
        const double fx = f(x);
        if (fx == 0.0) return x;
        if (std::signbit(fx) == std::signbit(fa)) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        force_bisect = (b - a) > 0.5 * width;
    }
    return 0.5 * (a + b);
}

// ---------------------------------------------------------------------------
// Summation and grids
// ---------------------------------------------------------------------------

/// Fixed-order pairwise summation; the result depends only on the input order.
[[nodiscard]] double pairwise_sum(std::span<const double> xs) noexcept;

[[nodiscard]] std::vector<double> linspace(double lo, double hi, std::size_t n);

// ---------------------------------------------------------------------------
// Gaussian special functions
// ---------------------------------------------------------------------------

/**
 * Error function and complement, self-contained so measure totals do not
 * depend on the platform libm.
 *
 * erf uses the all-positive series
 *   erf(x) = 2x/sqrt(pi) e^{-x^2} sum_n (2x^2)^n / (2n+1)!!
 * for |x| < 2.5 and erfc uses the Laplace continued fraction (modified Lentz)
 * beyond that. Absolute error is below 1e-15 on the real line; erfc keeps
 * relative accuracy in the far tail.
 */
[[nodiscard]] double erf(double x) noexcept;
[[nodiscard]] double erfc(double x) noexcept;

/// Integral of exp(-s^2/2) over [a, b], evaluated without cancellation when
/// both limits sit in the same tail.
[[nodiscard]] double gauss_integral(double a, double b) noexcept;

/// Standard normal distribution function Psi and its density psi.
[[nodiscard]] double normal_cdf(double x) noexcept;
[[nodiscard]] double normal_pdf(double x) noexcept;

/// Inverse of normal_cdf on (0, 1); Domain error outside.
[[nodiscard]] double normal_quantile(double p);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadResult {
    double value = 0.0;
    double est_error = 0.0;
    int levels = 0;
    bool converged = false;
};

namespace detail {
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
double gk15(F& f, double a, double b, double& err)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k = fc * kWgk[7];
    double g = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        k += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) g += kWg[j / 2] * (f1 + f2);
    }
    err = std::abs((k - g) * h);
    return k * h;
}

template <class F>
double adaptive_gk(F& f, double a, double b, double whole, double err, double tol, int depth,
                   int max_depth, double& err_out, bool& ok)
{
    if (err <= tol || depth >= max_depth || b - a <= 8 * std::numeric_limits<double>::epsilon() * std::abs(a + b)) {
        if (err > tol) ok = false;
        err_out += err;
        return whole;
    }
    const double m = 0.5 * (a + b);
    double el = 0.0;
    double er = 0.0;
    const double left = gk15(f, a, m, el);
    const double right = gk15(f, m, b, er);
    return adaptive_gk(f, a, m, left, el, 0.5 * tol, depth + 1, max_depth, err_out, ok) +
           adaptive_gk(f, m, b, right, er, 0.5 * tol, depth + 1, max_depth, err_out, ok);
}
}  // namespace detail

/// Recursive Gauss-Kronrod (7/15) quadrature of a smooth integrand on [a, b].
template <class F>
QuadResult integrate_gk(F&& f, double a, double b, double abs_tol = 1e-14, int max_depth = 40)
{
    QuadResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    double err = 0.0;
    const double whole = detail::gk15(f, a, b, err);
    bool ok = true;
    double err_total = 0.0;
    out.value = detail::adaptive_gk(f, a, b, whole, err, abs_tol, 0, max_depth, err_total, ok);
    out.est_error = err_total;
    out.converged = ok;
    return out;
}

/**
 * Tanh-sinh (double-exponential) quadrature on [a, b] for integrands with
 * algebraic endpoint singularities.
 *
 * The integrand is called as f(x, x - a, b - x); the two distances are
 * computed without cancellation so the integrand can be evaluated to full
 * relative accuracy arbitrarily close to either endpoint. Levels halve the
 * step; est_error is the difference between the last two levels.
 */
template <class F>
QuadResult integrate_tanh_sinh(F&& f, double a, double b, double rel_tol, int max_levels,
                               int min_levels = 3)
{
    constexpr double kTauMax = 4.0;
    const double half = 0.5 * (b - a);
    auto node_sum = [&](double tau) {
        const double v = 0.5 * std::numbers::pi * std::sinh(tau);
        const double cv = std::cosh(v);
        const double w = 0.5 * std::numbers::pi * std::cosh(tau) / (cv * cv);
        // Distances to the ends of [-1, 1]: 1 + x and 1 - x.
        const double left = 2.0 / (1.0 + std::exp(-2.0 * v));
        const double right = 2.0 / (1.0 + std::exp(2.0 * v));
        const double da = half * (v < 0 ? left : 2.0 - right);
        const double db = half * (v < 0 ? 2.0 - left : right);
        const double x = v < 0 ? a + da : b - db;
        const double fx = f(x, da, db);
        return w * fx;
    };

    QuadResult out;
    double step = 1.0;
    double sum = node_sum(0.0);
    for (int k = 1; k <= static_cast<int>(kTauMax); ++k) sum += node_sum(k) + node_sum(-k);
    double prev = half * step * sum;
    for (int level = 1; level <= max_levels; ++level) {
        step *= 0.5;
        for (double tau = step; tau < kTauMax; tau += 2.0 * step) {
            sum += node_sum(tau) + node_sum(-tau);
        }
        const double cur = half * step * sum;
        out.value = cur;
        out.est_error = std::abs(cur - prev);
        out.levels = level;
        if (!std::isfinite(cur)) return out;
        if (level >= min_levels && out.est_error <= rel_tol * std::abs(cur)) {
            out.converged = true;
            return out;
        }
        prev = cur;
    }
    return out;
}

}  // namespace gm2::num
