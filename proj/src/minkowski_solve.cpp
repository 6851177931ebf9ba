#include "gm2/minkowski_solve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "gm2/error.hpp"
#include "gm2/numerics.hpp"
#include "gm2/scalar_core.hpp"
#include "gm2/spectral.hpp"

namespace gm2 {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const SpectralGrid& grid_for(Eigen::Index n)
{
    // Grids live in the process-wide cache for the program's lifetime.
    return *cached_grid(static_cast<std::size_t>(n));
}

Eigen::VectorXd exp_weight(const Eigen::VectorXd& h, const Eigen::VectorXd& hp)
{
    return (0.5 * (hp.array().square() + h.array().square())).exp().matrix();
}

struct Curvature {
    Eigen::VectorXd hp;
    Eigen::VectorXd curv;  // h'' + h
};

Curvature curvature(const Eigen::VectorXd& h)
{
    const SpectralGrid& g = grid_for(h.size());
    return {g.diff1(h), g.diff2(h) + h};
}

bool admissible(const Eigen::VectorXd& h)
{
    return h.allFinite() && h.minCoeff() > 0.0 && curvature(h).curv.minCoeff() > 0.0;
}

std::vector<double> blend(const PrescribedData& f, double c0, double t)
{
    std::vector<double> out(f.n());
    for (std::size_t j = 0; j < f.n(); ++j) out[j] = (1.0 - t) * c0 + t * f.values[j];
    return out;
}

enum class NewtonStatus { Converged, Diverged, ConvexityLost };

struct NewtonOutcome {
    NewtonStatus status;
    int iterations;
    double residual;
};

NewtonOutcome newton(Eigen::VectorXd& h, const std::vector<double>& f, const SolverConfig& cfg)
{
    Eigen::VectorXd F = residual_map(h, f);
    double res = F.lpNorm<Eigen::Infinity>();
    const double res0 = res;
    for (int it = 0; it < cfg.max_newton; ++it) {
        if (res < cfg.newton_tol) return {NewtonStatus::Converged, it, res};
        const Eigen::VectorXd delta = linearization(h, f).partialPivLu().solve(-F);
        if (!delta.allFinite()) return {NewtonStatus::Diverged, it, res};
        double lambda = cfg.damping;
        Eigen::VectorXd trial;
        bool ok = false;
        for (int k = 0; k < 12; ++k, lambda *= 0.5) {
            trial = h + lambda * delta;
            project_even(trial);
            if (admissible(trial)) {
                ok = true;
                break;
            }
        }
        if (!ok) return {NewtonStatus::ConvexityLost, it, res};
        h = trial;
        F = residual_map(h, f);
        res = F.lpNorm<Eigen::Infinity>();
        if (!std::isfinite(res) || res > 1e3 * std::max(res0, 1.0)) {
            return {NewtonStatus::Diverged, it + 1, res};
        }
    }
    return {res < cfg.newton_tol ? NewtonStatus::Converged : NewtonStatus::Diverged,
            cfg.max_newton, res};
}

}  // namespace

double PrescribedData::min() const { return *std::min_element(values.begin(), values.end()); }

PrescribedData validate_f(std::vector<double> raw)
{
    const std::size_t n = raw.size();
    if (n < 16 || n % 2 != 0) {
        throw Error(ErrorKind::Domain, "data needs an even number of samples, at least 16 (got " +
                                           std::to_string(n) + ")");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!(raw[j] > 0.0) || !std::isfinite(raw[j])) {
            throw Error(ErrorKind::NotPositive,
                        "f at node " + std::to_string(j) + " is " + fmt(raw[j]));
        }
    }
    const std::size_t half = n / 2;
    for (std::size_t j = 0; j < half; ++j) {
        const double a = raw[j];
        const double b = raw[j + half];
        if (std::abs(a - b) > 1e-12 * std::max(1.0, std::max(a, b))) {
            throw Error(ErrorKind::NotEven, "f differs at antipodal nodes " + std::to_string(j) +
                                                " and " + std::to_string(j + half) + " by " +
                                                fmt(a - b));
        }
        const double m = 0.5 * (a + b);
        raw[j] = m;
        raw[j + half] = m;
    }
    PrescribedData out{.values = std::move(raw)};
    out.l1_norm = num::pairwise_sum(out.values) * kTwoPi / static_cast<double>(n);
    if (!(out.l1_norm < kL1Bound)) {
        throw Error(ErrorKind::L1TooLarge, "L1 norm " + fmt(out.l1_norm) +
                                               " is not below 1/sqrt(2 pi) = " + fmt(kL1Bound));
    }
    return out;
}

std::vector<double> sample_fourier_cos(const std::vector<double>& even_coeffs, std::size_t n)
{
    std::vector<double> out(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
        double s = 0.0;
        for (std::size_t m = 0; m < even_coeffs.size(); ++m) {
            s += even_coeffs[m] * std::cos(2.0 * static_cast<double>(m) * t);
        }
        out[j] = s;
    }
    return out;
}

std::vector<double> mollify(const std::vector<double>& f, double bandwidth)
{
    if (!(bandwidth >= 0.0)) throw Error(ErrorKind::Domain, "mollifier bandwidth must be >= 0");
    const std::size_t n = f.size();
    if (n == 0 || bandwidth == 0.0) return f;
    const std::size_t kmax = n / 2;
    std::vector<double> a(kmax + 1, 0.0);
    std::vector<double> b(kmax + 1, 0.0);
    for (std::size_t k = 0; k <= kmax; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            const double t = kTwoPi * static_cast<double>(k * j % n) / static_cast<double>(n);
            a[k] += f[j] * std::cos(t);
            b[k] += f[j] * std::sin(t);
        }
        const double kb = static_cast<double>(k) * bandwidth;
        const double damp = std::exp(-0.5 * kb * kb);
        a[k] *= damp;
        b[k] *= damp;
    }
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = a[0];
        for (std::size_t k = 1; k <= kmax; ++k) {
            const double t = kTwoPi * static_cast<double>(k * j % n) / static_cast<double>(n);
            const double w = (n % 2 == 0 && k == kmax) ? 1.0 : 2.0;
            s += w * (a[k] * std::cos(t) + b[k] * std::sin(t));
        }
        out[j] = s / static_cast<double>(n);
    }
    return out;
}

void project_even(Eigen::VectorXd& v)
{
    const Eigen::Index half = v.size() / 2;
    for (Eigen::Index j = 0; j < half; ++j) {
        const double m = 0.5 * (v[j] + v[j + half]);
        v[j] = m;
        v[j + half] = m;
    }
}

Eigen::VectorXd residual_map(const Eigen::VectorXd& h, const std::vector<double>& f)
{
    if (static_cast<std::size_t>(h.size()) != f.size()) {
        throw Error(ErrorKind::Domain, "residual_map: h and f sizes differ");
    }
    const Curvature k = curvature(h);
    const Eigen::VectorXd w = exp_weight(h, k.hp);
    return k.curv - kTwoPi * w.cwiseProduct(to_eigen(f));
}

Eigen::MatrixXd linearization(const Eigen::VectorXd& h, const std::vector<double>& f)
{
    if (static_cast<std::size_t>(h.size()) != f.size()) {
        throw Error(ErrorKind::Domain, "linearization: h and f sizes differ");
    }
    const SpectralGrid& g = grid_for(h.size());
    const Eigen::VectorXd hp = g.diff1(h);
    const Eigen::VectorXd coef = kTwoPi * exp_weight(h, hp).cwiseProduct(to_eigen(f));
    Eigen::MatrixXd J = g.d2();
    J.diagonal().array() += 1.0;
    J -= (coef.cwiseProduct(hp)).asDiagonal() * g.d1();
    J.diagonal() -= coef.cwiseProduct(h);
    return J;
}

void SolverConfig::validate() const
{
    if (!(newton_tol >= 1e-13)) throw Error(ErrorKind::Domain, "newton_tol must be >= 1e-13");
    if (max_newton < 1) throw Error(ErrorKind::Domain, "max_newton must be positive");
    if (!(t_step_init > 0.0 && t_step_init <= 1.0)) {
        throw Error(ErrorKind::Domain, "t_step_init must lie in (0, 1]");
    }
    if (!(t_step_min > 0.0 && t_step_min < t_step_init)) {
        throw Error(ErrorKind::Domain, "t_step_min must lie in (0, t_step_init)");
    }
    if (!(damping > 0.0 && damping <= 1.0)) {
        throw Error(ErrorKind::Domain, "damping must lie in (0, 1]");
    }
}

std::string_view branch_name(Branch b) noexcept { return b == Branch::Small ? "small" : "large"; }

double starting_density(const PrescribedData& f)
{
    return 0.5 * std::min(f.min(), std::exp(-1.0) / kTwoPi);
}

SolveResult solve_branch(const PrescribedData& f, Branch branch, const SolverConfig& cfg)
{
    cfg.validate();
    if (f.n() < 16 || f.n() % 2 != 0) {
        throw Error(ErrorKind::Domain, "solve_branch: data must come from validate_f");
    }
    SolveResult out{.branch = branch};
    out.c0_used = starting_density(f);
    const CriticalRadii radii = critical_radii(kTwoPi * out.c0_used);
    const double r0 = branch == Branch::Small ? radii.m1 : radii.m2;

    Eigen::VectorXd h = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(f.n()), r0);
    double t = 0.0;
    double dt = cfg.t_step_init;
    NewtonStatus last_failure = NewtonStatus::Diverged;
    bool started = false;
    while (!started || t < 1.0) {
        const double t_try = started ? std::min(1.0, t + dt) : 0.0;
        Eigen::VectorXd trial = h;
        const NewtonOutcome r = newton(trial, blend(f, out.c0_used, t_try), cfg);
        out.newton_iterations += r.iterations;
        if (r.status == NewtonStatus::Converged) {
            h = trial;
            t = t_try;
            out.t_reached = t;
            out.residual_inf = r.residual;
            if (started) ++out.continuation_steps;
            started = true;
            if (r.iterations <= 4) dt = std::min(1.0, 2.0 * dt);
            continue;
        }
        last_failure = r.status;
        if (!started) break;
        dt *= 0.5;
        if (dt < cfg.t_step_min) break;
    }
    if (!started || t < 1.0) {
        const std::string where = "continuation stopped at t = " + fmt(out.t_reached);
        if (last_failure == NewtonStatus::ConvexityLost) {
            throw Error(ErrorKind::ConvexityLost, where + ": damping cannot keep h'' + h > 0");
        }
        throw ContinuationFailed(out.t_reached, where + ": step fell below t_step_min");
    }

    out.h.values = to_std(h);
    out.gamma2 = gaussian_area(out.h);
    out.perimeter = h.sum() * kTwoPi / static_cast<double>(h.size());
    const bool small_side = out.gamma2 < 0.5;
    if (small_side != (branch == Branch::Small)) {
        throw Error(ErrorKind::BranchMismatch, std::string(branch_name(branch)) +
                                                   " branch ended with gamma2 = " +
                                                   fmt(out.gamma2));
    }
    return out;
}

AprioriReport apriori_check(const SolveResult& result, const PrescribedData& f, double tau)
{
    if (!(tau > 1.0) || !std::isfinite(tau)) throw Error(ErrorKind::Domain, "tau must exceed 1");
    if (f.n() != result.h.n()) throw Error(ErrorKind::Domain, "apriori_check: grid sizes differ");
    for (std::size_t j = 0; j < f.n(); ++j) {
        if (!(f.values[j] > 1.0 / tau && f.values[j] < tau)) {
            throw Error(ErrorKind::Domain, "f at node " + std::to_string(j) +
                                               " lies outside (1/tau, tau)");
        }
    }
    AprioriReport rep{.tau = tau};
    const Eigen::VectorXd h = to_eigen(result.h.values);
    auto fail = [](const std::string& what) { throw Error(ErrorKind::BoundViolation, what); };
    if (!(h.allFinite() && h.minCoeff() > 0.0)) fail("h positivity");
    const Curvature k = curvature(h);
    const Eigen::VectorXd grad = (k.hp.array().square() + h.array().square()).sqrt().matrix();
    rep.h_min = h.minCoeff();
    rep.h_max = h.maxCoeff();
    rep.curv_min = k.curv.minCoeff();
    rep.curv_max = k.curv.maxCoeff();
    rep.grad_min = grad.minCoeff();
    rep.grad_max = grad.maxCoeff();
    if (!(rep.curv_min > 0.0)) fail("h'' + h positivity");

    // h'' + h = 2 pi f e^{rho^2/2} > 2 pi / tau, so the body is a Minkowski sum
    // with a disk of that radius; symmetry centres the disk at the origin. At
    // the maximum of h, g(h_max) >= 2 pi f > 2 pi / tau.
    const double c_tau = kTwoPi / tau;
    rep.h_lower = c_tau;
    if (!(c_tau < kGMax - kDegenerateBand)) {
        throw Error(ErrorKind::Domain, "2 pi / tau must be below e^{-1/2}");
    }
    rep.h_upper = critical_radii(c_tau).m2;
    const double slack = 1e-9;
    if (rep.h_min < rep.h_lower * (1.0 - slack)) fail("h lower bound");
    if (rep.h_max > rep.h_upper * (1.0 + slack)) fail("h upper bound");
    if (rep.grad_min < rep.h_lower * (1.0 - slack)) fail("|grad h| lower bound");
    if (rep.grad_max > rep.h_upper * (1.0 + slack)) fail("|grad h| upper bound");
    const double curv_lower = c_tau;
    const double curv_upper = kTwoPi * tau * std::exp(0.5 * rep.h_upper * rep.h_upper);
    if (rep.curv_min < curv_lower * (1.0 - slack)) fail("h'' + h lower bound");
    if (rep.curv_max > curv_upper * (1.0 + slack)) fail("h'' + h upper bound");

    rep.tau_prime = std::max({rep.h_max, 1.0 / rep.h_min, rep.curv_max, 1.0 / rep.curv_min,
                              rep.grad_max, 1.0 / rep.grad_min});
    return rep;
}

}  // namespace gm2
