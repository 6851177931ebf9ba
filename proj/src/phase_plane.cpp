#include "gm2/phase_plane.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "gm2/error.hpp"
#include "gm2/numerics.hpp"
#include "gm2/parallel.hpp"

namespace gm2 {

namespace {

constexpr double kLaunchStep = 1e-4;
constexpr double kAngleCap = 4.0 * std::numbers::pi;

struct Vec2 {
    double h;
    double hp;
};

Vec2 rhs(double c, const Vec2& y) noexcept
{
    return {y.hp, c * std::exp(0.5 * (y.hp * y.hp + y.h * y.h)) - y.h};
}

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

struct StepOut {
    Vec2 y;
    double err;  // scaled error norm; <= 1 accepts
};

/// Error scale: tol * (amp + |y|) componentwise with amp = 1 for trajectories;
/// shooting passes amp = r and absolute = true so small orbits are resolved
/// relative to their own size.
struct Tolerance {
    double tol;
    double amp = 1.0;
    bool absolute = false;
};

StepOut dp_step(double c, const Vec2& y, double dt, const Tolerance& tl) noexcept
{
    auto at = [&](double ch, double chp) { return Vec2{y.h + dt * ch, y.hp + dt * chp}; };
    const Vec2 k1 = rhs(c, y);
    const Vec2 k2 = rhs(c, at(a21 * k1.h, a21 * k1.hp));
    const Vec2 k3 = rhs(c, at(a31 * k1.h + a32 * k2.h, a31 * k1.hp + a32 * k2.hp));
    const Vec2 k4 = rhs(c, at(a41 * k1.h + a42 * k2.h + a43 * k3.h,
                              a41 * k1.hp + a42 * k2.hp + a43 * k3.hp));
    const Vec2 k5 = rhs(c, at(a51 * k1.h + a52 * k2.h + a53 * k3.h + a54 * k4.h,
                              a51 * k1.hp + a52 * k2.hp + a53 * k3.hp + a54 * k4.hp));
    const Vec2 k6 =
        rhs(c, at(a61 * k1.h + a62 * k2.h + a63 * k3.h + a64 * k4.h + a65 * k5.h,
                  a61 * k1.hp + a62 * k2.hp + a63 * k3.hp + a64 * k4.hp + a65 * k5.hp));
    const Vec2 y5 = at(b1 * k1.h + b3 * k3.h + b4 * k4.h + b5 * k5.h + b6 * k6.h,
                       b1 * k1.hp + b3 * k3.hp + b4 * k4.hp + b5 * k5.hp + b6 * k6.hp);
    const Vec2 k7 = rhs(c, y5);
    const double eh =
        dt * (e1 * k1.h + e3 * k3.h + e4 * k4.h + e5 * k5.h + e6 * k6.h + e7 * k7.h);
    const double ehp =
        dt * (e1 * k1.hp + e3 * k3.hp + e4 * k4.hp + e5 * k5.hp + e6 * k6.hp + e7 * k7.hp);
    const double rel = tl.absolute ? 0.0 : 1.0;
    const double sh = tl.tol * (tl.amp + rel * std::max(std::abs(y.h), std::abs(y5.h)));
    const double shp = tl.tol * (tl.amp + rel * std::max(std::abs(y.hp), std::abs(y5.hp)));
    double err = std::max(std::abs(eh) / sh, std::abs(ehp) / shp);
    if (!std::isfinite(err) || !std::isfinite(y5.h) || !std::isfinite(y5.hp)) {
        err = std::numeric_limits<double>::infinity();
    }
    return {y5, err};
}

void check_tol(double tol)
{
    if (!(tol > 1e-14 && tol < 1e-4)) {
        throw Error(ErrorKind::Domain, "integration tolerance must lie in (1e-14, 1e-4)");
    }
}

/// Adaptive driver. on_step(prev, dt, next) is called after
/// each accepted step and returns false to stop. Stops at theta_end.
template <class OnStep>
OdeState drive(double c, OdeState s, double theta_end, const Tolerance& tol, OnStep&& on_step)
{
    double dt = std::min(0.01, theta_end - s.theta);
    double err_prev = 1e-4;
    Vec2 y{s.h, s.hp};
    while (s.theta < theta_end) {
        const bool last = s.theta + dt >= theta_end;
        const double step = last ? theta_end - s.theta : dt;
        const StepOut out = dp_step(c, y, step, tol);
        if (out.err <= 1.0) {
            const OdeState prev = s;
            y = out.y;
            s = {last ? theta_end : s.theta + step, y.h, y.hp};
            const double e = std::max(out.err, 1e-10);
            double fac = 0.9 * std::pow(e, -0.14) * std::pow(err_prev, 0.08);
            fac = std::clamp(fac, 0.2, 5.0);
            err_prev = e;
            dt = step * fac;
            if (!on_step(prev, step, s)) return s;
        } else {
            const double fac = std::isfinite(out.err) ? std::max(0.2, 0.9 * std::pow(out.err, -0.2))
                                                      : 0.2;
            dt = step * fac;
        }
        if (s.theta < theta_end && dt < kMinStep) {
            throw StepUnderflow(s, "step size fell below 1e-12 at theta = " +
                                       std::to_string(s.theta) + " (solution blows up)");
        }
    }
    return s;
}

/// State after a Taylor step of length s from the critical point (h0, 0).
OdeState taylor_launch(double c, double theta0, double h0, double s)
{
    const double k = c * std::exp(0.5 * h0 * h0);
    const double A = k - h0;
    const double B = A * (k * k - 1.0);
    return {theta0 + s, h0 + A * s * s / 2.0 + B * s * s * s * s / 24.0,
            A * s + B * s * s * s / 6.0};
}

/// Root of hp within the accepted step [prev, prev + dt].
OdeState refine_event(double c, const OdeState& prev, double dt, const Tolerance& tol)
{
    const Vec2 y0{prev.h, prev.hp};
    auto hp_at = [&](double s) { return s == 0.0 ? prev.hp : dp_step(c, y0, s, tol).y.hp; };
    const double s = num::find_root(hp_at, 0.0, dt, {.abs_tol = 1e-15, .max_iter = 400});
    const Vec2 y = dp_step(c, y0, s, tol).y;
    return {prev.theta + s, y.h, 0.0};
}

double nearest_pi_over_k(double theta, int k_max, int* k_best)
{
    double best = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= k_max; ++k) {
        const double d = std::abs(theta - std::numbers::pi / k);
        if (d < best) {
            best = d;
            *k_best = k;
        }
    }
    return best;
}

}  // namespace

double first_integral(double c, double h, double hp) noexcept
{
    return std::exp(-0.5 * (hp * hp + h * h)) + c * h;
}

Trajectory integrate(double c, const OdeState& init, double span, double tol)
{
    if (!(c > 0.0)) throw Error(ErrorKind::Domain, "integrate: c must be positive");
    if (!(span > 0.0)) throw Error(ErrorKind::Domain, "integrate: span must be positive");
    check_tol(tol);
    Trajectory traj{.c = c, .E0 = first_integral(c, init.h, init.hp)};
    traj.samples.push_back(init);
    (void)drive(c, init, init.theta + span, Tolerance{tol}, [&](const OdeState&, double, const OdeState& s) {
        traj.samples.push_back(s);
        traj.max_drift =
            std::max(traj.max_drift, std::abs(first_integral(c, s.h, s.hp) - traj.E0));
        return true;
    });
    return traj;
}

HalfPeriod half_period_detail(const GoodPair& pair, double tol)
{
    validate_pair(pair);
    check_tol(tol);
    const double c = pair.c;
    const CriticalRadii radii = critical_radii(c);
    if (std::abs(pair.h1() - radii.m2) <= kDegenerateBand) {
        throw Error(ErrorKind::EventMiss,
                    "maximum level equals m2: the orbit is asymptotic to the saddle");
    }
    const double E = first_integral(c, pair.h0, 0.0);
    const OdeState start = taylor_launch(c, 0.0, pair.h0, kLaunchStep);
    const Tolerance tl{tol, std::min(1.0, pair.r), true};

    HalfPeriod out;
    std::optional<OdeState> event;
    bool escaped = false;
    try {
        (void)drive(c, start, kAngleCap, tl, [&](const OdeState& prev, double dt, const OdeState& s) {
            ++out.steps;
            out.drift = std::max(out.drift, std::abs(first_integral(c, s.h, s.hp) - E));
            if (s.hp <= 0.0) {
                event = refine_event(c, prev, dt, tl);
                return false;
            }
            if (s.h > radii.m2) {
                escaped = true;
                return false;
            }
            return true;
        });
    } catch (const StepUnderflow& e) {
        throw Error(ErrorKind::EventMiss, std::string("no critical point: ") + e.what());
    }
    if (escaped) {
        throw Error(ErrorKind::EventMiss, "orbit passed the saddle at m2 without turning");
    }
    if (!event) {
        throw Error(ErrorKind::EventMiss, "no critical point within an angle of 4 pi");
    }
    out.theta = event->theta;
    out.arrival_h = event->h;
    return out;
}

double half_period_shoot(const GoodPair& pair, double tol)
{
    const HalfPeriod hp = half_period_detail(pair, tol);
    const double b = pair.h1();
    if (std::abs(hp.arrival_h - b) > 10.0 * tol * std::max(1.0, b)) {
        throw Error(ErrorKind::EventMiss, "arrival level " + std::to_string(hp.arrival_h) +
                                              " misses h0 + r = " + std::to_string(b));
    }
    return hp.theta;
}

std::vector<CriticalPoint> critical_points(double c, double h_start, double span, double tol)
{
    if (!(c > 0.0)) throw Error(ErrorKind::Domain, "critical_points: c must be positive");
    check_tol(tol);
    std::vector<CriticalPoint> points;
    const double A = c * std::exp(0.5 * h_start * h_start) - h_start;
    if (A == 0.0) return points;  // equilibrium
    const OdeState start = taylor_launch(c, 0.0, h_start, kLaunchStep);
    const Tolerance tl{tol};
    (void)drive(c, start, span, tl, [&](const OdeState& prev, double dt, const OdeState& s) {
        if (std::signbit(s.hp) != std::signbit(prev.hp) && prev.hp != 0.0) {
            const OdeState ev = refine_event(c, prev, dt, tl);
            points.push_back({ev.theta, ev.h, prev.hp > 0.0});
        }
        return true;
    });
    return points;
}

PeriodicSearchReport search_periodic(const std::vector<double>& c_grid,
                                     const PeriodicSearchConfig& cfg)
{
    if (cfg.k_max < 1) throw Error(ErrorKind::Domain, "search_periodic: k_max must be >= 1");
    if (cfg.n_h0 < 1) throw Error(ErrorKind::Domain, "search_periodic: n_h0 must be >= 1");
    cfg.quadrature.validate();
    check_tol(cfg.shoot_tol);

    PeriodicSearchReport report;
    report.c_grid = c_grid;
    constexpr double inf = std::numeric_limits<double>::infinity();

    for (const double c : c_grid) {
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw Error(ErrorKind::Domain, "search_periodic: every c must be positive");
        }
        PeriodicSearchEntry entry{.c = c, .min_theta = inf, .margin = inf};
        if (c >= kGMax - kDegenerateBand) {
            entry.constant_only = true;
            report.per_c_margin.push_back(entry.margin);
            report.entries.push_back(std::move(entry));
            continue;
        }

        const std::vector<GoodPair> pairs = good_pair_grid(c, cfg.n_h0);
        struct Slot {
            double theta = inf;
            double gap = 0.0;
            double err = 0.0;
            std::string failure;
        };
        std::vector<Slot> slots(pairs.size());
        parallel_for(pairs.size(), [&](std::size_t i) {
            Slot& s = slots[i];
            try {
                const ThetaResult q = theta_eval(pairs[i], cfg.quadrature);
                s.theta = q.value;
                if (q.divergent()) return;
                s.err = q.est_error.value_or(0.0);
                const double shot = half_period_shoot(pairs[i], cfg.shoot_tol);
                s.gap = std::abs(shot - q.value);
            } catch (const std::exception& e) {
                s.failure = "h0=" + std::to_string(pairs[i].h0) + ": " + e.what();
            }
        });

        entry.points = pairs.size();
        for (std::size_t i = 0; i < slots.size(); ++i) {
            const Slot& s = slots[i];
            if (!s.failure.empty()) {
                entry.failures.push_back(s.failure);
                continue;
            }
            entry.min_theta = std::min(entry.min_theta, s.theta);
            entry.max_oracle_gap = std::max(entry.max_oracle_gap, s.gap);
            if (!std::isfinite(s.theta)) continue;
            int k = 1;
            const double d = nearest_pi_over_k(s.theta, cfg.k_max, &k);
            entry.margin = std::min(entry.margin, d);
            if (d <= std::max(1e-8, 10.0 * (s.err + s.gap))) {
                report.found_nonconstant.push_back({c, pairs[i].h0, s.theta, k});
            }
        }
        // A sign change of Theta - pi/k between neighbours brackets a solution.
        for (std::size_t i = 0; i + 1 < slots.size(); ++i) {
            const double t0 = slots[i].theta;
            const double t1 = slots[i + 1].theta;
            if (!std::isfinite(t0) || !std::isfinite(t1)) continue;
            if (!slots[i].failure.empty() || !slots[i + 1].failure.empty()) continue;
            for (int k = 1; k <= cfg.k_max; ++k) {
                const double target = std::numbers::pi / k;
                if ((t0 - target) * (t1 - target) >= 0.0) continue;
                auto f = [&](double h0) {
                    const auto p = good_pair_from_h0(c, h0);
                    return theta_eval(*p, cfg.quadrature).value - target;
                };
                const double h0 = num::find_root(f, pairs[i].h0, pairs[i + 1].h0);
                report.found_nonconstant.push_back({c, h0, target + f(h0), k});
            }
        }
        report.per_c_margin.push_back(entry.margin);
        report.entries.push_back(std::move(entry));
    }
    return report;
}

}  // namespace gm2
