#include "gm2/theta.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "gm2/error.hpp"
#include "gm2/numerics.hpp"
#include "gm2/parallel.hpp"

namespace gm2 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDivergenceBand = 1e-12;
// Below this spread the divided difference is summed as a Hermite series.
constexpr double kSeriesSpread = 0.25;

double gauss(double x) noexcept { return std::exp(-0.5 * x * x); }

// G[x, y] for G(x) = e^{-x^2/2}.
double first_divided_difference(double x, double y) noexcept
{
    const double d = y - x;
    if (d == 0.0) return -x * gauss(x);
    return gauss(x) * std::expm1(-0.5 * d * (y + x)) / d;
}

// -log(1 - x) / x for 0 <= x < 1.
double log_ratio(double x) noexcept
{
    if (x < 1e-3) return 1.0 + x * (0.5 + x * (1.0 / 3.0 + x * (0.25 + x * 0.2)));
    return -std::log1p(-x) / x;
}

ThetaResult divergent_result(bool at_start, bool at_end)
{
    ThetaResult out;
    out.value = kInf;
    out.endpoint_flags = {at_start, at_end};
    return out;
}

num::QuadResult trig_substitution(const GoodPair& pair, const QuadratureConfig& cfg)
{
    const double h0 = pair.h0;
    const double r = pair.r;
    const double b = pair.h1();
    auto integrand = [&](double psi) {
        const double s = std::sin(0.5 * psi);
        const double co = std::cos(0.5 * psi);
        const double t = s * s;
        const double t_comp = co * co;
        const double u = t <= 0.5 ? h0 + r * t : b - r * t_comp;
        const double k = -detail::gauss_second_divided_difference(h0, b, u);
        const double w = 2.0 * k * std::exp(0.5 * u * u);
        const double x = 0.5 * r * r * t * t_comp * w;
        return 1.0 / std::sqrt(w * log_ratio(x));
    };

    constexpr int kBaseIntervals = 16;
    constexpr int kMinLevels = 2;
    const double pi = std::numbers::pi;
    int n = kBaseIntervals;
    double sum = 0.5 * (integrand(0.0) + integrand(pi));
    for (int j = 1; j < n; ++j) sum += integrand(pi * j / n);
    double prev = pi / n * sum;

    num::QuadResult out;
    out.value = prev;
    for (int level = 1; level <= cfg.max_levels; ++level) {
        for (int j = 1; j < 2 * n; j += 2) sum += integrand(pi * j / (2 * n));
        n *= 2;
        const double cur = pi / n * sum;
        out.value = cur;
        out.est_error = std::abs(cur - prev);
        out.levels = level;
        if (!std::isfinite(cur)) return out;
        if (level >= kMinLevels && out.est_error <= cfg.rel_tol * cur) {
            out.converged = true;
            return out;
        }
        prev = cur;
    }
    return out;
}

num::QuadResult double_exponential(const GoodPair& pair, const QuadratureConfig& cfg)
{
    const double h0 = pair.h0;
    const double r = pair.r;
    const double b = pair.h1();
    const double c = pair_constant(h0, r);
    const double g0 = gauss(h0);
    const double gb = gauss(b);
    auto integrand = [&](double, double dist0, double dist1) {
        double u = 0.0;
        double d = 0.0;
        if (dist0 <= dist1) {
            const double delta = r * dist0;
            u = h0 + delta;
            d = c * delta + g0 * std::expm1(-0.5 * delta * (2.0 * h0 + delta));
        } else {
            const double s = r * dist1;
            u = b - s;
            d = -c * s + gb * std::expm1(0.5 * s * (2.0 * b - s));
        }
        // -(u^2) - 2 log(E - c u) written as -2 log(1 - (phi(u) - E) e^{u^2/2}).
        const double radicand = -2.0 * std::log1p(-d * std::exp(0.5 * u * u));
        if (!(radicand > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        return r / std::sqrt(radicand);
    };
    return num::integrate_tanh_sinh(integrand, 0.0, 1.0, cfg.rel_tol, cfg.max_levels);
}

GoodPair pair_with_constant(double c, double h0, double r)
{
    return GoodPair{.c = c, .h0 = h0, .r = r, .E = phi_eval(c, h0)};
}

}  // namespace

namespace detail {

double gauss_second_divided_difference(double x0, double x1, double x2) noexcept
{
    const double lo = std::min({x0, x1, x2});
    const double hi = std::max({x0, x1, x2});
    if (hi - lo <= kSeriesSpread) {
        // G[x0,x1,x2] = e^{-m^2/2} sum_{k>=2} (-1)^k He_k(m)/k! h_{k-2}(y), y = x - m,
        // with h_j the complete homogeneous symmetric polynomial.
        const double m = 0.5 * (lo + hi);
        const double y0 = x0 - m;
        const double y1 = x1 - m;
        const double y2 = x2 - m;
        double e_prev = 1.0;  // He_0 / 0!
        double e_cur = m;     // He_1 / 1!
        double p = 1.0;       // y0^j
        double q = 1.0;       // h_j(y0, y1)
        double h = 1.0;       // h_j(y0, y1, y2)
        double sum = 0.0;
        int small_terms = 0;
        for (int k = 2; k < 60; ++k) {
            const double e_next = (m * e_cur - e_prev) / k;
            e_prev = e_cur;
            e_cur = e_next;
            if (k > 2) {
                p *= y0;
                q = p + y1 * q;
                h = q + y2 * h;
            }
            const double term = ((k % 2 == 0) ? e_cur : -e_cur) * h;
            sum += term;
            if (std::abs(term) <= 1e-18 * std::abs(sum)) {
                if (++small_terms >= 3) break;
            } else {
                small_terms = 0;
            }
        }
        return gauss(m) * sum;
    }
    // Order the outer points so the final divisor is the full spread.
    double a = x0, mid = x1, c = x2;
    if (a > c) std::swap(a, c);
    if (mid < a) std::swap(mid, a);
    if (mid > c) std::swap(mid, c);
    return (first_divided_difference(mid, c) - first_divided_difference(a, mid)) / (c - a);
}

}  // namespace detail

void QuadratureConfig::validate() const
{
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) {
        throw Error(ErrorKind::Domain, "QuadratureConfig: rel_tol must lie in (0, 1e-2]");
    }
    if (max_levels < 1 || max_levels > 14) {
        throw Error(ErrorKind::Domain, "QuadratureConfig: max_levels must lie in [1, 14]");
    }
}

ThetaResult theta_eval(const GoodPair& pair, const QuadratureConfig& cfg)
{
    cfg.validate();
    validate_pair(pair);
    const CriticalRadii radii = critical_radii(pair.c);
    const bool start_flag = !(phi_prime(pair.c, pair.h0) > 0.0);
    const bool end_flag = std::abs(pair.h1() - radii.m2) <= kDivergenceBand;
    if (start_flag || end_flag) return divergent_result(start_flag, end_flag);

    const num::QuadResult q = cfg.scheme == QuadratureConfig::Scheme::TrigSubstitution
                                  ? trig_substitution(pair, cfg)
                                  : double_exponential(pair, cfg);
    if (!q.converged || !std::isfinite(q.value)) {
        throw Error(ErrorKind::QuadratureFailure,
                    "theta_eval: tolerance " + std::to_string(cfg.rel_tol) + " not met after " +
                        std::to_string(q.levels) + " levels (estimate " +
                        std::to_string(q.est_error) + ")");
    }
    ThetaResult out;
    out.value = q.value;
    out.est_error = q.est_error;
    out.levels = q.levels;
    return out;
}

double theta_small_r_limit(double c)
{
    const double m1 = critical_radii(c).m1;
    return std::numbers::pi / std::sqrt(1.0 - m1 * m1);
}

std::vector<GoodPair> good_pair_grid(double c, std::size_t n)
{
    const H0Domain dom = h0_domain(c);
    const double hi = dom.m1 * (1.0 - kM1Collar);
    const std::vector<double> levels =
        n == 1 ? std::vector<double>{hi} : num::linspace(dom.lower, hi, n);
    std::vector<GoodPair> pairs;
    pairs.reserve(levels.size());
    for (const double h0 : levels) {
        if (dom.lower_is_q && h0 == dom.lower) {
            // phi(q) = phi(m2) by construction: the partner level is m2 itself.
            pairs.push_back(pair_with_constant(c, h0, dom.m2 - h0));
            continue;
        }
        if (auto pair = good_pair_from_h0(c, h0)) pairs.push_back(*pair);
    }
    return pairs;
}

double ThetaScan::margin() const noexcept { return min_theta - std::numbers::pi; }

double ThetaScan::max_est_error() const noexcept
{
    double worst = 0.0;
    for (const auto& p : points) {
        if (p.result && p.result->est_error) worst = std::max(worst, *p.result->est_error);
    }
    return worst;
}

ThetaScan scan_min_theta(double c, std::size_t n_h0, const QuadratureConfig& cfg)
{
    cfg.validate();
    if (n_h0 == 0) throw Error(ErrorKind::Domain, "scan_min_theta: empty grid");
    ThetaScan scan;
    scan.c = c;
    const std::vector<GoodPair> pairs = good_pair_grid(c, n_h0);
    scan.points.resize(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t i) {
        ThetaPoint& pt = scan.points[i];
        pt.pair = pairs[i];
        try {
            pt.result = theta_eval(pairs[i], cfg);
        } catch (const Error& e) {
            pt.failure = std::string(e.name()) + ": " + e.what();
        }
    });
    scan.min_theta = kInf;
    for (std::size_t i = 0; i < scan.points.size(); ++i) {
        const auto& pt = scan.points[i];
        if (!pt.result) {
            ++scan.failures;
            continue;
        }
        if (pt.result->value < scan.min_theta) {
            scan.min_theta = pt.result->value;
            scan.argmin = i;
        }
    }
    return scan;
}

double max_gap_for_level(double h0)
{
    if (!(h0 >= 0.0 && h0 < 1.0)) {
        throw Error(ErrorKind::Domain, "max_gap_for_level: h0 must lie in [0, 1)");
    }
    // phi'(h0 + r) <= 0 for c = c(r) reads g(h0 + r) >= c(r).
    auto slack = [h0](double r) { return g_eval(h0 + r) - pair_constant(h0, r); };
    double lo = 1e-8;
    double hi = 1.0;
    while (slack(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
    }
    return num::find_root(slack, lo, hi);
}

namespace {

void check_in_c(const InC& m)
{
    if (!(m.h_star > 0.0 && m.h_star < 1.0) || !(m.r > 0.0 && m.r < 1.0) ||
        !(m.h_star + m.r < 1.0)) {
        throw Error(ErrorKind::Domain, "monotonicity in c requires h_star, r in (0,1) and h_star + r < 1");
    }
    const PairConstant pc = c_from_pair(m.h_star, m.r);
    if (!pc) throw Error(ErrorKind::Domain, "monotonicity in c: (h_star, h_star + r) not good: " + pc.reason);
    if (std::abs(pc.c - m.c_star) > 1e-9 * pc.c) {
        throw Error(ErrorKind::Domain, "monotonicity in c: c_star does not make (h_star, h_star + r) a good pair");
    }
}

double level_for_constant(const InC& m, double c)
{
    if (c == m.c_star) return m.h_star;
    return num::find_root([&](double h0) { return pair_constant(h0, m.r) - c; }, 0.0, m.h_star);
}

}  // namespace

std::pair<double, double> family_range(const MonotonicityMode& mode)
{
    if (const auto* m = std::get_if<InR>(&mode)) return {0.0, max_gap_for_level(m->h0)};
    const auto& m = std::get<InC>(mode);
    check_in_c(m);
    return {c_at_zero_level(m.r), m.c_star};
}

MonotonicityReport monotonicity_scan(const MonotonicityMode& mode, std::size_t n,
                                     const QuadratureConfig& cfg,
                                     std::optional<std::pair<double, double>> range)
{
    cfg.validate();
    if (n < 2) throw Error(ErrorKind::Domain, "monotonicity_scan: needs at least two points");
    MonotonicityReport rep{.mode = mode};
    const auto [lo, hi] = family_range(mode);

    if (range) {
        if (!(range->first > lo) || !(range->second <= hi) || range->first > range->second) {
            throw Error(ErrorKind::Domain, "monotonicity_scan: range outside the family's domain");
        }
        rep.parameter = num::linspace(range->first, range->second, n);
    } else if (std::holds_alternative<InR>(mode)) {
        // Interior points of (0, r_{h0}); r_{h0} itself puts h0 + r at m2.
        for (std::size_t i = 0; i < n; ++i) rep.parameter.push_back(hi * (i + 1.0) / (n + 1.0));
    } else {
        for (std::size_t i = 0; i < n; ++i) rep.parameter.push_back(lo + (hi - lo) * (i + 1.0) / n);
        rep.parameter.back() = hi;
    }

    for (const double p : rep.parameter) {
        if (const auto* m = std::get_if<InR>(&mode)) {
            rep.pairs.push_back(pair_with_constant(pair_constant(m->h0, p), m->h0, p));
        } else {
            const auto& mc = std::get<InC>(mode);
            rep.pairs.push_back(pair_with_constant(p, level_for_constant(mc, p), mc.r));
        }
    }

    rep.theta.assign(n, 0.0);
    rep.est_error.assign(n, 0.0);
    std::vector<std::string> failures(n);
    parallel_for(n, [&](std::size_t i) {
        try {
            const ThetaResult res = theta_eval(rep.pairs[i], cfg);
            rep.theta[i] = res.value;
            rep.est_error[i] = res.est_error.value_or(0.0);
        } catch (const Error& e) {
            failures[i] = e.what();
            rep.theta[i] = std::numeric_limits<double>::quiet_NaN();
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        if (!failures[i].empty()) throw Error(ErrorKind::QuadratureFailure, failures[i]);
    }

    rep.max_excess = -kInf;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double drop = rep.theta[i] - rep.theta[i + 1];
        rep.max_decrease = std::max(rep.max_decrease, drop);
        rep.max_excess = std::max(rep.max_excess, drop - rep.est_error[i] - rep.est_error[i + 1]);
    }
    return rep;
}

EmptinessReport pi_over_k_emptiness(double c, std::size_t n_h0, int k_max,
                                    const QuadratureConfig& cfg)
{
    if (k_max < 1) throw Error(ErrorKind::Domain, "pi_over_k_emptiness: k_max must be >= 1");
    EmptinessReport rep;
    rep.c = c;
    rep.k_max = k_max;
    rep.scan = scan_min_theta(c, n_h0, cfg);
    rep.min_theta = rep.scan.min_theta;
    rep.margin = rep.scan.margin();
    rep.min_distance.assign(static_cast<std::size_t>(k_max), kInf);
    for (const auto& pt : rep.scan.points) {
        if (!pt.result || pt.result->divergent()) continue;
        for (int k = 1; k <= k_max; ++k) {
            const double d = std::abs(pt.result->value - std::numbers::pi / k);
            auto& slot = rep.min_distance[static_cast<std::size_t>(k - 1)];
            slot = std::min(slot, d);
        }
    }
    const double tol = rep.scan.max_est_error();
    rep.certified = rep.scan.failures == 0 && std::isfinite(rep.min_theta);
    for (const double d : rep.min_distance) rep.certified = rep.certified && d > tol;
    return rep;
}

}  // namespace gm2
