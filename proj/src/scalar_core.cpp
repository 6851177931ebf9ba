#include "gm2/scalar_core.hpp"

#include <cmath>
#include <sstream>

#include "gm2/error.hpp"
#include "gm2/numerics.hpp"

namespace gm2 {

namespace {

void require_subcritical(double c, const char* who)
{
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw Error(ErrorKind::Domain, std::string(who) + ": c must be positive");
    }
    if (std::abs(c - kGMax) <= kDegenerateBand) {
        throw Error(ErrorKind::Degenerate,
                    std::string(who) + ": c = e^{-1/2} is degenerate (m1 = m2 = 1)");
    }
    if (c > kGMax) {
        throw Error(ErrorKind::Domain, std::string(who) + ": c must be below e^{-1/2}");
    }
}

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

double g_eval(double t) noexcept { return t * std::exp(-0.5 * t * t); }

double phi_eval(double c, double t) noexcept { return c * t + std::exp(-0.5 * t * t); }

double phi_prime(double c, double t) noexcept { return c - g_eval(t); }

double phi_difference(double c, double t, double s) noexcept
{
    const double d = t - s;
    return c * d + std::exp(-0.5 * s * s) * std::expm1(-0.5 * d * (t + s));
}

CriticalRadii critical_radii(double c)
{
    require_subcritical(c, "critical_radii");
    auto f = [c](double t) { return g_eval(t) - c; };
    CriticalRadii out{.c = c};
    out.m1 = num::find_root(f, 0.0, 1.0);
    double hi = 2.0;
    while (g_eval(hi) >= c) hi *= 2.0;
    out.m2 = num::find_root(f, 1.0, hi);
    return out;
}

ConstantSolutionSet constant_solutions(double c_raw, bool normalized)
{
    if (!(c_raw > 0.0) || !std::isfinite(c_raw)) {
        throw Error(ErrorKind::Domain, "constant_solutions: constant must be positive");
    }
    const double c = normalized ? c_raw : 2.0 * std::numbers::pi * c_raw;
    if (std::abs(c - kGMax) <= kDegenerateBand) return OneConstantSolution{1.0};
    if (c > kGMax) return NoConstantSolution{};
    const CriticalRadii radii = critical_radii(c);
    return TwoConstantSolutions{.r2 = radii.m1, .r1 = radii.m2};
}

int solution_count(const ConstantSolutionSet& set) noexcept
{
    return static_cast<int>(set.index());
}

std::optional<GoodPair> good_pair_from_h0(double c, double h0)
{
    const CriticalRadii radii = critical_radii(c);
    if (!(h0 >= 0.0) || h0 >= radii.m1) return std::nullopt;

    const double E = phi_eval(c, h0);
    // phi increases on [0, m1], decreases on [m1, m2]; the partner level is
    // where phi comes back down to E, which must happen no later than m2.
    const double gap_at_m2 = phi_difference(c, radii.m2, h0);
    if (gap_at_m2 > kPhiBand) return std::nullopt;

    double b = radii.m2;
    if (gap_at_m2 < -kPhiBand) {
        b = num::find_root([&](double t) { return phi_difference(c, t, h0); }, radii.m1,
                           radii.m2);
    }
    if (!(b > h0)) return std::nullopt;
    return GoodPair{.c = c, .h0 = h0, .r = b - h0, .E = E};
}

double pair_constant(double h0, double r) noexcept
{
    return -std::exp(-0.5 * h0 * h0) * std::expm1(-0.5 * r * (2.0 * h0 + r)) / r;
}

double c_at_zero_level(double r) noexcept { return -std::expm1(-0.5 * r * r) / r; }

PairConstant c_from_pair(double h0, double r)
{
    PairConstant out;
    if (!(h0 >= 0.0) || !(r > 0.0) || !std::isfinite(h0) || !std::isfinite(r)) {
        out.reason = "requires h0 >= 0 and r > 0";
        return out;
    }
    out.c = pair_constant(h0, r);
    if (!(out.c > 0.0) || out.c >= kGMax) {
        out.reason = "c = " + fmt(out.c) + " outside (0, e^{-1/2})";
        return out;
    }
    const double d0 = phi_prime(out.c, h0);
    const double d1 = phi_prime(out.c, h0 + r);
    if (!(d0 > 0.0)) {
        out.reason = "phi'(h0) = " + fmt(d0) + " is not positive";
        return out;
    }
    if (d1 > 1e-12) {
        out.reason = "phi'(h0 + r) = " + fmt(d1) + " is positive (h0 + r beyond m2)";
        return out;
    }
    out.valid = true;
    return out;
}

void validate_pair(const GoodPair& pair)
{
    auto fail = [&](const std::string& why) {
        throw Error(ErrorKind::InvalidPair, "invalid good pair (c=" + fmt(pair.c) +
                                                ", h0=" + fmt(pair.h0) + ", r=" + fmt(pair.r) +
                                                "): " + why);
    };
    if (!(pair.c > 0.0) || !(pair.c < kGMax - kDegenerateBand)) fail("c outside (0, e^{-1/2})");
    if (!(pair.h0 >= 0.0) || !std::isfinite(pair.h0)) fail("h0 must be nonnegative");
    if (!(pair.r > 0.0) || !std::isfinite(pair.r)) fail("r must be positive");
    const double b = pair.h1();
    if (std::abs(phi_difference(pair.c, b, pair.h0)) > 1e-11) fail("phi(h0) != phi(h0 + r)");
    if (std::abs(phi_eval(pair.c, pair.h0) - pair.E) > 1e-11) fail("E != phi(h0)");
    if (!(phi_prime(pair.c, pair.h0) > 0.0)) fail("phi'(h0) <= 0");
    if (phi_prime(pair.c, b) > 1e-12) fail("phi'(h0 + r) > 0");
}

H0Domain h0_domain(double c)
{
    const CriticalRadii radii = critical_radii(c);
    H0Domain out{.c = c, .m1 = radii.m1, .m2 = radii.m2};
    const double excess = phi_eval(c, radii.m2) - 1.0;
    if (excess > kPhiBand) {
        out.lower_is_q = true;
        out.lower = num::find_root([&](double t) { return phi_difference(c, t, radii.m2); },
                                   0.0, radii.m1);
        out.r_c = radii.m2 - out.lower;
    } else {
        out.lower = 0.0;
        const auto pair = good_pair_from_h0(c, 0.0);
        if (!pair) throw Error(ErrorKind::Domain, "h0_domain: no good pair at h0 = 0");
        out.r_c = pair->r;
    }
    return out;
}

}  // namespace gm2
