#pragma once

#include <optional>
#include <string>
#include <variant>

namespace gm2 {

/// e^{-1/2}: the maximum of g(t) = t e^{-t^2/2}, attained at t = 1.
inline constexpr double kGMax = 0.60653065971263342360379953499118045;

/// Normalized constants closer than this to kGMax are the degenerate case
/// m1 = m2 = 1.
inline constexpr double kDegenerateBand = 1e-12;

/// Band used when comparing phi(m2) against phi(0) = 1.
inline constexpr double kPhiBand = 1e-13;

/// g(t) = t e^{-t^2/2}.
[[nodiscard]] double g_eval(double t) noexcept;

/// phi_c(t) = c t + e^{-t^2/2}; its derivative is c - g(t).
[[nodiscard]] double phi_eval(double c, double t) noexcept;
[[nodiscard]] double phi_prime(double c, double t) noexcept;

/// phi_c(t) - phi_c(s), evaluated from the difference t - s so the result
/// keeps relative accuracy when t and s are close.
[[nodiscard]] double phi_difference(double c, double t, double s) noexcept;

/// The two roots m1 < 1 < m2 of g(t) = c.
struct CriticalRadii {
    double c = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
};

/// Requires 0 < c < e^{-1/2}. Throws Domain outside that range and
/// Degenerate within kDegenerateBand of e^{-1/2}, where the roots merge.
[[nodiscard]] CriticalRadii critical_radii(double c);

struct NoConstantSolution {};
struct OneConstantSolution {
    double t = 1.0;
};
/// r2 < 1 < r1, both solving g(r) = c.
struct TwoConstantSolutions {
    double r2 = 0.0;
    double r1 = 0.0;
};
using ConstantSolutionSet =
    std::variant<NoConstantSolution, OneConstantSolution, TwoConstantSolutions>;

/// Constant (disk) solutions of e^{-(h'^2+h^2)/2}(h''+h) = c.
/// With normalized = false the argument is the density constant C of the
/// 1/(2 pi)-weighted equation and is multiplied by 2 pi first.
[[nodiscard]] ConstantSolutionSet constant_solutions(double c_raw, bool normalized);

[[nodiscard]] int solution_count(const ConstantSolutionSet& set) noexcept;

/// Levels (h0, h0 + r) with phi(h0) = phi(h0 + r) = E, phi'(h0) > 0 and
/// phi'(h0 + r) <= 0: the minimum and maximum of a nonconstant solution.
struct GoodPair {
    double c = 0.0;
    double h0 = 0.0;
    double r = 0.0;
    double E = 0.0;

    [[nodiscard]] double h1() const noexcept { return h0 + r; }
};

/// The unique good pair with lower level h0, or nullopt when h0 lies outside
/// the admissible interval. Throws Domain/Degenerate for c outside (0, e^{-1/2}).
[[nodiscard]] std::optional<GoodPair> good_pair_from_h0(double c, double h0);

/// Outcome of c_from_pair: the constant c making phi_c(h0) = phi_c(h0 + r),
/// and whether (h0, h0 + r) is then a good pair.
struct PairConstant {
    double c = 0.0;
    bool valid = false;
    std::string reason;

    explicit operator bool() const noexcept { return valid; }
};

[[nodiscard]] PairConstant c_from_pair(double h0, double r);

/// c = (e^{-h0^2/2} - e^{-(h0+r)^2/2}) / r without the validity checks.
[[nodiscard]] double pair_constant(double h0, double r) noexcept;

/// Throws InvalidPair (with the failing condition) unless `pair` satisfies
/// the good-pair definition to floating-point tolerance.
void validate_pair(const GoodPair& pair);

/// Admissible lower levels [lower, m1) and the largest gap r_c = r(lower).
struct H0Domain {
    double c = 0.0;
    double lower = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    double r_c = 0.0;
    /// true when phi(m2) > phi(0), i.e. lower = q with phi(q) = phi(m2).
    bool lower_is_q = false;
};

[[nodiscard]] H0Domain h0_domain(double c);

/// Limit of (1 - e^{-r^2/2}) / r, the constant of the pair (0, r).
[[nodiscard]] double c_at_zero_level(double r) noexcept;

}  // namespace gm2
