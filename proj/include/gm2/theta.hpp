#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gm2/scalar_core.hpp"

namespace gm2 {

struct QuadratureConfig {
    enum class Scheme { TrigSubstitution, DoubleExponential };

    Scheme scheme = Scheme::TrigSubstitution;
    int max_levels = 12;
    double rel_tol = 1e-12;

    /// Throws Domain unless rel_tol in (0, 1e-2] and 1 <= max_levels <= 14.
    void validate() const;
};

/// Angular distance between a minimum and the next maximum of a solution.
struct ThetaResult {
    /// +infinity when the pair is divergent (see endpoint_flags).
    double value = 0.0;
    /// Unset for divergent pairs.
    std::optional<double> est_error;
    /// Singularity at t = 0 / t = 1 stronger than inverse square root.
    std::array<bool, 2> endpoint_flags{false, false};
    int levels = 0;

    [[nodiscard]] bool divergent() const noexcept { return endpoint_flags[0] || endpoint_flags[1]; }
};

/**
 * Theta(c, h0, r) = int_0^1 r / sqrt(-(tr + h0)^2 - 2 log(e^{-h0^2/2} - c t r)) dt.
 *
 * The integrand is determined by the levels (h0, h0 + r); c is recomputed from
 * them so both inverse-square-root endpoint singularities sit exactly at
 * t = 0 and t = 1. The trigonometric scheme substitutes t = (1 - cos psi)/2
 * and factors t(1 - t) out of the radicand analytically, which leaves a
 * smooth even periodic integrand on [0, pi] that the trapezoid rule
 * integrates spectrally. The double-exponential scheme integrates the
 * original t-form with tanh-sinh nodes and is kept as an independent check.
 *
 * Throws InvalidPair for pairs violating the good-pair definition and
 * QuadratureFailure when the tolerance is not met within max_levels.
 */
[[nodiscard]] ThetaResult theta_eval(const GoodPair& pair, const QuadratureConfig& cfg = {});

/// pi / sqrt(1 - m1(c)^2), the r -> 0 limit along the good pairs of c.
[[nodiscard]] double theta_small_r_limit(double c);

/// Good pairs on an n-point grid over the admissible lower levels of c,
/// stopping short of m1 by a relative collar of 1e-6 (where r -> 0).
/// A single-point grid sits at the collar.
[[nodiscard]] std::vector<GoodPair> good_pair_grid(double c, std::size_t n);

inline constexpr double kM1Collar = 1e-6;

struct ThetaPoint {
    GoodPair pair;
    std::optional<ThetaResult> result;
    std::string failure;
};

struct ThetaScan {
    double c = 0.0;
    std::vector<ThetaPoint> points;
    double min_theta = 0.0;
    std::optional<std::size_t> argmin;
    std::size_t failures = 0;

    [[nodiscard]] double margin() const noexcept;
    /// Largest error estimate over the finite points.
    [[nodiscard]] double max_est_error() const noexcept;
};

/// Evaluates Theta on good_pair_grid(c, n_h0) and returns the minimum.
/// Per-point quadrature failures are recorded, not thrown.
[[nodiscard]] ThetaScan scan_min_theta(double c, std::size_t n_h0, const QuadratureConfig& cfg = {});

/// Theta along r -> (c(r), h0, r) at fixed lower level h0.
struct InR {
    double h0 = 0.0;
};
/// Theta along c -> (c, h0(c), r) at fixed gap r, with (h_star, h_star + r)
/// good with respect to c_star.
struct InC {
    double r = 0.0;
    double c_star = 0.0;
    double h_star = 0.0;
};
using MonotonicityMode = std::variant<InR, InC>;

struct MonotonicityReport {
    MonotonicityMode mode;
    std::vector<double> parameter;  // r (InR) or c (InC)
    std::vector<GoodPair> pairs;
    std::vector<double> theta;
    std::vector<double> est_error;
    /// max_i (theta_i - theta_{i+1}), clipped at zero.
    double max_decrease = 0.0;
    /// max_i (theta_i - theta_{i+1} - est_i - est_{i+1}); <= 0 means monotone.
    double max_excess = 0.0;

    [[nodiscard]] bool nondecreasing() const noexcept { return max_excess <= 0.0; }
};

/// Largest gap r_{h0} for which some c in (0, e^{-1/2}) makes (h0, h0 + r) good.
[[nodiscard]] double max_gap_for_level(double h0);

/// Default parameter range of a family: (0, r_{h0}) for InR, (c_r, c_star] for InC.
[[nodiscard]] std::pair<double, double> family_range(const MonotonicityMode& mode);

/**
 * Evaluates Theta on an n-point family. The default grid is interior to the
 * family's parameter range; an explicit [lo, hi] range may be passed instead.
 * Throws Domain when the mode's hypotheses fail.
 */
[[nodiscard]] MonotonicityReport monotonicity_scan(const MonotonicityMode& mode, std::size_t n,
                                                   const QuadratureConfig& cfg = {},
                                                   std::optional<std::pair<double, double>> range = {});

struct EmptinessReport {
    double c = 0.0;
    int k_max = 0;
    double min_theta = 0.0;
    /// min Theta - pi.
    double margin = 0.0;
    /// Closest approach of Theta to pi/k over the grid, k = 1..k_max.
    std::vector<double> min_distance;
    bool certified = false;
    ThetaScan scan;
};

/// Certifies that no grid pair has Theta = pi/k for 1 <= k <= k_max.
[[nodiscard]] EmptinessReport pi_over_k_emptiness(double c, std::size_t n_h0, int k_max,
                                                  const QuadratureConfig& cfg = {});

namespace detail {
/// Second divided difference G[x0, x1, x2] of G(x) = e^{-x^2/2}. Along a good
/// pair, K(u) = -G[h0, b, u] is the smooth positive factor with
/// phi(u) - phi(h0) = (u - h0)(b - u) K(u).
[[nodiscard]] double gauss_second_divided_difference(double x0, double x1, double x2) noexcept;
}  // namespace detail

}  // namespace gm2
