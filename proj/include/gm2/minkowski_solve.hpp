#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gm2/gauss_geom.hpp"

namespace gm2 {

/// Even positive density samples f at theta_j = 2 pi j / n.
struct PrescribedData {
    std::vector<double> values;
    double l1_norm = 0.0;  ///< (2 pi / n) sum f

    [[nodiscard]] std::size_t n() const noexcept { return values.size(); }
    [[nodiscard]] double min() const;
};

/// 1 / sqrt(2 pi): the L1 bound on admissible data.
inline constexpr double kL1Bound = 0.39894228040143267793994605993438;

/**
 * Requires an even n >= 16. Throws NotPositive (naming the node), NotEven when
 * some antipodal pair differs by more than 1e-12, and L1TooLarge when
 * (2 pi / n) sum f >= 1 / sqrt(2 pi). Antipodal pairs are replaced by their
 * mean, so the result is exactly even.
 */
[[nodiscard]] PrescribedData validate_f(std::vector<double> raw);

/// Samples of a0 + a2 cos 2 theta + a4 cos 4 theta + ... on an n-point grid.
[[nodiscard]] std::vector<double> sample_fourier_cos(const std::vector<double>& even_coeffs,
                                                     std::size_t n);

/// Circular Gaussian smoothing with standard deviation `bandwidth` radians,
/// applied by damping Fourier mode k by e^{-(k bandwidth)^2 / 2}. Preserves
/// the mean and evenness.
[[nodiscard]] std::vector<double> mollify(const std::vector<double>& f, double bandwidth);

/// Replaces each antipodal pair (j, j + n/2) by its mean.
void project_even(Eigen::VectorXd& v);

/// F(h) = h'' + h - 2 pi e^{(h'^2+h^2)/2} f at each node (spectral derivatives).
[[nodiscard]] Eigen::VectorXd residual_map(const Eigen::VectorXd& h, const std::vector<double>& f);

/// Derivative of residual_map at h:
/// phi -> phi'' + phi - 2 pi e^{(h'^2+h^2)/2} f (h' phi' + h phi).
[[nodiscard]] Eigen::MatrixXd linearization(const Eigen::VectorXd& h, const std::vector<double>& f);

struct SolverConfig {
    double newton_tol = 1e-10;
    int max_newton = 30;
    double t_step_init = 0.25;
    double t_step_min = 1e-4;
    double damping = 1.0;

    /// Throws Domain when a field is out of range.
    void validate() const;
};

enum class Branch { Small, Large };

[[nodiscard]] std::string_view branch_name(Branch b) noexcept;

struct SolveResult {
    Branch branch = Branch::Small;
    SupportSamples h;
    double residual_inf = 0.0;
    double gamma2 = 0.0;
    double c0_used = 0.0;  ///< starting constant density
    double t_reached = 0.0;
    double perimeter = 0.0;  ///< Euclidean perimeter, int (h'' + h) dtheta
    int newton_iterations = 0;
    int continuation_steps = 0;
};

/// c0 = min(min f, e^{-1} / (2 pi)) / 2.
[[nodiscard]] double starting_density(const PrescribedData& f);

/**
 * Newton iteration with homotopy continuation along f_t = (1 - t) c0 + t f,
 * starting from the constant solution r2 (Small) or r1 (Large) of c0. The
 * t step halves on Newton failure and grows after easy steps; every iterate
 * is projected onto even functions.
 *
 * Throws ContinuationFailed (with the last t reached) when the step drops
 * below t_step_min, ConvexityLost when h'' + h > 0 cannot be kept by damping,
 * and BranchMismatch when the final Gaussian measure lies on the wrong side
 * of 1/2.
 */
[[nodiscard]] SolveResult solve_branch(const PrescribedData& f, Branch branch,
                                       const SolverConfig& cfg = {});

struct AprioriReport {
    double tau = 0.0;
    double h_min = 0.0, h_max = 0.0;
    double curv_min = 0.0, curv_max = 0.0;  ///< h'' + h
    double grad_min = 0.0, grad_max = 0.0;  ///< sqrt(h'^2 + h^2)
    /// Bounds implied by 1/tau < f < tau: 2 pi / tau < h < m2(2 pi / tau).
    double h_lower = 0.0, h_upper = 0.0;
    /// max(h_max, 1/h_min, curv_max, 1/curv_min, grad_max, 1/grad_min).
    double tau_prime = 0.0;
};

/**
 * Checks positivity and two-sided bounds on h, h'' + h and sqrt(h'^2 + h^2)
 * for a solution with data 1/tau < f < tau and reports the realized tau'.
 * Throws Domain if f violates the tau bracket and BoundViolation naming the
 * first failing quantity.
 */
[[nodiscard]] AprioriReport apriori_check(const SolveResult& result, const PrescribedData& f,
                                          double tau);

}  // namespace gm2
