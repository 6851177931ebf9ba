#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gm2/error.hpp"
#include "gm2/scalar_core.hpp"
#include "gm2/theta.hpp"

namespace gm2 {

/// A point of the curvature ODE e^{-(h'^2+h^2)/2}(h'' + h) = c in the
/// (h, h') plane, at angle theta.
struct OdeState {
    double theta = 0.0;
    double h = 0.0;
    double hp = 0.0;
};

struct Trajectory {
    std::vector<OdeState> samples;
    double c = 0.0;
    double E0 = 0.0;
    /// max over samples of |first_integral - E0|.
    double max_drift = 0.0;
};

/// Integration stopped because the controller asked for a step below 1e-12
/// (the solution blows up); carries the last accepted state.
class StepUnderflow : public Error {
public:
    StepUnderflow(const OdeState& last, const std::string& what)
        : Error(ErrorKind::StepUnderflow, what), last_(last) {}

    [[nodiscard]] const OdeState& last_state() const noexcept { return last_; }

private:
    OdeState last_;
};

/// e^{-(hp^2+h^2)/2} + c h, constant along solutions.
[[nodiscard]] double first_integral(double c, double h, double hp) noexcept;

inline constexpr double kMinStep = 1e-12;

/**
 * Integrates h'' = c e^{(h'^2+h^2)/2} - h over [init.theta, init.theta + span]
 * with an adaptive Dormand-Prince 5(4) pair under PI step control. Every
 * accepted step is recorded. tol bounds the local error per step (mixed
 * absolute/relative) and must lie in (1e-14, 1e-4).
 */
[[nodiscard]] Trajectory integrate(double c, const OdeState& init, double span, double tol);

/// Result of shooting from a minimum to the next maximum.
struct HalfPeriod {
    double theta = 0.0;      ///< angular distance between the critical points
    double arrival_h = 0.0;  ///< h at the detected maximum
    double drift = 0.0;      ///< first-integral drift over the half orbit
    std::size_t steps = 0;
};

/**
 * Launches from (h0, 0+) with a fourth-order Taylor step of length 1e-4, then
 * integrates until h' crosses zero and refines the crossing inside the step.
 * Throws EventMiss when no critical point appears within an angle of 4 pi or
 * the orbit escapes past m2 (the pair sits on the separatrix), and
 * InvalidPair for invalid pairs.
 */
[[nodiscard]] HalfPeriod half_period_detail(const GoodPair& pair, double tol);

/// The half period alone; throws EventMiss when the arrival level misses
/// h0 + r by more than 10 tol (relative once h0 + r > 1).
[[nodiscard]] double half_period_shoot(const GoodPair& pair, double tol);

/// Consecutive critical points along an orbit started at (h, 0): angles and
/// h-values of every zero of h' in (theta0, theta0 + span].
struct CriticalPoint {
    double theta = 0.0;
    double h = 0.0;
    bool maximum = false;
};
[[nodiscard]] std::vector<CriticalPoint> critical_points(double c, double h_start, double span,
                                                         double tol);

struct PeriodicSearchConfig {
    std::size_t n_h0 = 64;
    int k_max = 8;
    double shoot_tol = 1e-12;
    QuadratureConfig quadrature{};
};

struct NonconstantCandidate {
    double c = 0.0;
    double h0 = 0.0;  ///< initial condition (h0, h'=0)
    double theta = 0.0;
    int k = 0;
};

struct PeriodicSearchEntry {
    double c = 0.0;
    /// true when c >= e^{-1/2}: phi is monotone, only constants exist.
    bool constant_only = false;
    double min_theta = 0.0;
    /// min over grid and k of |Theta - pi/k|.
    double margin = 0.0;
    /// max |theta_eval - half_period_shoot| over the grid.
    double max_oracle_gap = 0.0;
    std::size_t points = 0;
    std::vector<std::string> failures;
};

struct PeriodicSearchReport {
    std::vector<double> c_grid;
    std::vector<NonconstantCandidate> found_nonconstant;
    std::vector<double> per_c_margin;
    std::vector<PeriodicSearchEntry> entries;
};

/// Sweeps the good pairs of each c with both Theta oracles and records how
/// close Theta comes to pi/k. A nonconstant 2 pi-periodic solution requires
/// Theta = pi/k for some k.
[[nodiscard]] PeriodicSearchReport search_periodic(const std::vector<double>& c_grid,
                                                   const PeriodicSearchConfig& cfg = {});

}  // namespace gm2
