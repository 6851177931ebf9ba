#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace gm2 {

enum class DiffScheme { Spectral, FiniteDifference };

/**
 * Uniform periodic grid theta_j = 2 pi j / n with first and second
 * differentiation matrices. The spectral matrices differentiate the
 * trigonometric interpolant exactly (modes |k| < n/2); the finite-difference
 * alternative uses second-order centred stencils.
 */
class SpectralGrid {
public:
    /// Throws Domain unless n is even and at least 4.
    explicit SpectralGrid(std::size_t n, DiffScheme scheme = DiffScheme::Spectral);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] double spacing() const noexcept { return step_; }
    [[nodiscard]] double theta(std::size_t j) const noexcept { return step_ * static_cast<double>(j); }
    [[nodiscard]] DiffScheme scheme() const noexcept { return scheme_; }

    [[nodiscard]] const Eigen::MatrixXd& d1() const noexcept { return d1_; }
    [[nodiscard]] const Eigen::MatrixXd& d2() const noexcept { return d2_; }

    [[nodiscard]] Eigen::VectorXd diff1(const Eigen::VectorXd& v) const { return d1_ * v; }
    [[nodiscard]] Eigen::VectorXd diff2(const Eigen::VectorXd& v) const { return d2_ * v; }

private:
    std::size_t n_;
    double step_;
    DiffScheme scheme_;
    Eigen::MatrixXd d1_;
    Eigen::MatrixXd d2_;
};

/// Shared, lazily built grids keyed by (n, scheme); safe to call concurrently.
[[nodiscard]] std::shared_ptr<const SpectralGrid> cached_grid(std::size_t n,
                                                              DiffScheme scheme = DiffScheme::Spectral);

[[nodiscard]] inline Eigen::VectorXd to_eigen(const std::vector<double>& v)
{
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

[[nodiscard]] inline std::vector<double> to_std(const Eigen::VectorXd& v)
{
    return {v.data(), v.data() + v.size()};
}

}  // namespace gm2
