#include "gm2/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <numbers>

#include "gm2/error.hpp"

namespace gm2 {

SpectralGrid::SpectralGrid(std::size_t n, DiffScheme scheme)
    : n_(n), step_(0.0), scheme_(scheme)
{
    if (n < 4 || n % 2 != 0) {
        throw Error(ErrorKind::Domain, "grid size must be even and at least 4");
    }
    step_ = 2.0 * std::numbers::pi / static_cast<double>(n);
    const auto N = static_cast<Eigen::Index>(n);
    d1_ = Eigen::MatrixXd::Zero(N, N);
    d2_ = Eigen::MatrixXd::Zero(N, N);

    if (scheme == DiffScheme::FiniteDifference) {
        for (Eigen::Index i = 0; i < N; ++i) {
            const Eigen::Index ip = (i + 1) % N;
            const Eigen::Index im = (i + N - 1) % N;
            d1_(i, ip) = 0.5 / step_;
            d1_(i, im) = -0.5 / step_;
            d2_(i, ip) = 1.0 / (step_ * step_);
            d2_(i, im) = 1.0 / (step_ * step_);
            d2_(i, i) = -2.0 / (step_ * step_);
        }
        return;
    }

    // Entries depend on k = (i - j) mod n; evaluating the trigonometric
    // factors at min(k, n - k) keeps them accurate near the wrap-around. The
    // diagonal of D2 is minus its off-diagonal row sum, so constants map to 0.
    std::vector<double> c1(n, 0.0);
    std::vector<double> c2(n, 0.0);
    double off_sum = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const std::size_t m = std::min(k, n - k);
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        const double half = 0.5 * static_cast<double>(m) * step_;
        const double s = std::sin(half);
        const double cot = std::cos(half) / s;
        c1[k] = 0.5 * sign * (k <= n / 2 ? cot : -cot);
        c2[k] = -0.5 * sign / (s * s);
        off_sum += c2[k];
    }
    c2[0] = -off_sum;
    for (Eigen::Index i = 0; i < N; ++i) {
        for (Eigen::Index j = 0; j < N; ++j) {
            const auto k = static_cast<std::size_t>((i - j + N) % N);
            d1_(i, j) = c1[k];
            d2_(i, j) = c2[k];
        }
    }
}

std::shared_ptr<const SpectralGrid> cached_grid(std::size_t n, DiffScheme scheme)
{
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, DiffScheme>, std::shared_ptr<const SpectralGrid>> cache;
    const std::scoped_lock lock(mutex);
    auto& slot = cache[{n, scheme}];
    if (!slot) slot = std::make_shared<const SpectralGrid>(n, scheme);
    return slot;
}

}  // namespace gm2
