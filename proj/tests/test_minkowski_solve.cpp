#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gm2/error.hpp"
#include "gm2/gauss_geom.hpp"
#include "gm2/minkowski_solve.hpp"
#include "gm2/scalar_core.hpp"
#include "gm2/spectral.hpp"
#include "oracles.hpp"

using namespace gm2;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> sampled(std::size_t n, double (*f)(double))
{
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = f(2 * kPi * j / n);
    return v;
}

double cos2_data(double t) { return 0.05 * (1 + 0.3 * std::cos(2 * t)); }
double rough_data(double t) { return 0.05 * (1 + 0.3 * std::pow(std::abs(std::cos(t)), 3)); }

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Io;
}

Eigen::VectorXd random_even_iterate(std::mt19937_64& rng, std::size_t n, double base)
{
    std::uniform_real_distribution<double> amp(-0.05, 0.05);
    const double a2 = amp(rng), a4 = amp(rng), b2 = amp(rng);
    Eigen::VectorXd h(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        const double t = 2 * kPi * j / n;
        h[static_cast<Eigen::Index>(j)] = base * (1 + a2 * std::cos(2 * t) + a4 * std::cos(4 * t) + b2 * std::sin(2 * t));
    }
    return h;
}
}  // namespace

TEST_CASE("spectral differentiation is exact on resolved modes")
{
    const SpectralGrid g(32);
    Eigen::VectorXd v(32), d1(32), d2(32);
    for (int j = 0; j < 32; ++j) {
        const double t = g.theta(j);
        v[j] = std::cos(5 * t) + 0.5 * std::sin(3 * t);
        d1[j] = -5 * std::sin(5 * t) + 1.5 * std::cos(3 * t);
        d2[j] = -25 * std::cos(5 * t) - 4.5 * std::sin(3 * t);
    }
    CHECK((g.diff1(v) - d1).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK((g.diff2(v) - d2).lpNorm<Eigen::Infinity>() < 1e-11);
    CHECK(g.d2().rowwise().sum().lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK_THROWS_AS(SpectralGrid(7), Error);
    CHECK(cached_grid(32).get() == cached_grid(32).get());
}

TEST_CASE("finite-difference matrices converge at second order")
{
    double prev = 1.0;
    for (std::size_t n : {32, 64, 128}) {
        const SpectralGrid g(n, DiffScheme::FiniteDifference);
        Eigen::VectorXd v(n), d2(n);
        for (std::size_t j = 0; j < n; ++j) {
            v[j] = std::cos(3 * g.theta(j));
            d2[j] = -9 * v[j];
        }
        const double err = (g.diff2(v) - d2).lpNorm<Eigen::Infinity>();
        if (prev < 1.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.05));
        prev = err;
    }
}

TEST_CASE("validate_f")
{
    const auto ok = validate_f(std::vector<double>(64, 0.05));
    CHECK(ok.l1_norm == doctest::Approx(0.1 * kPi).epsilon(1e-14));
    CHECK(ok.l1_norm < kL1Bound);
    CHECK(kL1Bound == doctest::Approx(1 / std::sqrt(2 * kPi)).epsilon(1e-16));
    CHECK(kind_of([] { (void)validate_f(std::vector<double>(64, 0.07)); }) == ErrorKind::L1TooLarge);
    CHECK(kind_of([] { (void)validate_f(std::vector<double>(15, 0.05)); }) == ErrorKind::Domain);
    CHECK(kind_of([] { (void)validate_f(std::vector<double>(8, 0.05)); }) == ErrorKind::Domain);
    auto neg = std::vector<double>(32, 0.05);
    neg[5] = neg[21] = -0.01;
    CHECK(kind_of([&] { (void)validate_f(neg); }) == ErrorKind::NotPositive);
    auto odd = sampled(32, [](double t) { return 0.05 * (1 + 0.3 * std::cos(t)); });
    CHECK(kind_of([&] { (void)validate_f(odd); }) == ErrorKind::NotEven);

    auto near = sampled(64, cos2_data);
    near[3] += 1e-14;
    const auto sym = validate_f(near);
    for (std::size_t j = 0; j < 32; ++j) CHECK(sym.values[j] == sym.values[j + 32]);
}

TEST_CASE("Fourier sampling and mollification")
{
    const auto f = sample_fourier_cos({0.05, 0.015}, 64);
    const auto ref = sampled(64, cos2_data);
    for (std::size_t j = 0; j < 64; ++j) CHECK(f[j] == doctest::Approx(ref[j]).epsilon(1e-14));

    const auto m = mollify(f, 0.1);
    const double damp = std::exp(-0.5 * 0.04);
    for (std::size_t j = 0; j < 64; ++j) {
        CHECK(m[j] == doctest::Approx(0.05 + 0.015 * damp * std::cos(2 * 2 * kPi * j / 64)).epsilon(1e-13));
    }
    const auto same = mollify(f, 0.0);
    for (std::size_t j = 0; j < 64; ++j) CHECK(same[j] == doctest::Approx(f[j]).epsilon(1e-14));
}

TEST_CASE("residual map closed forms")
{
    const std::size_t n = 32;
    const auto cr = critical_radii(2 * kPi * 0.05);
    CHECK(residual_map(Eigen::VectorXd::Constant(n, cr.m1), std::vector<double>(n, 0.05))
              .lpNorm<Eigen::Infinity>() < 1e-13);
    CHECK(residual_map(Eigen::VectorXd::Ones(n), std::vector<double>(n, std::exp(-0.5) / (2 * kPi)))
              .lpNorm<Eigen::Infinity>() < 1e-13);
    const auto r = residual_map(Eigen::VectorXd::Ones(n), std::vector<double>(n, 0.05));
    for (Eigen::Index j = 0; j < r.size(); ++j) {
        CHECK(r[j] == doctest::Approx(1 - 2 * kPi * std::exp(0.5) * 0.05).epsilon(1e-13));
        CHECK(r[j] == doctest::Approx(0.482038).epsilon(1e-6));
    }
}

TEST_CASE("linearization at constants has eigenvalues 1 - r^2 - k^2 on even modes")
{
    const std::size_t n = 32;
    const auto cr = critical_radii(2 * kPi * 0.05);
    for (double r : {cr.m1, cr.m2}) {
        const auto L = linearization(Eigen::VectorXd::Constant(n, r), std::vector<double>(n, 0.05));
        for (int k : {0, 2, 4, 6}) {
            Eigen::VectorXd phi(n);
            for (std::size_t j = 0; j < n; ++j) phi[j] = std::cos(k * 2 * kPi * j / n);
            const double lambda = 1 - r * r - k * k;
            CHECK((L * phi - lambda * phi).lpNorm<Eigen::Infinity>() < 1e-10);
            CHECK(std::abs(lambda) > 0.1);
        }
    }
}

TEST_CASE("linearization matches finite differences on random even iterates")
{
    std::mt19937_64 rng(31);
    const std::size_t n = 64;
    const auto f = sampled(n, cos2_data);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::VectorXd h = random_even_iterate(rng, n, 0.35);
        const Eigen::VectorXd phi = random_even_iterate(rng, n, 1.0);
        const double step = 1e-6;
        const Eigen::VectorXd fd = (residual_map(h + step * phi, f) - residual_map(h - step * phi, f)) / (2 * step);
        const Eigen::VectorXd an = linearization(h, f) * phi;
        CHECK((fd - an).norm() / an.norm() < 1e-5);
    }
}

TEST_CASE("even projection is idempotent")
{
    Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(16, 0.0, 1.0);
    project_even(v);
    const Eigen::VectorXd once = v;
    project_even(v);
    CHECK(v == once);
    for (int j = 0; j < 8; ++j) CHECK(v[j] == v[j + 8]);
}

TEST_CASE("SolverConfig validation")
{
    SolverConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.newton_tol = 1e-14;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.t_step_min = 0.5;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.damping = 0.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("constant data recovers both constant solutions")
{
    const auto f = validate_f(std::vector<double>(128, 0.05));
    const auto [m1, m2] = oracle::g_roots(2 * kPi * 0.05);
    const auto small = solve_branch(f, Branch::Small);
    const auto large = solve_branch(f, Branch::Large);
    for (double h : small.h.values) CHECK(std::abs(h - m1) < 1e-9);
    for (double h : large.h.values) CHECK(std::abs(h - m2) < 1e-9);
    CHECK(small.gamma2 < 0.5);
    CHECK(large.gamma2 > 0.5);
    CHECK(small.residual_inf < 1e-10);
    CHECK(large.residual_inf < 1e-10);
    CHECK(small.t_reached == 1.0);
    CHECK(small.perimeter == doctest::Approx(2 * kPi * m1).epsilon(1e-10));
    CHECK(starting_density(f) == doctest::Approx(std::min(0.05, std::exp(-1.0) / (2 * kPi)) / 2));
    CHECK(branch_name(Branch::Small) == "small");
    CHECK(branch_name(Branch::Large) == "large");
}

TEST_CASE("cos 2 theta data: nonconstant small solution")
{
    const auto f = validate_f(sampled(128, cos2_data));
    const auto res = solve_branch(f, Branch::Small);
    CHECK(res.residual_inf < 1e-10);
    CHECK(res.gamma2 < 0.5);
    const auto dens = density_smooth(res.h);
    for (std::size_t j = 0; j < dens.size(); ++j) CHECK(std::abs(dens[j] - f.values[j]) < 1e-9);
    for (std::size_t j = 0; j < 64; ++j) CHECK(res.h.values[j] == res.h.values[j + 64]);
    CHECK_NOTHROW(validate_support(res.h));
    const double spread = *std::max_element(res.h.values.begin(), res.h.values.end()) -
                          *std::min_element(res.h.values.begin(), res.h.values.end());
    CHECK(spread > 1e-3);

    const auto rep = apriori_check(res, f, 1 / 0.034);
    CHECK(std::isfinite(rep.tau_prime));
    CHECK(rep.h_min >= rep.h_lower);
    CHECK(rep.h_max <= rep.h_upper);

    const auto large = solve_branch(f, Branch::Large);
    CHECK(large.gamma2 > 0.5);
    CHECK(large.residual_inf < 1e-10);
}

TEST_CASE("grid convergence on non-band-limited data")
{
    // |cos|^3 has a jump in the third derivative, so the modes decay algebraically.
    const auto fine = solve_branch(validate_f(sampled(512, rough_data)), Branch::Small);
    std::vector<double> errs;
    for (std::size_t n : {32, 64, 128}) {
        const auto coarse = solve_branch(validate_f(sampled(n, rough_data)), Branch::Small);
        double err = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            err = std::max(err, std::abs(coarse.h.values[j] - fine.h.values[j * (512 / n)]));
        }
        errs.push_back(err);
    }
    MESSAGE("grid errors ", errs[0], " ", errs[1], " ", errs[2]);
    CHECK(errs[0] / errs[1] >= 4.0);
    CHECK(errs[1] / errs[2] >= 4.0);
}

TEST_CASE("a-priori checks")
{
    const auto f = validate_f(std::vector<double>(64, 0.05));
    const auto res = solve_branch(f, Branch::Small);
    const auto rep = apriori_check(res, f, 25.0);
    CHECK(rep.tau_prime >= std::max(res.h.values[0], 1 / res.h.values[0]) * (1 - 1e-12));
    CHECK(std::isfinite(rep.tau_prime));

    auto broken = res;
    broken.h.values[7] = 0.0;
    CHECK(kind_of([&] { (void)apriori_check(broken, f, 25.0); }) == ErrorKind::BoundViolation);
    CHECK(kind_of([&] { (void)apriori_check(res, f, 10.0); }) == ErrorKind::Domain);
}
