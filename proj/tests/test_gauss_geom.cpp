#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gm2/error.hpp"
#include "gm2/gauss_geom.hpp"
#include "gm2/numerics.hpp"
#include "gm2/scalar_core.hpp"
#include "oracles.hpp"

using namespace gm2;

namespace {
constexpr double kPi = std::numbers::pi;

ConvexPolygon square(double a = 1.0)
{
    return ConvexPolygon::from_vertices({{a, a}, {-a, a}, {-a, -a}, {a, -a}});
}

ConvexPolygon regular(std::size_t n, double R)
{
    std::vector<Point2> v;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = 2 * kPi * k / n;
        v.push_back({R * std::cos(t), R * std::sin(t)});
    }
    return ConvexPolygon::from_vertices(v);
}

ConvexPolygon to_polygon(const std::vector<oracle::Vec>& pts)
{
    std::vector<Point2> v;
    for (const auto& p : pts) v.push_back({p.x, p.y});
    return ConvexPolygon::from_vertices(v);
}

SupportSamples disk(double R, std::size_t n) { return {std::vector<double>(n, R)}; }

/// Support function of the ellipse x^2/a^2 + y^2/b^2 <= 1.
SupportSamples ellipse(double a, double b, std::size_t n)
{
    SupportSamples s;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = 2 * kPi * j / n;
        s.values.push_back(std::hypot(a * std::cos(t), b * std::sin(t)));
    }
    return s;
}

ConvexPolygon ellipse_polygon(double a, double b, std::size_t n)
{
    std::vector<Point2> v;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = 2 * kPi * k / n;
        v.push_back({a * std::cos(t), b * std::sin(t)});
    }
    return ConvexPolygon::from_vertices(v);
}
}  // namespace

TEST_CASE("polygon construction")
{
    const auto cw = ConvexPolygon::from_vertices({{1, -1}, {-1, -1}, {-1, 1}, {1, 1}});
    CHECK(cw.size() == 4);
    CHECK(cw.inradius_at_origin() == doctest::Approx(1.0));
    const auto dup = ConvexPolygon::from_vertices({{1, 1}, {1, 1 + 1e-14}, {-1, 1}, {-1, -1}, {1, -1}});
    CHECK(dup.size() == 4);
    try {
        (void)ConvexPolygon::from_vertices({{0, 0}, {1, 0}, {2, 0}});
        FAIL("expected DegenerateBody");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateBody);
    }
    try {
        (void)ConvexPolygon::from_vertices({{1, 0}, {0, 0.1}, {-1, 0}, {0, 1}});
        FAIL("expected ConvexityViolation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ConvexityViolation);
    }
    CHECK_THROWS_AS((void)ConvexPolygon::from_vertices({{0, 0}, {1, 0}}), Error);
}

TEST_CASE("support of the square")
{
    const auto sq = square();
    CHECK(support_eval(sq, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(support_eval(sq, kPi / 4) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const auto p = to_polygon(oracle::random_symmetric_polygon(rng));
        for (double t = 0; t < 2 * kPi; t += 0.1) {
            for (const auto& v : p.vertices()) {
                CHECK(support_eval(p, t) >= std::abs(v.x * std::cos(t) + v.y * std::sin(t)) - 1e-12);
            }
        }
    }
}

TEST_CASE("boundary measure of the square against adaptive Simpson")
{
    const auto m = boundary_measure_polygon(square());
    REQUIRE(m.atoms.size() == 4);
    const double edge = std::exp(-0.5) / (2 * kPi) *
                        oracle::simpson([](double s) { return std::exp(-0.5 * s * s); }, -1.0, 1.0, 1e-16);
    for (const auto& a : m.atoms) CHECK(std::abs(a.weight - edge) < 1e-12);
    CHECK(edge == doctest::Approx(0.16519).epsilon(1e-5));
}

TEST_CASE("regular n-gon measure tends to g(R)")
{
    double prev = 1.0;
    for (std::size_t n : {64, 256, 1024}) {
        const double err = std::abs(boundary_measure_polygon(regular(n, 1.3)).total() - g_eval(1.3));
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-5);
}

TEST_CASE("smooth density of disks")
{
    const auto dens = density_smooth(disk(1.0, 32));
    for (double d : dens) CHECK(d == doctest::Approx(std::exp(-0.5) / (2 * kPi)).epsilon(1e-14));
    CHECK(dens[0] == doctest::Approx(0.096532).epsilon(1e-5));
    for (double d : density_smooth(disk(1.7, 16), true)) CHECK(d == doctest::Approx(g_eval(1.7)).epsilon(1e-14));
    SupportSamples bad{{1, 1, 1, 0.1, 1, 1, 1, 1}};
    CHECK_THROWS_AS((void)density_smooth(bad), Error);
}

TEST_CASE("smooth and polygonal measures of an ellipse converge at second order")
{
    const double a = 1.4;
    const double b = 0.8;
    const double smooth = surface_smooth(ellipse(a, b, 256));
    std::vector<double> errs;
    for (std::size_t n : {64, 256, 1024}) {
        errs.push_back(std::abs(boundary_measure_polygon(ellipse_polygon(a, b, n)).total() - smooth));
    }
    CHECK(errs[1] < errs[0]);
    CHECK(errs[2] < errs[1]);
    CHECK(errs[0] / errs[1] > 10.0);
    const double fine = std::abs(boundary_measure_polygon(ellipse_polygon(a, b, 4096)).total() - smooth);
    CHECK(fine < 1e-6);
}

TEST_CASE("measure converges under shrinking perturbations")
{
    const double base = boundary_measure_polygon(square()).total();
    double prev = 1.0;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const auto p = ConvexPolygon::from_vertices({{1 + eps, 1}, {-1, 1 + eps}, {-1 - eps, -1}, {1, -1 - eps}});
        const double err = std::abs(boundary_measure_polygon(p).total() - base);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("Wulff shape")
{
    const auto ngon = wulff_shape(disk(1.0, 12));
    CHECK(ngon.size() == 12);
    for (std::size_t j = 0; j < 12; ++j) CHECK(support_eval(ngon, 2 * kPi * j / 12) == doctest::Approx(1.0).epsilon(1e-13));

    std::mt19937_64 rng(5);
    for (int i = 0; i < 30; ++i) {
        const auto p = to_polygon(oracle::random_symmetric_polygon(rng));
        const auto s = sample_support(p, 128);
        const auto w = wulff_shape(s);
        const auto back = sample_support(w, 128);
        for (std::size_t j = 0; j < 128; ++j) CHECK(std::abs(back.values[j] - s.values[j]) < 1e-10);
    }
    const auto sq = sample_support(square(), 8);
    const auto w = wulff_shape(sq);
    REQUIRE(w.size() == 4);

    auto spiked = disk(1.0, 16);
    spiked.values[3] = 1.5;
    const auto trunc = wulff_shape(spiked);
    CHECK(support_eval(trunc, spiked.theta(3)) < 1.5 - 1e-3);
    for (std::size_t j = 0; j < 16; ++j) CHECK(support_eval(trunc, spiked.theta(j)) <= spiked.values[j] + 1e-12);

    CHECK_THROWS_AS((void)wulff_shape(SupportSamples{{1, 1, -1, 1}}), Error);
}

TEST_CASE("support sample validation")
{
    CHECK_NOTHROW(validate_support(disk(1.0, 8)));
    CHECK_NOTHROW(validate_support(sample_support(square(), 64)));
    auto bad = disk(1.0, 8);
    bad.values[2] = 0.0;
    try {
        validate_support(bad);
        FAIL("expected OriginNotInterior");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::OriginNotInterior);
    }
    bad.values[2] = 2.0;
    try {
        validate_support(bad);
        FAIL("expected ConvexityViolation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ConvexityViolation);
    }
    CHECK_THROWS_AS(validate_support(SupportSamples{{1, 1, 1}}), Error);
}

TEST_CASE("Gaussian area closed forms")
{
    const double R = std::sqrt(2 * std::log(2.0));
    CHECK(std::abs(gaussian_area(disk(R, 64)) - 0.5) < 1e-12);
    CHECK(std::abs(gaussian_area(disk(1.0, 16)) - (1 - std::exp(-0.5))) < 1e-13);
    CHECK(std::abs(gaussian_area(regular(4096, R)) - 0.5) < 1e-5);
}

TEST_CASE("Gaussian area of the square against a 2-D Gauss-Legendre oracle")
{
    const double ref = oracle::integrate_2d(
        [](double x, double y) { return std::exp(-0.5 * (x * x + y * y)) / (2 * kPi); }, -1, 1, -1, 1, 4, 30);
    CHECK(std::abs(gaussian_area(square()) - ref) < 1e-10);
}

TEST_CASE("Gaussian area of a polygon with origin outside is rejected")
{
    const auto p = ConvexPolygon::from_vertices({{1, 1}, {2, 1}, {2, 2}, {1, 2}});
    try {
        (void)gaussian_area(p);
        FAIL("expected OriginNotInterior");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::OriginNotInterior);
    }
}

TEST_CASE("smooth and polygonal Gaussian areas agree on an ellipse")
{
    const double smooth = gaussian_area(ellipse(1.4, 0.8, 256));
    const double poly = gaussian_area(ellipse_polygon(1.4, 0.8, 4096));
    CHECK(std::abs(smooth - poly) < 1e-6);
}

TEST_CASE("isoperimetric check on disks and random polygons")
{
    const double R = std::sqrt(2 * std::log(2.0));
    const auto half = isoperimetric_check(Body{disk(R, 64)});
    CHECK(half.gamma == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(half.surface == doctest::Approx(R * 0.5).epsilon(1e-12));
    CHECK(half.surface == doctest::Approx(0.58871).epsilon(1e-5));
    CHECK(half.bound == doctest::Approx(1 / std::sqrt(2 * kPi)).epsilon(1e-12));
    CHECK(half.holds);

    const auto unit = isoperimetric_check(Body{disk(1.0, 32)});
    CHECK(unit.gamma == doctest::Approx(0.39347).epsilon(1e-5));
    CHECK(unit.bound == doctest::Approx(num::normal_pdf(num::normal_quantile(1 - std::exp(-0.5)))).epsilon(1e-12));
    CHECK(unit.holds);

    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        const auto rep = isoperimetric_check(Body{to_polygon(oracle::random_symmetric_polygon(rng))});
        CHECK(rep.holds);
        CHECK(rep.slack() >= 0.0);
    }
}
