#include "gm2/gauss_geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gm2/error.hpp"
#include "gm2/numerics.hpp"
#include "gm2/spectral.hpp"

namespace gm2 {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross(const Point2& o, const Point2& a, const Point2& b) noexcept
{
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double dist(const Point2& a, const Point2& b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

/// Outer normal, signed distance of the edge line to the origin, and the
/// tangential extent [a, b] of edge (p, q) of a counterclockwise polygon.
struct EdgeFrame {
    double nx, ny;
    double d;
    double a, b;
};

EdgeFrame edge_frame(const Point2& p, const Point2& q) noexcept
{
    const double len = dist(p, q);
    const double tx = (q.x - p.x) / len;
    const double ty = (q.y - p.y) / len;
    EdgeFrame e{ty, -tx, 0.0, 0.0, 0.0};
    e.d = e.nx * p.x + e.ny * p.y;
    e.a = tx * p.x + ty * p.y;
    e.b = tx * q.x + ty * q.y;
    return e;
}

std::string node(std::size_t j) { return "node " + std::to_string(j); }

void require_grid(std::size_t n)
{
    if (n < 4 || n % 2 != 0) {
        throw Error(ErrorKind::Domain, "support samples need an even count of at least 4");
    }
}

struct Derivs {
    Eigen::VectorXd h, hp, hpp;
};

Derivs differentiate(const SupportSamples& s)
{
    require_grid(s.n());
    const auto grid = cached_grid(s.n());
    Derivs d;
    d.h = to_eigen(s.values);
    d.hp = grid->diff1(d.h);
    d.hpp = grid->diff2(d.h);
    return d;
}

}  // namespace

ConvexPolygon ConvexPolygon::from_vertices(std::vector<Point2> v)
{
    std::vector<Point2> kept;
    kept.reserve(v.size());
    for (const Point2& p : v) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw Error(ErrorKind::DegenerateBody, "polygon vertex is not finite");
        }
        if (kept.empty() || dist(kept.back(), p) > kVertexDedup) kept.push_back(p);
    }
    while (kept.size() > 1 && dist(kept.front(), kept.back()) <= kVertexDedup) kept.pop_back();
    if (kept.size() < 3) {
        throw Error(ErrorKind::DegenerateBody, "polygon needs at least three distinct vertices");
    }

    double area2 = 0.0;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        const Point2& p = kept[i];
        const Point2& q = kept[(i + 1) % kept.size()];
        area2 += p.x * q.y - p.y * q.x;
    }
    if (!(std::abs(area2) > kVertexDedup)) {
        throw Error(ErrorKind::DegenerateBody, "polygon has empty interior");
    }
    if (area2 < 0.0) std::reverse(kept.begin(), kept.end());

    const std::size_t n = kept.size();
    double turning = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = kept[(i + n - 1) % n];
        const Point2& b = kept[i];
        const Point2& c = kept[(i + 1) % n];
        const double cr = cross(a, b, c);
        if (!(cr > 1e-12)) {
            throw Error(ErrorKind::ConvexityViolation,
                        "polygon is not strictly convex at vertex " + std::to_string(i));
        }
        const double dot = (b.x - a.x) * (c.x - b.x) + (b.y - a.y) * (c.y - b.y);
        turning += std::atan2(cr, dot);
    }
    if (std::abs(turning - kTwoPi) > 1e-6) {
        throw Error(ErrorKind::ConvexityViolation, "polygon boundary winds more than once");
    }
    return ConvexPolygon(std::move(kept));
}

double ConvexPolygon::inradius_at_origin() const noexcept
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const EdgeFrame e = edge_frame(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
        best = std::min(best, e.d);
    }
    return best;
}

double SupportSamples::theta(std::size_t j) const noexcept
{
    return kTwoPi * static_cast<double>(j) / static_cast<double>(values.size());
}

void validate_support(const SupportSamples& h)
{
    const std::size_t n = h.n();
    require_grid(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (!(h.values[j] > 0.0) || !std::isfinite(h.values[j])) {
            throw Error(ErrorKind::OriginNotInterior,
                        "support value at " + node(j) + " is not positive");
        }
    }
    const double cos_step = std::cos(kTwoPi / static_cast<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
        const double hm = h.values[(j + n - 1) % n];
        const double hj = h.values[j];
        const double hp = h.values[(j + 1) % n];
        const double excess = hm + hp - 2.0 * cos_step * hj;
        if (excess < -1e-12 * std::max({hm, hj, hp})) {
            throw Error(ErrorKind::ConvexityViolation,
                        "support samples are not convex at " + node(j));
        }
    }
}

SupportSamples sample_support(const ConvexPolygon& p, std::size_t n)
{
    require_grid(n);
    SupportSamples s;
    s.values.resize(n);
    for (std::size_t j = 0; j < n; ++j) s.values[j] = support_eval(p, s.theta(j));
    return s;
}

double DiscreteMeasure::total() const
{
    std::vector<double> w;
    w.reserve(atoms.size());
    for (const Atom& a : atoms) w.push_back(a.weight);
    return num::pairwise_sum(w);
}

double support_eval(const ConvexPolygon& p, double theta) noexcept
{
    const double ux = std::cos(theta);
    const double uy = std::sin(theta);
    double best = -std::numeric_limits<double>::infinity();
    for (const Point2& v : p.vertices()) best = std::max(best, v.x * ux + v.y * uy);
    return best;
}

ConvexPolygon wulff_shape(const SupportSamples& f)
{
    const std::size_t n = f.n();
    if (n < 3) throw Error(ErrorKind::DegenerateBody, "Wulff shape needs at least three directions");
    struct Dual {
        Point2 p;
        std::size_t j;
    };
    std::vector<Dual> pts;
    pts.reserve(n);
    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (!(f.values[j] > 0.0) || !std::isfinite(f.values[j])) {
            throw Error(ErrorKind::Domain, "Wulff shape requires positive samples (" + node(j) + ")");
        }
        const double t = f.theta(j);
        pts.push_back({{std::cos(t) / f.values[j], std::sin(t) / f.values[j]}, j});
        scale = std::max(scale, 1.0 / f.values[j]);
    }

    // Andrew's monotone chain; collinear points are dropped.
    std::sort(pts.begin(), pts.end(), [](const Dual& a, const Dual& b) {
        return a.p.x < b.p.x || (a.p.x == b.p.x && a.p.y < b.p.y);
    });
    const double eps = 1e-12 * scale * scale;
    std::vector<Dual> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2].p, hull[k - 1].p, pts[i].p) <= eps) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2].p, hull[k - 1].p, pts[i].p) <= eps) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3) throw Error(ErrorKind::DegenerateBody, "Wulff shape has empty interior");

    std::vector<Point2> verts;
    verts.reserve(hull.size());
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const std::size_t j = hull[i].j;
        const std::size_t m = hull[(i + 1) % hull.size()].j;
        const double tj = f.theta(j);
        const double tm = f.theta(m);
        const double det = std::sin(tm - tj);
        if (!(det > 0.0)) throw Error(ErrorKind::DegenerateBody, "Wulff shape is unbounded");
        const double fj = f.values[j];
        const double fm = f.values[m];
        verts.push_back({(fj * std::sin(tm) - fm * std::sin(tj)) / det,
                         (std::cos(tj) * fm - std::cos(tm) * fj) / det});
    }
    return ConvexPolygon::from_vertices(std::move(verts));
}

DiscreteMeasure boundary_measure_polygon(const ConvexPolygon& p)
{
    const auto& v = p.vertices();
    DiscreteMeasure m;
    m.atoms.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const EdgeFrame e = edge_frame(v[i], v[(i + 1) % v.size()]);
        const double w = std::exp(-0.5 * e.d * e.d) * num::gauss_integral(e.a, e.b) / kTwoPi;
        m.atoms.push_back({std::atan2(e.ny, e.nx), w});
    }
    return m;
}

std::vector<double> density_smooth(const SupportSamples& h, bool normalized)
{
    const Derivs d = differentiate(h);
    const double scale = normalized ? 1.0 : 1.0 / kTwoPi;
    std::vector<double> out(h.n());
    for (std::size_t j = 0; j < h.n(); ++j) {
        const auto J = static_cast<Eigen::Index>(j);
        const double curv = d.hpp[J] + d.h[J];
        if (!(curv > 0.0)) {
            throw Error(ErrorKind::ConvexityViolation, "h'' + h is not positive at " + node(j));
        }
        out[j] = scale * std::exp(-0.5 * (d.hp[J] * d.hp[J] + d.h[J] * d.h[J])) * curv;
    }
    return out;
}

double surface_smooth(const SupportSamples& h)
{
    const std::vector<double> dens = density_smooth(h, false);
    return num::pairwise_sum(dens) * kTwoPi / static_cast<double>(h.n());
}

double gaussian_area(const ConvexPolygon& p)
{
    if (!(p.inradius_at_origin() > 0.0)) {
        throw Error(ErrorKind::OriginNotInterior, "origin is not interior to the polygon");
    }
    const auto& v = p.vertices();
    std::vector<double> parts;
    parts.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const EdgeFrame e = edge_frame(v[i], v[(i + 1) % v.size()]);
        const double d2 = e.d * e.d;
        auto f = [d2](double psi) {
            const double c = std::cos(psi);
            return -std::expm1(-0.5 * d2 / (c * c));
        };
        const num::QuadResult q = num::integrate_gk(f, std::atan2(e.a, e.d), std::atan2(e.b, e.d), 1e-15);
        parts.push_back(q.value);
    }
    return num::pairwise_sum(parts) / kTwoPi;
}

double gaussian_area(const SupportSamples& h)
{
    validate_support(h);
    const Derivs d = differentiate(h);
    std::vector<double> parts(h.n());
    for (std::size_t j = 0; j < h.n(); ++j) {
        const auto J = static_cast<Eigen::Index>(j);
        const double rho2 = d.h[J] * d.h[J] + d.hp[J] * d.hp[J];
        parts[j] = -std::expm1(-0.5 * rho2) * d.h[J] * (d.hpp[J] + d.h[J]) / rho2;
    }
    return num::pairwise_sum(parts) / static_cast<double>(h.n());
}

IsoperimetricReport isoperimetric_check(const Body& body)
{
    IsoperimetricReport r;
    if (const auto* p = std::get_if<ConvexPolygon>(&body)) {
        r.gamma = gaussian_area(*p);
        r.surface = boundary_measure_polygon(*p).total();
    } else {
        const auto& h = std::get<SupportSamples>(body);
        r.gamma = gaussian_area(h);
        r.surface = surface_smooth(h);
    }
    r.bound = num::normal_pdf(num::normal_quantile(r.gamma));
    r.holds = r.surface >= r.bound * (1.0 - 1e-12);
    return r;
}

}  // namespace gm2
