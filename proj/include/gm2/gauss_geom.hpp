#pragma once

#include <cstddef>
#include <variant>
#include <vector>

namespace gm2 {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline constexpr double kVertexDedup = 1e-12;

/// Convex polygon with strictly convex counterclockwise vertices.
class ConvexPolygon {
public:
    /**
     * Drops consecutive vertices closer than 1e-12 (including the wrap-around
     * pair) and reverses clockwise input. Throws DegenerateBody when fewer
     * than three distinct vertices remain or the area vanishes, and
     * ConvexityViolation unless every turn is a strict left turn (cross
     * product above 1e-12).
     */
    [[nodiscard]] static ConvexPolygon from_vertices(std::vector<Point2> vertices);

    [[nodiscard]] const std::vector<Point2>& vertices() const noexcept { return vertices_; }
    [[nodiscard]] std::size_t size() const noexcept { return vertices_.size(); }

    /// Smallest distance from the origin to an edge line, signed positive
    /// inside. The origin is interior iff this is positive.
    [[nodiscard]] double inradius_at_origin() const noexcept;

private:
    explicit ConvexPolygon(std::vector<Point2> v) : vertices_(std::move(v)) {}
    std::vector<Point2> vertices_;
};

/// Support function h at theta_j = 2 pi j / n.
struct SupportSamples {
    std::vector<double> values;

    [[nodiscard]] std::size_t n() const noexcept { return values.size(); }
    [[nodiscard]] double theta(std::size_t j) const noexcept;
};

/**
 * Throws Domain unless n is even and at least 4, OriginNotInterior when some
 * value is not positive, and ConvexityViolation when some node violates
 * h_{j-1} + h_{j+1} >= 2 cos(2 pi / n) h_j (up to 1e-12 relative). That
 * inequality says the j-th tangent line touches the Wulff shape of the
 * samples; it is the exact discrete form of h'' + h >= 0 and holds with
 * equality for polygon samples between two vertex directions.
 */
void validate_support(const SupportSamples& h);

/// Support samples of a polygon on an n-point grid.
[[nodiscard]] SupportSamples sample_support(const ConvexPolygon& p, std::size_t n);

struct Atom {
    double angle = 0.0;  ///< outer unit normal angle in (-pi, pi]
    double weight = 0.0;
};

struct DiscreteMeasure {
    std::vector<Atom> atoms;

    /// Pairwise-summed total weight.
    [[nodiscard]] double total() const;
};

/// max over vertices of x . (cos theta, sin theta).
[[nodiscard]] double support_eval(const ConvexPolygon& p, double theta) noexcept;

/**
 * Intersection of the half-planes x . u_j <= f_j. The active constraints are
 * the vertices of the convex hull of the dual points u_j / f_j; consecutive
 * active lines meet at the polygon's vertices. Throws Domain unless every
 * f_j is positive, DegenerateBody if the result has empty interior.
 */
[[nodiscard]] ConvexPolygon wulff_shape(const SupportSamples& f);

/**
 * Gaussian surface-area measure of a polygon: one atom per edge, at the
 * edge's outer normal, of weight (1/2 pi) e^{-d^2/2} int_a^b e^{-s^2/2} ds
 * where d is the edge line's distance to the origin and [a, b] the edge's
 * extent along its tangent.
 */
[[nodiscard]] DiscreteMeasure boundary_measure_polygon(const ConvexPolygon& p);

/**
 * Gaussian surface-area density at each node, e^{-(h'^2+h^2)/2} (h'' + h),
 * divided by 2 pi unless `normalized` (the constant-c form). Derivatives are
 * spectral. Throws ConvexityViolation if h'' + h <= 0 at some node.
 */
[[nodiscard]] std::vector<double> density_smooth(const SupportSamples& h, bool normalized = false);

/// Total Gaussian surface area of a smooth body, (2 pi / n) sum density_smooth.
[[nodiscard]] double surface_smooth(const SupportSamples& h);

/**
 * Gaussian measure (1/2 pi) int_0^{2 pi} (1 - e^{-rho^2/2}) dphi from the
 * radial function rho. For a polygon each edge contributes
 * int -expm1(-d^2 / (2 cos^2 psi)) dpsi over its angular sector; for support
 * samples the boundary is parametrized by the normal angle, with
 * dphi = h (h'' + h) / (h^2 + h'^2) dtheta. Throws OriginNotInterior.
 */
[[nodiscard]] double gaussian_area(const ConvexPolygon& p);
[[nodiscard]] double gaussian_area(const SupportSamples& h);

using Body = std::variant<ConvexPolygon, SupportSamples>;

struct IsoperimetricReport {
    double gamma = 0.0;    ///< Gaussian measure of the body
    double surface = 0.0;  ///< total Gaussian surface area
    double bound = 0.0;    ///< psi(Psi^{-1}(gamma))
    bool holds = false;    ///< surface >= bound (1e-12 relative slack)

    [[nodiscard]] double slack() const noexcept { return surface - bound; }
};

/// Evaluates |S| >= psi(Psi^{-1}(gamma)) with psi the standard normal
/// density and Psi its distribution function.
[[nodiscard]] IsoperimetricReport isoperimetric_check(const Body& body);

}  // namespace gm2
