#pragma once

#include <Eigen/Core>
#include <functional>
#include <limits>
#include <variant>
#include <vector>

#include "symlap/geom2d.hpp"
#include "symlap/quadrature.hpp"

namespace symlap {

// Oriented boundary curves, region on the left.
struct Segment {
    Point2d a, b;
};
struct Arc {
    Point2d center{0, 0};
    double radius = 1.0;
    double theta0 = 0.0, theta1 = 0.0;
};
struct PolarCurve {
    std::function<double(double)> rho, drho;
    double theta0 = 0.0, theta1 = 0.0;
};
using BoundaryPiece = std::variant<Segment, Arc, PolarCurve>;

// parameter range and point / velocity along a boundary piece
double piece_t0(const BoundaryPiece& p);
double piece_t1(const BoundaryPiece& p);
Point2d piece_point(const BoundaryPiece& p, double t);
Point2d piece_velocity(const BoundaryPiece& p, double t);
double distance_to_piece(const BoundaryPiece& p, const Point2d& x);
// parameter of the closest point, used to seed adaptive subdivision
double closest_parameter(const BoundaryPiece& p, const Point2d& x);

// Bilinear samples on a uniform grid; zero outside the grid rectangle.
struct SampledGrid {
    Point2d lo{-1, -1}, hi{1, 1};
    Eigen::MatrixXd values;  // values(i, j) at lo + (i hx, j hy)
    double operator()(const Point2d& x) const;
};

class Field2D {
public:
    enum class Kind { SectorChar, TriangleChar, RectChar, PetalChar, Sampled, Analytic };

    static Field2D sector_union(SectorUnion a, int symmetry_order = 1);
    static Field2D triangle(double c);
    static Field2D rects(std::vector<Rect> rects, int symmetry_order = 1);
    // characteristic function of star-shaped petals {r <= rho(theta)} over disjoint theta ranges
    static Field2D petals(std::vector<PolarGraph> petals, int symmetry_order = 1);
    static Field2D sampled(SampledGrid grid, int symmetry_order = 1);
    static Field2D analytic(std::function<double(const Point2d&)> g, double support_radius, double sup_norm,
                            int symmetry_order = 1);

    double operator()(const Point2d& x) const { return g_(x); }

    Kind kind() const { return kind_; }
    int symmetry_order() const { return m_; }
    double support_radius() const { return support_radius_; }
    double sup_norm() const { return sup_norm_; }
    bool is_characteristic() const { return !boundary_.empty(); }

    const std::vector<Region>& support_regions() const { return regions_; }
    // support restricted to the wedge 0 <= theta <= 2pi/m; empty when not available
    std::vector<Region> fundamental_regions() const;
    const std::vector<BoundaryPiece>& boundary() const { return boundary_; }
    const SectorUnion* sectors() const { return kind_ == Kind::SectorChar ? &sectors_ : nullptr; }

    // distance to the jump set of g; +inf for continuous fields
    double distance_to_jump(const Point2d& x) const;

private:
    Field2D() = default;
    void verify();

    Kind kind_ = Kind::Analytic;
    int m_ = 1;
    double support_radius_ = 0.0;
    double sup_norm_ = 1.0;
    std::function<double(const Point2d&)> g_;
    std::vector<Region> regions_;
    std::vector<BoundaryPiece> boundary_;
    SectorUnion sectors_;
};

}  // namespace symlap
