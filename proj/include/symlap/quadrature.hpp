#pragma once

#include <Eigen/Core>
#include <functional>
#include <variant>
#include <vector>

#include "symlap/geom2d.hpp"

namespace symlap {

struct QuadratureConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    int max_subdivisions = 24;  // maximum refinement depth of a cell
    double singular_split_radius = 1e-6;

    // throws ConfigError
    void validate() const;
    friend bool operator==(const QuadratureConfig&, const QuadratureConfig&) = default;
};

struct Disc {
    Point2d center{0.0, 0.0};
    double radius = 1.0;
};
struct SectorRegion {
    Sector sector;
};
// {0 <= y1 <= 1, 0 <= y2 <= c y1}
struct Triangle {
    double c = 1.0;
};
struct Rect {
    Point2d lo{0.0, 0.0};
    Point2d hi{1.0, 1.0};
};
// annular wedge {r0 <= |y - center| <= r1, theta0 <= arg <= theta1}
struct PolarPatch {
    Point2d center{0.0, 0.0};
    double r0 = 0.0, r1 = 1.0;
    double theta0 = 0.0, theta1 = 0.0;
};
// {0 <= r <= rho(theta), theta0 <= theta <= theta1}, star-shaped about the origin
struct PolarGraph {
    std::function<double(double)> rho;
    std::function<double(double)> drho;
    double theta0 = 0.0, theta1 = 0.0;
};

using Region = std::variant<Disc, SectorRegion, Triangle, Rect, PolarPatch, PolarGraph>;

double region_area(const Region& region);

template <int N>
using VecN = Eigen::Matrix<double, N, 1>;

template <int N>
struct QuadResult {
    VecN<N> value = VecN<N>::Zero();
    double error = 0.0;
    long cells = 0;
};

struct QuadEstimate {
    double value = 0.0;
    double error = 0.0;
    long cells = 0;
};

template <int N>
using Integrand = std::function<VecN<N>(const Point2d&)>;

// Adaptive integration over a union of non-overlapping regions.  Integrable point
// singularities of f must be listed in singular_points; cells around them are built
// in Duffy coordinates so the Jacobian absorbs a 1/r blow-up.
template <int N>
QuadResult<N> integrate_vec(const Integrand<N>& f, const std::vector<Region>& regions,
                            const QuadratureConfig& cfg, const std::vector<Point2d>& singular_points = {});

// Principal value about x with circular exclusion.  leading(d) is the part of f(x + d)
// homogeneous of degree -2 in d; it must have zero mean on circles.
template <int N>
QuadResult<N> integrate_principal_value(const Integrand<N>& f, const Integrand<N>& leading,
                                        const std::vector<Region>& regions, const Point2d& x,
                                        const QuadratureConfig& cfg);

QuadEstimate integrate(const std::function<double(const Point2d&)>& f, const Region& region,
                       const QuadratureConfig& cfg = {}, const std::vector<Point2d>& singular_points = {});

// Adaptive Gauss-Kronrod 21 on [a, b]; breakpoints seed the initial partition.
template <int N>
QuadResult<N> integrate_line_vec(const std::function<VecN<N>(double)>& f, double a, double b,
                                 const QuadratureConfig& cfg, const std::vector<double>& breakpoints = {});

QuadEstimate integrate_line(const std::function<double(double)>& f, double a, double b,
                            const QuadratureConfig& cfg = {}, const std::vector<double>& breakpoints = {});

// int_{B_10(0)} |K_m(x, y)| dy / |x| with K_m the m-fold symmetrized gradient kernel
double scaled_kernel_bound(const Point2d& x, int m, const QuadratureConfig& cfg = {});

}  // namespace symlap
