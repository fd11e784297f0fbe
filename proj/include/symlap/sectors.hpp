#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

#include <json.hpp>

#include "symlap/geom2d.hpp"
#include "symlap/quadrature.hpp"

namespace symlap {

// Q(x) = q11 x1^2 + 2 q12 x1 x2 + q22 x2^2; the singular part of a potential is Q(x) log|x|^2.
// All forms use the PaperRaw normalization (log kernel without 1/2pi).
struct SingularQuadraticForm {
    double q11 = 0.0, q12 = 0.0, q22 = 0.0;

    double operator()(const Point2d& x) const { return q11 * x(0) * x(0) + 2 * q12 * x(0) * x(1) + q22 * x(1) * x(1); }
    Eigen::Matrix2d matrix() const;
    static SingularQuadraticForm from_matrix(const Eigen::Matrix2d& m);
    bool is_zero(double tol = 1e-12) const;

    SingularQuadraticForm& operator+=(const SingularQuadraticForm& o);
    friend SingularQuadraticForm operator+(SingularQuadraticForm a, const SingularQuadraticForm& b) { return a += b; }
    friend SingularQuadraticForm operator*(double s, const SingularQuadraticForm& f) {
        return {s * f.q11, s * f.q12, s * f.q22};
    }
};

// Singular form of the cone {theta0 <= arg y <= theta1, |y| <= 1}.
SingularQuadraticForm cone_singular_form(double theta0, double theta1);

// S^alpha(0); domain error unless 0 < alpha < pi
SingularQuadraticForm sector_singular_form(double alpha);

// The triangle {0 <= y1 <= 1, 0 <= y2 <= c y1}.
SingularQuadraticForm triangle_singular_form(double c);

// Form of the region rotated counterclockwise by beta: Q'(x) = Q(O_{-beta} x).
SingularQuadraticForm rotated_form(const SingularQuadraticForm& form, double beta);

SingularQuadraticForm union_singular_form(const SectorUnion& a);

struct ClassifierReport {
    bool bounded = false;
    // Q at (1,0), (0,1) and (1,1)/sqrt2
    std::array<double, 3> conditions{};
    SingularQuadraticForm form;
    std::size_t sector_count = 0;

    nlohmann::json to_json() const;
};

// Second derivatives stay bounded near 0 iff the assembled singular form vanishes.
ClassifierReport classify_bounded(const SectorUnion& a);

// The coefficient formulas as commonly displayed for this problem:
//   cot a [ |x|^2 / csc^2 a - 2 ((O_b x)_1 cot a + (O_b x)_2)^2 / csc^4 a ]   per sector, and
//   (c/2) [ |x|^2 / (1 + c^2) - 2 ((c x2 + x1)/(1 + c^2))^2 ]                 for the triangle.
// They disagree with the quadrature oracle and are kept for comparison only.
SingularQuadraticForm display_union_form(const SectorUnion& a);
std::array<double, 3> display_conditions(const SectorUnion& a);
SingularQuadraticForm appendix_display_form(double c);

// int over the triangle of log|x - y| dy
double appendix_oracle(const Point2d& x, double c, const QuadratureConfig& cfg = {});

struct RemainderRegularity {
    std::vector<double> radii;
    std::vector<std::array<double, 3>> hessians;  // finite-difference D^2 G: (11, 12, 22)
    std::array<double, 3> slopes{};               // d entry / d ln(1/r)
    double max_abs_slope() const;
};

// G = oracle - Q log|x|^2 sampled at x_k = 2^-k (cos phi/2, sin phi/2), phi = arctan c;
// second differences with step |x|/16.
RemainderRegularity appendix_remainder_check(double c, const SingularQuadraticForm& form, int k_min, int k_max,
                                             const QuadratureConfig& cfg);

}  // namespace symlap
