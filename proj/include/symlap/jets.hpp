#pragma once

#include <Eigen/Core>
#include <unsupported/Eigen/AutoDiff>

#include "symlap/geom2d.hpp"

namespace symlap {

// value, gradient and Hessian at a point
struct Jet2 {
    double value = 0.0;
    Point2d grad = Point2d::Zero();
    Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
};

using AD1 = Eigen::AutoDiffScalar<Eigen::Vector2d>;
using AD2 = Eigen::AutoDiffScalar<Eigen::Matrix<AD1, 2, 1>>;

inline double scalar_value(double s) { return s; }
inline double scalar_value(const AD1& s) { return s.value(); }
inline double scalar_value(const AD2& s) { return s.value().value(); }

// Exact second-order jet of f(x1, x2) by nested forward differentiation.
template <typename F>
Jet2 second_order_jet(F&& f, const Point2d& x) {
    AD2 x1(AD1(x(0), 2, 0), 2, 0), x2(AD1(x(1), 2, 1), 2, 1);
    for (int i = 0; i < 2; ++i) {
        x1.derivatives()(i).derivatives().setZero();
        x2.derivatives()(i).derivatives().setZero();
    }
    AD2 r = f(x1, x2);
    Jet2 j;
    j.value = r.value().value();
    j.grad = r.value().derivatives();
    for (int i = 0; i < 2; ++i)
        j.hess.row(i) = r.derivatives()(i).derivatives().transpose();
    j.hess = 0.5 * (j.hess + j.hess.transpose()).eval();
    return j;
}

}  // namespace symlap
