#pragma once

#include <cmath>
#include <numbers>
#include <type_traits>

#include "symlap/errors.hpp"
#include "symlap/geom2d.hpp"

namespace symlap {

// PaperRaw: kernel of grad of int log|x-y| g(y) dy.  Greens: divided by 2pi, so that lap psi = g.
enum class KernelConvention { PaperRaw, Greens };

inline double convention_scale(KernelConvention conv) {
    return conv == KernelConvention::Greens ? 1.0 / (2.0 * std::numbers::pi) : 1.0;
}

inline constexpr double kPoleGuard = 1e-14;

namespace detail {
// innermost value of a (possibly nested) forward-mode scalar
template <typename Scalar>
double plain(const Scalar& s) {
    if constexpr (std::is_arithmetic_v<Scalar>)
        return static_cast<double>(s);
    else
        return plain(s.value());
}

template <typename Scalar>
Scalar guarded_norm2(const Point2<Scalar>& d) {
    Scalar r2 = d.squaredNorm();
    if (!(std::sqrt(plain(r2)) >= kPoleGuard)) throw SingularityError("kernel evaluated at its pole");
    return r2;
}
}  // namespace detail

template <typename Scalar>
Point2<Scalar> grad_kernel(const Point2<Scalar>& x, const Point2<Scalar>& y,
                           KernelConvention conv = KernelConvention::Greens) {
    Point2<Scalar> d = x - y;
    return d * (Scalar(convention_scale(conv)) / detail::guarded_norm2(d));
}

template <typename Scalar>
Point2<Scalar> four_fold_kernel_sum(const Point2<Scalar>& x, const Point2<Scalar>& y) {
    Point2<Scalar> yp = perp(y);
    Point2<Scalar> a = x - yp, b = x - y, c = x + yp, d = x + y;
    return a / detail::guarded_norm2(a) + b / detail::guarded_norm2(b) + c / detail::guarded_norm2(c) +
           d / detail::guarded_norm2(d);
}

// Numerator of the four-term sum over the common denominator, split by degree in x.
// The degree-1 and degree-5 bundles cancel identically.
template <typename Scalar>
struct FourFoldBundles {
    Point2<Scalar> first, third, fifth, seventh;
    Point2<Scalar> total() const { return first + third + fifth + seventh; }
};

template <typename Scalar>
FourFoldBundles<Scalar> four_fold_numerator_bundles(const Point2<Scalar>& x, const Point2<Scalar>& y) {
    Point2<Scalar> yp = perp(y);
    Scalar xx = x.squaredNorm(), yy = y.squaredNorm();
    Scalar a = x.dot(y), b = x.dot(yp);
    FourFoldBundles<Scalar> out;
    out.first = Scalar(4) * x * (yy * yy * yy) - Scalar(4) * yp * (b * yy * yy) - Scalar(4) * y * (a * yy * yy);
    out.third = Scalar(4) * x * (xx * yy * yy) - Scalar(8) * yp * (b * xx * yy) - Scalar(8) * y * (a * xx * yy) +
                Scalar(16) * yp * (b * a * a) + Scalar(16) * y * (a * b * b);
    out.fifth = Scalar(4) * x * (xx * xx * yy) - Scalar(4) * yp * (b * xx * xx) - Scalar(4) * y * (a * xx * xx);
    out.seventh = Scalar(4) * x * (xx * xx * xx);
    return out;
}

// Closed rational form of four_fold_kernel_sum, with the vanishing bundles removed.
template <typename Scalar>
Point2<Scalar> four_fold_kernel_closed(const Point2<Scalar>& x, const Point2<Scalar>& y) {
    Point2<Scalar> yp = perp(y);
    Scalar xx = x.squaredNorm(), yy = y.squaredNorm();
    Scalar a = x.dot(y), b = x.dot(yp);
    Point2<Scalar> num = Scalar(4) * x * (xx * (xx * xx - yy * yy)) + Scalar(16) * (a * b) * (yp * a + y * b);
    Scalar den = detail::guarded_norm2<Scalar>(x - y) * detail::guarded_norm2<Scalar>(x + y) *
                 detail::guarded_norm2<Scalar>(x - yp) * detail::guarded_norm2<Scalar>(x + yp);
    return num / den;
}

// (1/m) sum_{i=1..m} (x - O^i y)/|x - O^i y|^2, PaperRaw
template <typename Scalar>
Point2<Scalar> m_fold_kernel(const Point2<Scalar>& x, const Point2<Scalar>& y, int m) {
    Rotation rot(m);
    Point2<Scalar> acc = Point2<Scalar>::Zero();
    for (int i = 1; i <= m; ++i) {
        Point2<Scalar> d = x - rot.apply(y, i);
        acc += d / detail::guarded_norm2(d);
    }
    return acc / Scalar(m);
}

// d^2/dx_i dx_j of log|x-y| (times 1/2pi under Greens); indices are 0-based
template <typename Scalar>
Scalar hessian_kernel(const Point2<Scalar>& x, const Point2<Scalar>& y, int i, int j,
                      KernelConvention conv = KernelConvention::Greens) {
    Point2<Scalar> d = x - y;
    Scalar r2 = detail::guarded_norm2(d);
    Scalar delta = (i == j) ? Scalar(1) : Scalar(0);
    return Scalar(convention_scale(conv)) * (delta * r2 - Scalar(2) * d(i) * d(j)) / (r2 * r2);
}

template <typename Scalar>
Scalar log_kernel(const Point2<Scalar>& x, const Point2<Scalar>& y,
                  KernelConvention conv = KernelConvention::Greens) {
    using std::log;
    return Scalar(convention_scale(conv)) * Scalar(0.5) * log(detail::guarded_norm2<Scalar>(x - y));
}

}  // namespace symlap
