#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Core>
#include <unsupported/Eigen/AutoDiff>

#include "symlap/errors.hpp"
#include "symlap/kernels.hpp"

using namespace symlap;
constexpr double pi = std::numbers::pi;

namespace {
Point2d rand_point(std::mt19937_64& rng, double R) {
    std::uniform_real_distribution<double> u(-R, R);
    return {u(rng), u(rng)};
}
}  // namespace

TEST_CASE("gradient kernel is the derivative of the log kernel") {
    std::mt19937_64 rng(1);
    for (int n = 0; n < 200; ++n) {
        Point2d x = rand_point(rng, 3), y = rand_point(rng, 3);
        if ((x - y).norm() < 0.1) continue;
        const double h = 1e-6;
        Point2d fd;
        for (int i = 0; i < 2; ++i) {
            Point2d e = Point2d::Zero();
            e(i) = h;
            fd(i) = (log_kernel(Point2d(x + e), y, KernelConvention::PaperRaw) -
                     log_kernel(Point2d(x - e), y, KernelConvention::PaperRaw)) / (2 * h);
        }
        CHECK((grad_kernel(x, y, KernelConvention::PaperRaw) - fd).norm() < 1e-7 * (1 + fd.norm()));
        CHECK((grad_kernel(x, y, KernelConvention::Greens) * 2 * pi - grad_kernel(x, y, KernelConvention::PaperRaw))
                .norm() < 1e-13);
    }
}

TEST_CASE("hessian kernel agrees with forward-mode differentiation") {
    using AD = Eigen::AutoDiffScalar<Eigen::Vector2d>;
    Point2d x(0.4, -1.1), y(-0.3, 0.2);
    Point2<AD> xa(AD(x(0), 2, 0), AD(x(1), 2, 1));
    Point2<AD> ya(AD(y(0)), AD(y(1)));
    Point2<AD> g = grad_kernel<AD>(xa, ya, KernelConvention::PaperRaw);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(hessian_kernel(x, y, i, j, KernelConvention::PaperRaw) ==
                  doctest::Approx(g(i).derivatives()(j)).epsilon(1e-13));
    CHECK(hessian_kernel(x, y, 0, 0) + hessian_kernel(x, y, 1, 1) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("closed four-fold kernel equals the four-term sum") {
    std::mt19937_64 rng(2);
    for (int n = 0; n < 20000; ++n) {
        Point2d x = rand_point(rng, 10), y = rand_point(rng, 10);
        Point2d s = four_fold_kernel_sum(x, y), c = four_fold_kernel_closed(x, y);
        double scale = 0;
        for (const Point2d& z : {Point2d(x - y), Point2d(x + y), Point2d(x - perp(y)), Point2d(x + perp(y))})
            scale += 1 / z.norm();
        CHECK((s - c).norm() <= 1e-10 * scale);
    }
}

TEST_CASE("odd-degree bundles one and five cancel") {
    std::mt19937_64 rng(3);
    for (int n = 0; n < 2000; ++n) {
        Point2d x = rand_point(rng, 10), y = rand_point(rng, 10);
        auto b = four_fold_numerator_bundles(x, y);
        CHECK(b.first.norm() <= 1e-12 * 12 * x.norm() * std::pow(y.norm(), 6));
        CHECK(b.fifth.norm() <= 1e-12 * 12 * std::pow(x.norm(), 5) * y.squaredNorm());
    }
}

TEST_CASE("m-fold kernel") {
    Point2d x(0.3, 0.2), y(-0.5, 0.9);
    CHECK((4.0 * m_fold_kernel(x, y, 4) - four_fold_kernel_sum(x, y)).norm() < 1e-14);
    CHECK((m_fold_kernel(x, y, 1) - grad_kernel(x, y, KernelConvention::PaperRaw)).norm() < 1e-14);
    // invariant under turning y by 2pi/m
    Rotation r(5);
    CHECK((m_fold_kernel(x, y, 5) - m_fold_kernel(x, Point2d(r.apply(y, 2)), 5)).norm() < 1e-13);
}

TEST_CASE("poles raise SingularityError") {
    CHECK_THROWS_AS(grad_kernel(Point2d(1, 1), Point2d(1, 1)), SingularityError);
    CHECK_THROWS_AS(four_fold_kernel_sum(Point2d(1, 0), Point2d(0, 1)), SingularityError);  // x + perp(y) = 0
    CHECK_THROWS_AS(log_kernel(Point2d(0, 0), Point2d(0, 0)), SingularityError);
}
