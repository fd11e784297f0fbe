#include <doctest.h>

#include <cmath>
#include <numbers>

#include "symlap/errors.hpp"
#include "symlap/kernels.hpp"
#include "symlap/quadrature.hpp"

using namespace symlap;
constexpr double pi = std::numbers::pi;

namespace {
// int_{|y|<1} log|x - y| dy
double disc_log_potential(const Point2d& x) {
    const double r = x.norm();
    return r <= 1 ? 0.5 * pi * (r * r - 1) : pi * std::log(r);
}
}  // namespace

TEST_CASE("areas") {
    QuadratureConfig cfg;
    auto one = [](const Point2d&) { return 1.0; };
    CHECK(integrate(one, Disc{{0.2, -0.1}, 0.7}, cfg).value == doctest::Approx(pi * 0.49).epsilon(1e-12));
    CHECK(integrate(one, Triangle{2.0}, cfg).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate(one, SectorRegion{Sector(0.4, 1.0)}, cfg).value == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(integrate(one, Rect{{-1, 0}, {2, 0.5}}, cfg).value == doctest::Approx(1.5).epsilon(1e-12));
    PolarGraph quarter{[](double) { return 1.0; }, [](double) { return 0.0; }, 0.0, pi / 2};
    CHECK(integrate(one, quarter, cfg).value == doctest::Approx(pi / 4).epsilon(1e-10));
    CHECK(region_area(Triangle{2.0}) == doctest::Approx(1.0));
    CHECK(region_area(Disc{{0, 0}, 2.0}) == doctest::Approx(4 * pi));
}

TEST_CASE("moments") {
    QuadratureConfig cfg;
    CHECK(integrate([](const Point2d& y) { return y(0); }, Triangle{0.5}, cfg).value ==
          doctest::Approx(0.5 / 3).epsilon(1e-12));
    CHECK(integrate([](const Point2d& y) { return y(0) * y(1); }, Rect{{0, 0}, {1, 2}}, cfg).value ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("log potential of the unit disc") {
    QuadratureConfig cfg{1e-10, 1e-12, 24, 1e-6};
    for (const Point2d& x : {Point2d(0, 0), Point2d(0.3, 0.2), Point2d(0.9, -0.3), Point2d(1.5, 0.5)}) {
        auto f = [&](const Point2d& y) { return log_kernel(x, y, KernelConvention::PaperRaw); };
        auto r = integrate(f, Disc{}, cfg, {x});
        CHECK(r.value == doctest::Approx(disc_log_potential(x)).epsilon(1e-9));
        CHECK(r.error < 1e-8);
    }
}

TEST_CASE("principal value of second log derivatives over the disc") {
    // D^2 of the disc potential is pi I inside; the PV part is that minus pi g(x) I, i.e. zero
    QuadratureConfig cfg{1e-10, 1e-10, 24, 1e-6};
    const Point2d x(0.3, 0.2);
    for (auto [i, j] : {std::pair{0, 0}, std::pair{0, 1}, std::pair{1, 1}}) {
        Integrand<1> f = [&, i = i, j = j](const Point2d& y) {
            return VecN<1>(hessian_kernel(x, y, i, j, KernelConvention::PaperRaw));
        };
        Integrand<1> lead = [i = i, j = j](const Point2d& d) {
            return VecN<1>(hessian_kernel(d, Point2d(0, 0), i, j, KernelConvention::PaperRaw));
        };
        auto r = integrate_principal_value<1>(f, lead, {Disc{}}, x, cfg);
        CHECK(std::abs(r.value(0)) < 1e-8);
    }
}

TEST_CASE("one-dimensional rule") {
    QuadratureConfig cfg{1e-12, 1e-14, 40, 1e-6};
    CHECK(integrate_line([](double t) { return std::log(t); }, 0, 1, cfg).value == doctest::Approx(-1.0).epsilon(1e-11));
    CHECK(integrate_line([](double t) { return std::log(std::abs(t)); }, -1, 1, cfg, {0.0}).value ==
          doctest::Approx(-2.0).epsilon(1e-11));
    auto r = integrate_line_vec<2>([](double t) { return VecN<2>(std::sin(t), std::cos(t)); }, 0, pi, cfg);
    CHECK(r.value(0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(std::abs(r.value(1)) < 1e-13);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS((QuadratureConfig{-1, 1e-10, 24, 1e-6}.validate()), ConfigError);
    CHECK_THROWS_AS((QuadratureConfig{1e-8, -1, 24, 1e-6}.validate()), ConfigError);
    CHECK_THROWS_AS((QuadratureConfig{1e-8, 1e-10, 0, 1e-6}.validate()), ConfigError);
    CHECK_THROWS_AS((QuadratureConfig{1e-8, 1e-10, 24, 0}.validate()), ConfigError);
    CHECK_NOTHROW(QuadratureConfig{}.validate());
}

TEST_CASE("non-convergence reports the estimate") {
    QuadratureConfig tight{1e-15, 1e-17, 4, 1e-6};
    auto f = [](const Point2d& y) { return std::log(y.norm() + 1e-300); };
    try {
        (void)integrate(f, Disc{{0.01, 0.0}, 1.0}, tight);
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& e) {
        CHECK(std::isfinite(e.value));
        CHECK(e.error > 0);
    }
}

TEST_CASE("results are reproducible bit for bit") {
    QuadratureConfig cfg;
    auto f = [](const Point2d& y) { return std::exp(y(0)) * std::log(1e-3 + y.squaredNorm()); };
    CHECK(integrate(f, Disc{}, cfg).value == integrate(f, Disc{}, cfg).value);
}

TEST_CASE("scaled kernel bound stays flat for m = 4") {
    QuadratureConfig cfg;
    const double a = scaled_kernel_bound(Point2d(std::pow(2.0, -4), 0), 4, cfg);
    const double b = scaled_kernel_bound(Point2d(0, std::pow(2.0, -9)), 4, cfg);
    CHECK(a == doctest::Approx(b).epsilon(0.05));
}
