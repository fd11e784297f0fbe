#include "symlap/sectors.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "symlap/errors.hpp"

namespace symlap {

namespace {
using cplx = std::complex<double>;
constexpr cplx kI(0.0, 1.0);

// trace-free form with q11 - i q12 = a
SingularQuadraticForm from_complex(cplx a) { return {a.real(), -a.imag(), -a.real()}; }

double fit_slope(const std::vector<double>& t, const std::vector<double>& v) {
    double tm = 0, vm = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        tm += t[i];
        vm += v[i];
    }
    tm /= t.size();
    vm /= t.size();
    double stt = 0, stv = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        stt += (t[i] - tm) * (t[i] - tm);
        stv += (t[i] - tm) * (v[i] - vm);
    }
    return stv / stt;
}
}  // namespace

Eigen::Matrix2d SingularQuadraticForm::matrix() const {
    Eigen::Matrix2d m;
    m << q11, q12, q12, q22;
    return m;
}

SingularQuadraticForm SingularQuadraticForm::from_matrix(const Eigen::Matrix2d& m) {
    return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1)};
}

bool SingularQuadraticForm::is_zero(double tol) const {
    return std::abs(q11) <= tol && std::abs(q12) <= tol && std::abs(q22) <= tol;
}

SingularQuadraticForm& SingularQuadraticForm::operator+=(const SingularQuadraticForm& o) {
    q11 += o.q11;
    q12 += o.q12;
    q22 += o.q22;
    return *this;
}

SingularQuadraticForm cone_singular_form(double theta0, double theta1) {
    // each straight edge through 0 at angle t contributes (i/8) e^{-2it}, signed by orientation
    return from_complex(kI / 8.0 * (std::exp(-2.0 * kI * theta1) - std::exp(-2.0 * kI * theta0)));
}

SingularQuadraticForm sector_singular_form(double alpha) {
    if (!(alpha > 0) || !(alpha < std::numbers::pi)) throw std::domain_error("sector half-angle must lie in (0, pi)");
    return cone_singular_form(-alpha, alpha);
}

SingularQuadraticForm triangle_singular_form(double c) {
    if (!(c > 0)) throw std::domain_error("triangle slope must be positive");
    return cone_singular_form(0.0, std::atan(c));
}

SingularQuadraticForm rotated_form(const SingularQuadraticForm& form, double beta) {
    Eigen::Matrix2d o = rotation_matrix(beta);
    return SingularQuadraticForm::from_matrix(o * form.matrix() * o.transpose());
}

SingularQuadraticForm union_singular_form(const SectorUnion& a) {
    SingularQuadraticForm q;
    for (const auto& s : a.sectors()) {
        if (s.full_disc()) continue;  // no corner at the origin
        q += rotated_form(sector_singular_form(s.alpha()), s.beta());
    }
    return q;
}

nlohmann::json ClassifierReport::to_json() const {
    return {{"bounded", bounded},
            {"conditions", {conditions[0], conditions[1], conditions[2]}},
            {"form", {{"q11", form.q11}, {"q12", form.q12}, {"q22", form.q22}}}};
}

ClassifierReport classify_bounded(const SectorUnion& a) {
    ClassifierReport r;
    r.form = union_singular_form(a);
    r.sector_count = a.size();
    const double s = std::sqrt(0.5);
    r.conditions = {r.form(Point2d(1, 0)), r.form(Point2d(0, 1)), r.form(Point2d(s, s))};
    r.bounded = std::abs(r.conditions[0]) <= 1e-10 && std::abs(r.conditions[1]) <= 1e-10 &&
                std::abs(r.conditions[2]) <= 1e-10;
    return r;
}

SingularQuadraticForm display_union_form(const SectorUnion& a) {
    SingularQuadraticForm q;
    for (const auto& s : a.sectors()) {
        double k = 1.0 / std::tan(s.alpha()), s2 = std::pow(std::sin(s.alpha()), 2), s4 = s2 * s2;
        double b = s.beta();
        double p = k * std::cos(b) + std::sin(b), r = -k * std::sin(b) + std::cos(b);
        q += SingularQuadraticForm{k * (s2 - 2 * s4 * p * p), -2 * k * s4 * p * r, k * (s2 - 2 * s4 * r * r)};
    }
    return q;
}

std::array<double, 3> display_conditions(const SectorUnion& a) {
    std::array<double, 3> c{};
    for (const auto& s : a.sectors()) {
        double al = s.alpha(), b = s.beta();
        double cot = 1.0 / std::tan(al), csc2 = 1.0 / std::pow(std::sin(al), 2), csc4 = csc2 * csc2;
        c[0] += cot * (1.0 / csc2 - 2 * std::pow(std::cos(b) * cot + std::sin(b), 2) / csc4);
        c[1] += cot * (1.0 / csc2 - 2 * std::pow(-std::sin(b) * cot + std::cos(b), 2) / csc4);
        c[2] += cot * (2.0 / csc2 -
                       2 * std::pow((std::cos(b) - std::sin(b)) * cot + std::sin(b) + std::cos(b), 2) / csc4);
    }
    return c;
}

SingularQuadraticForm appendix_display_form(double c) {
    double d = 1 + c * c;
    return {0.5 * c * (1 / d - 2 / (d * d)), 0.5 * c * (-2 * c / (d * d)), 0.5 * c * (1 / d - 2 * c * c / (d * d))};
}

double appendix_oracle(const Point2d& x, double c, const QuadratureConfig& cfg) {
    if (!(c > 0)) throw std::domain_error("triangle slope must be positive");
    return integrate([&](const Point2d& y) { return 0.5 * std::log((x - y).squaredNorm()); }, Triangle{c}, cfg, {x})
        .value;
}

double RemainderRegularity::max_abs_slope() const {
    return std::max({std::abs(slopes[0]), std::abs(slopes[1]), std::abs(slopes[2])});
}

RemainderRegularity appendix_remainder_check(double c, const SingularQuadraticForm& form, int k_min, int k_max,
                                             const QuadratureConfig& cfg) {
    if (k_max - k_min < 2) throw std::invalid_argument("need at least three radii");
    const double phi = 0.5 * std::atan(c);
    const Point2d dir(std::cos(phi), std::sin(phi));
    auto G = [&](const Point2d& x) { return appendix_oracle(x, c, cfg) - form(x) * std::log(x.squaredNorm()); };
    RemainderRegularity out;
    std::vector<double> t;
    std::array<std::vector<double>, 3> v;
    for (int k = k_min; k <= k_max; ++k) {
        double r = std::ldexp(1.0, -k), h = r / 16;
        Point2d x = r * dir, e1(h, 0), e2(0, h);
        double g0 = G(x);
        double h11 = (G(x + e1) - 2 * g0 + G(x - e1)) / (h * h);
        double h22 = (G(x + e2) - 2 * g0 + G(x - e2)) / (h * h);
        double h12 = (G(x + e1 + e2) - G(x + e1 - e2) - G(x - e1 + e2) + G(x - e1 - e2)) / (4 * h * h);
        out.radii.push_back(r);
        out.hessians.push_back({h11, h12, h22});
        t.push_back(std::log(1.0 / r));
        v[0].push_back(h11);
        v[1].push_back(h12);
        v[2].push_back(h22);
    }
    for (int i = 0; i < 3; ++i) out.slopes[i] = fit_slope(t, v[i]);
    return out;
}

}  // namespace symlap
