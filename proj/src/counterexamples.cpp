#include "symlap/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace symlap {

namespace {
constexpr double kPi = std::numbers::pi;

// scan a polar grid for sup |f|, padded so random checks never exceed it
double sampled_sup(const std::function<double(const Point2d&)>& f, const Point2d& c, double R) {
    double s = 0;
    for (int i = 1; i <= 200; ++i)
        for (int j = 0; j < 256; ++j) {
            double r = R * i / 200.0, th = 2 * kPi * (j + 0.5) / 256;
            s = std::max(s, std::abs(f(c + r * Point2d(std::cos(th), std::sin(th)))));
        }
    return 2.0 * s + 1e-12;
}
}  // namespace

void CutoffSpec::validate() const {
    if (!(inner_radius > 0) || !(outer_radius > inner_radius))
        throw std::invalid_argument("cutoff needs 0 < inner < outer");
}

double CutoffSpec::d1(double r) const {
    if (r <= inner_radius || r >= outer_radius) return 0.0;
    double w = outer_radius - inner_radius, t = (r - inner_radius) / w;
    return -30.0 * t * t * (1 - t) * (1 - t) / w;
}

double CutoffSpec::d2(double r) const {
    if (r <= inner_radius || r >= outer_radius) return 0.0;
    double w = outer_radius - inner_radius, t = (r - inner_radius) / w;
    return -60.0 * t * (1 - t) * (1 - 2 * t) / (w * w);
}

DerivativeOracle AnalyticExample::oracle() const {
    auto j = jet;
    return {[j](const Point2d& x) { return j(x).grad; }, [j](const Point2d& x) { return j(x).hess; }};
}

Field2D AnalyticExample::field() const {
    if (!(support_radius > 0)) throw std::invalid_argument("example '" + id + "' is not compactly supported");
    auto j = jet;
    return Field2D::analytic([j](const Point2d& x) { return j(x).hess.trace(); }, support_radius, sup_norm,
                             symmetry_order);
}

AnalyticExample harmonic_log_example(HarmonicChoice choice, const CutoffSpec& cutoff) {
    cutoff.validate();
    AnalyticExample ex;
    ex.id = choice == HarmonicChoice::XY ? "harmonic-xy" : "harmonic-x2y2";
    ex.support_radius = cutoff.outer_radius;
    ex.jet = [choice, cutoff](const Point2d& x) {
        return second_order_jet(
            [&](const AD2& x1, const AD2& x2) {
                using std::log;
                using std::sqrt;
                AD2 p = choice == HarmonicChoice::XY ? AD2(x1 * x2) : AD2(x1 * x1 - x2 * x2);
                AD2 r2 = x1 * x1 + x2 * x2;
                return AD2(p * log(r2) * cutoff(AD2(sqrt(r2))));
            },
            x);
    };
    auto j = ex.jet;
    ex.sup_norm = sampled_sup([j](const Point2d& x) { return j(x).hess.trace(); }, Point2d(0, 0),
                              cutoff.outer_radius);
    return ex;
}

double harmonic_inner_laplacian(HarmonicChoice choice, const Point2d& x) {
    Point2d gp = choice == HarmonicChoice::XY ? Point2d(x(1), x(0)) : Point2d(2 * x(0), -2 * x(1));
    return gp.dot(4 * x / x.squaredNorm());
}

FourierExample::FourierExample(int N) : N_(N) {
    if (N < 8) throw std::invalid_argument("fourier example needs N >= 8");
    for (int n = 1; n <= N; n += 2) modes_.push_back(n);
}

Jet2 FourierExample::jet(const Point2d& x) const {
    const std::size_t M = modes_.size();
    std::vector<double> sx(M), cx(M), sy(M), cy(M);
    for (std::size_t i = 0; i < M; ++i) {
        sx[i] = std::sin(modes_[i] * x(0));
        cx[i] = std::cos(modes_[i] * x(0));
        sy[i] = std::sin(modes_[i] * x(1));
        cy[i] = std::cos(modes_[i] * x(1));
    }
    const double A = -16.0 / (kPi * kPi);
    Jet2 j;
    for (std::size_t a = 0; a < M; ++a)
        for (std::size_t b = 0; b < M; ++b) {
            double n = modes_[a], m = modes_[b], d = n * n + m * m;
            j.value += sx[a] * sy[b] / (n * m * d);
            j.grad(0) += cx[a] * sy[b] / (m * d);
            j.grad(1) += sx[a] * cy[b] / (n * d);
            j.hess(0, 0) -= n * sx[a] * sy[b] / (m * d);
            j.hess(0, 1) += cx[a] * cy[b] / d;
            j.hess(1, 1) -= m * sx[a] * sy[b] / (n * d);
        }
    j.value *= A;
    j.grad *= A;
    j.hess *= A;
    j.hess(1, 0) = j.hess(0, 1);
    return j;
}

double FourierExample::psi(const Point2d& x) const { return jet(x).value; }
double FourierExample::laplacian(const Point2d& x) const { return jet(x).hess.trace(); }
double FourierExample::dxy(const Point2d& x) const { return jet(x).hess(0, 1); }

int FourierExample::trusted_k_max() const { return static_cast<int>(std::floor(std::log2(double(N_)))) - 2; }

AnalyticExample FourierExample::as_example() const {
    AnalyticExample ex;
    ex.id = "fourier";
    FourierExample self = *this;
    ex.jet = [self](const Point2d& x) { return self.jet(x); };
    ex.sup_norm = 2.0;
    return ex;
}

Field2D square_example() { return Field2D::rects({Rect{Point2d(0, 0), Point2d(1, 1)}}); }

Field2D square_mirrored_example() {
    return Field2D::rects({Rect{Point2d(0, 0), Point2d(1, 1)}, Rect{Point2d(-1, -1), Point2d(0, 0)}}, 2);
}

double square_reduced_dx1(double x2) {
    auto F = [](double t) {
        double a = t == 0.0 ? 0.0 : t * std::log(t * t);
        return a - t * std::log1p(t * t) - 2 * std::atan(t);
    };
    return F(1 - x2) - F(-x2);
}

Prop46Example::Prop46Example(int N) : N_(N) {
    if (N < 1 || N > 6) throw std::domain_error("prop46 example needs 1 <= N <= 6");
}

double Prop46Example::epsilon(int n) { return std::pow(100.0, -n); }

namespace {
// eps u v L(u, v) phi, with u = x1 - eps, v = x2, L = log(u^2 + v^2 + e^{-1/eps^2})
Jet2 tilde_jet(double eps, const Point2d& x) {
    const double u = x(0) - eps, v = x(1);
    const double rho2 = u * u + v * v, rho = std::sqrt(rho2);
    const CutoffSpec cut{eps / 10, eps / 2};
    Jet2 j;
    if (rho >= cut.outer_radius) return j;
    const double logdelta = -1.0 / (eps * eps);
    double L;
    if (rho2 == 0.0) {
        L = logdelta;
    } else {
        double a = std::log(rho2), hi = std::max(a, logdelta), lo = std::min(a, logdelta);
        L = hi + std::log1p(std::exp(lo - hi));
    }
    const double s = std::exp(L);
    // bounded ratios; 0/0 at the centre resolves to 0
    const double A = s > 0 ? u * u / s : 0.0, B = s > 0 ? v * v / s : 0.0, C = s > 0 ? u * v / s : 0.0;
    const double h = u * v * L;
    const Point2d dh(v * (L + 2 * A), u * (L + 2 * B));
    Eigen::Matrix2d d2h;
    d2h << 6 * C - 4 * A * C, L + 2 * A + 2 * B - 4 * A * B, L + 2 * A + 2 * B - 4 * A * B, 6 * C - 4 * B * C;

    double phi = cut(rho), p1 = cut.d1(rho), p2 = cut.d2(rho);
    Point2d dphi = Point2d::Zero();
    Eigen::Matrix2d d2phi = Eigen::Matrix2d::Zero();
    if (rho > 0 && (p1 != 0 || p2 != 0)) {
        Point2d e(u / rho, v / rho);
        dphi = p1 * e;
        d2phi = p2 * e * e.transpose() + (p1 / rho) * (Eigen::Matrix2d::Identity() - e * e.transpose());
    }
    j.value = eps * h * phi;
    j.grad = eps * (dh * phi + h * dphi);
    j.hess = eps * (d2h * phi + dh * dphi.transpose() + dphi * dh.transpose() + h * d2phi);
    return j;
}
}  // namespace

Jet2 Prop46Example::bump_jet(double eps, const Point2d& x) {
    // f(x) = sum_k ft(R^k x), R the quarter turn
    Eigen::Matrix2d R;
    R << 0, -1, 1, 0;
    Jet2 out;
    Eigen::Matrix2d Rk = Eigen::Matrix2d::Identity();
    for (int k = 0; k < 4; ++k) {
        Jet2 t = tilde_jet(eps, Rk * x);
        out.value += t.value;
        out.grad += Rk.transpose() * t.grad;
        out.hess += Rk.transpose() * t.hess * Rk;
        Rk = R * Rk;
    }
    return out;
}

Jet2 Prop46Example::jet(const Point2d& x) const {
    Jet2 out;
    for (int n = 1; n <= N_; ++n) {
        Jet2 b = bump_jet(epsilon(n), x);
        out.value += b.value;
        out.grad += b.grad;
        out.hess += b.hess;
    }
    return out;
}

AnalyticExample Prop46Example::as_example() const {
    AnalyticExample ex;
    ex.id = "prop46";
    ex.symmetry_order = 4;
    Prop46Example self = *this;
    ex.jet = [self](const Point2d& x) { return self.jet(x); };
    ex.support_radius = 1.5 * epsilon(1);
    double sup = 0;
    for (int n = 1; n <= N_; ++n) {
        double e = epsilon(n);
        sup = std::max(sup, sampled_sup([&](const Point2d& y) { return bump_jet(e, y).hess.trace(); },
                                        Point2d(e, 0), e / 2));
    }
    ex.sup_norm = sup;
    return ex;
}

Field2D flower_example() {
    auto rho = [](double t) { return std::max(0.0, std::sin(3 * t)); };
    auto drho = [](double t) { return 3 * std::cos(3 * t); };
    std::vector<PolarGraph> petals;
    for (int k = 0; k < 3; ++k) petals.push_back(PolarGraph{rho, drho, 2 * kPi * k / 3, 2 * kPi * k / 3 + kPi / 3});
    return Field2D::petals(std::move(petals), 3);
}

}  // namespace symlap
