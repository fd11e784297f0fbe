#include "symlap/potential.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "symlap/errors.hpp"

namespace symlap {

namespace {
constexpr double kPi = std::numbers::pi;

double source_weight(const Field2D& field, const Point2d& y) {
    // characteristic fields integrate exactly over their support patches
    return field.is_characteristic() ? 1.0 : field(y);
}

PotentialMethod resolve(const Field2D& field, PotentialMethod method, bool hessian) {
    if (method == PotentialMethod::Boundary && !field.is_characteristic())
        throw std::invalid_argument("boundary route needs a characteristic field");
    if (method != PotentialMethod::Auto) return method;
    return (hessian && field.is_characteristic()) ? PotentialMethod::Boundary : PotentialMethod::Area;
}

// sum over jump curves of int F(x, y(t), y'(t)) dt
template <int N, typename F>
VecN<N> boundary_sum(const Field2D& field, const Point2d& x, const QuadratureConfig& cfg, F&& integrand) {
    VecN<N> acc = VecN<N>::Zero();
    for (const auto& piece : field.boundary()) {
        double t0 = piece_t0(piece), t1 = piece_t1(piece);
        std::vector<double> cuts = {closest_parameter(piece, x)};
        auto r = integrate_line_vec<N>(
            [&](double t) { return integrand(piece_point(piece, t), piece_velocity(piece, t)); }, t0, t1, cfg,
            cuts);
        acc += r.value;
    }
    return acc;
}
}  // namespace

double eval_psi(const Field2D& field, const Point2d& x, KernelConvention conv, const QuadratureConfig& cfg) {
    Integrand<1> f = [&](const Point2d& y) {
        return VecN<1>(source_weight(field, y) * 0.5 * std::log((x - y).squaredNorm()));
    };
    auto r = integrate_vec<1>(f, field.support_regions(), cfg, {x});
    return convention_scale(conv) * r.value(0);
}

Point2d eval_grad_psi(const Field2D& field, const Point2d& x, KernelConvention conv, const QuadratureConfig& cfg,
                      PotentialMethod method) {
    Point2d g;
    if (resolve(field, method, false) == PotentialMethod::Boundary) {
        // d_j psi = - oint log|x - y| n_j ds, with n ds = (y2', -y1') dt
        g = boundary_sum<2>(field, x, cfg, [&](const Point2d& y, const Point2d& v) {
            double l = 0.5 * std::log((x - y).squaredNorm());
            return VecN<2>(-l * v(1), l * v(0));
        });
    } else {
        const int m = field.symmetry_order();
        std::vector<Region> regions = field.fundamental_regions();
        if (m > 1 && !regions.empty()) {
            Rotation rot(m);
            std::vector<Point2d> poles;
            for (int i = 1; i <= m; ++i) poles.push_back(rot.apply(x, -i));
            Integrand<2> f = [&](const Point2d& y) -> VecN<2> {
                return double(m) * source_weight(field, y) * m_fold_kernel(x, y, m);
            };
            g = integrate_vec<2>(f, regions, cfg, poles).value;
        } else {
            Integrand<2> f = [&](const Point2d& y) -> VecN<2> {
                return source_weight(field, y) * grad_kernel(x, y, KernelConvention::PaperRaw);
            };
            g = integrate_vec<2>(f, field.support_regions(), cfg, {x}).value;
        }
    }
    return convention_scale(conv) * g;
}

Eigen::Matrix2d eval_hessian_psi(const Field2D& field, const Point2d& x, KernelConvention conv,
                                 const QuadratureConfig& cfg, PotentialMethod method) {
    if (field.distance_to_jump(x) < 1e-12)
        throw DiscontinuityError("second derivatives are undefined on a jump curve of the source");
    VecN<3> h;
    if (resolve(field, method, true) == PotentialMethod::Boundary) {
        // d_i d_j psi = - oint (x_i - y_i)/|x - y|^2 n_j ds
        h = boundary_sum<3>(field, x, cfg, [&](const Point2d& y, const Point2d& v) {
            Point2d d = x - y;
            double r2 = d.squaredNorm();
            return VecN<3>(-d(0) * v(1) / r2, d(0) * v(0) / r2, d(1) * v(0) / r2);
        });
    } else {
        const double gx = field(x);
        auto kern = [](const Point2d& d) {
            double r2 = d.squaredNorm(), r4 = r2 * r2;
            return VecN<3>((r2 - 2 * d(0) * d(0)) / r4, -2 * d(0) * d(1) / r4, (r2 - 2 * d(1) * d(1)) / r4);
        };
        Integrand<3> f = [&](const Point2d& y) -> VecN<3> { return source_weight(field, y) * kern(x - y); };
        Integrand<3> lead = [&](const Point2d& d) -> VecN<3> { return gx * kern(d); };
        h = integrate_principal_value<3>(f, lead, field.support_regions(), x, cfg).value;
        h(0) += kPi * gx;
        h(2) += kPi * gx;
    }
    h *= convention_scale(conv);
    Eigen::Matrix2d out;
    out << h(0), h(1), h(1), h(2);
    return out;
}

std::string to_string(GrowthModel m) {
    switch (m) {
        case GrowthModel::Bounded: return "Bounded";
        case GrowthModel::Log: return "Log";
        case GrowthModel::RadiusTimesLog: return "RadiusTimesLog";
    }
    return "?";
}

std::string ProbeQuantity::name() const {
    switch (kind) {
        case Kind::GradOverR: return "grad-over-r";
        case Kind::GradDiffOverR: return "grad-diff-over-r";
        case Kind::HessEntry: return "hess" + std::to_string(i + 1) + std::to_string(j + 1);
    }
    return "?";
}

ProbeQuantity ProbeQuantity::parse(const std::string& s) {
    if (s == "grad-over-r") return grad_over_r();
    if (s == "grad-diff-over-r") return grad_diff_over_r();
    if (s.size() == 6 && s.rfind("hess", 0) == 0) {
        int i = s[4] - '1', j = s[5] - '1';
        if (i >= 0 && i < 2 && j >= 0 && j < 2) return hess(i, j);
    }
    throw ConfigError("unknown probe quantity '" + s + "'");
}

double BlowupReport::fitted(int k) const { return constant + slope * k * std::numbers::ln2; }

std::string BlowupReport::csv() const {
    std::string out = "k,radius,value,fitted\n";
    char buf[160];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", s.k, s.radius, s.value, fitted(s.k));
        out += buf;
    }
    return out;
}

nlohmann::json BlowupReport::summary() const {
    nlohmann::json j = {{"model", to_string(model)},
                        {"slope", slope},
                        {"r_squared", r_squared},
                        {"constant", constant},
                        {"quantity", quantity}};
    if (trusted_k_max) j["trusted_k_max"] = *trusted_k_max;
    return j;
}

BlowupReport fit_blowup(std::vector<ProbeSample> samples, ProbeQuantity quantity) {
    if (samples.size() < 6) throw std::invalid_argument("a blow-up fit needs at least 6 probe points");
    std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].radius < samples[i - 1].radius))
            throw std::invalid_argument("probe radii must be strictly decreasing");
    const std::size_t n = samples.size();
    Eigen::VectorXd t(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        t(i) = std::log(1.0 / samples[i].radius);
        v(i) = samples[i].value;
    }
    double spread = v.maxCoeff() - v.minCoeff();
    if (spread <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, v.cwiseAbs().maxCoeff()))
        throw FitDegenerateError("probe values are identical; growth law is undetermined");
    double tm = t.mean(), vm = v.mean();
    double stt = (t.array() - tm).square().sum(), stv = ((t.array() - tm) * (v.array() - vm)).sum();
    double svv = (v.array() - vm).square().sum();
    BlowupReport rep;
    rep.samples = std::move(samples);
    rep.quantity = quantity.name();
    rep.slope = stv / stt;
    rep.constant = vm - rep.slope * tm;
    rep.r_squared = svv > 0 ? std::clamp(stv * stv / (stt * svv), 0.0, 1.0) : 0.0;

    std::vector<double> mags(n);
    for (std::size_t i = 0; i < n; ++i) mags[i] = std::abs(v(i));
    std::nth_element(mags.begin(), mags.begin() + n / 2, mags.end());
    double median = mags[n / 2];
    if (n % 2 == 0) median = 0.5 * (median + *std::max_element(mags.begin(), mags.begin() + n / 2));
    if (std::abs(rep.slope) <= 0.05 * median + 1e-3)
        rep.model = GrowthModel::Bounded;
    else
        rep.model = quantity.kind == ProbeQuantity::Kind::GradDiffOverR ? GrowthModel::RadiusTimesLog
                                                                        : GrowthModel::Log;
    return rep;
}

namespace {
std::vector<ProbeSample> run_probe(int k_min, int k_max, const std::function<double(const Point2d&)>& value,
                                   const Point2d& direction) {
    if (k_max - k_min < 5) throw std::invalid_argument("probe needs at least 6 dyadic radii");
    if (!(direction.norm() > 0)) throw std::invalid_argument("probe direction must be non-zero");
    Point2d dir = direction.normalized();
    const int n = k_max - k_min + 1;
    std::vector<ProbeSample> out(n);
    parallel_for(n, [&](int i) {
        int k = k_min + i;
        double r = std::ldexp(1.0, -k);
        out[i] = ProbeSample{k, r, value(r * dir)};
    });
    return out;
}

double quantity_value(ProbeQuantity q, const Point2d& x, const std::function<Point2d(const Point2d&)>& grad,
                      const std::function<Eigen::Matrix2d(const Point2d&)>& hess, const Point2d& grad0) {
    switch (q.kind) {
        case ProbeQuantity::Kind::GradOverR: return grad(x).norm() / x.norm();
        case ProbeQuantity::Kind::GradDiffOverR: return (grad(x) - grad0).norm() / x.norm();
        case ProbeQuantity::Kind::HessEntry: return hess(x)(q.i, q.j);
    }
    return 0.0;
}
}  // namespace

BlowupReport blowup_probe(const Field2D& field, ProbeQuantity quantity, const Point2d& direction, int k_min,
                          int k_max, KernelConvention conv, const QuadratureConfig& cfg) {
    if (std::ldexp(1.0, -k_min) > field.support_radius())
        throw std::invalid_argument("probe radii must lie within the support");
    auto grad = [&](const Point2d& x) { return eval_grad_psi(field, x, conv, cfg); };
    auto hess = [&](const Point2d& x) { return eval_hessian_psi(field, x, conv, cfg); };
    Point2d g0 = Point2d::Zero();
    if (quantity.kind == ProbeQuantity::Kind::GradDiffOverR) g0 = grad(Point2d::Zero());
    auto samples = run_probe(k_min, k_max, [&](const Point2d& x) { return quantity_value(quantity, x, grad, hess, g0); },
                             direction);
    return fit_blowup(std::move(samples), quantity);
}

BlowupReport blowup_probe(const DerivativeOracle& oracle, ProbeQuantity quantity, const Point2d& direction,
                          int k_min, int k_max) {
    Point2d g0 = Point2d::Zero();
    if (quantity.kind == ProbeQuantity::Kind::GradDiffOverR) g0 = oracle.gradient(Point2d::Zero());
    auto samples = run_probe(
        k_min, k_max,
        [&](const Point2d& x) { return quantity_value(quantity, x, oracle.gradient, oracle.hessian, g0); }, direction);
    return fit_blowup(std::move(samples), quantity);
}

double gradient_growth_check(const Field2D& field, const std::vector<Point2d>& points) {
    if (field.kind() != Field2D::Kind::Analytic)
        throw std::invalid_argument("gradient growth check needs an analytic field");
    double sup = 0.0;
    for (const auto& x : points) {
        double r = x.norm();
        if (!(r > 0)) continue;
        double h = 1e-6 * r;
        Point2d e1(h, 0), e2(0, h);
        Point2d grad((field(x + e1) - field(x - e1)) / (2 * h), (field(x + e2) - field(x - e2)) / (2 * h));
        sup = std::max(sup, r * grad.norm());
    }
    return sup;
}

double gradient_growth_check(const Field2D& field, int samples) {
    if (samples < 1) throw std::invalid_argument("need at least one sample");
    // log-uniform radii reach every scale down to 1e-8 of the support
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double R = field.support_radius();
    std::vector<Point2d> pts;
    for (int i = 0; i < samples; ++i) {
        double r = R * std::exp(-uni(rng) * std::log(1e8));
        double th = 2 * kPi * uni(rng);
        pts.emplace_back(r * std::cos(th), r * std::sin(th));
    }
    return gradient_growth_check(field, pts);
}

int worker_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SYMLAP_THREADS")) {
        int cap = std::atoi(env);
        if (cap > 0) n = n > 0 ? std::min(n, cap) : cap;
    }
    return std::max(n, 1);
}

void parallel_for(int n, const std::function<void(int)>& body) {
    const int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace symlap
