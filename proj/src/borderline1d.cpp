#include "symlap/borderline1d.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/FFT>

#include "symlap/errors.hpp"

namespace symlap {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double sup_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// mean oscillation of f[start, start+len) with a precomputed prefix sum
double mean_osc(const Eigen::VectorXd& f, const std::vector<double>& prefix, std::size_t start,
        std::size_t len) {
    const double mean = (prefix[start + len] - prefix[start]) / static_cast<double>(len);
    double acc = 0.0;
    for (std::size_t i = start; i < start + len; ++i) acc += std::abs(f(static_cast<Eigen::Index>(i)) - mean);
    return acc / static_cast<double>(len);
}

Grid1D reflected_combination(const Grid1D& f, double sign) {
    const auto n = static_cast<Eigen::Index>(f.size());
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) out(i) = 0.5 * (f.values(i) + sign * f.values(n - 1 - i));
    return {out, f.half_width};
}

}  // namespace

Grid1D::Grid1D(Eigen::VectorXd v, double hw) : half_width(hw), values(std::move(v)) {}

Grid1D Grid1D::sample(const std::function<double(double)>& f, std::size_t n, double hw) {
    Grid1D g(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)), hw);
    if (!is_pow2(n) || n < kMinSize) throw std::invalid_argument("grid size must be a power of 2, at least 256");
    for (std::size_t i = 0; i < n; ++i) g.values(static_cast<Eigen::Index>(i)) = f(g.node(i));
    g.validate();
    return g;
}

void Grid1D::validate() const {
    if (!is_pow2(size()) || size() < kMinSize)
        throw std::invalid_argument("grid size must be a power of 2, at least 256");
    if (!(half_width > 0.0) || !std::isfinite(half_width)) throw std::invalid_argument("bad grid half width");
    if (!values.allFinite()) throw std::invalid_argument("grid values must be finite");
}

Grid1D even_part(const Grid1D& f) { return reflected_combination(f, 1.0); }
Grid1D odd_part(const Grid1D& f) { return reflected_combination(f, -1.0); }

double asymmetry(const Grid1D& f, bool odd) {
    const auto n = static_cast<Eigen::Index>(f.size());
    const double s = odd ? -1.0 : 1.0;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n / 2; ++i) worst = std::max(worst, std::abs(f.values(i) - s * f.values(n - 1 - i)));
    return worst;
}

Grid1D derivative(const Grid1D& f) {
    f.validate();
    const auto n = static_cast<Eigen::Index>(f.size());
    const double h = f.spacing();
    const auto& v = f.values;
    Eigen::VectorXd d(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (i == 0 || i == n / 2)
            d(i) = (v(i + 1) - v(i)) / h;
        else if (i == n - 1 || i == n / 2 - 1)
            d(i) = (v(i) - v(i - 1)) / h;
        else
            d(i) = (v(i + 1) - v(i - 1)) / (2 * h);
    }
    return {d, f.half_width};
}

double bmo_norm(const Grid1D& f) {
    f.validate();
    const std::size_t n = f.size();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + f.values(static_cast<Eigen::Index>(i));

    double best = 0.0;
    std::size_t levels = 0;
    while ((std::size_t{1} << (levels + 1)) <= n) ++levels;  // log2 n
    for (std::size_t j = 0; j + 4 <= levels; ++j) {
        const std::size_t len = n >> j;
        const std::size_t step = len / 2;
        for (std::size_t start = 0; start + len <= n; start += step)
            best = std::max(best, mean_osc(f.values, prefix, start, len));
    }
    // centred at the origin, every width
    for (std::size_t k = 1; k <= n / 2; ++k) best = std::max(best, mean_osc(f.values, prefix, n / 2 - k, 2 * k));
    return best;
}

EvenRateCheck even_rate_bound_check(const Grid1D& phi, const Grid1D& phi_prime, double slack, double sym_tol) {
    phi.validate();
    phi_prime.validate();
    if (phi.size() != phi_prime.size()) throw std::invalid_argument("phi and phi' live on different grids");
    const double asym = asymmetry(phi, false);
    if (asym > sym_tol * (1.0 + sup_abs(phi.values)))
        throw HypothesisError("function is not even (asymmetry " + std::to_string(asym) + ")");

    const auto n = static_cast<Eigen::Index>(phi.size());
    const double phi0 = 0.5 * (phi.values(n / 2 - 1) + phi.values(n / 2));
    EvenRateCheck r;
    for (Eigen::Index i = 0; i < n; ++i)
        r.lhs = std::max(r.lhs, std::abs(phi.values(i) - phi0) / std::abs(phi.node(static_cast<std::size_t>(i))));
    r.rhs = bmo_norm(phi_prime);
    r.holds = r.lhs <= (1.0 + slack) * r.rhs + 1e-12;
    return r;
}

OddSupCheck odd_sup_bound_check(const Grid1D& Phi, double C, double slack, double sym_tol) {
    Phi.validate();
    const double asym = asymmetry(Phi, true);
    if (asym > sym_tol * (1.0 + sup_abs(Phi.values)))
        throw HypothesisError("function is not odd (asymmetry " + std::to_string(asym) + ")");

    const Grid1D d = derivative(Phi);
    OddSupCheck r;
    for (std::size_t i = 0; i < Phi.size(); ++i)
        r.t_dphi = std::max(r.t_dphi, std::abs(Phi.node(i) * d.values(static_cast<Eigen::Index>(i))));
    if (r.t_dphi > 1.1 * C)
        throw HypothesisError("|t Phi'| = " + std::to_string(r.t_dphi) + " exceeds declared C = " + std::to_string(C));
    r.bmo = bmo_norm(Phi);
    r.sup = sup_abs(Phi.values);
    r.bound = 2.0 * r.bmo + r.t_dphi;
    r.holds = r.sup <= (1.0 + slack) * r.bound + 1e-12;
    return r;
}

Grid1D hilbert_transform(const Grid1D& f) {
    f.validate();
    const std::size_t n = f.size();
    const std::size_t M = 2 * n;
    using cplx = std::complex<double>;
    std::vector<cplx> a(M, 0.0), k(M, 0.0), A, K, out;
    for (std::size_t i = 0; i < n; ++i) a[i] = f.values(static_cast<Eigen::Index>(i));
    // 2h / (pi (t_i - t_j)) for odd i - j; h cancels
    for (std::size_t d = 1; d < n; d += 2) {
        const double c = 2.0 / (std::numbers::pi * static_cast<double>(d));
        k[d] = c;
        k[M - d] = -c;
    }
    Eigen::FFT<double> fft;
    fft.fwd(A, a);
    fft.fwd(K, k);
    for (std::size_t i = 0; i < M; ++i) A[i] *= K[i];
    fft.inv(out, A);
    Eigen::VectorXd g(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) g(static_cast<Eigen::Index>(i)) = out[i].real();
    return {g, f.half_width};
}

Grid1D extend(const Grid1D& f, std::size_t factor) {
    if (!is_pow2(factor)) throw std::invalid_argument("extension factor must be a power of 2");
    const std::size_t n = f.size(), N = n * factor;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N));
    v.segment(static_cast<Eigen::Index>((N - n) / 2), static_cast<Eigen::Index>(n)) = f.values;
    return {v, f.half_width * static_cast<double>(factor)};
}

Grid1D restrict_to(const Grid1D& wide, std::size_t n, double hw) {
    const std::size_t N = wide.size();
    if (n == 0 || N % n != 0 || std::abs(wide.half_width * static_cast<double>(n) - hw * static_cast<double>(N)) >
            1e-12 * wide.half_width * static_cast<double>(n))
        throw std::invalid_argument("grids do not share a spacing");
    return {wide.values.segment(static_cast<Eigen::Index>((N - n) / 2), static_cast<Eigen::Index>(n)), hw};
}

FeffermanSteinSplit fefferman_stein_split(const Grid1D& Phi, std::size_t extension, double tol) {
    Phi.validate();
    FeffermanSteinSplit s;
    s.phi1 = odd_part(Phi);
    // H^2 = -1 only on the whole line, so the even part is transformed on a wider grid
    s.phi2 = hilbert_transform(extend(even_part(Phi), extension));
    s.phi2.values = -s.phi2.values;
    const Grid1D back = restrict_to(hilbert_transform(s.phi2), Phi.size(), Phi.half_width);

    const double scale = sup_abs(Phi.values);
    double err = 0.0;
    for (std::size_t i = 0; i < Phi.size(); ++i) {
        if (std::abs(Phi.node(i)) > 0.5 * Phi.half_width) continue;
        const auto e = static_cast<Eigen::Index>(i);
        err = std::max(err, std::abs(Phi.values(e) - s.phi1.values(e) - back.values(e)));
    }
    s.reconstruction_error = scale > 0 ? err / scale : 0.0;
    if (s.reconstruction_error > tol)
        throw ReconstructionError("reconstruction error " + std::to_string(s.reconstruction_error) +
                " above tolerance " + std::to_string(tol));
    return s;
}

std::vector<AdmissibleFunction> random_even_family(std::size_t count, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0), freq(0.5, 12.0), power(1.0, 3.0);
    std::vector<AdmissibleFunction> out;
    out.reserve(count);
    for (std::size_t m = 0; m < count; ++m) {
        const double c0 = coef(rng), b = coef(rng), c = coef(rng), d = coef(rng), e = coef(rng), p = power(rng);
        double a[3], w[3];
        for (int k = 0; k < 3; ++k) {
            a[k] = coef(rng);
            w[k] = freq(rng);
        }
        auto f = [=](double t) {
            const double at = std::abs(t);
            double v = c0 + b * at + c * t * t + d * std::pow(at, p) + e * t * t * std::log(at);
            for (int k = 0; k < 3; ++k) v += a[k] * std::cos(w[k] * t);
            return v;
        };
        // evenness of the samples must be exact, so mirror the left half
        Grid1D g = Grid1D::sample(f, n);
        g = even_part(g);
        out.push_back({g, 0.0});
    }
    return out;
}

std::vector<AdmissibleFunction> random_odd_family(std::size_t count, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0), slope(0.5, 50.0), clip(1.0, 6.0), freq(0.5, 8.0);
    std::vector<AdmissibleFunction> out;
    out.reserve(count);
    for (std::size_t m = 0; m < count; ++m) {
        const double a = coef(rng), s = slope(rng), b = coef(rng), L = clip(rng), c = coef(rng), w = freq(rng),
                     d = coef(rng), e = coef(rng), s2 = slope(rng);
        auto f = [=](double t) {
            const double at = std::abs(t), sg = t > 0 ? 1.0 : -1.0;
            return a * std::atan(s * t) + b * sg * std::min(std::abs(std::log(at)), L) + c * std::sin(w * t) +
                    d * t * std::log(at) + e * std::tanh(s2 * t);
        };
        // sup |t f'| of each piece: 1/2, 1, w, 1, 0.45
        const double C = 0.5 * std::abs(a) + std::abs(b) + w * std::abs(c) + std::abs(d) + 0.45 * std::abs(e);
        Grid1D g = odd_part(Grid1D::sample(f, n));
        out.push_back({g, C});
    }
    return out;
}

}  // namespace symlap
