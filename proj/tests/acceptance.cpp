// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "symlap/borderline1d.hpp"
#include "symlap/cli.hpp"
#include "symlap/counterexamples.hpp"
#include "symlap/geom2d.hpp"
#include "symlap/kernels.hpp"
#include "symlap/potential.hpp"
#include "symlap/quadrature.hpp"
#include "symlap/sectors.hpp"

using namespace symlap;

namespace {
constexpr double pi = std::numbers::pi;

// tolerances
constexpr double kIdentityTol = 1e-10;
constexpr double kIdentityCounter = 0.5;
constexpr double kKernelRel = 1e-10;
constexpr double kBundleRel = 1e-12;
constexpr double kPlateauSpread = 0.20;
constexpr double kLogSlopeFrac = 0.2;
constexpr double kLogR2 = 0.95;
constexpr double kRemainderSlope = 0.05;
constexpr double kCornerValueTol = 1e-6;
constexpr double kCornerSlopeFrac = 0.10;
constexpr double kCorner2dTol = 1e-5;
constexpr double kTraceTol = 1e-4;
constexpr double kLaplacianFdTol = 1e-5;
constexpr double kLemmaSlack = 0.1;
constexpr double kHilbertParity = 1e-6;
constexpr double kSplitTol = 0.05;
constexpr double kFlowerSlope = 0.05;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... a) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

struct LineFit {
    double slope, intercept, r2;
};
LineFit fit_line(const std::vector<double>& t, const std::vector<double>& v) {
    const double n = double(t.size());
    double st = 0, sv = 0;
    for (std::size_t i = 0; i < t.size(); ++i) st += t[i], sv += v[i];
    const double mt = st / n, mv = sv / n;
    double stt = 0, stv = 0, svv = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        stt += (t[i] - mt) * (t[i] - mt);
        stv += (t[i] - mt) * (v[i] - mv);
        svv += (v[i] - mv) * (v[i] - mv);
    }
    const double s = stv / stt;
    return {s, mv - s * mt, svv > 0 ? s * stv / svv : 1.0};
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Point2d random_in_disc(std::mt19937_64& rng, double R) {
    std::uniform_real_distribution<double> u(-R, R);
    for (;;) {
        Point2d p(u(rng), u(rng));
        if (p.norm() <= R) return p;
    }
}

Point2d unit(double th) { return {std::cos(th), std::sin(th)}; }

// ---------------------------------------------------------------------------

Outcome rotation_identity() {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> md(3, 8);
    double worst = 0;
    for (int n = 0; n < 10000; ++n) {
        const Point2d x = random_in_disc(rng, 10), y = random_in_disc(rng, 10);
        worst = std::max(worst, rotation_identity_residual(x, y, md(rng)) / (1 + x.norm() * y.squaredNorm()));
    }
    const double two = rotation_identity_defect(Point2d(1, 0), Point2d(1, 0), 2);
    return {worst <= kIdentityTol && two > kIdentityCounter,
            fmt("scaled residual %.2e (<= %.0e), m=2 defect %.3f (> %.1f)", worst, kIdentityTol, two,
                kIdentityCounter)};
}

Outcome kernel_equivalence() {
    std::mt19937_64 rng(2);
    const Rotation quarter(4);
    double rel = 0, first = 0, fifth = 0;
    int used = 0;
    while (used < 100000) {
        const Point2d x = random_in_disc(rng, 10), y = random_in_disc(rng, 10);
        double scale = 0, dmin = 1e300;
        for (int i = 0; i < 4; ++i) {
            const double d = (x - quarter.apply(y, i)).norm();
            dmin = std::min(dmin, d);
            scale += 1 / d;
        }
        if (dmin < 1e-3) continue;
        ++used;
        rel = std::max(rel, (four_fold_kernel_closed(x, y) - four_fold_kernel_sum(x, y)).norm() / scale);
        const auto b = four_fold_numerator_bundles(x, y);
        const double xn = x.norm(), yn = y.norm();
        first = std::max(first, b.first.norm() / (12 * xn * std::pow(yn, 6)));
        fifth = std::max(fifth, b.fifth.norm() / (12 * std::pow(xn, 5) * yn * yn));
    }
    return {rel <= kKernelRel && first <= kBundleRel && fifth <= kBundleRel,
            fmt("closed vs sum %.2e (<= %.0e), bundles %.2e / %.2e (<= %.0e)", rel, kKernelRel, first, fifth,
                kBundleRel)};
}

Outcome main_lemma_bound() {
    const QuadratureConfig cfg{1e-8, 1e-10, 24, 1e-6};
    std::vector<double> t;
    for (int k = 2; k <= 10; ++k) t.push_back(k * std::log(2.0));
    auto ratios = [&](int m) {
        std::vector<double> v(t.size());
        parallel_for(int(t.size()), [&](int i) {
            v[std::size_t(i)] = scaled_kernel_bound(std::exp(-t[std::size_t(i)]) * unit(0.3), m, cfg);
        });
        return v;
    };
    std::string d;
    bool ok = true;
    for (int m : {4, 3}) {
        const auto v = ratios(m);
        const double med = median(v);
        double spread = 0;
        for (double r : v) spread = std::max(spread, std::abs(r - med) / med);
        ok = ok && spread <= kPlateauSpread;
        d += fmt("m=%d spread %.3f (<= %.2f); ", m, spread, kPlateauSpread);
    }
    const auto v2 = ratios(2);
    const auto f = fit_line(t, v2);
    const double med = median(v2);
    const bool log_ok = f.slope >= kLogSlopeFrac * med && f.r2 >= kLogR2;
    d += fmt("m=2 slope %.3f = %.3f x median (>= %.1f), R2 %.4f (>= %.2f)", f.slope, f.slope / med, kLogSlopeFrac,
             f.r2, kLogR2);
    return {ok && log_ok, d};
}

Outcome appendix_remainder() {
    const QuadratureConfig cfg{1e-11, 1e-13, 24, 1e-6};
    double worst = 0;
    std::string d;
    for (double c : {0.5, 1.0, 2.0}) {
        const double s = appendix_remainder_check(c, triangle_singular_form(c), 4, 10, cfg).max_abs_slope();
        worst = std::max(worst, s);
        d += fmt("c=%g %.2e; ", c, s);
    }
    return {worst <= kRemainderSlope, d + fmt("max slope %.2e (<= %.2f)", worst, kRemainderSlope)};
}

Outcome classifier_agreement() {
    const std::vector<std::pair<std::string, SectorUnion>> suite = {
            {"A", SectorUnion({Sector(pi / 6, 0), Sector(pi / 6, pi / 2)})},
            {"B", SectorUnion({Sector(pi / 6, 0), Sector(pi / 6, pi)})},
            {"3-petal", SectorUnion({Sector(pi / 6, 0), Sector(pi / 6, 2 * pi / 3), Sector(pi / 6, 4 * pi / 3)})},
            {"half-disc", SectorUnion({Sector(pi / 2, 1.0)})},
            {"single", SectorUnion({Sector(pi / 6, 0)})},
            {"4-fold", SectorUnion({Sector(pi / 8, 0), Sector(pi / 8, pi / 2), Sector(pi / 8, pi), Sector(pi / 8, 3 * pi / 2)})},
            {"unequal", SectorUnion({Sector(pi / 6, 0), Sector(pi / 3, pi / 2)})},
            {"skew", SectorUnion({Sector(pi / 4, 0), Sector(pi / 8, 2.0)})},
    };
    int agree = 0, bounded = 0;
    std::string d;
    for (const auto& [name, u] : suite) {
        const bool cls = classify_bounded(u).bounded;
        const Field2D f = Field2D::sector_union(u, detect_symmetry_order(u));
        const Point2d dir = unit(probe_direction(u));
        const auto h11 = blowup_probe(f, ProbeQuantity::hess(0, 0), dir, 8, 18);
        const auto h12 = blowup_probe(f, ProbeQuantity::hess(0, 1), dir, 8, 18);
        const bool probe = h11.model == GrowthModel::Bounded && h12.model == GrowthModel::Bounded;
        agree += cls == probe;
        bounded += cls;
        d += fmt("%s %s/%s; ", name.c_str(), cls ? "B" : "U", probe ? "B" : "U");
    }
    return {agree == 8 && bounded > 0 && bounded < 8, fmt("%d/8 agree (classifier/probe) ", agree) + d};
}

Outcome square_corner() {
    const double v0 = square_reduced_dx1(0.0), want = -std::log(2.0) - pi / 2;
    std::vector<double> t, q;
    for (int k = 3; k <= 10; ++k) {
        const double x2 = std::ldexp(1.0, -k);
        t.push_back(std::log(1 / x2));
        q.push_back((square_reduced_dx1(x2) - v0) / x2);
    }
    const auto f = fit_line(t, q);
    const QuadratureConfig cfg{1e-11, 1e-13, 24, 1e-6};
    const double two_d = 2 * eval_grad_psi(square_example(), Point2d(0, 0.1), KernelConvention::PaperRaw, cfg)(0);
    const double diff2d = std::abs(two_d - square_reduced_dx1(0.1));
    const bool ok = std::abs(v0 - want) <= kCornerValueTol && std::abs(f.slope + 2) <= kCornerSlopeFrac * 2 &&
                    diff2d <= kCorner2dTol;
    return {ok, fmt("d1 psi(0,0) %.9f vs %.9f, quotient slope %.4f (-2 within %.0f%%), 2D vs reduced %.2e (<= %.0e)",
                    v0, want, f.slope, 100 * kCornerSlopeFrac, diff2d, kCorner2dTol)};
}

Outcome counterexample_laws() {
    const auto hx = harmonic_log_example(HarmonicChoice::XY);
    const auto h = blowup_probe(hx.oracle(), ProbeQuantity::grad_over_r(), unit(pi / 4), 2, 12);
    const FourierExample fe(256);
    const auto fr = blowup_probe(fe.as_example().oracle(), ProbeQuantity::hess(0, 1), unit(pi / 4), 1,
                                 fe.trusted_k_max());
    const double e = Prop46Example::epsilon(1);
    const double p = Prop46Example(1).jet(Point2d(e, 0)).hess.norm() * e;
    const bool ok = h.model == GrowthModel::Log && fr.r_squared >= kLogR2 && fr.model == GrowthModel::Log &&
                    p >= 0.1 && p <= 10;
    return {ok, fmt("harmonic-xy %s (slope %.3f); fourier dxy slope %.3f R2 %.4f (>= %.2f) over k 1..%d; "
                    "prop46 |D2f| eps %.3f (in [0.1, 10])",
                    to_string(h.model).c_str(), h.slope, fr.slope, fr.r_squared, kLogR2, fe.trusted_k_max(), p)};
}

Outcome analytic_consistency() {
    // area-route principal values bottom out near 1e-10 absolute
    const QuadratureConfig cfg{1e-9, 1e-9, 24, 1e-6};
    const std::vector<std::pair<std::string, Field2D>> fields = {
            {"disc", Field2D::sector_union(SectorUnion({Sector(pi, 0)}))},
            {"sectors", Field2D::sector_union(SectorUnion({Sector(pi / 6, 0), Sector(pi / 6, pi)}), 2)},
            {"triangle", Field2D::triangle(1.0)},
            {"square", square_example()},
            {"flower", flower_example()},
            {"bump", Field2D::analytic(
                             [](const Point2d& x) {
                                 const double s = 1 - x.squaredNorm();
                                 return s > 0 ? s * s : 0.0;
                             },
                             1.0, 1.0)},
            {"harmonic-xy", harmonic_log_example(HarmonicChoice::XY).field()},
    };
    std::mt19937_64 rng(8);
    std::vector<std::pair<std::size_t, Point2d>> pts;
    for (int n = 0; n < 100; ++n) {
        const std::size_t i = std::size_t(n) % fields.size();
        const Field2D& f = fields[i].second;
        for (;;) {
            const Point2d x = random_in_disc(rng, 1.1 * f.support_radius());
            if (x.norm() > 1e-3 && f.distance_to_jump(x) > 1e-3) {
                pts.push_back({i, x});
                break;
            }
        }
    }
    std::vector<double> err(pts.size());
    parallel_for(int(pts.size()), [&](int n) {
        const auto& [i, x] = pts[std::size_t(n)];
        const Field2D& f = fields[i].second;
        err[std::size_t(n)] = std::abs(eval_hessian_psi(f, x, KernelConvention::Greens, cfg).trace() - f(x));
    });
    const double worst_trace = *std::max_element(err.begin(), err.end());

    // Laplacians of the closed-form examples against a Richardson-extrapolated five-point stencil
    std::vector<std::pair<AnalyticExample, double>> ex = {
            {harmonic_log_example(HarmonicChoice::XY), 1.0},
            {harmonic_log_example(HarmonicChoice::X2minusY2), 1.0},
            {FourierExample(64).as_example(), 1.0},
            {Prop46Example(1).as_example(), Prop46Example::epsilon(1)},
    };
    double worst_fd = 0;
    for (const auto& [e, scale] : ex) {
        for (int n = 0; n < 25; ++n) {
            Point2d x = scale * random_in_disc(rng, 1.8);
            if (e.id == "prop46") x = Point2d(scale, 0) + random_in_disc(rng, 0.6 * scale);
            auto lap = [&](double h) {
                return (e.psi(x + Point2d(h, 0)) + e.psi(x - Point2d(h, 0)) + e.psi(x + Point2d(0, h)) +
                        e.psi(x - Point2d(0, h)) - 4 * e.psi(x)) / (h * h);
            };
            const double h = 2e-3 * scale;
            const double fd = (4 * lap(h / 2) - lap(h)) / 3;
            const double want = e.laplacian(x);
            worst_fd = std::max(worst_fd, std::abs(fd - want) / std::max(1.0, std::abs(want)));
        }
    }
    return {worst_trace <= kTraceTol && worst_fd <= kLaplacianFdTol,
            fmt("trace - g %.2e (<= %.0e) at 100 points over 7 fields, Laplacian vs FD %.2e (<= %.0e)", worst_trace,
                kTraceTol, worst_fd, kLaplacianFdTol)};
}

Outcome one_dimensional() {
    const std::size_t n = Grid1D::kDefaultSize;
    int even_fail = 0, odd_fail = 0;
    double even_ratio = 0, odd_ratio = 0;
    for (const auto& f : random_even_family(100, n, 9)) {
        const auto c = even_rate_bound_check(f.values, derivative(f.values), kLemmaSlack);
        even_fail += !c.holds;
        even_ratio = std::max(even_ratio, c.lhs / c.rhs);
    }
    for (const auto& f : random_odd_family(100, n, 10)) {
        const auto c = odd_sup_bound_check(f.values, f.C, kLemmaSlack);
        odd_fail += !c.holds;
        odd_ratio = std::max(odd_ratio, c.sup / c.bound);
    }
    double parity = 0;
    for (const auto& f : random_odd_family(5, n, 11)) {
        const auto h = hilbert_transform(f.values);
        parity = std::max(parity, asymmetry(h, false) / std::max(1.0, h.values.cwiseAbs().maxCoeff()));
    }
    double split = 0;
    const std::vector<std::function<double(double)>> fs = {
            [](double t) { return std::atan(6 * t) + std::cos(2 * t); },
            [](double t) { return (t > 0 ? 1.0 : -1.0) + 1 / (1 + 9 * t * t); },
            [](double t) { return std::tanh(20 * t) - 0.5 * std::exp(-4 * t * t) + 0.2 * std::sin(7 * t); },
    };
    for (const auto& g : fs)
        split = std::max(split, fefferman_stein_split(Grid1D::sample(g, n), 32, 1.0).reconstruction_error);
    const bool ok = even_fail == 0 && odd_fail == 0 && parity <= kHilbertParity && split <= kSplitTol;
    return {ok, fmt("even lemma %d/100 fail (max ratio %.3f), odd lemma %d/100 fail (max ratio %.3f), "
                    "H parity %.1e (<= %.0e), split error %.4f (<= %.2f)",
                    even_fail, even_ratio, odd_fail, odd_ratio, parity, kHilbertParity, split, kSplitTol)};
}

Outcome flower() {
    const auto r = blowup_probe(flower_example(), ProbeQuantity::hess(0, 1), unit(pi / 6), 2, 9);
    return {r.model == GrowthModel::Bounded && std::abs(r.slope) <= kFlowerSlope,
            fmt("%s, slope %.4f (|slope| <= %.2f), R2 %.3f", to_string(r.model).c_str(), r.slope, kFlowerSlope,
                r.r_squared)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget;  // seconds
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all = {
            {1, "rotation identity", 1, rotation_identity},
            {2, "kernel equivalence", 10, kernel_equivalence},
            {3, "main-lemma kernel bound", 300, main_lemma_bound},
            {4, "triangle remainder", 300, appendix_remainder},
            {5, "classifier vs probe", 900, classifier_agreement},
            {6, "square corner", 120, square_corner},
            {7, "counterexample laws", 180, counterexample_laws},
            {8, "analytic consistency", 300, analytic_consistency},
            {9, "1D suite", 60, one_dimensional},
            {10, "flower", 300, flower},
    };
    int failed = 0;
    for (const auto& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = o.pass && secs <= c.budget;
        failed += !pass;
        std::printf("%s %2d %-24s %s [%.1f s / %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                    secs, c.budget);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", int(all.size()) - failed, all.size());
    return failed ? 1 : 0;
}
