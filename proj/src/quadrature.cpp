#include "symlap/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <queue>

#include <Eigen/LU>

#include "symlap/errors.hpp"
#include "symlap/kernels.hpp"

namespace symlap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kParamTol = 1e-12;
constexpr long kMaxCells = 300000;
// Below this distance (relative to |x|) from a principal-value point, f(y) has lost too many
// digits to x - y; the regular part is extrapolated linearly from outside instead.
constexpr double kNoiseRadius = 4e-6;

// QUADPACK qk15 / qk21 abscissae and weights on [-1, 1], positive half
constexpr std::array<double, 8> kXgk15 = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk15 = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg7 = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr std::array<double, 11> kXgk21 = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720, 0.0};
constexpr std::array<double, 11> kWgk21 = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208272993275, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg10 = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

// Full rule on [0, 1]: nodes, Kronrod weights, Gauss weights (0 where not a Gauss node)
struct Rule {
    std::vector<double> x, wk, wg;
};

template <std::size_t H, std::size_t G>
Rule make_rule(const std::array<double, H>& xgk, const std::array<double, H>& wgk,
               const std::array<double, G>& wg) {
    Rule r;
    const std::size_t n = 2 * H - 1;
    r.x.resize(n);
    r.wk.resize(n);
    r.wg.assign(n, 0.0);
    for (std::size_t i = 0; i < H; ++i) {
        double gw = (i % 2 == 1) ? wg[i / 2] : 0.0;
        r.x[i] = 0.5 * (1.0 - xgk[i]);
        r.x[n - 1 - i] = 0.5 * (1.0 + xgk[i]);
        r.wk[i] = r.wk[n - 1 - i] = 0.5 * wgk[i];
        r.wg[i] = r.wg[n - 1 - i] = 0.5 * gw;
    }
    return r;
}

const Rule& rule15() {
    static const Rule r = make_rule(kXgk15, kWgk15, kWg7);
    return r;
}
const Rule& rule21() {
    static const Rule r = [] {
        Rule q = make_rule(kXgk21, kWgk21, kWg10);
        q.wg[10] = 0.0;  // 10-point Gauss has no centre node
        return q;
    }();
    return r;
}

template <int N>
VecN<N> pairwise_sum(const std::vector<VecN<N>>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo == 0) return VecN<N>::Zero();
    if (hi - lo == 1) return v[lo];
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum<N>(v, lo, mid) + pairwise_sum<N>(v, mid, hi);
}

// ---------------------------------------------------------------- patches

// A smooth map from the parameter square [0,1]^2 onto part of the plane.
struct Patch {
    enum Kind { Affine, Polar, Tri, Graph } kind = Affine;
    Point2d o{0, 0}, e1{1, 0}, e2{0, 1};  // affine
    Point2d center{0, 0};                 // polar
    double r0 = 0, r1 = 1, th0 = 0, th1 = 0;
    double c = 1;  // triangle slope
    std::function<double(double)> rho, drho;

    double dtheta() const { return th1 - th0; }

    bool degenerate() const { return kind == Tri || kind == Graph || (kind == Polar && r0 == 0.0); }
    Point2d apex() const { return kind == Polar ? center : Point2d(0, 0); }

    Point2d map(double u, double v) const {
        switch (kind) {
            case Affine: return o + u * e1 + v * e2;
            case Polar: {
                double r = r0 + u * (r1 - r0), th = th0 + v * dtheta();
                return center + r * Point2d(std::cos(th), std::sin(th));
            }
            case Tri: return Point2d(u, c * u * v);
            case Graph: {
                double th = th0 + v * dtheta();
                return u * rho(th) * Point2d(std::cos(th), std::sin(th));
            }
        }
        return {};
    }

    Eigen::Matrix2d jac(double u, double v) const {
        Eigen::Matrix2d j;
        switch (kind) {
            case Affine: j.col(0) = e1; j.col(1) = e2; break;
            case Polar: {
                double r = r0 + u * (r1 - r0), th = th0 + v * dtheta();
                Point2d e(std::cos(th), std::sin(th));
                j.col(0) = (r1 - r0) * e;
                j.col(1) = r * dtheta() * perp(e);
                break;
            }
            case Tri: j << 1.0, 0.0, c * v, c * u; break;
            case Graph: {
                double th = th0 + v * dtheta();
                Point2d e(std::cos(th), std::sin(th));
                double p = rho(th);
                j.col(0) = p * e;
                j.col(1) = u * dtheta() * (drho(th) * e + p * perp(e));
                break;
            }
        }
        return j;
    }

    // d map / du at u = 0 and det(jac)/u, for degenerate patches
    Point2d apex_direction(double v) const {
        switch (kind) {
            case Polar: {
                double th = th0 + v * dtheta();
                return r1 * Point2d(std::cos(th), std::sin(th));
            }
            case Tri: return Point2d(1.0, c * v);
            case Graph: {
                double th = th0 + v * dtheta();
                return rho(th) * Point2d(std::cos(th), std::sin(th));
            }
            default: return Point2d::Zero();
        }
    }
    double apex_jacobian(double v) const {
        switch (kind) {
            case Polar: return r1 * r1 * std::abs(dtheta());
            case Tri: return c;
            case Graph: {
                double p = rho(th0 + v * dtheta());
                return p * p * std::abs(dtheta());
            }
            default: return 0.0;
        }
    }

    double scale() const {
        switch (kind) {
            case Affine: return std::max((e1 + e2).norm(), (e1 - e2).norm());
            case Polar: return r1;
            case Tri: return std::sqrt(1 + c * c);
            case Graph: {
                double m = 0;
                for (int i = 0; i <= 64; ++i) m = std::max(m, std::abs(rho(th0 + dtheta() * i / 64.0)));
                return m > 0 ? m : 1.0;
            }
        }
        return 1.0;
    }

    // all parameter preimages of y inside the (slightly enlarged) unit square
    std::vector<Point2d> preimages(const Point2d& y) const {
        std::vector<Point2d> out;
        auto keep = [&](double u, double v) {
            if (u < -kParamTol || u > 1 + kParamTol || v < -kParamTol || v > 1 + kParamTol) return;
            auto snap = [](double t) { return std::abs(t) < kParamTol ? 0.0 : std::abs(t - 1) < kParamTol ? 1.0 : t; };
            out.emplace_back(std::clamp(snap(u), 0.0, 1.0), std::clamp(snap(v), 0.0, 1.0));
        };
        auto angular = [&](double th, auto&& radial) {
            for (int k = -2; k <= 2; ++k) {
                double v = (th + 2 * kPi * k - th0) / dtheta();
                if (v >= -kParamTol && v <= 1 + kParamTol) keep(radial(th + 2 * kPi * k), v);
            }
        };
        switch (kind) {
            case Affine: {
                Eigen::Matrix2d j;
                j.col(0) = e1;
                j.col(1) = e2;
                Point2d p = j.inverse() * (y - o);
                keep(p(0), p(1));
                break;
            }
            case Polar: {
                Point2d d = y - center;
                double r = d.norm();
                angular(std::atan2(d(1), d(0)), [&](double) { return (r - r0) / (r1 - r0); });
                break;
            }
            case Tri:
                if (y(0) > 0) keep(y(0), y(1) / (c * y(0)));
                break;
            case Graph: {
                double r = y.norm();
                angular(std::atan2(y(1), y(0)), [&](double th) {
                    double p = rho(th);
                    return p > 0 ? r / p : 2.0;
                });
                break;
            }
        }
        return out;
    }
};

Patch polar_patch(Point2d center, double r0, double r1, double th0, double th1) {
    Patch p;
    p.kind = Patch::Polar;
    p.center = center;
    p.r0 = r0;
    p.r1 = r1;
    p.th0 = th0;
    p.th1 = th1;
    return p;
}

Patch to_patch(const Region& region) {
    return std::visit(
        [](const auto& r) -> Patch {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Disc>) {
                if (!(r.radius > 0)) throw std::invalid_argument("disc radius must be positive");
                return polar_patch(r.center, 0.0, r.radius, 0.0, 2 * kPi);
            } else if constexpr (std::is_same_v<T, SectorRegion>) {
                return polar_patch(Point2d(0, 0), 0.0, 1.0, r.sector.theta_min(), r.sector.theta_max());
            } else if constexpr (std::is_same_v<T, Triangle>) {
                if (!(r.c > 0)) throw std::invalid_argument("triangle slope must be positive");
                Patch p;
                p.kind = Patch::Tri;
                p.c = r.c;
                return p;
            } else if constexpr (std::is_same_v<T, Rect>) {
                if (!(r.hi(0) > r.lo(0) && r.hi(1) > r.lo(1)))
                    throw std::invalid_argument("rectangle must have positive area");
                Patch p;
                p.kind = Patch::Affine;
                p.o = r.lo;
                p.e1 = Point2d(r.hi(0) - r.lo(0), 0);
                p.e2 = Point2d(0, r.hi(1) - r.lo(1));
                return p;
            } else if constexpr (std::is_same_v<T, PolarPatch>) {
                if (!(r.r1 > r.r0 && r.r0 >= 0 && r.theta1 > r.theta0))
                    throw std::invalid_argument("polar patch must have positive area");
                return polar_patch(r.center, r.r0, r.r1, r.theta0, r.theta1);
            } else {
                if (!r.rho || !r.drho || !(r.theta1 > r.theta0))
                    throw std::invalid_argument("polar graph needs rho, drho and theta1 > theta0");
                Patch p;
                p.kind = Patch::Graph;
                p.rho = r.rho;
                p.drho = r.drho;
                p.th0 = r.theta0;
                p.th1 = r.theta1;
                return p;
            }
        },
        region);
}

// ---------------------------------------------------------------- roots and cells

// A root domain is the unit square in local (s, t) coordinates mapped into a patch's
// parameter square, either affinely (Plain), as a Duffy triangle collapsing the s = 0
// edge onto a pole (Duffy), or as a slab whose s = 0 edge is the degenerate patch edge
// sitting on a pole (Apex).
struct Root {
    enum Kind { Plain, Duffy, Apex } kind = Plain;
    int patch = 0;
    double u0 = 0, u1 = 1, v0 = 0, v1 = 1;  // Plain and Apex
    Point2d a, p, q;                        // Duffy: apex, edge p -> q
    bool subtract = false;                  // principal-value subtraction active
};

struct Cell {
    int root;
    double s0, s1, t0, t1;
    int depth;
    long id;
};

template <int N>
class Engine {
public:
    Engine(const Integrand<N>& f, const Integrand<N>* leading, Point2d pv_point, const QuadratureConfig& cfg)
        : f_(f), leading_(leading), pv_(pv_point), cfg_(cfg) {}

    void add_patch(Patch patch, const std::vector<Point2d>& poles) {
        int idx = static_cast<int>(patches_.size());
        patches_.push_back(std::move(patch));
        build_roots(idx, poles);
    }

    QuadResult<N> run() {
        struct Item {
            double err;
            long id;
            std::size_t slot;
            bool operator<(const Item& o) const { return err < o.err || (err == o.err && id > o.id); }
        };
        std::priority_queue<Item> heap;
        std::vector<VecN<N>> values;
        std::vector<double> errors;
        std::vector<Cell> cells;
        std::vector<char> alive;
        VecN<N> total = VecN<N>::Zero();
        double total_err = 0;
        long next_id = 0;

        auto push = [&](const Cell& c) {
            VecN<N> val;
            double err;
            evaluate(c, val, err);
            cells.push_back(c);
            values.push_back(val);
            errors.push_back(err);
            alive.push_back(1);
            total += val;
            total_err += err;
            heap.push({err, c.id, cells.size() - 1});
        };
        for (std::size_t r = 0; r < roots_.size(); ++r) push(Cell{static_cast<int>(r), 0, 1, 0, 1, 0, next_id++});

        auto tolerance = [&] { return std::max(cfg_.abs_tol, cfg_.rel_tol * total.cwiseAbs().maxCoeff()); };
        long live = static_cast<long>(cells.size());
        while (total_err > tolerance() && !heap.empty()) {
            Item it = heap.top();
            heap.pop();
            const Cell c = cells[it.slot];
            if (c.depth >= cfg_.max_subdivisions || image_diameter(c) < cfg_.singular_split_radius) continue;
            if (live + 3 > kMaxCells) break;
            alive[it.slot] = 0;
            total -= values[it.slot];
            total_err -= errors[it.slot];
            double sm = 0.5 * (c.s0 + c.s1), tm = 0.5 * (c.t0 + c.t1);
            push(Cell{c.root, c.s0, sm, c.t0, tm, c.depth + 1, next_id++});
            push(Cell{c.root, sm, c.s1, c.t0, tm, c.depth + 1, next_id++});
            push(Cell{c.root, c.s0, sm, tm, c.t1, c.depth + 1, next_id++});
            push(Cell{c.root, sm, c.s1, tm, c.t1, c.depth + 1, next_id++});
            live += 3;
        }

        // deterministic re-summation over live cells in creation order
        std::vector<VecN<N>> leaf;
        double err = 0;
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (alive[i]) {
                leaf.push_back(values[i]);
                err += errors[i];
            }
        QuadResult<N> out;
        out.value = pairwise_sum<N>(leaf, 0, leaf.size());
        out.error = err;
        out.cells = static_cast<long>(leaf.size());
        if (!out.value.allFinite())
            throw QuadratureError("integrand produced a non-finite value", 0.0, err);
        double tol = std::max(cfg_.abs_tol, cfg_.rel_tol * out.value.cwiseAbs().maxCoeff());
        if (err > tol)
            throw QuadratureError("adaptive quadrature did not reach tolerance (error " + std::to_string(err) +
                                      ", tolerance " + std::to_string(tol) + ")",
                                  out.value(0), err);
        return out;
    }

private:
    const Integrand<N>& f_;
    const Integrand<N>* leading_;
    Point2d pv_;
    QuadratureConfig cfg_;
    std::vector<Patch> patches_;
    std::vector<Root> roots_;

    // local (s, t) -> patch parameter point, with d(param)/d(s,t) determinant
    Point2d param(const Root& r, double s, double t, double& jfac) const {
        switch (r.kind) {
            case Root::Plain:
                jfac = (r.u1 - r.u0) * (r.v1 - r.v0);
                return Point2d(r.u0 + s * (r.u1 - r.u0), r.v0 + t * (r.v1 - r.v0));
            case Root::Apex:
                jfac = r.u1 * (r.v1 - r.v0);
                return Point2d(s * r.u1, r.v0 + t * (r.v1 - r.v0));
            case Root::Duffy: {
                Point2d pa = r.p - r.a, qp = r.q - r.p;
                jfac = s * std::abs(pa(0) * qp(1) - pa(1) * qp(0));
                return r.a + s * (pa + t * qp);
            }
        }
        return {};
    }

    // y(s,t) - pole ~ s w(t), Jacobian ~ s c(t), as s -> 0
    void leading_geometry(const Root& r, double t, Point2d& w, double& c) const {
        const Patch& P = patches_[r.patch];
        if (r.kind == Root::Duffy) {
            Eigen::Matrix2d jm = P.jac(r.a(0), r.a(1));
            Point2d pa = r.p - r.a, qp = r.q - r.p;
            w = jm * (pa + t * qp);
            c = std::abs(jm.determinant()) * std::abs(pa(0) * qp(1) - pa(1) * qp(0));
        } else {
            double v = r.v0 + t * (r.v1 - r.v0);
            w = r.u1 * P.apex_direction(v);
            c = r.u1 * r.u1 * P.apex_jacobian(v) * (r.v1 - r.v0);
        }
    }

    void evaluate(const Cell& cell, VecN<N>& val, double& err) const {
        const Rule& R = rule15();
        const Root& r = roots_[cell.root];
        const Patch& P = patches_[r.patch];
        const std::size_t n = R.x.size();
        const double ds = cell.s1 - cell.s0, dt = cell.t1 - cell.t0;
        VecN<N> k = VecN<N>::Zero(), g = VecN<N>::Zero();
        for (std::size_t j = 0; j < n; ++j) {
            double t = cell.t0 + dt * R.x[j];
            VecN<N> f0 = VecN<N>::Zero(), logterm = VecN<N>::Zero();
            double sigma = 0;
            if (r.subtract) {
                Point2d w;
                double c;
                leading_geometry(r, t, w, c);
                f0 = (*leading_)(w) * c;
                logterm = f0 * std::log(w.norm());
                sigma = kNoiseRadius * pv_.norm() / w.norm();
            }
            auto sample = [&](double s) {
                double jfac = 0;
                Point2d uv = param(r, s, t, jfac);
                Point2d y = P.map(uv(0), uv(1));
                double jac = std::abs(P.jac(uv(0), uv(1)).determinant()) * jfac;
                VecN<N> v = VecN<N>::Zero();
                if (jac != 0.0) v = f_(y) * jac;
                if (r.subtract) v += logterm - f0 / s;
                return v;
            };
            bool have_edge = false;
            VecN<N> g1, g2;
            VecN<N> kj = VecN<N>::Zero(), gj = VecN<N>::Zero();
            for (std::size_t i = 0; i < n; ++i) {
                double s = cell.s0 + ds * R.x[i];
                VecN<N> v;
                if (s < sigma) {
                    if (!have_edge) {
                        g1 = sample(sigma);
                        g2 = sample(2 * sigma);
                        have_edge = true;
                    }
                    v = g1 + (s - sigma) / sigma * (g2 - g1);
                } else {
                    v = sample(s);
                }
                kj += R.wk[i] * v;
                gj += R.wg[i] * v;
            }
            k += R.wk[j] * kj;
            g += R.wg[j] * gj;
        }
        val = k * (ds * dt);
        err = ((k - g) * (ds * dt)).cwiseAbs().maxCoeff();
        if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
    }

    double image_diameter(const Cell& c) const {
        const Root& r = roots_[c.root];
        const Patch& P = patches_[r.patch];
        double j = 0;
        std::array<Point2d, 4> y;
        int i = 0;
        for (double s : {c.s0, c.s1})
            for (double t : {c.t0, c.t1}) {
                Point2d uv = param(r, s, t, j);
                y[i++] = P.map(uv(0), uv(1));
            }
        return std::max((y[0] - y[3]).norm(), (y[1] - y[2]).norm());
    }

    void add_plain(int patch, double u0, double u1, double v0, double v1) {
        Root r;
        r.kind = Root::Plain;
        r.patch = patch;
        r.u0 = u0;
        r.u1 = u1;
        r.v0 = v0;
        r.v1 = v1;
        roots_.push_back(r);
    }

    // split the parameter rectangle until each pole sits on a corner, then fan out Duffy triangles
    void split_rect(int patch, double u0, double u1, double v0, double v1, std::vector<Point2d> poles,
                    const std::vector<char>& is_pv) {
        (void)is_pv;
        std::vector<Point2d> inside;
        for (const auto& p : poles)
            if (p(0) >= u0 - kParamTol && p(0) <= u1 + kParamTol && p(1) >= v0 - kParamTol && p(1) <= v1 + kParamTol) {
                bool dup = std::any_of(inside.begin(), inside.end(),
                                       [&](const Point2d& q) { return (q - p).cwiseAbs().maxCoeff() < kParamTol; });
                if (!dup) inside.push_back(p);
            }
        if (inside.empty()) {
            add_plain(patch, u0, u1, v0, v1);
            return;
        }
        auto near = [](double a, double b) { return std::abs(a - b) <= kParamTol; };
        if (inside.size() >= 2) {
            const Point2d &a = inside[0], &b = inside[1];
            if (std::abs(a(0) - b(0)) >= std::abs(a(1) - b(1))) {
                double um = 0.5 * (a(0) + b(0));
                split_rect(patch, u0, um, v0, v1, inside, is_pv);
                split_rect(patch, um, u1, v0, v1, inside, is_pv);
            } else {
                double vm = 0.5 * (a(1) + b(1));
                split_rect(patch, u0, u1, v0, vm, inside, is_pv);
                split_rect(patch, u0, u1, vm, v1, inside, is_pv);
            }
            return;
        }
        const Point2d p = inside[0];
        bool on_u = near(p(0), u0) || near(p(0), u1), on_v = near(p(1), v0) || near(p(1), v1);
        if (!on_u) {
            split_rect(patch, u0, p(0), v0, v1, inside, is_pv);
            split_rect(patch, p(0), u1, v0, v1, inside, is_pv);
            return;
        }
        if (!on_v) {
            split_rect(patch, u0, u1, v0, p(1), inside, is_pv);
            split_rect(patch, u0, u1, p(1), v1, inside, is_pv);
            return;
        }
        Point2d a(near(p(0), u0) ? u0 : u1, near(p(1), v0) ? v0 : v1);
        std::array<Point2d, 4> ring = {Point2d(u0, v0), Point2d(u1, v0), Point2d(u1, v1), Point2d(u0, v1)};
        int ia = 0;
        for (int i = 0; i < 4; ++i)
            if ((ring[i] - a).cwiseAbs().maxCoeff() == 0.0) ia = i;
        for (int k = 1; k <= 2; ++k) {
            Root r;
            r.kind = Root::Duffy;
            r.patch = patch;
            r.a = a;
            r.p = ring[(ia + k) % 4];
            r.q = ring[(ia + k + 1) % 4];
            r.subtract = pole_is_pv(patch, a);
            roots_.push_back(r);
        }
    }

    bool pole_is_pv(int patch, const Point2d& uv) const {
        if (!leading_) return false;
        Point2d y = patches_[patch].map(uv(0), uv(1));
        return (y - pv_).norm() <= 1e-12 * std::max(1.0, patches_[patch].scale());
    }

    void build_roots(int idx, const std::vector<Point2d>& poles) {
        const Patch& P = patches_[idx];
        const double scale = P.scale();
        bool apex_pole = false, apex_pv = false;
        std::vector<Point2d> pre;
        double u_near = 1.0;
        for (const auto& y : poles) {
            if (P.degenerate() && (y - P.apex()).norm() <= 1e-13 * scale) {
                apex_pole = true;
                if (leading_ && (y - pv_).norm() <= 1e-13 * scale) apex_pv = true;
                continue;
            }
            auto pts = P.preimages(y);
            pre.insert(pre.end(), pts.begin(), pts.end());
            if (P.degenerate()) {
                double u = (y - P.apex()).norm() / scale;
                for (const auto& q : pts) u = std::min(u, q(0));
                u_near = std::min(u_near, u);
            }
        }
        std::vector<char> is_pv(pre.size(), 0);

        // radial grading towards the apex keeps cells near a pole close to isotropic
        std::vector<double> ubreaks = {0.0};
        if (P.degenerate() && u_near < 0.25) {
            for (double u = 0.5 * u_near; u < 0.75; u *= 2) ubreaks.push_back(u);
        } else if (P.degenerate() && apex_pole && !pre.empty()) {
            double umin = 1.0;
            for (const auto& q : pre) umin = std::min(umin, q(0));
            if (umin > 0) ubreaks.push_back(0.5 * umin);
        }
        ubreaks.push_back(1.0);

        int nv = 1;
        if (P.kind == Patch::Polar || P.kind == Patch::Graph)
            nv = std::clamp(static_cast<int>(std::ceil(std::abs(P.dtheta()) / (kPi / 4))), 1, 8);
        else if (P.kind == Patch::Tri)
            nv = std::clamp(static_cast<int>(std::ceil(P.c)), 1, 8);

        for (std::size_t b = 0; b + 1 < ubreaks.size(); ++b) {
            double ua = ubreaks[b], ub = ubreaks[b + 1];
            for (int k = 0; k < nv; ++k) {
                double va = double(k) / nv, vb = double(k + 1) / nv;
                if (b == 0 && apex_pole) {
                    Root r;
                    r.kind = Root::Apex;
                    r.patch = idx;
                    r.u0 = 0;
                    r.u1 = ub;
                    r.v0 = va;
                    r.v1 = vb;
                    r.subtract = apex_pv;
                    roots_.push_back(r);
                } else {
                    split_rect(idx, ua, ub, va, vb, pre, is_pv);
                }
            }
        }
    }
};

template <int N>
QuadResult<N> run_engine(const Integrand<N>& f, const Integrand<N>* leading, const Point2d& pv,
                         const std::vector<Region>& regions, const QuadratureConfig& cfg,
                         const std::vector<Point2d>& poles) {
    cfg.validate();
    Engine<N> eng(f, leading, pv, cfg);
    for (const auto& r : regions) eng.add_patch(to_patch(r), poles);
    return eng.run();
}

}  // namespace

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0) || !(abs_tol > 0)) throw ConfigError("quadrature tolerances must be positive");
    if (max_subdivisions < 4) throw ConfigError("max_subdivisions must be at least 4");
    if (!(singular_split_radius > 0)) throw ConfigError("singular_split_radius must be positive");
}

double region_area(const Region& region) {
    return integrate([](const Point2d&) { return 1.0; }, region, QuadratureConfig{}).value;
}

template <int N>
QuadResult<N> integrate_vec(const Integrand<N>& f, const std::vector<Region>& regions, const QuadratureConfig& cfg,
                            const std::vector<Point2d>& singular_points) {
    return run_engine<N>(f, nullptr, Point2d::Zero(), regions, cfg, singular_points);
}

template <int N>
QuadResult<N> integrate_principal_value(const Integrand<N>& f, const Integrand<N>& leading,
                                        const std::vector<Region>& regions, const Point2d& x,
                                        const QuadratureConfig& cfg) {
    return run_engine<N>(f, &leading, x, regions, cfg, {x});
}

QuadEstimate integrate(const std::function<double(const Point2d&)>& f, const Region& region,
                       const QuadratureConfig& cfg, const std::vector<Point2d>& singular_points) {
    Integrand<1> g = [&](const Point2d& y) { return VecN<1>(f(y)); };
    auto r = integrate_vec<1>(g, {region}, cfg, singular_points);
    return {r.value(0), r.error, r.cells};
}

template <int N>
QuadResult<N> integrate_line_vec(const std::function<VecN<N>(double)>& f, double a, double b,
                                 const QuadratureConfig& cfg, const std::vector<double>& breakpoints) {
    cfg.validate();
    const Rule& R = rule21();
    struct Seg {
        double a, b;
        int depth;
    };
    std::vector<double> cuts = {a};
    for (double t : breakpoints)
        if (t > a && t < b) cuts.push_back(t);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<Seg> segs;
    std::vector<VecN<N>> vals;
    std::vector<double> errs;
    std::vector<char> alive;
    VecN<N> total = VecN<N>::Zero();
    double total_err = 0;
    using Item = std::pair<double, long>;
    std::priority_queue<Item> heap;

    auto push = [&](Seg s) {
        double h = s.b - s.a;
        VecN<N> k = VecN<N>::Zero(), g = VecN<N>::Zero();
        for (std::size_t i = 0; i < R.x.size(); ++i) {
            VecN<N> v = f(s.a + h * R.x[i]);
            k += R.wk[i] * v;
            g += R.wg[i] * v;
        }
        k *= h;
        g *= h;
        double e = (k - g).cwiseAbs().maxCoeff();
        if (!std::isfinite(e)) e = std::numeric_limits<double>::infinity();
        segs.push_back(s);
        vals.push_back(k);
        errs.push_back(e);
        alive.push_back(1);
        total += k;
        total_err += e;
        heap.push({e, -static_cast<long>(segs.size() - 1)});
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) push({cuts[i], cuts[i + 1], 0});

    const int max_depth = std::max(cfg.max_subdivisions, 40);
    auto tolerance = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * total.cwiseAbs().maxCoeff()); };
    while (total_err > tolerance() && !heap.empty() && static_cast<long>(segs.size()) < kMaxCells) {
        auto [e, nid] = heap.top();
        heap.pop();
        std::size_t i = static_cast<std::size_t>(-nid);
        Seg s = segs[i];
        if (s.depth >= max_depth) continue;
        alive[i] = 0;
        total -= vals[i];
        total_err -= errs[i];
        double m = 0.5 * (s.a + s.b);
        push({s.a, m, s.depth + 1});
        push({m, s.b, s.depth + 1});
    }
    std::vector<VecN<N>> leaf;
    double err = 0;
    for (std::size_t i = 0; i < segs.size(); ++i)
        if (alive[i]) {
            leaf.push_back(vals[i]);
            err += errs[i];
        }
    QuadResult<N> out;
    out.value = pairwise_sum<N>(leaf, 0, leaf.size());
    out.error = err;
    out.cells = static_cast<long>(leaf.size());
    double tol = std::max(cfg.abs_tol, cfg.rel_tol * out.value.cwiseAbs().maxCoeff());
    if (!out.value.allFinite() || err > tol)
        throw QuadratureError("1D adaptive quadrature did not reach tolerance", out.value(0), err);
    return out;
}

QuadEstimate integrate_line(const std::function<double(double)>& f, double a, double b, const QuadratureConfig& cfg,
                            const std::vector<double>& breakpoints) {
    auto r = integrate_line_vec<1>([&](double t) { return VecN<1>(f(t)); }, a, b, cfg, breakpoints);
    return {r.value(0), r.error, r.cells};
}

double scaled_kernel_bound(const Point2d& x, int m, const QuadratureConfig& cfg) {
    double rx = x.norm();
    if (!(rx > 0) || rx > 1) throw std::domain_error("scaled_kernel_bound needs 0 < |x| <= 1");
    if (m < 1) throw std::domain_error("symmetry order must be >= 1");
    Rotation rot(m);
    std::vector<Point2d> poles;
    for (int i = 1; i <= m; ++i) poles.push_back(rot.apply(x, -i));
    Integrand<1> f = [&](const Point2d& y) { return VecN<1>(m_fold_kernel(x, y, m).norm()); };
    auto r = integrate_vec<1>(f, {Disc{Point2d(0, 0), 10.0}}, cfg, poles);
    return r.value(0) / rx;
}

template QuadResult<1> integrate_vec<1>(const Integrand<1>&, const std::vector<Region>&, const QuadratureConfig&,
                                        const std::vector<Point2d>&);
template QuadResult<2> integrate_vec<2>(const Integrand<2>&, const std::vector<Region>&, const QuadratureConfig&,
                                        const std::vector<Point2d>&);
template QuadResult<3> integrate_vec<3>(const Integrand<3>&, const std::vector<Region>&, const QuadratureConfig&,
                                        const std::vector<Point2d>&);
template QuadResult<1> integrate_principal_value<1>(const Integrand<1>&, const Integrand<1>&,
                                                    const std::vector<Region>&, const Point2d&,
                                                    const QuadratureConfig&);
template QuadResult<3> integrate_principal_value<3>(const Integrand<3>&, const Integrand<3>&,
                                                    const std::vector<Region>&, const Point2d&,
                                                    const QuadratureConfig&);
template QuadResult<1> integrate_line_vec<1>(const std::function<VecN<1>(double)>&, double, double,
                                             const QuadratureConfig&, const std::vector<double>&);
template QuadResult<2> integrate_line_vec<2>(const std::function<VecN<2>(double)>&, double, double,
                                             const QuadratureConfig&, const std::vector<double>&);
template QuadResult<3> integrate_line_vec<3>(const std::function<VecN<3>(double)>&, double, double,
                                             const QuadratureConfig&, const std::vector<double>&);

}  // namespace symlap
