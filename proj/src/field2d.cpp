#include "symlap/field2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace symlap {

namespace {
constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Point2d unit(double th) { return Point2d(std::cos(th), std::sin(th)); }

double segment_distance(const Point2d& a, const Point2d& b, const Point2d& x, double* tpar = nullptr) {
    Point2d d = b - a;
    double t = std::clamp((x - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
    if (tpar) *tpar = t;
    return (a + t * d - x).norm();
}

// theta in [t0, t1] after a 2pi shift, if any
bool angle_in_range(double th, double t0, double t1, double* shifted = nullptr) {
    for (int k = -2; k <= 2; ++k) {
        double s = th + 2 * kPi * k;
        if (s >= t0 && s <= t1) {
            if (shifted) *shifted = s;
            return true;
        }
    }
    return false;
}

// overlaps of [a, b] with the wedges [2pi k, 2pi k + w]
std::vector<std::pair<double, double>> clip_to_wedge(double a, double b, double w) {
    std::vector<std::pair<double, double>> out;
    for (int k = -1; k <= 1; ++k) {
        double lo = std::max(a, 2 * kPi * k), hi = std::min(b, 2 * kPi * k + w);
        if (hi - lo > 1e-14) out.emplace_back(lo, hi);
    }
    return out;
}
}  // namespace

double piece_t0(const BoundaryPiece& p) {
    return std::visit(overloaded{[](const Segment&) { return 0.0; }, [](const Arc& a) { return a.theta0; },
                                 [](const PolarCurve& c) { return c.theta0; }},
                      p);
}

double piece_t1(const BoundaryPiece& p) {
    return std::visit(overloaded{[](const Segment&) { return 1.0; }, [](const Arc& a) { return a.theta1; },
                                 [](const PolarCurve& c) { return c.theta1; }},
                      p);
}

Point2d piece_point(const BoundaryPiece& p, double t) {
    return std::visit(overloaded{[&](const Segment& s) -> Point2d { return s.a + t * (s.b - s.a); },
                                 [&](const Arc& a) -> Point2d { return a.center + a.radius * unit(t); },
                                 [&](const PolarCurve& c) -> Point2d { return c.rho(t) * unit(t); }},
                      p);
}

Point2d piece_velocity(const BoundaryPiece& p, double t) {
    return std::visit(overloaded{[&](const Segment& s) -> Point2d { return s.b - s.a; },
                                 [&](const Arc& a) -> Point2d { return a.radius * perp(unit(t)); },
                                 [&](const PolarCurve& c) -> Point2d {
                                     return c.drho(t) * unit(t) + c.rho(t) * perp(unit(t));
                                 }},
                      p);
}

namespace {
// dense sampling followed by golden-section refinement
double curve_closest(const BoundaryPiece& p, const Point2d& x, double& best_t) {
    const double t0 = piece_t0(p), t1 = piece_t1(p);
    const int n = 2048;
    double best = std::numeric_limits<double>::infinity();
    int bi = 0;
    for (int i = 0; i <= n; ++i) {
        double t = t0 + (t1 - t0) * i / n;
        double d = (piece_point(p, t) - x).norm();
        if (d < best) {
            best = d;
            bi = i;
        }
    }
    double a = t0 + (t1 - t0) * std::max(bi - 1, 0) / n, b = t0 + (t1 - t0) * std::min(bi + 1, n) / n;
    const double gr = 0.5 * (std::sqrt(5.0) - 1);
    for (int it = 0; it < 80; ++it) {
        double c = b - gr * (b - a), d = a + gr * (b - a);
        if ((piece_point(p, c) - x).norm() < (piece_point(p, d) - x).norm())
            b = d;
        else
            a = c;
    }
    best_t = 0.5 * (a + b);
    return std::min(best, (piece_point(p, best_t) - x).norm());
}
}  // namespace

double distance_to_piece(const BoundaryPiece& p, const Point2d& x) {
    return std::visit(overloaded{[&](const Segment& s) { return segment_distance(s.a, s.b, x); },
                                 [&](const Arc& a) {
                                     Point2d d = x - a.center;
                                     if (angle_in_range(std::atan2(d(1), d(0)), a.theta0, a.theta1))
                                         return std::abs(d.norm() - a.radius);
                                     return std::min((piece_point(p, a.theta0) - x).norm(),
                                                     (piece_point(p, a.theta1) - x).norm());
                                 },
                                 [&](const PolarCurve&) {
                                     double t;
                                     return curve_closest(p, x, t);
                                 }},
                      p);
}

double closest_parameter(const BoundaryPiece& p, const Point2d& x) {
    return std::visit(overloaded{[&](const Segment& s) {
                                     double t;
                                     segment_distance(s.a, s.b, x, &t);
                                     return t;
                                 },
                                 [&](const Arc& a) {
                                     Point2d d = x - a.center;
                                     double th = std::atan2(d(1), d(0)), s = a.theta0;
                                     angle_in_range(th, a.theta0, a.theta1, &s);
                                     return s;
                                 },
                                 [&](const PolarCurve&) {
                                     double t;
                                     curve_closest(p, x, t);
                                     return t;
                                 }},
                      p);
}

double SampledGrid::operator()(const Point2d& x) const {
    const int nx = static_cast<int>(values.rows()), ny = static_cast<int>(values.cols());
    if (x(0) < lo(0) || x(0) > hi(0) || x(1) < lo(1) || x(1) > hi(1)) return 0.0;
    double fx = (x(0) - lo(0)) / (hi(0) - lo(0)) * (nx - 1), fy = (x(1) - lo(1)) / (hi(1) - lo(1)) * (ny - 1);
    int i = std::clamp(static_cast<int>(fx), 0, nx - 2), j = std::clamp(static_cast<int>(fy), 0, ny - 2);
    double a = fx - i, b = fy - j;
    return (1 - a) * (1 - b) * values(i, j) + a * (1 - b) * values(i + 1, j) + (1 - a) * b * values(i, j + 1) +
           a * b * values(i + 1, j + 1);
}

Field2D Field2D::sector_union(SectorUnion a, int symmetry_order) {
    Field2D f;
    f.kind_ = Kind::SectorChar;
    f.m_ = symmetry_order;
    f.support_radius_ = 1.0;
    f.sectors_ = a;
    f.g_ = [a](const Point2d& x) { return a.contains(x) ? 1.0 : 0.0; };
    for (const auto& s : a.sectors()) {
        f.regions_.push_back(SectorRegion{s});
        if (s.full_disc()) {
            f.boundary_.push_back(Arc{Point2d(0, 0), 1.0, 0.0, 2 * kPi});
            continue;
        }
        f.boundary_.push_back(Segment{Point2d(0, 0), unit(s.theta_min())});
        f.boundary_.push_back(Arc{Point2d(0, 0), 1.0, s.theta_min(), s.theta_max()});
        f.boundary_.push_back(Segment{unit(s.theta_max()), Point2d(0, 0)});
    }
    f.verify();
    return f;
}

Field2D Field2D::triangle(double c) {
    if (!(c > 0)) throw std::invalid_argument("triangle slope must be positive");
    Field2D f;
    f.kind_ = Kind::TriangleChar;
    f.support_radius_ = std::sqrt(1 + c * c);
    f.g_ = [c](const Point2d& x) { return (x(0) >= 0 && x(0) <= 1 && x(1) >= 0 && x(1) <= c * x(0)) ? 1.0 : 0.0; };
    f.regions_.push_back(Triangle{c});
    f.boundary_ = {Segment{Point2d(0, 0), Point2d(1, 0)}, Segment{Point2d(1, 0), Point2d(1, c)},
                   Segment{Point2d(1, c), Point2d(0, 0)}};
    f.verify();
    return f;
}

Field2D Field2D::rects(std::vector<Rect> rects, int symmetry_order) {
    if (rects.empty()) throw std::invalid_argument("at least one rectangle is required");
    Field2D f;
    f.kind_ = Kind::RectChar;
    f.m_ = symmetry_order;
    for (const auto& r : rects) {
        if (!(r.hi(0) > r.lo(0) && r.hi(1) > r.lo(1))) throw std::invalid_argument("degenerate rectangle");
        f.regions_.push_back(r);
        Point2d c1 = r.lo, c2(r.hi(0), r.lo(1)), c3 = r.hi, c4(r.lo(0), r.hi(1));
        f.boundary_.insert(f.boundary_.end(), {Segment{c1, c2}, Segment{c2, c3}, Segment{c3, c4}, Segment{c4, c1}});
        for (const auto& c : {c1, c2, c3, c4}) f.support_radius_ = std::max(f.support_radius_, c.norm());
    }
    f.g_ = [rects](const Point2d& x) {
        for (const auto& r : rects)
            if (x(0) >= r.lo(0) && x(0) <= r.hi(0) && x(1) >= r.lo(1) && x(1) <= r.hi(1)) return 1.0;
        return 0.0;
    };
    f.verify();
    return f;
}

Field2D Field2D::petals(std::vector<PolarGraph> petals, int symmetry_order) {
    if (petals.empty()) throw std::invalid_argument("at least one petal is required");
    Field2D f;
    f.kind_ = Kind::PetalChar;
    f.m_ = symmetry_order;
    for (const auto& p : petals) {
        if (!p.rho || !p.drho || !(p.theta1 > p.theta0)) throw std::invalid_argument("malformed petal");
        f.regions_.push_back(p);
        f.boundary_.push_back(PolarCurve{p.rho, p.drho, p.theta0, p.theta1});
        for (int i = 0; i <= 256; ++i)
            f.support_radius_ = std::max(f.support_radius_, p.rho(p.theta0 + (p.theta1 - p.theta0) * i / 256.0));
    }
    f.g_ = [petals](const Point2d& x) {
        double r = x.norm(), th = std::atan2(x(1), x(0));
        for (const auto& p : petals) {
            double s;
            if (angle_in_range(th, p.theta0, p.theta1, &s) && r <= p.rho(s)) return 1.0;
        }
        return 0.0;
    };
    f.verify();
    return f;
}

Field2D Field2D::sampled(SampledGrid grid, int symmetry_order) {
    if (grid.values.rows() < 2 || grid.values.cols() < 2) throw std::invalid_argument("grid needs 2x2 samples");
    Field2D f;
    f.kind_ = Kind::Sampled;
    f.m_ = symmetry_order;
    f.sup_norm_ = grid.values.cwiseAbs().maxCoeff();
    f.support_radius_ = std::max({grid.lo.norm(), grid.hi.norm(), Point2d(grid.lo(0), grid.hi(1)).norm(),
                                  Point2d(grid.hi(0), grid.lo(1)).norm()});
    f.regions_.push_back(Rect{grid.lo, grid.hi});
    f.g_ = [grid = std::move(grid)](const Point2d& x) { return grid(x); };
    f.verify();
    return f;
}

Field2D Field2D::analytic(std::function<double(const Point2d&)> g, double support_radius, double sup_norm,
                          int symmetry_order) {
    if (!(support_radius > 0) || !std::isfinite(support_radius))
        throw std::invalid_argument("analytic field needs a finite positive support radius");
    Field2D f;
    f.kind_ = Kind::Analytic;
    f.m_ = symmetry_order;
    f.support_radius_ = support_radius;
    f.sup_norm_ = sup_norm;
    f.g_ = std::move(g);
    f.regions_.push_back(Disc{Point2d(0, 0), support_radius});
    f.verify();
    return f;
}

void Field2D::verify() {
    if (m_ < 1) throw std::invalid_argument("symmetry order must be >= 1");
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Rotation rot(m_);
    const double R = 1.2 * support_radius_;
    for (int n = 0; n < 1000;) {
        Point2d x(R * uni(rng), R * uni(rng));
        if (x.norm() > R) continue;
        ++n;
        double gx = g_(x);
        if (!(std::abs(gx) <= sup_norm_ * (1 + 1e-12) + 1e-12))
            throw std::invalid_argument("field exceeds its declared sup norm");
        if (m_ == 1) continue;
        Point2d ox = rot.apply(x);
        if (is_characteristic() && std::min(distance_to_jump(x), distance_to_jump(ox)) < 1e-9) continue;
        if (std::abs(gx - g_(ox)) > 1e-9)
            throw std::invalid_argument("field is not invariant under its declared " + std::to_string(m_) +
                                        "-fold rotation");
    }
}

std::vector<Region> Field2D::fundamental_regions() const {
    std::vector<Region> out;
    if (m_ == 1) return regions_;
    const double w = 2 * kPi / m_;
    switch (kind_) {
        case Kind::SectorChar:
            for (const auto& s : sectors_.sectors())
                for (auto [lo, hi] : clip_to_wedge(s.theta_min(), s.theta_max(), w))
                    out.push_back(PolarPatch{Point2d(0, 0), 0.0, 1.0, lo, hi});
            return out;
        case Kind::PetalChar:
            for (const auto& r : regions_) {
                const auto& p = std::get<PolarGraph>(r);
                for (auto [lo, hi] : clip_to_wedge(p.theta0, p.theta1, w))
                    out.push_back(PolarGraph{p.rho, p.drho, lo, hi});
            }
            return out;
        case Kind::Analytic: out.push_back(PolarPatch{Point2d(0, 0), 0.0, support_radius_, 0.0, w}); return out;
        default: return {};
    }
}

double Field2D::distance_to_jump(const Point2d& x) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& p : boundary_) d = std::min(d, distance_to_piece(p, x));
    return d;
}

}  // namespace symlap
