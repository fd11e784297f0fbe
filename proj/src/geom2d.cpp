#include "symlap/geom2d.hpp"

#include <algorithm>
#include <stdexcept>

namespace symlap {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDisjointTol = 1e-12;
}  // namespace

Point2d make_point(double x1, double x2) {
    if (!std::isfinite(x1) || !std::isfinite(x2))
        throw std::invalid_argument("point coordinates must be finite");
    return Point2d(x1, x2);
}

double normalize_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    return t;
}

double angular_distance(double a, double b) {
    double d = normalize_angle(a - b);
    return std::min(d, kTwoPi - d);
}

Rotation::Rotation(int m) : m_(m) {
    if (m < 1) throw std::invalid_argument("rotation order must be >= 1");
    cos_.resize(m);
    sin_.resize(m);
    for (int k = 0; k < m; ++k) {
        // exact values on the axes keep O^m p == p to rounding
        double a = kTwoPi * k / m;
        cos_[k] = std::cos(a);
        sin_[k] = std::sin(a);
        if (4 * k % m == 0) {
            int q = 4 * k / m;
            cos_[k] = (q == 0) ? 1.0 : (q == 2) ? -1.0 : 0.0;
            sin_[k] = (q == 1) ? 1.0 : (q == 3) ? -1.0 : 0.0;
        }
    }
}

Eigen::Matrix2d Rotation::matrix(int k) const {
    int r = ((k % m_) + m_) % m_;
    Eigen::Matrix2d o;
    o << cos_[r], -sin_[r], sin_[r], cos_[r];
    return o;
}

Point2d rotate(const Point2d& p, int k, const Rotation& rot) { return rot.apply(p, k); }

Eigen::Matrix2d rotation_matrix(double angle) {
    Eigen::Matrix2d o;
    o << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return o;
}

double rotation_identity_defect(const Point2d& x, const Point2d& y, int m) {
    Point2d sum = rotation_identity_sum(x, y, m);
    return (sum - 0.5 * m * x * y.squaredNorm()).norm();
}

double rotation_identity_residual(const Point2d& x, const Point2d& y, int m) {
    if (m < 3) throw std::domain_error("rotation identity requires m >= 3");
    return rotation_identity_defect(x, y, m);
}

Sector::Sector(double alpha, double beta) : alpha_(alpha), beta_(normalize_angle(beta)) {
    if (!std::isfinite(alpha) || !std::isfinite(beta))
        throw std::invalid_argument("sector angles must be finite");
    if (!(alpha > 0.0) || alpha > std::numbers::pi + 1e-15)
        throw std::invalid_argument("sector half-angle must lie in (0, pi]");
    alpha_ = std::min(alpha, std::numbers::pi);
}

bool Sector::contains(const Point2d& p) const {
    double r2 = p.squaredNorm();
    if (r2 > 1.0) return false;
    if (r2 == 0.0 || full_disc()) return true;
    return angular_distance(std::atan2(p(1), p(0)), beta_) <= alpha_;
}

bool sector_contains(const Sector& s, const Point2d& p) { return s.contains(p); }

SectorUnion::SectorUnion(std::vector<Sector> sectors) : sectors_(std::move(sectors)) {
    for (std::size_t i = 0; i < sectors_.size(); ++i)
        for (std::size_t j = i + 1; j < sectors_.size(); ++j) {
            const Sector &a = sectors_[i], &b = sectors_[j];
            double gap = angular_distance(a.beta(), b.beta());
            if (gap < a.alpha() + b.alpha() - kDisjointTol)
                throw std::invalid_argument("sectors " + std::to_string(i) + " and " +
                                            std::to_string(j) + " overlap");
        }
}

bool SectorUnion::contains(const Point2d& p) const {
    return std::any_of(sectors_.begin(), sectors_.end(),
                       [&](const Sector& s) { return s.contains(p); });
}

SectorUnion SectorUnion::rotated(double angle) const {
    std::vector<Sector> out;
    for (const auto& s : sectors_) out.push_back(s.rotated(angle));
    return SectorUnion(std::move(out));
}

bool SectorUnion::invariant_under(int m) const {
    Rotation rot(m);
    for (const auto& s : sectors_) {
        Sector t = s.rotated(rot.angle());
        bool found = std::any_of(sectors_.begin(), sectors_.end(), [&](const Sector& u) {
            return std::abs(u.alpha() - t.alpha()) < 1e-12 &&
                   angular_distance(u.beta(), t.beta()) < 1e-12;
        });
        if (!found) return false;
    }
    return true;
}

nlohmann::json SectorUnion::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : sectors_) arr.push_back({{"alpha", s.alpha()}, {"beta", s.beta()}});
    return {{"sectors", arr}};
}

SectorUnion SectorUnion::from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("sectors") || !doc["sectors"].is_array())
        throw std::invalid_argument("sector union document needs a \"sectors\" array");
    std::vector<Sector> out;
    for (const auto& s : doc["sectors"]) {
        if (!s.contains("alpha") || !s.contains("beta"))
            throw std::invalid_argument("each sector needs alpha and beta");
        out.emplace_back(s["alpha"].get<double>(), s["beta"].get<double>());
    }
    return SectorUnion(std::move(out));
}

SectorUnion symmetrize(const SectorUnion& a, int m) {
    Rotation rot(m);
    std::vector<Sector> out;
    for (int k = 0; k < m; ++k)
        for (const auto& s : a.sectors()) {
            Sector t = s.rotated(k * rot.angle());
            bool dup = std::any_of(out.begin(), out.end(), [&](const Sector& u) {
                return std::abs(u.alpha() - t.alpha()) < 1e-12 &&
                       angular_distance(u.beta(), t.beta()) < 1e-12;
            });
            if (!dup) out.push_back(t);
        }
    return SectorUnion(std::move(out));
}

}  // namespace symlap
