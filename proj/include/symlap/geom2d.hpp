#pragma once

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <vector>

#include <json.hpp>

namespace symlap {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;
using Point2d = Point2<double>;

// throws std::invalid_argument on NaN/Inf
Point2d make_point(double x1, double x2);

template <typename Derived>
Point2<typename Derived::Scalar> perp(const Eigen::MatrixBase<Derived>& p) {
    return Point2<typename Derived::Scalar>(-p(1), p(0));
}

// wrap an angle into [0, 2pi)
double normalize_angle(double theta);
// distance on the circle, in [0, pi]
double angular_distance(double a, double b);

class Rotation {
public:
    explicit Rotation(int m);

    int order() const { return m_; }
    double angle() const { return 2.0 * std::numbers::pi / m_; }

    // O^k p, O the counterclockwise turn by 2pi/m; k may be negative
    template <typename Derived>
    Point2<typename Derived::Scalar> apply(const Eigen::MatrixBase<Derived>& p, int k = 1) const {
        using S = typename Derived::Scalar;
        int r = ((k % m_) + m_) % m_;
        const double c = cos_[r], s = sin_[r];
        return Point2<S>(S(c) * p(0) - S(s) * p(1), S(s) * p(0) + S(c) * p(1));
    }

    Eigen::Matrix2d matrix(int k = 1) const;

private:
    int m_;
    std::vector<double> cos_, sin_;
};

Point2d rotate(const Point2d& p, int k, const Rotation& rot);

Eigen::Matrix2d rotation_matrix(double angle);

// sum_{i<m} O^i y (O^i y . x)
template <typename Scalar>
Point2<Scalar> rotation_identity_sum(const Point2<Scalar>& x, const Point2<Scalar>& y, int m) {
    Rotation rot(m);
    Point2<Scalar> acc = Point2<Scalar>::Zero();
    for (int i = 0; i < m; ++i) {
        Point2<Scalar> oy = rot.apply(y, i);
        acc += oy * oy.dot(x);
    }
    return acc;
}

// |sum - (m/2) x |y|^2| without the m >= 3 precondition
double rotation_identity_defect(const Point2d& x, const Point2d& y, int m);
// same quantity; throws std::domain_error for m < 3, where the identity is false
double rotation_identity_residual(const Point2d& x, const Point2d& y, int m);

class Sector {
public:
    Sector(double alpha, double beta);

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double theta_min() const { return beta_ - alpha_; }
    double theta_max() const { return beta_ + alpha_; }
    bool full_disc() const { return alpha_ >= std::numbers::pi; }

    // closed set: the rim and both edges count as inside
    bool contains(const Point2d& p) const;

    Sector rotated(double angle) const { return Sector(alpha_, beta_ + angle); }

    friend bool operator==(const Sector&, const Sector&) = default;

private:
    double alpha_;
    double beta_;
};

bool sector_contains(const Sector& s, const Point2d& p);

class SectorUnion {
public:
    SectorUnion() = default;
    // throws std::invalid_argument if two angular interiors overlap
    explicit SectorUnion(std::vector<Sector> sectors);

    const std::vector<Sector>& sectors() const { return sectors_; }
    std::size_t size() const { return sectors_.size(); }

    bool contains(const Point2d& p) const;
    SectorUnion rotated(double angle) const;
    // membership-wise invariance under the turn by 2pi/m
    bool invariant_under(int m) const;

    nlohmann::json to_json() const;
    static SectorUnion from_json(const nlohmann::json& doc);

    friend bool operator==(const SectorUnion&, const SectorUnion&) = default;

private:
    std::vector<Sector> sectors_;
};

// union of the m rotated copies of a; copies that coincide are merged
SectorUnion symmetrize(const SectorUnion& a, int m);

}  // namespace symlap
