#pragma once

#include <functional>
#include <optional>
#include <string>

#include "symlap/field2d.hpp"
#include "symlap/jets.hpp"
#include "symlap/potential.hpp"

namespace symlap {

// Radial C^2 cutoff: 1 for r <= inner, 0 for r >= outer, quintic smoothstep between.
struct CutoffSpec {
    double inner_radius = 1.0;
    double outer_radius = 2.0;

    void validate() const;

    template <typename S>
    S operator()(const S& r) const {
        double rv = scalar_value(r);
        if (rv <= inner_radius) return S(1.0);
        if (rv >= outer_radius) return S(0.0);
        S t = (r - S(inner_radius)) / S(outer_radius - inner_radius);
        return S(1.0) - t * t * t * (S(10.0) - t * (S(15.0) - S(6.0) * t));
    }
    // first and second radial derivatives
    double d1(double r) const;
    double d2(double r) const;
};

// A closed-form potential psi with its exact derivatives and exact Laplacian.
struct AnalyticExample {
    std::string id;
    std::function<Jet2(const Point2d&)> jet;
    double support_radius = 0.0;  // of the Laplacian; 0 when not compactly supported
    double sup_norm = 0.0;        // bound on |laplacian| used when wrapping as a Field2D
    int symmetry_order = 1;

    double psi(const Point2d& x) const { return jet(x).value; }
    double laplacian(const Point2d& x) const { return jet(x).hess.trace(); }
    DerivativeOracle oracle() const;
    // the Laplacian as a source field; throws if not compactly supported
    Field2D field() const;
};

enum class HarmonicChoice { XY, X2minusY2 };

// psi_P = P log|x|^2 phi(|x|) with P harmonic
AnalyticExample harmonic_log_example(HarmonicChoice choice, const CutoffSpec& cutoff = {});
// grad P . 4x/|x|^2, the Laplacian inside the inner radius
double harmonic_inner_laplacian(HarmonicChoice choice, const Point2d& x);

// psi_N = -(16/pi^2) sum_{n,m odd <= N} sin(nx) sin(my) / (nm(n^2+m^2)), whose Laplacian tends to sgn(x)sgn(y)
class FourierExample {
public:
    explicit FourierExample(int N);
    int N() const { return N_; }
    double psi(const Point2d& x) const;
    double laplacian(const Point2d& x) const;
    double dxy(const Point2d& x) const;
    Jet2 jet(const Point2d& x) const;
    // largest dyadic k with 2^-k resolved by the truncation
    int trusted_k_max() const;
    AnalyticExample as_example() const;

private:
    int N_;
    std::vector<int> modes_;
};

Field2D square_example();
// [0,1]^2 together with [-1,0]^2, two-fold symmetric
Field2D square_mirrored_example();
// int_0^1 log((x2 - y)^2 / ((x2 - y)^2 + 1)) dy in closed form; equals twice the PaperRaw d1 psi(0, x2)
double square_reduced_dx1(double x2);

// sum_{n <= N} f^{eps_n}, eps_n = 100^-n, each f^eps the four-fold symmetrization of
// eps (x1 - eps) x2 log((x1 - eps)^2 + x2^2 + e^{-1/eps^2}) phi^eps(x)
class Prop46Example {
public:
    explicit Prop46Example(int N);
    int N() const { return N_; }
    static double epsilon(int n);
    Jet2 jet(const Point2d& x) const;
    // a single symmetrized bump f^eps
    static Jet2 bump_jet(double eps, const Point2d& x);
    AnalyticExample as_example() const;

private:
    int N_;
};

// r <= sin 3 theta, three-fold symmetric
Field2D flower_example();

}  // namespace symlap
