#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace symlap {

// Midpoint grid on [-half_width, half_width]; nodes never hit 0.
struct Grid1D {
    double half_width = 1.0;
    Eigen::VectorXd values;

    static constexpr std::size_t kDefaultSize = std::size_t{1} << 14;
    static constexpr std::size_t kMinSize = std::size_t{1} << 8;

    Grid1D() = default;
    Grid1D(Eigen::VectorXd v, double hw = 1.0);

    static Grid1D sample(const std::function<double(double)>& f,
        std::size_t n = kDefaultSize, double hw = 1.0);

    std::size_t size() const { return static_cast<std::size_t>(values.size()); }
    double spacing() const { return 2.0 * half_width / static_cast<double>(size()); }
    double node(std::size_t i) const {
        return half_width * (-1.0 + (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(size()));
    }
    // throws std::invalid_argument
    void validate() const;
};

Grid1D even_part(const Grid1D& f);
Grid1D odd_part(const Grid1D& f);
double asymmetry(const Grid1D& f, bool odd);

// central differences; the two nodes next to 0 and the ends are one-sided
Grid1D derivative(const Grid1D& f);

// dyadic intervals plus every interval centred at the origin
double bmo_norm(const Grid1D& f);

struct EvenRateCheck {
    double lhs = 0.0;  // max |phi(t) - phi(0)| / |t|
    double rhs = 0.0;  // bmo of phi'
    bool holds = false;
};
EvenRateCheck even_rate_bound_check(const Grid1D& phi, const Grid1D& phi_prime,
        double slack = 0.1, double sym_tol = 1e-10);

struct OddSupCheck {
    double sup = 0.0;
    double bound = 0.0;  // 2 bmo + max |t Phi'|
    double bmo = 0.0;
    double t_dphi = 0.0;
    bool holds = false;
};
OddSupCheck odd_sup_bound_check(const Grid1D& Phi, double C, double slack = 0.1,
        double sym_tol = 1e-10);

// (1/pi) PV int f(s)/(t-s) ds, midpoint cells of width 2h around t.
// Input is zero outside its grid.
Grid1D hilbert_transform(const Grid1D& f);

// zero padding onto a grid `factor` times wider, same spacing
Grid1D extend(const Grid1D& f, std::size_t factor);
Grid1D restrict_to(const Grid1D& wide, std::size_t n, double hw);

struct FeffermanSteinSplit {
    Grid1D phi1;  // odd part, bounded
    Grid1D phi2;  // -H(even part), on the widened grid
    double reconstruction_error = 0.0;  // relative, |t| <= hw/2
};
FeffermanSteinSplit fefferman_stein_split(const Grid1D& Phi, std::size_t extension = 32,
        double tol = 0.05);

struct AdmissibleFunction {
    Grid1D values;
    double C = 0.0;  // declared bound on |t f'|, odd members only
};

// Seeded random families for the two lemmas.
std::vector<AdmissibleFunction> random_even_family(std::size_t count, std::size_t n,
        std::uint64_t seed);
std::vector<AdmissibleFunction> random_odd_family(std::size_t count, std::size_t n,
        std::uint64_t seed);

}  // namespace symlap
