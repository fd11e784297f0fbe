#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "symlap/field2d.hpp"
#include "symlap/kernels.hpp"
#include "symlap/quadrature.hpp"

namespace symlap {

// Area: convolution over the support (principal value for D^2).
// Boundary: divergence theorem on the jump curves, characteristic fields only.
enum class PotentialMethod { Auto, Area, Boundary };

double eval_psi(const Field2D& field, const Point2d& x, KernelConvention conv = KernelConvention::Greens,
                const QuadratureConfig& cfg = {});

Point2d eval_grad_psi(const Field2D& field, const Point2d& x, KernelConvention conv = KernelConvention::Greens,
                      const QuadratureConfig& cfg = {}, PotentialMethod method = PotentialMethod::Auto);

// Symmetric by construction: the off-diagonal entry is computed once.
// Throws DiscontinuityError within 1e-12 of a jump curve.
Eigen::Matrix2d eval_hessian_psi(const Field2D& field, const Point2d& x,
                                 KernelConvention conv = KernelConvention::Greens, const QuadratureConfig& cfg = {},
                                 PotentialMethod method = PotentialMethod::Auto);

// Exact derivatives for closed-form potentials.
struct DerivativeOracle {
    std::function<Point2d(const Point2d&)> gradient;
    std::function<Eigen::Matrix2d(const Point2d&)> hessian;
};

enum class GrowthModel { Bounded, Log, RadiusTimesLog };
std::string to_string(GrowthModel m);

struct ProbeQuantity {
    enum class Kind { GradOverR, HessEntry, GradDiffOverR } kind = Kind::GradOverR;
    int i = 0, j = 1;  // 0-based Hessian entry

    static ProbeQuantity grad_over_r() { return {Kind::GradOverR, 0, 0}; }
    static ProbeQuantity grad_diff_over_r() { return {Kind::GradDiffOverR, 0, 0}; }
    static ProbeQuantity hess(int i, int j) { return {Kind::HessEntry, i, j}; }
    std::string name() const;
    // inverse of name(): grad-over-r, grad-diff-over-r, hess11, hess12, hess22
    static ProbeQuantity parse(const std::string& s);
};

struct ProbeSample {
    int k;
    double radius;
    double value;
};

struct BlowupReport {
    std::vector<ProbeSample> samples;
    GrowthModel model = GrowthModel::Bounded;
    double slope = 0.0;      // d value / d ln(1/r)
    double r_squared = 0.0;  // in [0, 1]
    double constant = 0.0;
    std::string quantity;
    std::optional<int> trusted_k_max;  // samples beyond are outside the resolved range

    double fitted(int k) const;
    std::string csv() const;
    nlohmann::json summary() const;
};

// Least-squares fit of v_k against k ln 2 and the Bounded / Log decision.
BlowupReport fit_blowup(std::vector<ProbeSample> samples, ProbeQuantity quantity);

BlowupReport blowup_probe(const Field2D& field, ProbeQuantity quantity, const Point2d& direction, int k_min,
                          int k_max, KernelConvention conv = KernelConvention::Greens,
                          const QuadratureConfig& cfg = {});

BlowupReport blowup_probe(const DerivativeOracle& oracle, ProbeQuantity quantity, const Point2d& direction,
                          int k_min, int k_max);

// sup |x| |grad g(x)| by central differences with step 1e-6 |x|
double gradient_growth_check(const Field2D& field, int samples);
double gradient_growth_check(const Field2D& field, const std::vector<Point2d>& points);

// worker threads for independent probe points; SYMLAP_THREADS caps it
int worker_count();
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace symlap
