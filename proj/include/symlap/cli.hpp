#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "symlap/counterexamples.hpp"
#include "symlap/field2d.hpp"
#include "symlap/geom2d.hpp"
#include "symlap/kernels.hpp"
#include "symlap/potential.hpp"
#include "symlap/quadrature.hpp"

namespace symlap {

std::string to_string(KernelConvention conv);
// "paper-raw" or "greens"; ConfigError otherwise
KernelConvention parse_convention(const std::string& s);

struct ScenarioConfig {
    std::string example = "flower";  // id, or "sector-union:" followed by the union JSON
    KernelConvention convention = KernelConvention::Greens;
    std::string quantity = "hess12";
    std::optional<double> direction;  // radians; per-example default when unset
    std::optional<int> k_min, k_max;  // per-example defaults when unset
    QuadratureConfig quadrature;
    std::string csv_path, json_path;
    std::uint64_t seed = 42;

    // throws ConfigError
    void validate() const;
    nlohmann::json to_json() const;
    static ScenarioConfig from_json(const nlohmann::json& doc);
    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// What an example id resolves to: a source field, or a closed-form potential.
struct ResolvedExample {
    std::string id;
    std::optional<Field2D> field;
    std::optional<AnalyticExample> analytic;
    double default_direction = 0.0;
    int default_k_min = 2, default_k_max = 9;
    std::optional<int> trusted_k_max;
};

// harmonic-xy, harmonic-x2-y2, fourier, square, square-mirrored, prop46, flower, sector-union:{...}
ResolvedExample resolve_example(const std::string& id);
std::vector<std::string> example_ids();

// largest m <= 12 under which the union is invariant
int detect_symmetry_order(const SectorUnion& a);
// bisector of the widest angular gap between sector edges
double probe_direction(const SectorUnion& a);
SectorUnion parse_sector_union(const std::string& text);

struct ProbeRun {
    BlowupReport report;
    std::string example;
    KernelConvention convention = KernelConvention::Greens;
    std::uint64_t seed = 42;
    double direction = 0.0;
    int k_min = 0, k_max = 0;
    nlohmann::json summary() const;  // report summary plus the scenario it came from
};
ProbeRun run_probe(const ScenarioConfig& cfg);

struct PropertyResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double limit = 0.0;
};

struct VerifyReport {
    std::string suite;
    std::uint64_t seed = 42;
    std::vector<PropertyResult> properties;
    bool pass() const;
    nlohmann::json to_json() const;
};

enum class InjectedFault { None, KernelSign };
InjectedFault parse_fault(const std::string& s);

struct VerifyOptions {
    std::uint64_t seed = 42;
    InjectedFault fault = InjectedFault::None;
    QuadratureConfig quadrature{1e-11, 1e-13, 24, 1e-6};
};

// kernels, identity, appendix, bmo, all
VerifyReport verify_suite(const std::string& suite, const VerifyOptions& opts = {});

}  // namespace symlap
