// symlap: probes, classifier and invariant suites from the command line.
// Exit codes: 0 ok, 1 property failure, 2 quadrature did not converge, 3 bad configuration.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "symlap/cli.hpp"
#include "symlap/errors.hpp"
#include "symlap/sectors.hpp"

namespace {

constexpr int kOk = 0, kPropertyFailure = 1, kNoConvergence = 2, kConfigError = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw symlap::ConfigError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw symlap::ConfigError("cannot write '" + path + "'");
    out << text;
}

// run a command body and map library errors onto exit codes
template <typename F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const symlap::QuadratureError& e) {
        std::fprintf(stderr, "quadrature did not converge: %s (value %.6g, error %.3g)\n", e.what(), e.value, e.error);
        return kNoConvergence;
    } catch (const symlap::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kPropertyFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Potentials of symmetric sources: blow-up probes, sector classifier, invariant checks"};
    app.require_subcommand(1);

    // probe
    auto* probe = app.add_subcommand("probe", "fit the blow-up law of a derivative near the origin");
    std::string example, quantity, convention, csv_path, json_path, config_path;
    double direction = 0, rel_tol = 0, abs_tol = 0, split_radius = 0;
    int k_min = 0, k_max = 0, max_sub = 0;
    std::uint64_t seed = 42;
    auto* o_example = probe->add_option("--example", example, "example id or sector-union:<json>");
    auto* o_quantity = probe->add_option("--quantity", quantity, "grad-over-r | grad-diff-over-r | hess11 | hess12 | hess22");
    auto* o_direction = probe->add_option("--direction", direction, "probe direction, radians");
    auto* o_kmin = probe->add_option("--kmin", k_min, "first dyadic level");
    auto* o_kmax = probe->add_option("--kmax", k_max, "last dyadic level");
    auto* o_conv = probe->add_option("--convention", convention, "paper-raw | greens");
    auto* o_rel = probe->add_option("--rel-tol", rel_tol);
    auto* o_abs = probe->add_option("--abs-tol", abs_tol);
    auto* o_sub = probe->add_option("--max-subdivisions", max_sub);
    auto* o_split = probe->add_option("--singular-split-radius", split_radius);
    auto* o_csv = probe->add_option("--csv", csv_path, "write k,radius,value,fitted here");
    auto* o_json = probe->add_option("--json", json_path, "write the summary JSON here");
    auto* o_seed = probe->add_option("--seed", seed, "recorded in the report")->capture_default_str();
    probe->add_option("--config", config_path, "JSON scenario; flags override it");
    bool print_config = false;
    probe->add_flag("--print-config", print_config, "print the effective config and exit");

    // classify
    auto* classify = app.add_subcommand("classify", "decide W^{2,inf} regularity at 0 for a union of sectors");
    std::string union_arg;
    classify->add_option("union", union_arg, "sector union JSON, or a path to a file holding it")->required();

    // verify
    auto* verify = app.add_subcommand("verify", "run an invariant suite and print a JSON report");
    std::string suite = "all", fault, report_path;
    std::uint64_t verify_seed = 42;
    verify->add_option("suite", suite, "kernels | identity | appendix | bmo | all")->capture_default_str();
    verify->add_option("--seed", verify_seed)->capture_default_str();
    verify->add_option("--inject-fault", fault, "negative control: kernel-sign");
    verify->add_option("--report", report_path, "also write the report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    if (*probe) {
        return guarded([&] {
            symlap::ScenarioConfig cfg;
            if (!config_path.empty()) cfg = symlap::ScenarioConfig::from_json(nlohmann::json::parse(read_file(config_path)));
            if (*o_example) cfg.example = example;
            if (*o_quantity) cfg.quantity = quantity;
            if (*o_direction) cfg.direction = direction;
            if (*o_kmin) cfg.k_min = k_min;
            if (*o_kmax) cfg.k_max = k_max;
            if (*o_conv) cfg.convention = symlap::parse_convention(convention);
            if (*o_rel) cfg.quadrature.rel_tol = rel_tol;
            if (*o_abs) cfg.quadrature.abs_tol = abs_tol;
            if (*o_sub) cfg.quadrature.max_subdivisions = max_sub;
            if (*o_split) cfg.quadrature.singular_split_radius = split_radius;
            if (*o_csv) cfg.csv_path = csv_path;
            if (*o_json) cfg.json_path = json_path;
            if (*o_seed) cfg.seed = seed;
            cfg.validate();
            if (print_config) {
                std::cout << cfg.to_json().dump(2) << "\n";
                return kOk;
            }
            const auto run = symlap::run_probe(cfg);
            const std::string summary = run.summary().dump(2) + "\n";
            if (!cfg.csv_path.empty()) write_file(cfg.csv_path, run.report.csv());
            if (!cfg.json_path.empty()) write_file(cfg.json_path, summary);
            std::cout << summary;
            return kOk;
        });
    }

    if (*classify) {
        return guarded([&] {
            const std::string text = !union_arg.empty() && union_arg.front() == '{' ? union_arg : read_file(union_arg);
            const auto report = symlap::classify_bounded(symlap::parse_sector_union(text));
            std::cout << report.to_json().dump(2) << "\n";
            return kOk;
        });
    }

    return guarded([&] {
        symlap::VerifyOptions opts;
        opts.seed = verify_seed;
        opts.fault = symlap::parse_fault(fault);
        const auto report = symlap::verify_suite(suite, opts);
        const std::string text = report.to_json().dump(2) + "\n";
        if (!report_path.empty()) write_file(report_path, text);
        std::cout << text;
        return report.pass() ? kOk : kPropertyFailure;
    });
}
