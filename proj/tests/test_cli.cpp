#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "symlap/cli.hpp"
#include "symlap/errors.hpp"

using namespace symlap;
namespace fs = std::filesystem;
constexpr double pi = std::numbers::pi;

namespace {
int run(const std::string& args) {
    const std::string cmd = std::string(SYMLAP_CLI) + " " + args + " > /dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch() {
    const fs::path d = fs::temp_directory_path() / ("symlap_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}
}  // namespace

TEST_CASE("conventions") {
    CHECK(parse_convention("paper-raw") == KernelConvention::PaperRaw);
    CHECK(parse_convention("greens") == KernelConvention::Greens);
    CHECK(to_string(KernelConvention::PaperRaw) == "paper-raw");
    CHECK_THROWS_AS(parse_convention("Greens"), ConfigError);
}

TEST_CASE("scenario config") {
    ScenarioConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(ScenarioConfig::from_json(c.to_json()) == c);
    CHECK(c.to_json()["direction"].is_null());

    c.example = "square";
    c.quantity = "hess11";
    c.direction = 0.25;
    c.k_min = 3;
    c.k_max = 11;
    c.convention = KernelConvention::PaperRaw;
    c.quadrature.rel_tol = 1e-9;
    c.seed = 7;
    CHECK(ScenarioConfig::from_json(c.to_json()) == c);

    auto j = c.to_json();
    j["speed"] = 3;
    CHECK_THROWS_AS(ScenarioConfig::from_json(j), ConfigError);

    ScenarioConfig bad = c;
    bad.k_max = 6;  // fewer than six levels
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.quantity = "hess33";
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.k_min = -1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.direction = std::nan("");
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("examples and sector unions") {
    for (const auto& id : example_ids()) {
        if (id.rfind("sector-union", 0) == 0) continue;
        const auto r = resolve_example(id);
        CHECK(r.id == id);
        CHECK((r.field.has_value() || r.analytic.has_value()));
    }
    CHECK(resolve_example("fourier").trusted_k_max == 6);
    CHECK(resolve_example("flower").default_direction == doctest::Approx(pi / 6));
    CHECK_THROWS_AS(resolve_example("teapot"), ConfigError);
    CHECK_THROWS_AS(resolve_example("sector-union:{not json"), ConfigError);

    const auto r = resolve_example(R"(sector-union:{"sectors":[{"alpha":0.5235987755982988,"beta":0}]})");
    REQUIRE(r.field.has_value());
    CHECK(r.default_k_min == 8);
    CHECK(r.default_k_max == 18);

    const SectorUnion b({Sector(pi / 6, 0), Sector(pi / 6, pi)});
    CHECK(probe_direction(b) == doctest::Approx(pi / 2));
    const SectorUnion p3({Sector(pi / 6, 0), Sector(pi / 6, 2 * pi / 3), Sector(pi / 6, 4 * pi / 3)});
    CHECK(detect_symmetry_order(p3) == 3);
    CHECK(detect_symmetry_order(b) == 2);
    CHECK(detect_symmetry_order(SectorUnion({Sector(0.3, 0.1)})) == 1);
    CHECK(parse_sector_union(p3.to_json().dump()) == p3);
    // overlapping sectors are rejected as bad input
    CHECK_THROWS_AS(parse_sector_union(R"({"sectors":[{"alpha":1,"beta":0},{"alpha":1,"beta":0.5}]})"), ConfigError);
}

TEST_CASE("probe runs are deterministic") {
    ScenarioConfig c;
    c.example = "harmonic-xy";
    c.quantity = "grad-over-r";
    const auto a = run_probe(c), b = run_probe(c);
    CHECK(a.summary().dump() == b.summary().dump());
    CHECK(a.report.csv() == b.report.csv());
    CHECK(a.report.model == GrowthModel::Log);
    const auto s = a.summary();
    for (const char* k : {"model", "slope", "r_squared", "example", "convention", "seed", "direction", "k_min", "k_max"})
        CHECK(s.contains(k));
}

TEST_CASE("verify suites in process") {
    const auto k = verify_suite("kernels");
    CHECK(k.pass());
    const auto j = k.to_json();
    CHECK(j["suite"] == "kernels");
    CHECK(j["properties"].size() >= 3);
    VerifyOptions bad;
    bad.fault = InjectedFault::KernelSign;
    CHECK_FALSE(verify_suite("kernels", bad).pass());
    CHECK(verify_suite("identity").pass());
    CHECK_THROWS_AS(verify_suite("everything"), ConfigError);
    CHECK_THROWS_AS(parse_fault("gremlins"), ConfigError);
}

TEST_CASE("command line") {
    const fs::path d = scratch();
    CHECK(run("--help") == 0);
    CHECK(run("") == 3);
    CHECK(run("probe --example teapot") == 3);
    CHECK(run("probe --example flower --kmin 2 --kmax 4") == 3);
    CHECK(run("probe --example flower --convention weird") == 3);
    CHECK(run("probe --example square --rel-tol 1e-15 --abs-tol 1e-17 --max-subdivisions 4 --kmin 2 --kmax 8") == 2);
    CHECK(run("verify kernels") == 0);
    CHECK(run("verify kernels --inject-fault kernel-sign") == 1);
    CHECK(run("classify '{\"sectors\":[{\"alpha\":0.5235987755982988,\"beta\":0}]}'") == 0);
    CHECK(run("classify '{\"sectors\":[{\"alpha\":1,\"beta\":0},{\"alpha\":1,\"beta\":0.5}]}'") == 3);

    // csv output is byte-identical across runs
    const fs::path c1 = d / "a.csv", c2 = d / "b.csv", js = d / "s.json";
    const std::string args = "probe --example harmonic-xy --quantity grad-over-r --json " + js.string() + " --csv ";
    REQUIRE(run(args + c1.string()) == 0);
    REQUIRE(run(args + c2.string()) == 0);
    const std::string a = slurp(c1);
    CHECK(a == slurp(c2));
    CHECK(a.rfind("k,radius,value,fitted\n", 0) == 0);
    CHECK(a.find('\r') == std::string::npos);
    const auto summary = nlohmann::json::parse(slurp(js));
    CHECK(summary["model"] == "Log");

    // a config file, overridden by a flag
    ScenarioConfig cfg;
    cfg.example = "harmonic-xy";
    cfg.quantity = "grad-over-r";
    cfg.k_max = 10;
    const fs::path cf = d / "cfg.json";
    std::ofstream(cf) << cfg.to_json().dump();
    const fs::path out = d / "eff.json";
    REQUIRE(std::system((std::string(SYMLAP_CLI) + " probe --config " + cf.string() + " --kmax 11 --print-config > " +
                         out.string()).c_str()) == 0);
    const auto eff = nlohmann::json::parse(slurp(out));
    CHECK(eff["example"] == "harmonic-xy");
    CHECK(eff["k_max"] == 11);
    fs::remove_all(d);
}
