#include "symlap/cli.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "symlap/borderline1d.hpp"
#include "symlap/errors.hpp"
#include "symlap/sectors.hpp"

namespace symlap {

using nlohmann::json;

std::string to_string(KernelConvention conv) { return conv == KernelConvention::PaperRaw ? "paper-raw" : "greens"; }

KernelConvention parse_convention(const std::string& s) {
    if (s == "paper-raw") return KernelConvention::PaperRaw;
    if (s == "greens") return KernelConvention::Greens;
    throw ConfigError("unknown convention '" + s + "' (paper-raw|greens)");
}

// ---- config

void ScenarioConfig::validate() const {
    if (example.empty()) throw ConfigError("example id is empty");
    quadrature.validate();
    try {
        (void)ProbeQuantity::parse(quantity);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("bad quantity: ") + e.what());
    }
    if (direction && !std::isfinite(*direction)) throw ConfigError("direction must be finite");
    if (k_min && *k_min < 0) throw ConfigError("k_min must be >= 0");
    if (k_max && *k_max > 40) throw ConfigError("k_max must be <= 40");
    if (k_min && k_max && *k_max - *k_min < 5) throw ConfigError("k_max - k_min must be at least 5");
}

json ScenarioConfig::to_json() const {
    json j;
    j["example"] = example;
    j["convention"] = to_string(convention);
    j["quantity"] = quantity;
    j["direction"] = direction ? json(*direction) : json(nullptr);
    j["k_min"] = k_min ? json(*k_min) : json(nullptr);
    j["k_max"] = k_max ? json(*k_max) : json(nullptr);
    j["quadrature"] = {{"rel_tol", quadrature.rel_tol},
            {"abs_tol", quadrature.abs_tol},
            {"max_subdivisions", quadrature.max_subdivisions},
            {"singular_split_radius", quadrature.singular_split_radius}};
    j["csv"] = csv_path;
    j["json"] = json_path;
    j["seed"] = seed;
    return j;
}

ScenarioConfig ScenarioConfig::from_json(const json& doc) {
    static const std::vector<std::string> known = {"example", "convention", "quantity", "direction", "k_min",
            "k_max", "quadrature", "csv", "json", "seed"};
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    ScenarioConfig c;
    try {
        for (const auto& [key, value] : doc.items()) {
            if (std::find(known.begin(), known.end(), key) == known.end())
                throw ConfigError("unknown config key '" + key + "'");
            (void)value;
        }
        if (doc.contains("example")) c.example = doc.at("example").get<std::string>();
        if (doc.contains("convention")) c.convention = parse_convention(doc.at("convention").get<std::string>());
        if (doc.contains("quantity")) c.quantity = doc.at("quantity").get<std::string>();
        if (doc.contains("direction") && !doc.at("direction").is_null()) c.direction = doc.at("direction").get<double>();
        if (doc.contains("k_min") && !doc.at("k_min").is_null()) c.k_min = doc.at("k_min").get<int>();
        if (doc.contains("k_max") && !doc.at("k_max").is_null()) c.k_max = doc.at("k_max").get<int>();
        if (doc.contains("quadrature")) {
            const json& q = doc.at("quadrature");
            if (q.contains("rel_tol")) c.quadrature.rel_tol = q.at("rel_tol").get<double>();
            if (q.contains("abs_tol")) c.quadrature.abs_tol = q.at("abs_tol").get<double>();
            if (q.contains("max_subdivisions")) c.quadrature.max_subdivisions = q.at("max_subdivisions").get<int>();
            if (q.contains("singular_split_radius"))
                c.quadrature.singular_split_radius = q.at("singular_split_radius").get<double>();
        }
        if (doc.contains("csv")) c.csv_path = doc.at("csv").get<std::string>();
        if (doc.contains("json")) c.json_path = doc.at("json").get<std::string>();
        if (doc.contains("seed")) c.seed = doc.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    c.validate();
    return c;
}

// ---- examples

SectorUnion parse_sector_union(const std::string& text) {
    try {
        return SectorUnion::from_json(json::parse(text));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad sector union JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad sector union: ") + e.what());
    }
}

int detect_symmetry_order(const SectorUnion& a) {
    for (int m = 12; m >= 2; --m)
        if (a.invariant_under(m)) return m;
    return 1;
}

double probe_direction(const SectorUnion& a) {
    std::vector<double> edges;
    for (const auto& s : a.sectors()) {
        if (s.full_disc()) continue;
        edges.push_back(normalize_angle(s.theta_min()));
        edges.push_back(normalize_angle(s.theta_max()));
    }
    if (edges.empty()) return 0.0;
    std::sort(edges.begin(), edges.end());
    double best_gap = -1, best_mid = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const double lo = edges[i];
        const double hi = i + 1 < edges.size() ? edges[i + 1] : edges[0] + 2 * std::numbers::pi;
        if (hi - lo > best_gap + 1e-12) {
            best_gap = hi - lo;
            best_mid = 0.5 * (lo + hi);
        }
    }
    return normalize_angle(best_mid);
}

std::vector<std::string> example_ids() {
    return {"harmonic-xy", "harmonic-x2-y2", "fourier", "square", "square-mirrored", "prop46", "flower",
            "sector-union:<json>"};
}

ResolvedExample resolve_example(const std::string& id) {
    constexpr double pi = std::numbers::pi;
    ResolvedExample r;
    r.id = id;
    const std::string prefix = "sector-union:";
    if (id.rfind(prefix, 0) == 0) {
        SectorUnion a = parse_sector_union(id.substr(prefix.size()));
        r.default_direction = probe_direction(a);
        // short-range terms fade like r; start deep enough for the log fit
        r.default_k_min = 8;
        r.default_k_max = 18;
        const int m = detect_symmetry_order(a);
        r.field = Field2D::sector_union(std::move(a), m);
        return r;
    }
    if (id == "harmonic-xy" || id == "harmonic-x2-y2") {
        r.analytic = harmonic_log_example(id == "harmonic-xy" ? HarmonicChoice::XY : HarmonicChoice::X2minusY2);
        r.default_direction = id == "harmonic-xy" ? pi / 4 : 0.0;
        r.default_k_max = 12;
    } else if (id == "fourier") {
        FourierExample f(256);
        r.analytic = f.as_example();
        r.default_direction = pi / 4;
        r.default_k_min = 1;
        r.default_k_max = std::max(f.trusted_k_max(), 6);
        r.trusted_k_max = f.trusted_k_max();
    } else if (id == "square" || id == "square-mirrored") {
        r.field = id == "square" ? square_example() : square_mirrored_example();
        r.default_direction = pi / 4;
        r.default_k_max = 12;
    } else if (id == "prop46") {
        r.analytic = Prop46Example(1).as_example();
        r.default_direction = 0.0;
    } else if (id == "flower") {
        r.field = flower_example();
        r.default_direction = pi / 6;  // petal axis
    } else {
        throw ConfigError("unknown example '" + id + "'");
    }
    return r;
}

// ---- probe

json ProbeRun::summary() const {
    json j = report.summary();
    j["example"] = example;
    j["convention"] = to_string(convention);
    j["seed"] = seed;
    j["direction"] = direction;
    j["k_min"] = k_min;
    j["k_max"] = k_max;
    return j;
}

ProbeRun run_probe(const ScenarioConfig& cfg) {
    cfg.validate();
    const ResolvedExample ex = resolve_example(cfg.example);
    ProbeRun run;
    run.example = cfg.example;
    run.convention = cfg.convention;
    run.seed = cfg.seed;
    run.direction = cfg.direction.value_or(ex.default_direction);
    run.k_min = cfg.k_min.value_or(ex.default_k_min);
    run.k_max = cfg.k_max.value_or(ex.default_k_max);
    if (run.k_max - run.k_min < 5) throw ConfigError("k_max - k_min must be at least 5");
    const ProbeQuantity q = ProbeQuantity::parse(cfg.quantity);
    const Point2d dir(std::cos(run.direction), std::sin(run.direction));
    if (ex.field)
        run.report = blowup_probe(*ex.field, q, dir, run.k_min, run.k_max, cfg.convention, cfg.quadrature);
    else
        run.report = blowup_probe(ex.analytic->oracle(), q, dir, run.k_min, run.k_max);
    if (ex.trusted_k_max) run.report.trusted_k_max = ex.trusted_k_max;
    return run;
}

// ---- verify

bool VerifyReport::pass() const {
    return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.pass; });
}

json VerifyReport::to_json() const {
    json props = json::array();
    for (const auto& p : properties)
        props.push_back({{"name", p.name}, {"status", p.pass ? "pass" : "fail"}, {"measured", p.measured},
                {"limit", p.limit}});
    return {{"suite", suite}, {"seed", seed}, {"pass", pass()}, {"properties", props}};
}

InjectedFault parse_fault(const std::string& s) {
    if (s.empty() || s == "none") return InjectedFault::None;
    if (s == "kernel-sign") return InjectedFault::KernelSign;
    throw ConfigError("unknown fault '" + s + "'");
}

namespace {

PropertyResult at_most(std::string name, double measured, double limit) {
    return {std::move(name), measured <= limit, measured, limit};
}

Point2d random_in_disc(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u(-radius, radius);
    for (;;) {
        Point2d p(u(rng), u(rng));
        if (p.norm() < radius) return p;
    }
}

void kernels_suite(VerifyReport& rep, const VerifyOptions& o) {
    std::mt19937_64 rng(o.seed);
    const double sign = o.fault == InjectedFault::KernelSign ? -1.0 : 1.0;
    double worst_rel = 0, worst_first = 0, worst_fifth = 0, worst_mfold = 0;
    const Rotation quarter(4);
    for (int n = 0; n < 100000; ++n) {
        const Point2d x = random_in_disc(rng, 10.0), y = random_in_disc(rng, 10.0);
        double scale = 0, dmin = 1e300;
        for (int i = 0; i < 4; ++i) {
            const double d = (x - quarter.apply(y, i)).norm();
            dmin = std::min(dmin, d);
            scale += 1.0 / d;
        }
        if (dmin < 1e-3) continue;  // away from the poles
        const Point2d sum = four_fold_kernel_sum(x, y);
        const Point2d closed = sign * four_fold_kernel_closed(x, y);
        worst_rel = std::max(worst_rel, (closed - sum).norm() / scale);
        const auto b = four_fold_numerator_bundles(x, y);
        const double xn = x.norm(), yn = y.norm();
        worst_first = std::max(worst_first, b.first.norm() / (12 * xn * std::pow(yn, 6) + 1e-300));
        worst_fifth = std::max(worst_fifth, b.fifth.norm() / (12 * std::pow(xn, 5) * yn * yn + 1e-300));
        worst_mfold = std::max(worst_mfold, (4.0 * m_fold_kernel(x, y, 4) - sum).norm() / scale);
    }
    rep.properties.push_back(at_most("four-fold closed form vs four-term sum (relative)", worst_rel, 1e-10));
    rep.properties.push_back(at_most("degree-1 numerator bundle vanishes (relative)", worst_first, 1e-12));
    rep.properties.push_back(at_most("degree-5 numerator bundle vanishes (relative)", worst_fifth, 1e-12));
    rep.properties.push_back(at_most("m-fold kernel at m=4 vs four-term sum (relative)", worst_mfold, 1e-12));
}

void identity_suite(VerifyReport& rep, const VerifyOptions& o) {
    std::mt19937_64 rng(o.seed + 1);
    std::uniform_int_distribution<int> mdist(3, 8);
    double worst = 0;
    for (int n = 0; n < 10000; ++n) {
        const Point2d x = random_in_disc(rng, 10.0), y = random_in_disc(rng, 10.0);
        const int m = mdist(rng);
        worst = std::max(worst, rotation_identity_residual(x, y, m) / (1 + x.norm() * y.squaredNorm()));
    }
    rep.properties.push_back(at_most("rotation identity, m in 3..8 (scaled residual)", worst, 1e-10));
    const double two = rotation_identity_defect(Point2d(1, 0), Point2d(1, 0), 2);
    rep.properties.push_back({"rotation identity fails at m=2, x=y=(1,0)", two > 0.5, two, 0.5});
}

void appendix_suite(VerifyReport& rep, const VerifyOptions& o) {
    for (double c : {0.5, 1.0, 2.0}) {
        const auto r = appendix_remainder_check(c, triangle_singular_form(c), 4, 10, o.quadrature);
        char name[96];
        std::snprintf(name, sizeof name, "triangle c=%g remainder Hessian slope", c);
        rep.properties.push_back(at_most(name, r.max_abs_slope(), 0.05));
    }
}

void bmo_suite(VerifyReport& rep, const VerifyOptions& o) {
    const std::size_t n = Grid1D::kDefaultSize;
    double worst_even = 0, worst_odd = 0;
    bool even_ok = true, odd_ok = true;
    for (const auto& f : random_even_family(100, n, o.seed)) {
        const auto c = even_rate_bound_check(f.values, derivative(f.values));
        even_ok = even_ok && c.holds;
        if (c.rhs > 0) worst_even = std::max(worst_even, c.lhs / c.rhs);
    }
    const auto odd = random_odd_family(100, n, o.seed + 7);
    for (const auto& f : odd) {
        const auto c = odd_sup_bound_check(f.values, f.C);
        odd_ok = odd_ok && c.holds;
        if (c.bound > 0) worst_odd = std::max(worst_odd, c.sup / c.bound);
    }
    rep.properties.push_back({"even rate bound, 100 random functions (lhs/rhs)", even_ok, worst_even, 1.1});
    rep.properties.push_back({"odd sup bound, 100 random functions (sup/bound)", odd_ok, worst_odd, 1.1});

    const Grid1D sign = Grid1D::sample([](double t) { return t > 0 ? 1.0 : -1.0; }, n);
    rep.properties.push_back(at_most("bmo of sign(t) equals 1", std::abs(bmo_norm(sign) - 1.0), 1e-12));

    double asym = 0, skew = 0;
    const double h = sign.spacing();
    for (std::size_t i = 0; i < 5; ++i) {
        const Grid1D& f = odd[i].values;
        const Grid1D Hf = hilbert_transform(f);
        asym = std::max(asym, asymmetry(Hf, false) / std::max(Hf.values.cwiseAbs().maxCoeff(), 1e-300));
        const Grid1D& g = odd[i + 5].values;
        const Grid1D gg = even_part(Grid1D(g.values + f.values.cwiseAbs(), g.half_width));
        const double lhs = h * Hf.values.dot(gg.values), rhs = -h * f.values.dot(hilbert_transform(gg).values);
        skew = std::max(skew, std::abs(lhs - rhs) / (h * f.values.norm() * gg.values.norm()));
    }
    rep.properties.push_back(at_most("Hilbert transform maps odd to even (relative asymmetry)", asym, 1e-6));
    rep.properties.push_back(at_most("Hilbert transform is skew-adjoint (relative)", skew, 1e-6));

    const double clip = 2.0 / static_cast<double>(n);
    const std::vector<std::function<double(double)>> split_cases = {
            [clip](double t) { return std::log(std::max(std::abs(t), clip)); },
            [](double t) { return 1.0 + std::atan(5 * t); },
            [clip](double t) {
                return std::log(std::max(std::abs(t), clip)) + (t > 0 ? 1 : -1) * std::min(-std::log(std::abs(t)), 4.0);
            }};
    double worst_split = 0;
    for (const auto& fn : split_cases) {
        try {
            worst_split = std::max(worst_split, fefferman_stein_split(Grid1D::sample(fn, n)).reconstruction_error);
        } catch (const ReconstructionError&) {
            worst_split = std::max(worst_split, 1.0);
        }
    }
    rep.properties.push_back(at_most("odd/even split reconstruction on the inner half (relative)", worst_split, 0.05));
}

}  // namespace

VerifyReport verify_suite(const std::string& suite, const VerifyOptions& opts) {
    VerifyReport rep;
    rep.suite = suite;
    rep.seed = opts.seed;
    const bool all = suite == "all";
    if (!all && suite != "kernels" && suite != "identity" && suite != "appendix" && suite != "bmo")
        throw ConfigError("unknown suite '" + suite + "' (kernels|identity|appendix|bmo|all)");
    if (all || suite == "kernels") kernels_suite(rep, opts);
    if (all || suite == "identity") identity_suite(rep, opts);
    if (all || suite == "appendix") appendix_suite(rep, opts);
    if (all || suite == "bmo") bmo_suite(rep, opts);
    return rep;
}

}  // namespace symlap
