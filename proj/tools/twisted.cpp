// twisted: verification suites and datasets for twisted group algebras.
//
// Exit codes: 0 success, 1 suite or computation failure, 2 configuration error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "twisted/twisted.hpp"

using namespace twisted;

namespace {

constexpr std::uint64_t default_seed = 20240601;

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string eta_normalization = "half";
    std::string s_grid;
};

class Failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Json load_config(const Globals& g) {
    if (g.config_path.empty()) return Json::object();
    auto j = load_json_file(g.config_path);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    return j;
}

std::uint64_t seed_of(const Globals& g, const Json& cfg) {
    if (g.seed) return *g.seed;
    if (cfg.contains("seed")) return detail::translate([&] { return cfg.at("seed").get<std::uint64_t>(); });
    return default_seed;
}

EtaNormalization normalization_of(const Globals& g, const Json& cfg) {
    const auto name = cfg.contains("eta_normalization") && g.eta_normalization == "half"
                          ? cfg.at("eta_normalization").get<std::string>()
                          : g.eta_normalization;
    return detail::translate([&] { return parse_eta_normalization(name); });
}

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw ConfigError("cannot write output file '" + g.out + "'");
    f << text;
    if (!f) throw ConfigError("failed writing output file '" + g.out + "'");
}

std::string dump(const OrderedJson& j) { return j.dump(2) + "\n"; }

Group group_of(const Json& cfg, const std::string& flag, const char* fallback) {
    if (!flag.empty()) return group_from_name(flag);
    if (cfg.contains("group")) {
        const auto& j = cfg.at("group");
        return j.is_string() ? group_from_name(j.get<std::string>()) : group_from_json(j);
    }
    return group_from_name(fallback);
}

Multiplier multiplier_of(const Group& G, const Json& cfg, const std::string& flag) {
    if (!flag.empty()) return multiplier_from_name(G, flag);
    if (cfg.contains("multiplier")) {
        const auto& j = cfg.at("multiplier");
        return j.is_string() ? multiplier_from_name(G, j.get<std::string>()) : multiplier_from_json(G, j);
    }
    return trivial_multiplier(G);
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::stringstream ss(item);
        std::string part;
        while (std::getline(ss, part, ','))
            if (!part.empty()) out.push_back(part);
    }
    return out;
}

// ---------------------------------------------------------------------------

struct VerifyOptions {
    std::vector<std::string> suites;
    std::string group;
    std::string multiplier;
    std::optional<std::size_t> samples;
};

int cmd_verify(const Globals& g, const VerifyOptions& o) {
    const auto cfg = load_config(g);
    SuiteConfig sc;
    sc.seed = seed_of(g, cfg);
    sc.eta_normalization = normalization_of(g, cfg);
    if (o.samples) sc.samples = *o.samples;
    else if (cfg.contains("samples")) sc.samples = detail::translate([&] { return cfg.at("samples").get<std::size_t>(); });
    if (sc.samples == 0) throw ConfigError("samples must be positive");

    auto names = split_list(o.suites);
    if (names.empty() && cfg.contains("suites"))
        names = detail::translate([&] { return cfg.at("suites").get<std::vector<std::string>>(); });
    if (names.empty()) names = suite_names();
    for (const auto& n : names)
        if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end())
            throw ConfigError("unknown suite '" + n + "'");

    const bool custom = !o.group.empty() || !o.multiplier.empty() || cfg.contains("group") || cfg.contains("multiplier");
    if (custom) {
        const auto G = group_of(cfg, o.group, "z2");
        const auto sigma = multiplier_of(G, cfg, o.multiplier);
        std::string label = o.multiplier;
        if (label.empty() && cfg.contains("multiplier"))
            label = cfg.at("multiplier").is_string() ? cfg.at("multiplier").get<std::string>() : cfg.at("multiplier").value("kind", "custom");
        sc.supplied = fixtures::NamedMultiplier{G->name() + "/" + (label.empty() ? "trivial" : label), sigma};
    }

    OrderedJson report;
    report["command"] = "verify";
    report["seed"] = sc.seed;
    report["samples"] = sc.samples;
    report["suites"] = OrderedJson::array();
    bool pass = true;
    for (const auto& n : names) {
        const auto r = run_suite(n, sc);
        pass = pass && r.pass();
        report["suites"].push_back(r.to_json());
    }
    report["pass"] = pass;
    emit(g, dump(report));
    if (!pass) {
        for (const auto& s : report["suites"])
            for (const auto& p : s["properties"])
                if (!p["pass"].get<bool>())
                    std::cerr << "FAIL " << s["suite"].get<std::string>() << ": " << p["name"].get<std::string>()
                              << (p["witnesses"].empty() ? "" : " [" + p["witnesses"][0].get<std::string>() + "]") << "\n";
    }
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct ButterflyOptions {
    std::optional<int> qmax;
    std::optional<int> kgrid;
};

int cmd_butterfly(const Globals& g, const ButterflyOptions& o) {
    const auto cfg = load_config(g);
    const int qmax = o.qmax ? *o.qmax : detail::translate([&] { return cfg.value("qmax", 8); });
    const int kgrid = o.kgrid ? *o.kgrid : detail::translate([&] { return cfg.value("kgrid", 64); });
    if (qmax < 1 || qmax > 64) throw ConfigError("qmax must lie in [1, 64]");
    if (kgrid < 1) throw ConfigError("kgrid must be positive");
    std::ostringstream os;
    write_butterfly_csv(os, butterfly(qmax, kgrid));
    emit(g, os.str());
    return 0;
}

// ---------------------------------------------------------------------------

AlgebraElement operator_element(const Multiplier& sigma, const Json& op) {
    const auto kind = op.value("kind", std::string("harper"));
    if (kind == "harper") {
        HarperCoefficients c;
        c.t_x = op.value("t_x", 1.0);
        c.t_y = op.value("t_y", 1.0);
        c.t_diag = op.value("t_diag", 0.0);
        c.onsite = op.value("onsite", 0.0);
        return harper_element(sigma, c);
    }
    if (kind == "element") return element_from_json(sigma, detail::field(op, "element"));
    throw ConfigError("unknown operator kind '" + kind + "'");
}

Multiplier operator_multiplier(const Json& op) {
    const auto z2 = GroupDescriptor::free_abelian(2);
    if (op.contains("multiplier")) {
        const auto& j = op.at("multiplier");
        return j.is_string() ? multiplier_from_name(z2, j.get<std::string>()) : multiplier_from_json(z2, j);
    }
    return multiplier_from_json(z2, {{"kind", "magnetic"},
                                     {"theta", op.value("theta", Json("0"))},
                                     {"gauge", op.value("gauge", std::string("landau"))}});
}

OrderedJson estimate_json(const EtaEstimate& e) {
    OrderedJson j;
    j["eta"] = e.eta;
    j["error_bound"] = e.error_bound;
    j["method"] = e.method;
    j["params"] = e.params;
    return j;
}

int cmd_eta(const Globals& g) {
    const auto cfg = load_config(g);
    const auto norm = normalization_of(g, cfg);
    const double zero_tol = cfg.value("zero_tol", 1e-9);
    OrderedJson out;
    out["command"] = "eta";
    out["normalization"] = norm == EtaNormalization::half ? "half" : "full";
    if (cfg.contains("matrix")) {
        const auto m = matrix_from_json(cfg.at("matrix"));
        if (!is_hermitian(m)) throw ConfigError("eta needs a Hermitian matrix");
        const RVector ev = eigvalsh(m);
        const auto method = cfg.value("method", std::string("closed-form"));
        if (method == "closed-form") {
            out.update(estimate_json({eta_closed_form(ev, zero_tol, norm), 0.0, "closed-form",
                                      "dim=" + std::to_string(m.rows())}));
        } else if (method == "quadrature") {
            const auto q = eta_quadrature(ev, 0.0, cfg.value("points", 64), zero_tol, 1e-10, norm);
            out.update(estimate_json({q.eta, q.tail_bound + q.discretization, "quadrature",
                                      "dim=" + std::to_string(m.rows()) + ",points=" + std::to_string(q.points)}));
        } else {
            throw ConfigError("unknown matrix eta method '" + method + "'");
        }
        emit(g, dump(out));
        return 0;
    }
    const auto& op = detail::field(cfg, "operator");
    const auto method = cfg.value("method", std::string("bloch"));
    const auto z2 = GroupDescriptor::free_abelian(2);
    const GroupElement cls = cfg.contains("class") ? element_from_json(z2, cfg.at("class")) : z2->identity();
    if (!g.s_grid.empty() || cfg.contains("s_grid")) {
        if (method != "bloch") throw ConfigError("germ tabulation uses the bloch method");
        const auto grid = !g.s_grid.empty() ? parse_rational_list(g.s_grid)
                                            : [&] {
                                                  std::vector<Rational> v;
                                                  for (const auto& q : cfg.at("s_grid")) v.push_back(rational_from_json(q));
                                                  return v;
                                              }();
        const auto base = operator_multiplier(op);
        const int n = cfg.value("grid", 32);
        out["method"] = "bloch";
        out["germ"] = OrderedJson::array();
        for (const auto& s : grid) {
            const auto sigma = power_family(base, s);
            const auto e = eta_operator_bloch(operator_element(sigma, op), n, cls, zero_tol, norm);
            OrderedJson row;
            row["s"] = s.str();
            row["eta"] = e.eta;
            row["error_bound"] = e.error_bound;
            row["params"] = e.params;
            out["germ"].push_back(row);
        }
        emit(g, dump(out));
        return 0;
    }
    const auto sigma = operator_multiplier(op);
    const auto h = operator_element(sigma, op);
    if (method == "bloch") {
        out.update(estimate_json(eta_operator_bloch(h, cfg.value("grid", 32), cls, zero_tol, norm)));
    } else if (method == "truncation") {
        out.update(estimate_json(eta_operator_truncation(h, cfg.value("radius", 8), cfg.value("step", 2), &cls, zero_tol, norm)));
    } else {
        throw ConfigError("unknown eta method '" + method + "'");
    }
    emit(g, dump(out));
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_spectral_flow(const Globals& g) {
    const auto cfg = load_config(g);
    const double zero_tol = cfg.value("zero_tol", 1e-9);
    SpectralPath path;
    if (cfg.contains("generator")) {
        const auto gen = cfg.at("generator").get<std::string>();
        if (gen != "linear") throw ConfigError("unknown path generator '" + gen + "'");
        path = SpectralPath::linear(matrix_from_json(detail::field(cfg, "A0")), matrix_from_json(detail::field(cfg, "A1")));
    } else {
        const auto& list = detail::field(cfg, "path");
        if (!list.is_array() || list.size() < 2) throw ConfigError("path needs at least two matrices");
        std::vector<CMatrix> mats;
        std::vector<double> params;
        for (std::size_t i = 0; i < list.size(); ++i) {
            mats.push_back(matrix_from_json(list[i]));
            params.push_back(static_cast<double>(i) / static_cast<double>(list.size() - 1));
        }
        params.back() = 1.0;
        path = SpectralPath::samples(params, mats);
    }
    const auto r = spectral_flow(path, zero_tol);
    if (r.tracked != r.formula)
        throw Failure("tracking count " + std::to_string(r.tracked) + " disagrees with the eta formula " + std::to_string(r.formula));
    OrderedJson out;
    out["command"] = "spectral-flow";
    out["sf"] = r.tracked;
    out["formula"] = r.formula;
    out["kernel_start"] = r.kernel_start;
    out["kernel_end"] = r.kernel_end;
    out["eta_start"] = r.eta_start;
    out["eta_end"] = r.eta_end;
    out["samples"] = r.samples;
    emit(g, dump(out));
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_betti(const Globals& g) {
    const auto cfg = load_config(g);
    const double zero_tol = cfg.value("zero_tol", 1e-9);
    BettiResult b;
    OrderedJson out;
    out["command"] = "betti";
    if (cfg.contains("complex")) {
        const auto kind = cfg.at("complex").get<std::string>();
        if (kind != "cycle") throw ConfigError("unknown complex '" + kind + "'");
        const int n = cfg.value("n", 20);
        if (n < 3) throw ConfigError("cycle needs n >= 3");
        const CMatrix d = cycle_incidence(n);
        b = twisted_betti(d.adjoint() * d, d * d.adjoint(), zero_tol);
        out["complex"] = "cycle";
        out["n"] = n;
    } else {
        b = twisted_betti(matrix_from_json(detail::field(cfg, "even")), matrix_from_json(detail::field(cfg, "odd")), zero_tol);
    }
    out["b_even"] = b.b_even;
    out["b_odd"] = b.b_odd;
    out["euler"] = b.euler();
    emit(g, dump(out));
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_sobolev(const Globals& g) {
    const auto cfg = load_config(g);
    const auto G = group_of(cfg, "", "z2");
    const auto sigma = multiplier_of(G, cfg, "");
    const auto a = element_from_json(sigma, detail::field(cfg, "element"));
    std::vector<double> s_grid{0.0, 0.5, 1.0, 1.5, 2.0};
    if (!g.s_grid.empty()) {
        s_grid.clear();
        for (const auto& q : parse_rational_list(g.s_grid)) s_grid.push_back(q.to_double());
    } else if (cfg.contains("s")) {
        s_grid = detail::translate([&] {
            return cfg.at("s").is_array() ? cfg.at("s").get<std::vector<double>>() : std::vector<double>{cfg.at("s").get<double>()};
        });
    }
    const int j_max = cfg.value("j_max", 2);
    const std::int64_t radius = cfg.value("radius", std::max<std::int64_t>(a.sup_support_length(), 0));
    const auto p = derivation_chain(a, j_max, radius, s_grid);
    OrderedJson out;
    out["command"] = "sobolev";
    out["norms"] = OrderedJson::array();
    for (std::size_t i = 0; i < p.s_grid.size(); ++i) out["norms"].push_back({{"s", p.s_grid[i]}, {"value", p.sobolev[i]}});
    out["j_max"] = p.j_max;
    out["radius"] = radius;
    out["derivation_norms"] = p.derivation_norms;
    out["exact_identity"] = p.exact_identity;
    out["bound_ratio"] = p.bound_ratio;
    out["constant_cauchy_schwarz"] = p.constant_cauchy_schwarz;
    out["constant_max_binomial"] = p.constant_max_binomial;
    emit(g, dump(out));
    return p.exact_identity ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct PairingOptions {
    std::optional<int> grid;
    std::string jumps;
    std::optional<double> ramp;
    std::string cochain;
};

int cmd_pairing_circle(const Globals& g, const PairingOptions& o) {
    const auto cfg = load_config(g);
    CircleCoverSpec spec = cfg.contains("cover") ? circle_spec_from_json(cfg.at("cover")) : CircleCoverSpec{1024, 2, {1, 0}, 0.25};
    if (o.grid) spec.grid = *o.grid;
    if (o.ramp) spec.ramp = *o.ramp;
    if (!o.jumps.empty()) {
        spec.jumps.clear();
        for (const auto& part : split_list({o.jumps}))
            spec.jumps.push_back(detail::translate([&] { return static_cast<std::int64_t>(std::stoll(part)); }));
        spec.patches = static_cast<int>(spec.jumps.size());
    }
    const auto cover = detail::translate([&] { return circle_cover(spec); });
    const auto name = !o.cochain.empty() ? o.cochain : cfg.value("cochain", std::string("linear-z(0)"));
    const auto c = cochain_from_name(name, cover.group, 1);
    const double pairing = lott_pairing_circle(cover, c);
    OrderedJson out;
    out["command"] = "pairing-circle";
    out["cover"] = circle_spec_to_json(spec);
    out["cochain"] = name;
    out["winding"] = spec.winding();
    out["pairing"] = pairing;
    emit(g, dump(out));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Twisted group algebras: verification suites, Bloch spectra, eta invariants and pairings"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "JSON configuration file");
    app.add_option("--seed", g.seed, "64-bit seed for randomized suites (default 20240601)");
    app.add_option("--out", g.out, "output file (default stdout)");
    app.add_option("--eta-normalization", g.eta_normalization, "half: sum sign/2, full: sum sign")
        ->check(CLI::IsMember({"half", "full"}));

    VerifyOptions vo;
    auto* verify = app.add_subcommand("verify", "run invariant suites and print a JSON report");
    verify->add_option("--suite", vo.suites, "suite name(s): algebra, multiplier, traces, spectral, cohomology, mishchenko, representations");
    verify->add_option("--group", vo.group, "group name: z, z2, s3, a5, c<n>, LxR");
    verify->add_option("--multiplier", vo.multiplier, "trivial, magnetic:p/q, magnetic-symmetric:p/q, geometric:p/q");
    verify->add_option("--samples", vo.samples, "randomized samples per law");

    ButterflyOptions bo;
    auto* bfly = app.add_subcommand("butterfly", "Harper spectra for all p/q with q <= qmax as CSV");
    bfly->add_option("--qmax", bo.qmax, "largest denominator (<= 64)");
    bfly->add_option("--kgrid", bo.kgrid, "momentum grid size per direction");

    auto* eta = app.add_subcommand("eta", "eta invariant of a matrix or of an operator over the magnetic torus");
    eta->add_option("--s-grid", g.s_grid, "tabulate the germ s -> eta over sigma^s, e.g. 0,1/8,1/4");
    auto* sf = app.add_subcommand("spectral-flow", "spectral flow of a path of Hermitian matrices");
    auto* betti = app.add_subcommand("betti", "twisted Betti numbers of Laplacian blocks");
    auto* sob = app.add_subcommand("sobolev", "Sobolev norms and derivation chain of an element");
    sob->add_option("--s-grid", g.s_grid, "Sobolev orders, e.g. 0,1/2,1");

    PairingOptions po;
    auto* pair = app.add_subcommand("pairing-circle", "pairing of the projection with a 1-cocycle on a circle cover");
    pair->add_option("--grid", po.grid, "grid points on the circle");
    pair->add_option("--jumps", po.jumps, "transition jumps per patch, e.g. 1,0");
    pair->add_option("--ramp", po.ramp, "bump ramp fraction in (0, 1/2)");
    pair->add_option("--cochain", po.cochain, "area-z2, constant, linear-z(k)");

    for (auto* sub : {verify, bfly, eta, sf, betti, sob, pair}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*verify) return cmd_verify(g, vo);
        if (*bfly) return cmd_butterfly(g, bo);
        if (*eta) return cmd_eta(g);
        if (*sf) return cmd_spectral_flow(g);
        if (*betti) return cmd_betti(g);
        if (*sob) return cmd_sobolev(g);
        if (*pair) return cmd_pairing_circle(g, po);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
