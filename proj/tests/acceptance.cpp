// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "twisted/suites.hpp"

using namespace twisted;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        notes.push_back(std::string(ok ? "ok " : "FAILED ") + what);
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

/// Requires the named suite property to be present and passing.
void require_property(Outcome& o, const SuiteReport& r, const std::string& name, std::size_t min_samples = 0) {
    const auto* p = r.find(name);
    if (!p) {
        o.require(false, "missing property '" + name + "'");
        return;
    }
    std::string what = "'" + name + "' worst=" + fmt(p->worst) + " tol=" + fmt(p->tolerance) + " n=" + std::to_string(p->samples);
    if (!p->pass && !p->witnesses.empty()) what += " witness: " + p->witnesses.front();
    o.require(p->pass, what);
    if (min_samples) o.require(p->samples >= min_samples, name + ": at least " + std::to_string(min_samples) + " samples");
}

Outcome algebraic_exactness() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = algebra_suite();
    const double elapsed = seconds_since(t0);
    const std::vector<std::string> laws{"cocycle identity and normalization", "delta_g * delta_h = sigma(g,h) delta_gh",
                                        "unit delta_e", "associativity", "involution (a*b)^* = b^* a^*, (a^*)^* = a",
                                        "b_z multiplicative and star-preserving"};
    const auto s3 = symmetric_group(3);
    for (const auto& f : fixtures::algebra_fixtures())
        for (const auto& law : laws) {
            const auto name = "[" + f.name + "] " + law;
            // finite fixtures enumerate all triples for the cocycle law (216 < 1000)
            const bool exhaustive = law.rfind("cocycle", 0) == 0 && f.sigma.group()->is_finite();
            require_property(o, r, name, exhaustive ? 0 : 1000);
        }
    o.require(r.pass(), "every algebra property passes");
    o.require(elapsed < 10.0, "runtime " + fmt(elapsed) + " s < 10 s");
    return o;
}

Outcome gauge_independence() {
    Outcome o;
    const auto r = multiplier_suite();
    require_property(o, r, "gauge independence: landau = symmetric * dz (explicit z)");
    require_property(o, r, "geometric multiplier independent of the base point (9 points, radius-4 ball)");
    for (const auto* name : {"gauge independence: landau = symmetric * dz (explicit z)",
                             "geometric multiplier independent of the base point (9 points, radius-4 ball)"})
        if (const auto* p = r.find(name)) o.require(p->tolerance == 0.0 && p->worst == 0.0, std::string(name) + " exact");
    return o;
}

Outcome trace_laws() {
    Outcome o;
    const auto r = traces_suite();
    require_property(o, r, "tr2 trace property (basis pairs, exact)");
    require_property(o, r, "tr2 invariant under b_chi for characters (exact)");
    require_property(o, r, "product trace on A5 x Z/3: formula and invariance under all characters");
    require_property(o, r, "H = Gamma: tau_{u,Gamma} independent of u of fixed dimension");
    require_property(o, r, "delocalization flags");
    if (const auto* p = r.find("H = Gamma: tau_{u,Gamma} independent of u of fixed dimension"))
        o.require(p->tolerance <= 1e-10, "representation independence tolerance <= 1e-10");
    return o;
}

Outcome bloch_and_butterfly() {
    Outcome o;
    const auto r = representations_suite();
    require_property(o, r, "theta=0 band [-4,4] and theta=1/2 edges +-2sqrt2 (N=512 and N=128)");
    require_property(o, r, "q bands for theta = p/q, q <= 8 (N=64)");
    require_property(o, r, "moment matching: fiber averages converge to tr2(H^n) with order >= 1.8");
    require_property(o, r, "tr2(H^n) equals the magnetic lattice path count (n <= 8)");

    // tr2(H^4) at theta = 1/2 from the algebra product and from the path count
    const auto h = harper_element(Rational(1, 2));
    const Complex algebraic = h.power(4).coefficient(GroupElement{0, 0});
    const Complex paths = lattice_path_moment(Rational(1, 2), 4);
    o.require(std::abs(algebraic - paths) <= 1e-12, "tr2(H^4) algebra product = path count (" + fmt(algebraic.real()) + ")");
    o.require(std::abs(algebraic - 28.0) <= 1e-12,
              "tr2(H^4) = 28 at theta=1/2: computed " + fmt(algebraic.real()) + " (28 + 8 cos(2 pi theta) = 20)");

    const auto t0 = std::chrono::steady_clock::now();
    const auto spectra = butterfly(8, 128);
    std::ostringstream csv;
    write_butterfly_csv(csv, spectra);
    const double elapsed = seconds_since(t0);
    std::size_t bands = 0;
    for (const auto& s : spectra) bands += s.band_ranges.size();
    o.require(!csv.str().empty() && bands > 0, "butterfly qmax=8 N=128: " + std::to_string(spectra.size()) + " fluxes");
    o.require(elapsed < 60.0, "butterfly runtime " + fmt(elapsed) + " s < 60 s");
    return o;
}

Outcome single_property(const SuiteReport& r, const std::vector<std::string>& names) {
    Outcome o;
    for (const auto& n : names) require_property(o, r, n);
    return o;
}

// ---------------------------------------------------------------------------
// CLI determinism

int run_cli(const std::string& args) {
    const std::string cmd = std::string(TWISTED_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome cli_determinism() {
    Outcome o;
    const std::string data = TWISTED_DATA;
    const auto dir = std::filesystem::temp_directory_path() / ("twisted-acceptance-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const std::vector<std::pair<std::string, int>> commands{
        {"verify", 0},
        {"--seed 12345 verify --suite algebra --samples 200", 0},
        {"--config " + data + "/corrupted_s3.json verify", 1},
        {"butterfly --qmax 8 --kgrid 32", 0},
        {"--config " + data + "/eta_matrix.json eta", 0},
        {"--eta-normalization full --config " + data + "/eta_harper.json eta", 0},
        {"--config " + data + "/eta_harper.json eta --s-grid 0,1/8,1/4", 0},
        {"--config " + data + "/spectral_flow_linear.json spectral-flow", 0},
        {"--config " + data + "/betti_cycle.json betti", 0},
        {"--config " + data + "/sobolev_delta.json sobolev --s-grid 0,1/2,1,3/2", 0},
        {"--config " + data + "/pairing_circle.json pairing-circle", 0},
        {"pairing-circle --grid 512 --jumps 2,-1,0", 0},
    };
    for (std::size_t i = 0; i < commands.size(); ++i) {
        const auto& [args, code] = commands[i];
        const auto a = dir / ("first" + std::to_string(i)), b = dir / ("second" + std::to_string(i));
        const int ca = run_cli("--out " + a.string() + " " + args);
        const int cb = run_cli("--out " + b.string() + " " + args);
        const auto sa = slurp(a), sb = slurp(b);
        o.require(ca == code && cb == code && !sa.empty() && sa == sb,
                  "'" + args + "' exit " + std::to_string(ca) + "/" + std::to_string(cb) + ", " + std::to_string(sa.size()) +
                      " bytes, identical=" + (sa == sb ? "yes" : "no"));
    }
    std::filesystem::remove_all(dir);
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        std::string title;
        std::function<Outcome()> run;
    };
    // suites shared by several criteria are run once
    std::optional<SuiteReport> spectral, cohomology, mishchenko;
    auto spec = [&]() -> const SuiteReport& { return spectral ? *spectral : *(spectral = spectral_suite()); };
    auto coho = [&]() -> const SuiteReport& { return cohomology ? *cohomology : *(cohomology = cohomology_suite()); };

    const std::vector<Criterion> criteria{
        {1, "algebraic exactness suite", algebraic_exactness},
        {2, "gauge independence", gauge_independence},
        {3, "trace laws", trace_laws},
        {4, "Hofstadter/Bloch spectra and moments", bloch_and_butterfly},
        {5, "eta engine",
         [&] {
             return single_property(spec(), {"eta quadrature matches the closed form (200 random matrices)",
                                             "eta(-A) = -eta(A) and eta(U^* A U) = eta(A)"});
         }},
        {6, "spectral flow",
         [&] {
             return single_property(
                 spec(), {"spectral flow: tracking equals the eta/kernel formula (100 random 12x12 paths, diag path +1)"});
         }},
        {7, "McKean-Singer",
         [&] { return single_property(spec(), {"McKean-Singer: supertrace constant on a log-t grid and equal to the index"}); }},
        {8, "product formula",
         [&] { return single_property(spec(), {"product formula: eta(z_N D_L + D_N) = eta(D_L) ind(D_N)"}); }},
        {9, "cohomology transfer",
         [&] {
             return single_property(coho(), {"b^t tau_c = tau_{dc} (area cocycle, theta in {0, 1/3}, 500 tuples)",
                                             "localization: tau_c vanishes off product e; delocalized functionals stay delocalized"});
         }},
        {10, "Sobolev/derivation chain",
         [&] {
             return single_property(coho(),
                                    {"derivation chain: exact identity, l(g)^i on deltas, norm bound with reported constant"});
         }},
        {11, "Mishchenko projection",
         [&] {
             if (!mishchenko) mishchenko = mishchenko_suite();
             return single_property(*mishchenko, {"circle covers: P^2 = P, P^* = P (exact phases, coefficients <= 1e-13)",
                                                  "torus cover with magnetic sigma^s (s in {1/3, 1}, theta=1): P^2 = P, P^* = P",
                                                  "rank_trace(tr2) = 1; tau<g> = 0 for g != e",
                                                  "Lott pairing on the circle equals the winding number (N=1024)"});
         }},
        {12, "CLI determinism", cli_determinism},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        if (!o.pass) ++failed;
        std::cout << "criterion " << c.id << " [" << (o.pass ? "PASS" : "FAIL") << "] " << c.title << " (" << fmt(seconds_since(t0))
                  << " s)\n";
        for (const auto& n : o.notes) std::cout << "    " << n << "\n";
        std::cout.flush();
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << "\n";
    return failed ? 1 : 0;
}
