#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "twisted/cohomology.hpp"
#include "twisted/fixtures.hpp"
#include "twisted/json_io.hpp"
#include "twisted/mishchenko.hpp"
#include "twisted/representations.hpp"
#include "twisted/spectral.hpp"
#include "twisted/traces.hpp"

namespace twisted {

/// Outcome of one property. `worst` is the largest defect seen; `tolerance`
/// is 0 for exact comparisons.
struct PropertyResult {
    std::string name;
    bool pass = true;
    double tolerance = 0.0;
    double worst = 0.0;
    std::size_t samples = 0;
    std::vector<std::string> witnesses;
    std::string note;

    void record(double defect, const std::string& witness) {
        ++samples;
        if (std::isnan(defect)) defect = std::numeric_limits<double>::infinity();
        worst = std::max(worst, defect);
        if (defect > tolerance) fail(witness);
    }
    void check(bool ok, const std::string& witness) {
        ++samples;
        if (!ok) fail(witness);
    }
    void fail(const std::string& witness) {
        pass = false;
        if (witnesses.size() < 5) witnesses.push_back(witness);
    }

    [[nodiscard]] OrderedJson to_json() const {
        OrderedJson j;
        j["name"] = name;
        j["pass"] = pass;
        j["tolerance"] = tolerance;
        j["worst"] = worst;
        j["samples"] = samples;
        j["witnesses"] = witnesses;
        if (!note.empty()) j["note"] = note;
        return j;
    }
};

struct SuiteReport {
    std::string suite;
    std::vector<PropertyResult> properties;

    PropertyResult& add(std::string name, double tolerance = 0.0) {
        PropertyResult p;
        p.name = std::move(name);
        p.tolerance = tolerance;
        properties.push_back(std::move(p));
        return properties.back();
    }

    [[nodiscard]] bool pass() const {
        for (const auto& p : properties)
            if (!p.pass) return false;
        return true;
    }

    [[nodiscard]] const PropertyResult* find(const std::string& name) const {
        for (const auto& p : properties)
            if (p.name == name) return &p;
        return nullptr;
    }

    [[nodiscard]] OrderedJson to_json() const {
        OrderedJson j;
        j["suite"] = suite;
        j["pass"] = pass();
        j["properties"] = OrderedJson::array();
        for (const auto& p : properties) j["properties"].push_back(p.to_json());
        return j;
    }
};

struct SuiteConfig {
    std::uint64_t seed = 20240601;
    std::size_t samples = 1000;
    /// When set, the algebra/multiplier/traces suites run on this fixture
    /// instead of (algebra) or in addition to (multiplier, traces) the built-in ones.
    std::optional<fixtures::NamedMultiplier> supplied;
    EtaNormalization eta_normalization = EtaNormalization::half;
};

namespace detail {

inline std::string elems(const std::vector<GroupElement>& v) {
    std::string s;
    for (const auto& g : v) s += (s.empty() ? "" : ",") + g.str();
    return s;
}

inline std::vector<GroupElement> sample_pool(const Group& G) { return G->is_finite() ? G->elements() : G->ball(4); }

inline GroupElement pick(const std::vector<GroupElement>& pool, std::mt19937_64& rng) {
    return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
}

/// Relative element distance, scaled by the product of l1 norms involved.
inline double rel(const AlgebraElement& a, const AlgebraElement& b, double scale) {
    return a.distance(b) / std::max(1.0, scale);
}

inline CoboundaryData random_coboundary(const Group& G, std::mt19937_64& rng, std::size_t entries = 6) {
    const auto pool = sample_pool(G);
    std::map<GroupElement, Rational> m;
    std::uniform_int_distribution<std::int64_t> num(0, 11);
    for (std::size_t i = 0; i < entries; ++i) {
        const auto g = pick(pool, rng);
        if (G->is_identity(g)) continue;
        m[g] = Rational(num(rng), 12);
    }
    return CoboundaryData::from_entries(G, std::move(m));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// algebra

inline void algebra_laws(SuiteReport& r, const fixtures::NamedMultiplier& fx, const SuiteConfig& cfg) {
    const auto& sigma = fx.sigma;
    const auto& G = sigma.group();
    const std::string tag = "[" + fx.name + "] ";
    std::mt19937_64 rng(cfg.seed);
    const auto pool = detail::sample_pool(G);
    const std::size_t n = cfg.samples;
    auto rnd = [&] { return random_element(sigma, rng, 3, 5); };

    {
        auto& p = r.add(tag + "cocycle identity and normalization");
        const auto rep = verify_cocycle(sigma, n, cfg.seed);
        p.samples = rep.checked;
        p.worst = rep.worst_defect;
        p.note = rep.exhaustive ? "exhaustive" : "sampled";
        if (!rep.pass) p.fail(rep.detail);
    }
    {
        auto& p = r.add(tag + "delta_g * delta_h = sigma(g,h) delta_gh", 1e-12);
        for (std::size_t i = 0; i < n; ++i) {
            const auto g = detail::pick(pool, rng), h = detail::pick(pool, rng);
            const auto lhs = AlgebraElement::delta(sigma, g) * AlgebraElement::delta(sigma, h);
            const auto rhs = AlgebraElement::delta(sigma, G->multiply(g, h), sigma(g, h).value());
            p.record(lhs.distance(rhs), g.str() + "," + h.str());
        }
    }
    {
        auto& p = r.add(tag + "unit delta_e", 1e-12);
        const auto e = AlgebraElement::unit(sigma);
        for (std::size_t i = 0; i < n; ++i) {
            const auto a = rnd();
            p.record(std::max((e * a).distance(a), (a * e).distance(a)), a.str());
        }
    }
    {
        auto& p = r.add(tag + "associativity", 1e-12);
        for (std::size_t i = 0; i < n; ++i) {
            const auto a = rnd(), b = rnd(), c = rnd();
            p.record(detail::rel((a * b) * c, a * (b * c), a.l1_norm() * b.l1_norm() * c.l1_norm()), a.str());
        }
    }
    {
        auto& p = r.add(tag + "involution (a*b)^* = b^* a^*, (a^*)^* = a", 1e-12);
        for (std::size_t i = 0; i < n; ++i) {
            const auto a = rnd(), b = rnd();
            p.record(detail::rel((a * b).star(), b.star() * a.star(), a.l1_norm() * b.l1_norm()), a.str() + " ; " + b.str());
            p.record(a.star().star().distance(a), a.str());
        }
    }
    {
        auto& p = r.add(tag + "generators unitary: delta_g^* delta_g = delta_e", 1e-12);
        const auto e = AlgebraElement::unit(sigma);
        for (const auto& g : pool) {
            const auto d = AlgebraElement::delta(sigma, g);
            p.record(std::max((d.star() * d).distance(e), (d * d.star()).distance(e)), g.str());
        }
    }
    {
        auto& p = r.add(tag + "b_z multiplicative and star-preserving", 1e-12);
        for (std::size_t i = 0; i < n; ++i) {
            if (i % 50 == 0) (void)0;
            const auto z = detail::random_coboundary(G, rng);
            const auto sigma_prime = coboundary_twist(sigma, z);
            const auto a = random_element(sigma_prime, rng, 3, 4), b = random_element(sigma_prime, rng, 3, 4);
            const auto lhs = apply_projective_iso(z, a * b, sigma);
            const auto rhs = apply_projective_iso(z, a, sigma) * apply_projective_iso(z, b, sigma);
            p.record(detail::rel(lhs, rhs, a.l1_norm() * b.l1_norm()), z.key());
            p.record(apply_projective_iso(z, a.star(), sigma).distance(apply_projective_iso(z, a, sigma).star()), z.key());
            // inverse b_{z-bar}
            const auto back = apply_projective_iso(z.conj(), apply_projective_iso(z, a, sigma), sigma_prime);
            p.record(back.distance(a), z.key());
        }
    }
    {
        auto& p = r.add(tag + "l1(a*b) <= l1(a) l1(b)", 1e-12);
        for (std::size_t i = 0; i < n; ++i) {
            const auto a = rnd(), b = rnd();
            p.record(std::max(0.0, (a * b).l1_norm() - a.l1_norm() * b.l1_norm()), a.str());
        }
    }
    {
        auto& p = r.add(tag + "tr2(a*b) = tr2(b*a)", 1e-12);
        for (std::size_t i = 0; i < n; ++i) {
            const auto a = rnd(), b = rnd();
            p.record(std::abs((a * b).coefficient(G->identity()) - (b * a).coefficient(G->identity())) /
                         std::max(1.0, a.l1_norm() * b.l1_norm()),
                     a.str() + " ; " + b.str());
        }
    }
}

inline SuiteReport algebra_suite(const SuiteConfig& cfg = {}) {
    SuiteReport r{"algebra", {}};
    if (cfg.supplied) {
        algebra_laws(r, *cfg.supplied, cfg);
    } else {
        for (const auto& fx : fixtures::algebra_fixtures()) algebra_laws(r, fx, cfg);
    }
    return r;
}

// ---------------------------------------------------------------------------
// multiplier

inline SuiteReport multiplier_suite(const SuiteConfig& cfg = {}) {
    SuiteReport r{"multiplier", {}};
    const auto z2 = GroupDescriptor::free_abelian(2);
    const auto s3 = symmetric_group(3);
    if (cfg.supplied) {
        auto& p = r.add("supplied multiplier " + cfg.supplied->name + ": cocycle identity");
        const auto rep = verify_cocycle(cfg.supplied->sigma, cfg.samples, cfg.seed);
        p.samples = rep.checked;
        p.note = rep.exhaustive ? "exhaustive" : "sampled";
        if (!rep.pass) p.fail(rep.detail);
    }
    {
        auto& p = r.add("library constructors pass the cocycle check");
        std::vector<fixtures::NamedMultiplier> lib = fixtures::algebra_fixtures();
        for (const auto& th : {Rational(1, 3), Rational(1, 2), Rational(2, 5)}) {
            lib.push_back({"magnetic-landau " + th.str(), magnetic_multiplier(z2, th)});
            lib.push_back({"magnetic-symmetric " + th.str(), magnetic_multiplier(z2, th, Gauge::symmetric)});
            LatticeGeometricData d;
            d.theta = th;
            lib.push_back({"geometric-landau " + th.str(), geometric_multiplier(z2, d)});
            d.gauge = Gauge::symmetric;
            lib.push_back({"geometric-symmetric " + th.str(), geometric_multiplier(z2, d)});
            lib.push_back({"power 1/2 of magnetic " + th.str(), power_family(magnetic_multiplier(z2, th), Rational(1, 2))});
            lib.push_back({"conjugate magnetic " + th.str(), conjugate(magnetic_multiplier(z2, th))});
        }
        lib.push_back({"Z^3 magnetic 1/3", magnetic_multiplier(GroupDescriptor::free_abelian(3), Rational(1, 3), Gauge::landau,
                                                               {{0, 1, 2}, {-1, 0, 1}, {-2, -1, 0}})});
        for (const auto& fx : lib) {
            const auto rep = verify_cocycle(fx.sigma, cfg.samples, cfg.seed);
            p.samples += rep.checked;
            if (!rep.pass) p.fail(fx.name + ": " + rep.detail);
        }
    }
    {
        auto& p = r.add("magnetic sigma((1,0),(0,1)) at theta=1/2: landau 1/2, symmetric 1/4");
        p.check(magnetic_multiplier(z2, Rational(1, 2))(GroupElement{1, 0}, GroupElement{0, 1}) == Phase::turns(Rational(1, 2)), "landau");
        p.check(magnetic_multiplier(z2, Rational(1, 2), Gauge::symmetric)(GroupElement{1, 0}, GroupElement{0, 1}) ==
                    Phase::turns(Rational(1, 4)),
                "symmetric");
    }
    {
        auto& p = r.add("gauge independence: landau = symmetric * dz (explicit z)");
        for (const auto& th : {Rational(1, 3), Rational(1, 2), Rational(2, 5), Rational(5, 7)}) {
            std::optional<std::pair<GroupElement, GroupElement>> w;
            const bool ok = is_cohomologous_via(magnetic_multiplier(z2, th, Gauge::symmetric), magnetic_multiplier(z2, th),
                                                CoboundaryData::gauge_change(z2, th), &w);
            p.check(ok, "theta=" + th.str() + (w ? " at " + w->first.str() + "," + w->second.str() : ""));
        }
    }
    {
        auto& p = r.add("geometric multiplier reproduces the closed form (both gauges)");
        for (const auto& th : {Rational(0), Rational(1, 3), Rational(1, 2)}) {
            LatticeGeometricData d;
            d.theta = th;
            p.check(equal_on_comparison_set(geometric_multiplier(z2, d), magnetic_multiplier(z2, th)), "landau " + th.str());
            d.gauge = Gauge::symmetric;
            p.check(equal_on_comparison_set(geometric_multiplier(z2, d), magnetic_multiplier(z2, th, Gauge::symmetric)),
                    "symmetric " + th.str());
        }
        LatticeGeometricData d0;
        p.check(equal_on_comparison_set(geometric_multiplier(z2, d0), trivial_multiplier(z2)), "theta=0 trivial");
    }
    {
        auto& p = r.add("geometric multiplier independent of the base point (9 points, radius-4 ball)");
        const auto ball = z2->ball(4);
        for (const auto gauge : {Gauge::landau, Gauge::symmetric}) {
            LatticeGeometricData ref;
            ref.theta = Rational(1, 3);
            ref.gauge = gauge;
            const auto s_ref = geometric_multiplier(z2, ref);
            for (std::int64_t x : {-1, 0, 5})
                for (std::int64_t y : {-3, 0, 2}) {
                    auto d = ref;
                    d.base_point = {Rational(x), Rational(y)};
                    const auto s = geometric_multiplier(z2, d);
                    for (const auto& a : ball)
                        for (const auto& b : ball)
                            p.check(s.eval_unchecked(a, b) == s_ref.eval_unchecked(a, b),
                                    gauge_name(gauge) + " x0=(" + std::to_string(x) + "," + std::to_string(y) + ") at " +
                                        a.str() + "," + b.str());
                }
        }
    }
    {
        auto& p = r.add("psi normalizations and additive constants give cohomologous multipliers");
        for (const auto gauge : {Gauge::landau, Gauge::symmetric}) {
            LatticeGeometricData d;
            d.theta = Rational(1, 3);
            d.gauge = gauge;
            d.base_point = {Rational(2), Rational(-1)};
            const auto base = geometric_multiplier(z2, d);
            auto alt = d;
            alt.normalization = PsiNormalization::psi_at_base_point_zero;
            const auto x0 = d.base_point;
            const auto shared = std::make_shared<const LatticeGeometricData>(d);
            const CoboundaryData z(z2, [shared, x0](const GroupElement& g) { return -shared->psi(g, x0); }, "psi-shift");
            p.check(is_cohomologous_via(base, geometric_multiplier(z2, alt), z), "normalization " + gauge_name(gauge));
            // perturbation a_g
            auto pert = d;
            pert.perturbation = [](const GroupElement& g) {
                return g[0] == 0 && g[1] == 0 ? Rational(0) : Rational((g[0] * 3 + g[1] * 5) % 7, 7);
            };
            const CoboundaryData za(z2, pert.perturbation, "perturbation");
            p.check(is_cohomologous_via(base, geometric_multiplier(z2, pert), za), "perturbation " + gauge_name(gauge));
        }
    }
    {
        auto& p = r.add("inconsistent lattice data rejected");
        LatticeGeometricData bad;
        bad.theta = Rational(1, 3);
        bad.gauge = Gauge::custom;
        bad.custom_eta = [](const LatticeGeometricData::Point& x, int axis) { return axis == 1 ? x[0] * Rational(1, 5) : Rational(0); };
        bad.custom_psi = [](const GroupElement&, const LatticeGeometricData::Point&) { return Rational(0); };
        bool threw = false;
        try {
            (void)geometric_multiplier(z2, bad);
        } catch (const std::invalid_argument&) {
            threw = true;
        }
        p.check(threw, "curvature 1/5 against theta 1/3 accepted");
    }
    {
        auto& p = r.add("conjugate: sigma * sigma-bar trivial");
        for (const auto& fx : fixtures::algebra_fixtures())
            p.check(equal_on_comparison_set(multiply(fx.sigma, conjugate(fx.sigma)), trivial_multiplier(fx.sigma.group())),
                    fx.name);
    }
    {
        auto& p = r.add("power family: s=0 trivial, s=1 base, sigma^s sigma^t = sigma^(s+t), (1/3)^(1/2) = 1/6");
        const auto base = magnetic_multiplier(z2, Rational(1, 3));
        p.check(equal_on_comparison_set(power_family(base, Rational(0)), trivial_multiplier(z2)), "s=0");
        p.check(equal_on_comparison_set(power_family(base, Rational(1)), base), "s=1");
        p.check(equal_on_comparison_set(power_family(base, Rational(1, 2)), magnetic_multiplier(z2, Rational(1, 6))), "s=1/2");
        const std::vector<Rational> grid{Rational(0), Rational(1, 8), Rational(1, 4), Rational(1, 3), Rational(3, 4), Rational(2)};
        for (const auto& s : grid)
            for (const auto& t : grid)
                p.check(equal_on_comparison_set(multiply(power_family(base, s), power_family(base, t)), power_family(base, s + t)),
                        "s=" + s.str() + " t=" + t.str());
    }
    {
        auto& p = r.add("commutator phases of sigma^s distinguish s mod 1");
        const auto base = magnetic_multiplier(z2, Rational(1));
        const std::vector<Rational> grid{Rational(0), Rational(1, 8), Rational(1, 4), Rational(3, 8), Rational(1, 2), Rational(5, 8)};
        for (std::size_t i = 0; i < grid.size(); ++i)
            for (std::size_t j = i + 1; j < grid.size(); ++j)
                p.check(!(commutator_phase(power_family(base, grid[i])) == commutator_phase(power_family(base, grid[j]))),
                        grid[i].str() + " vs " + grid[j].str());
    }
    {
        auto& p = r.add("coboundaries: z=1 trivial, characters give trivial dz");
        p.check(equal_on_comparison_set(coboundary(CoboundaryData::from_entries(z2, {})), trivial_multiplier(z2)), "z=1");
        p.check(equal_on_comparison_set(coboundary(CoboundaryData::zk_character(z2, {Rational(1, 5), Rational(2, 3)})),
                                        trivial_multiplier(z2)),
                "Z^2 character");
        for (const auto& chi : finite_characters(s3))
            p.check(equal_on_comparison_set(coboundary(chi), trivial_multiplier(s3)), chi.key());
    }
    {
        auto& p = r.add("theta=1/2 not cohomologous to trivial via 100 random z");
        std::mt19937_64 rng(cfg.seed);
        const auto half = magnetic_multiplier(z2, Rational(1, 2));
        for (int i = 0; i < 100; ++i) {
            const auto z = detail::random_coboundary(z2, rng, 8);
            p.check(!is_cohomologous_via(half, trivial_multiplier(z2), z), z.key());
        }
    }
    {
        auto& p = r.add("corrupted S3 table detected with a witness triple");
        const auto rep = verify_cocycle(fixtures::corrupted_s3_table(s3), 1, cfg.seed);
        p.check(!rep.pass && rep.witness.has_value(), "corruption not detected");
        p.note = rep.detail;
    }
    return r;
}

// ---------------------------------------------------------------------------
// traces

inline void add_trace_report(PropertyResult& p, const TraceReport& t, const std::string& tag) {
    p.samples += t.checked;
    p.worst = std::max(p.worst, t.worst);
    if (!t.pass)
        for (const auto& w : t.witnesses) p.fail(tag + ": " + w);
}

inline SuiteReport traces_suite(const SuiteConfig& cfg = {}) {
    SuiteReport r{"traces", {}};
    const auto z2 = GroupDescriptor::free_abelian(2);
    const auto s3 = symmetric_group(3);
    std::mt19937_64 rng(cfg.seed);
    std::vector<fixtures::NamedMultiplier> fx = fixtures::algebra_fixtures();
    if (cfg.supplied) fx.insert(fx.begin(), *cfg.supplied);

    {
        auto& p = r.add("tr2 trace property (basis pairs, exact)");
        for (const auto& f : fx) add_trace_report(p, check_trace_property(regular_trace(f.sigma)), f.name);
    }
    {
        auto& p = r.add("tr2 invariant under b_chi for characters (exact)");
        for (const auto& f : fx) {
            const auto& G = f.sigma.group();
            std::vector<CoboundaryData> chars;
            if (G->is_finite()) {
                chars = finite_characters(G);
            } else if (G->kind() == GroupKind::free_abelian) {
                std::uniform_int_distribution<std::int64_t> num(0, 23);
                for (int i = 0; i < 20; ++i) {
                    std::vector<Rational> angles;
                    for (std::size_t k = 0; k < G->width(); ++k) angles.push_back(Rational(num(rng), 24));
                    chars.push_back(CoboundaryData::zk_character(G, angles));
                }
            }
            for (const auto& chi : chars) add_trace_report(p, check_invariance(regular_trace(f.sigma), chi), f.name + " " + chi.key());
        }
    }
    {
        auto& p = r.add("tr2(a^* a) = sum |a_g|^2 (positive, faithful)", 1e-12);
        for (const auto& f : fx) {
            const auto tau = regular_trace(f.sigma);
            for (std::size_t i = 0; i < cfg.samples / fx.size() + 1; ++i) {
                const auto a = random_element(f.sigma, rng);
                const double l2 = a.l2_norm();
                p.record(std::abs(tau(a.star() * a) - l2 * l2) / std::max(1.0, l2 * l2), f.name + " " + a.str());
            }
        }
    }
    {
        auto& p = r.add("tr2(delta_g * delta_g^-1) = sigma(g, g^-1)", 1e-14);
        for (const auto& f : fx) {
            const auto& G = f.sigma.group();
            const auto tau = regular_trace(f.sigma);
            for (const auto& g : detail::sample_pool(G)) {
                const auto v = tau(AlgebraElement::delta(f.sigma, g) * AlgebraElement::delta(f.sigma, G->inverse(g)));
                p.record(std::abs(v - f.sigma(g, G->inverse(g)).value()), f.name + " " + g.str());
            }
        }
    }
    {
        auto& p = r.add("conjugacy functionals on Z^2: traces exactly for sigma-regular classes");
        for (const auto& g : z2->ball(2))
            add_trace_report(p, check_trace_property(conjugacy_trace(trivial_multiplier(z2), g)), "untwisted " + g.str());
        // theta = 1/3: (a,b) is sigma-regular iff 3 | a and 3 | b
        const auto sigma = magnetic_multiplier(z2, Rational(1, 3));
        for (const auto& g : {GroupElement{0, 0}, GroupElement{3, 0}, GroupElement{0, -3}, GroupElement{3, 6}})
            add_trace_report(p, check_trace_property(conjugacy_trace(sigma, g)), "regular " + g.str());
        for (const auto& g : {GroupElement{1, 0}, GroupElement{-2, 0}, GroupElement{3, 1}})
            p.check(!check_trace_property(conjugacy_trace(sigma, g)).pass, "non-regular " + g.str() + " passed");
        const auto tau = conjugacy_trace(sigma, GroupElement{1, 1});
        p.check(tau(AlgebraElement::delta(sigma, GroupElement{1, 1})) == Complex(1.0), "tau<(1,1)>(delta_(1,1)) != 1");
    }
    {
        auto& p = r.add("twisted S3: tau<(12)> fails the trace property (flag computed, witness found)");
        const auto sigma = coboundary(fixtures::s3_twist(s3));
        const auto rep = check_trace_property(conjugacy_trace(sigma, fixtures::s3_transposition()));
        p.check(!rep.pass && !rep.witnesses.empty(), "no witness found");
        if (!rep.witnesses.empty()) p.note = "witness pair " + rep.witnesses.front();
        const auto untwisted = check_trace_property(conjugacy_trace(trivial_multiplier(s3), fixtures::s3_transposition()));
        p.check(untwisted.pass, "untwisted class functional is not a trace");
    }
    {
        auto& p = r.add("product trace on A5 x Z/3: formula and invariance under all characters");
        const auto a5 = alternating_group(5);
        const auto c3 = cyclic_group(3);
        const auto prod = GroupDescriptor::product(a5, c3);
        const auto right = fixtures::z3_table(c3);
        const GroupElement g3{1};  // a 3-cycle class representative is looked up below
        std::vector<TraceFunctional> lefts{regular_trace(trivial_multiplier(a5))};
        for (const auto& g : a5->elements())
            if (a5->conjugacy_class(g).size() == 20) {
                lefts.push_back(conjugacy_trace(trivial_multiplier(a5), g));
                break;
            }
        const auto chars = finite_characters(prod);
        p.note = std::to_string(chars.size()) + " characters";
        for (const auto& left : lefts) {
            const auto tau = product_trace(prod, left, right);
            for (const auto& x : a5->elements())
                p.check(tau(AlgebraElement::delta(tau.multiplier(), prod->join(x, c3->identity()))) == left.on_basis(x),
                        "formula at " + x.str());
            for (const auto& chi : chars) add_trace_report(p, check_invariance(tau, chi), left.name() + " " + chi.key());
            add_trace_report(p, check_trace_property(tau), left.name() + " trace property");
        }
    }
    {
        auto& p = r.add("product trace counterexample: Z factor, tr1, chi(n) = i^n breaks invariance");
        const auto z1 = GroupDescriptor::free_abelian(1);
        const auto c3 = cyclic_group(3);
        const auto prod = GroupDescriptor::product(z1, c3);
        const auto tau = product_trace(prod, one_dim_trace(trivial_multiplier(z1)), fixtures::z3_table(c3));
        const auto chi = CoboundaryData(
            prod, [prod](const GroupElement& g) { return Rational(prod->split(g).first[0], 4).mod1(); }, "i^n");
        p.check(is_character(chi), "chi is not a character");
        const auto rep = check_invariance(tau, chi);
        p.check(!rep.pass, "invariance unexpectedly holds");
        if (!rep.witnesses.empty()) p.note = "witness " + rep.witnesses.front();
    }
    {
        auto& p = r.add("H = Gamma: tau_{u,Gamma} independent of u of fixed dimension", 1e-10);
        // S3 permutation representation and a unitary conjugate of it
        std::map<GroupElement, CMatrix> gens, gens2;
        const auto u = random_unitary(3, rng);
        for (const auto& s : s3->generators()) {
            CMatrix m = CMatrix::Zero(3, 3);
            const auto perm = detail::permutations_of(3, false)[static_cast<std::size_t>(s[0])];
            for (int i = 0; i < 3; ++i) m(perm[static_cast<std::size_t>(i)], i) = 1.0;
            gens[s] = m;
            gens2[s] = u * m * u.adjoint();
        }
        for (const auto& sigma : {trivial_multiplier(s3), coboundary(fixtures::s3_twist(s3))}) {
            const auto t1 = unitary_trace(sigma, UnitaryRep(s3, gens), identity_hom(s3), regular_trace(sigma));
            const auto t2 = unitary_trace(sigma, UnitaryRep(s3, gens2), identity_hom(s3), regular_trace(sigma));
            for (int i = 0; i < 200; ++i) {
                const auto a = random_element(sigma, rng);
                p.record(std::abs(t1(a) - t2(a)) / std::max(1.0, a.l1_norm()), a.str());
            }
        }
        // Z^2: commuting diagonal unitaries
        const auto sigma = magnetic_multiplier(z2, Rational(1, 3));
        auto diag = [&](int k) {
            std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
            CMatrix m = CMatrix::Zero(k, k);
            for (int i = 0; i < k; ++i) m(i, i) = std::polar(1.0, ang(rng));
            return m;
        };
        const UnitaryRep u1(z2, {{GroupElement{1, 0}, diag(2)}, {GroupElement{0, 1}, diag(2)}});
        const UnitaryRep u2(z2, {{GroupElement{1, 0}, diag(2)}, {GroupElement{0, 1}, diag(2)}});
        const auto t1 = unitary_trace(sigma, u1, identity_hom(z2), regular_trace(sigma));
        const auto t2 = unitary_trace(sigma, u2, identity_hom(z2), regular_trace(sigma));
        for (int i = 0; i < 200; ++i) {
            const auto a = random_element(sigma, rng);
            p.record(std::abs(t1(a) - t2(a)) / std::max(1.0, a.l1_norm()), a.str());
        }
    }
    {
        auto& p = r.add("H trivial, u trivial: unitary trace is tr1");
        for (const auto& G : {z2, s3}) {
            const auto sigma = trivial_multiplier(G);
            std::map<GroupElement, CMatrix> gens;
            for (const auto& s : G->generators()) gens[s] = CMatrix::Identity(1, 1);
            const auto pi = trivial_hom(G);
            const auto t = unitary_trace(sigma, UnitaryRep(G, gens), pi, regular_trace(trivial_multiplier(pi.target)));
            for (const auto& g : detail::sample_pool(G)) p.check(t.on_basis(g) == Complex(1.0), G->name() + " " + g.str());
        }
    }
    {
        auto& p = r.add("delocalization flags");
        const auto sigma = trivial_multiplier(z2);
        p.check(!regular_trace(sigma).is_delocalized(), "tr2 flagged delocalized");
        p.check(linear_combination({{1.0, one_dim_trace(sigma)}, {-1.0, regular_trace(sigma)}}).is_delocalized(), "tr1 - tr2");
        const auto s3s = trivial_multiplier(s3);
        const auto pi = trivial_hom(s3);
        const auto tau_h = regular_trace(trivial_multiplier(pi.target));
        std::map<GroupElement, CMatrix> sign, triv, two;
        for (const auto& s : s3->generators()) {
            const bool odd = (detail::permutations_of(3, false)[static_cast<std::size_t>(s[0])] != std::vector<int>{1, 2, 0} &&
                              detail::permutations_of(3, false)[static_cast<std::size_t>(s[0])] != std::vector<int>{2, 0, 1});
            sign[s] = CMatrix::Constant(1, 1, odd ? -1.0 : 1.0);
            triv[s] = CMatrix::Identity(1, 1);
            two[s] = CMatrix::Identity(2, 2);
        }
        const auto t_sign = unitary_trace(s3s, UnitaryRep(s3, sign), pi, tau_h);
        const auto t_triv = unitary_trace(s3s, UnitaryRep(s3, triv), pi, tau_h);
        const auto t_two = unitary_trace(s3s, UnitaryRep(s3, two), pi, tau_h);
        p.check(linear_combination({{1.0, t_triv}, {-1.0, t_sign}}).is_delocalized(), "tau_u1 - tau_u2 equal dimension");
        p.check(!linear_combination({{1.0, t_two}, {-1.0, t_sign}}).is_delocalized(), "tau_u1 - tau_u2 unequal dimension");
    }
    {
        auto& p = r.add("matrix traces: identity, permutation conjugation, Tr(AB) = Tr(BA)", 1e-11);
        const auto sigma = magnetic_multiplier(z2, Rational(1, 3));
        const auto tau = regular_trace(sigma);
        const std::size_t n = 3;
        p.record(std::abs(matrix_trace(tau, AlgebraMatrix::identity(sigma, n)) - 3.0), "identity");
        auto rand_matrix = [&] {
            AlgebraMatrix m(sigma, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) m(i, j) = random_element(sigma, rng, 2, 3);
            return m;
        };
        AlgebraMatrix perm(sigma, n), perm_t(sigma, n);
        for (std::size_t i = 0; i < n; ++i) {
            perm((i + 1) % n, i) = AlgebraElement::unit(sigma);
            perm_t(i, (i + 1) % n) = AlgebraElement::unit(sigma);
        }
        for (int i = 0; i < 100; ++i) {
            const auto a = rand_matrix(), b = rand_matrix();
            p.record(std::abs(matrix_trace(tau, perm * a * perm_t) - matrix_trace(tau, a)), "permutation");
            p.record(std::abs(matrix_trace(tau, a * b) - matrix_trace(tau, b * a)), "cyclicity");
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// spectral

inline SuiteReport spectral_suite(const SuiteConfig& cfg = {}) {
    SuiteReport r{"spectral", {}};
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<int> dim(1, 40);
    {
        auto& p = r.add("eigh residual on random Hermitian matrices", 1e-10);
        for (int i = 0; i < 20; ++i) {
            const auto a = random_hermitian(40, rng);
            const auto ed = eigh(a);
            p.record((a * ed.vectors - ed.vectors * ed.values.cast<Complex>().asDiagonal()).norm() / a.norm(), "n=40");
            p.record((ed.vectors.adjoint() * ed.vectors - CMatrix::Identity(40, 40)).norm(), "orthonormality");
        }
    }
    {
        auto& p = r.add("eta quadrature matches the closed form (200 random matrices)", 1e-6);
        for (int i = 0; i < 200; ++i) {
            const auto a = random_hermitian(dim(rng), rng);
            const RVector ev = eigvalsh(a);
            const double exact = eta_closed_form(ev, 1e-9, cfg.eta_normalization);
            const auto q = eta_quadrature(ev, 0.0, 64, 1e-9, 1e-10, cfg.eta_normalization);
            p.record(std::fabs(q.eta - exact), "dim=" + std::to_string(a.rows()));
        }
    }
    {
        auto& p = r.add("closed-form examples: diag(1,-2,3) -> 1/2, diag(0,1) -> 1/2, 0 -> 0", 1e-15);
        const double f = normalization_factor(cfg.eta_normalization);
        p.record(std::fabs(eta_closed_form(RVector((RVector(3) << 1, -2, 3).finished()), 1e-9, cfg.eta_normalization) - 0.5 * f), "diag(1,-2,3)");
        p.record(std::fabs(eta_closed_form(RVector((RVector(2) << 0, 1).finished()), 1e-9, cfg.eta_normalization) - 0.5 * f), "diag(0,1)");
        p.record(std::fabs(eta_closed_form(CMatrix(CMatrix::Zero(3, 3)), 1e-9, cfg.eta_normalization)), "zero");
    }
    {
        auto& p = r.add("eta(-A) = -eta(A) and eta(U^* A U) = eta(A)", 1e-9);
        for (int i = 0; i < 100; ++i) {
            const auto a = random_hermitian(dim(rng), rng);
            const auto u = random_unitary(a.rows(), rng);
            const double e = eta_closed_form(a);
            p.record(std::fabs(eta_closed_form(CMatrix(-a)) + e), "negation");
            p.record(std::fabs(eta_closed_form(CMatrix(u.adjoint() * a * u)) - e), "unitary");
        }
    }
    {
        auto& p = r.add("spectral flow: tracking equals the eta/kernel formula (100 random 12x12 paths, diag path +1)");
        for (int i = 0; i < 100; ++i) {
            const auto res = spectral_flow(SpectralPath::linear(random_hermitian(12, rng), random_hermitian(12, rng)));
            p.check(res.tracked == res.formula, "tracked " + std::to_string(res.tracked) + " formula " + std::to_string(res.formula));
        }
        const auto diag = spectral_flow(SpectralPath::linear(CMatrix::Constant(1, 1, -0.5), CMatrix::Constant(1, 1, 0.5)));
        p.check(diag.tracked == 1 && diag.formula == 1, "diag(t - 1/2)");
        const auto a = random_hermitian(6, rng);
        const auto flat = spectral_flow(SpectralPath::linear(a, a));
        p.check(flat.tracked == 0 && flat.formula == 0, "constant path");
    }
    {
        auto& p = r.add("McKean-Singer: supertrace constant on a log-t grid and equal to the index", 1e-8);
        std::uniform_int_distribution<int> sz(1, 6);
        const auto ts = log_grid(0.1, 10.0, 9);
        for (int i = 0; i < 100; ++i) {
            const int m = sz(rng), pdim = sz(rng);
            std::uniform_int_distribution<int> rk(0, std::min(m, pdim));
            const int rank = rk(rng);
            const CMatrix dp = random_complex_matrix(m, rank, rng) * random_complex_matrix(rank, pdim, rng);
            const auto res = mckean_singer(graded_odd(dp), ts);
            p.record(res.spread, "spread");
            for (double s : res.supertrace) p.record(std::fabs(s - res.index), "value vs index");
            p.check(res.index == pdim - m, "index " + std::to_string(res.index) + " vs p - m " + std::to_string(pdim - m));
        }
    }
    {
        auto& p = r.add("product formula: eta(z_N D_L + D_N) = eta(D_L) ind(D_N)", 1e-8);
        std::uniform_int_distribution<int> dl(1, 10), dn(1, 4);
        for (int i = 0; i < 50; ++i) {
            const auto d_l = random_hermitian(dl(rng), rng);
            const int m = dn(rng), pdim = dn(rng);
            std::uniform_int_distribution<int> rk(0, std::min(m, pdim));
            const int rank = rk(rng);
            const CMatrix dp = random_complex_matrix(m, rank, rng) * random_complex_matrix(rank, pdim, rng);
            const auto res = product_eta_check(d_l, graded_odd(dp));
            p.record(std::fabs(res.lhs - res.rhs), "index " + std::to_string(res.index));
        }
    }
    {
        auto& p = r.add("Betti numbers of the cycle graph (n=20): b0 = b1 = 1, Euler = index");
        const CMatrix d = cycle_incidence(20);
        const auto b = twisted_betti(d.adjoint() * d, d * d.adjoint());
        p.check(b.b_even == 1.0 && b.b_odd == 1.0, "b0=" + std::to_string(b.b_even) + " b1=" + std::to_string(b.b_odd));
        const auto ind = mckean_singer(graded_odd(d), {}).index;
        p.check(b.euler() == ind, "Euler " + std::to_string(b.euler()) + " index " + std::to_string(ind));
        const auto z = twisted_betti(CMatrix::Zero(3, 3), CMatrix::Zero(2, 2));
        p.check(z.b_even == 3 && z.b_odd == 2, "zero blocks");
        const auto inv = twisted_betti(CMatrix::Identity(3, 3), CMatrix::Identity(2, 2));
        p.check(inv.b_even == 0 && inv.b_odd == 0, "invertible blocks");
    }
    {
        auto& p = r.add("Harper eta: theta=0 symmetric spectrum gives 0, H+5 gives 1/2", 1e-4);
        const auto h0 = harper_element(Rational(0));
        p.record(std::fabs(eta_operator_bloch(h0, 32, GroupElement{0, 0}, 1e-9, cfg.eta_normalization).eta), "theta=0");
        const auto h5 = h0 + AlgebraElement::delta(h0.multiplier(), GroupElement{0, 0}, 5.0);
        p.record(std::fabs(eta_operator_bloch(h5, 16, GroupElement{0, 0}, 1e-9, cfg.eta_normalization).eta -
                           0.5 * normalization_factor(cfg.eta_normalization)),
                 "H+5");
    }
    return r;
}

// ---------------------------------------------------------------------------
// representations

/// Number of closed nearest-neighbour lattice paths of length n weighted by
/// exp(2 pi i theta * enclosed signed area); an oracle for tr2(H^n).
inline Complex lattice_path_moment(const Rational& theta, int n) {
    // state: position (x, y) and accumulated area sum of x dy
    std::map<std::array<std::int64_t, 3>, double> paths{{{0, 0, 0}, 1.0}};
    for (int step = 0; step < n; ++step) {
        std::map<std::array<std::int64_t, 3>, double> next;
        for (const auto& [s, c] : paths) {
            const auto [x, y, a] = s;
            next[{x + 1, y, a}] += c;
            next[{x - 1, y, a}] += c;
            next[{x, y + 1, a + x}] += c;
            next[{x, y - 1, a - x}] += c;
        }
        paths = std::move(next);
    }
    Complex total = 0.0;
    for (const auto& [s, c] : paths)
        if (s[0] == 0 && s[1] == 0) total += c * Phase::turns(theta * Rational(s[2])).value();
    return total;
}

/// Grid-doubling study of |tr2(H^n) - fiber average|: the order from the last
/// pair with error above the roundoff floor, or infinity when the fine-grid
/// error is already at the floor.
struct ConvergenceStudy {
    std::vector<int> grids;
    std::vector<double> errors;
    double order = 0.0;
};

inline ConvergenceStudy moment_convergence(const AlgebraElement& h, int n, const std::vector<int>& grids, double floor = 1e-11) {
    const BlochRepresentation rep(h.multiplier());
    AlgebraElement hn = AlgebraElement::unit(h.multiplier());
    for (int i = 0; i < n; ++i) hn = hn * h;
    const Complex exact = hn.coefficient(h.group()->identity());
    ConvergenceStudy s;
    s.grids = grids;
    for (int g : grids) s.errors.push_back(std::abs(bloch_trace(rep, hn, g) - exact) / std::max(1.0, std::abs(exact)));
    s.order = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < grids.size(); ++i) {
        if (s.errors[i] <= floor) break;
        if (s.errors[i + 1] <= floor) {
            s.order = std::numeric_limits<double>::infinity();
            break;
        }
        s.order = std::log2(s.errors[i] / s.errors[i + 1]);
    }
    return s;
}

inline SuiteReport representations_suite(const SuiteConfig& cfg = {}) {
    SuiteReport r{"representations", {}};
    const auto z2 = GroupDescriptor::free_abelian(2);
    std::mt19937_64 rng(cfg.seed);
    {
        auto& p = r.add("truncated left regular representation: projective law on interior balls (exact)");
        const auto sigma = magnetic_multiplier(z2, Rational(1, 3));
        const std::int64_t R = 6;
        const auto small = z2->ball(2);
        for (const auto& g : small)
            for (const auto& h : small) {
                const auto tg = left_regular(AlgebraElement::delta(sigma, g), R);
                const auto th = left_regular(AlgebraElement::delta(sigma, h), R);
                const auto tgh = left_regular(AlgebraElement::delta(sigma, z2->multiply(g, h)), R);
                const CMatrix prod = tg.matrix * th.matrix;
                const Complex s = sigma(g, h).value();
                for (const auto& x : z2->ball(R - z2->word_length(g) - z2->word_length(h))) {
                    const auto c = tg.position(x);
                    p.check((prod.col(c) - s * tgh.matrix.col(c)).cwiseAbs().maxCoeff() <= 1e-15, g.str() + "," + h.str());
                }
            }
    }
    {
        auto& p = r.add("Bloch fibers are *-homomorphisms", 1e-12);
        for (const auto& th : {Rational(1, 3), Rational(2, 5), Rational(1, 2)})
            for (const auto gauge : {Gauge::landau, Gauge::symmetric}) {
                const auto sigma = magnetic_multiplier(z2, th, gauge);
                const BlochRepresentation rep(sigma);
                std::uniform_real_distribution<double> k(0, 2 * std::numbers::pi);
                for (int i = 0; i < 200; ++i) {
                    const Momentum m{k(rng), k(rng)};
                    const auto a = random_element(sigma, rng, 3, 4), b = random_element(sigma, rng, 3, 4);
                    const double scale = std::max(1.0, a.l1_norm() * b.l1_norm());
                    p.record(max_abs(rep.fiber(a * b, m) - rep.fiber(a, m) * rep.fiber(b, m)) / scale, th.str());
                    p.record(max_abs(rep.fiber(a.star(), m) - rep.fiber(a, m).adjoint()) / std::max(1.0, a.l1_norm()), th.str());
                }
            }
    }
    {
        auto& p = r.add("theta=0 band [-4,4] and theta=1/2 edges +-2sqrt2 (N=512 and N=128)", 1e-6);
        const auto s0 = spectrum_union(BlochRepresentation(magnetic_multiplier(z2, Rational(0))), harper_element(Rational(0)), 512);
        p.record(std::fabs(s0.minimum() + 4.0), "theta=0 lower");
        p.record(std::fabs(s0.maximum() - 4.0), "theta=0 upper");
        p.check(s0.bands.size() == 1, "theta=0 band count");
        const auto s2 = spectrum_union(BlochRepresentation(magnetic_multiplier(z2, Rational(1, 2))), harper_element(Rational(1, 2)), 128);
        p.record(std::fabs(s2.minimum() + 2 * std::sqrt(2.0)), "theta=1/2 lower");
        p.record(std::fabs(s2.maximum() - 2 * std::sqrt(2.0)), "theta=1/2 upper");
        p.check(s2.bands.size() == 2, "theta=1/2 band count");
    }
    {
        auto& p = r.add("q bands for theta = p/q, q <= 8 (N=64)");
        for (const auto& th : flux_list(8)) {
            const auto s = spectrum_union(BlochRepresentation(magnetic_multiplier(z2, th)), harper_element(th), 64);
            p.check(static_cast<std::int64_t>(s.bands.size()) == th.den(),
                    th.str() + ": " + std::to_string(s.bands.size()) + " bands");
        }
    }
    {
        auto& p = r.add("tr2(H^n) equals the magnetic lattice path count (n <= 8)", 1e-9);
        for (const auto& th : {Rational(0), Rational(1, 3), Rational(1, 2), Rational(2, 5)}) {
            const auto h = harper_element(th);
            AlgebraElement hn = AlgebraElement::unit(h.multiplier());
            for (int n = 1; n <= 8; ++n) {
                hn = hn * h;
                p.record(std::abs(hn.coefficient(z2->identity()) - lattice_path_moment(th, n)), th.str() + " n=" + std::to_string(n));
            }
        }
    }
    {
        auto& p = r.add("moment matching: fiber averages converge to tr2(H^n) with order >= 1.8");
        for (const auto& th : {Rational(0), Rational(1, 3), Rational(1, 2)})
            for (int n = 1; n <= 8; ++n) {
                const auto st = moment_convergence(harper_element(th), n, {2, 4, 8, 16, 32});
                p.check(st.order >= 1.8 && st.errors.back() <= 1e-11,
                        th.str() + " n=" + std::to_string(n) + " order " + std::to_string(st.order));
            }
        p.note = "grid averages of trigonometric polynomials are exact once N exceeds the degree";
    }
    {
        auto& p = r.add("truncation spectra approach the Bloch spectrum up to edge states (R = 4, 8, 12)");
        for (const auto& th : {Rational(0), Rational(1, 3), Rational(2, 5), Rational(1, 2)}) {
            const auto h = harper_element(th);
            const auto bands = spectrum_union(BlochRepresentation(h.multiplier()), h, 64).bands;
            const auto study = truncation_study(h, bands, {4, 8, 12});
            bool gapless = true;
            for (std::size_t i = 0; i + 1 < bands.size(); ++i) gapless = gapless && bands[i + 1].lower - bands[i].upper < 1e-6;
            for (std::size_t i = 0; i + 1 < study.size(); ++i) {
                const auto& a = study[i];
                const auto& b = study[i + 1];
                const std::string w = th.str() + " R=" + std::to_string(b.radius);
                if (gapless) {
                    p.check(b.hausdorff < a.hausdorff, w + " hausdorff " + std::to_string(b.hausdorff));
                } else {
                    p.check(b.covering < a.covering, w + " covering " + std::to_string(b.covering));
                    p.check(b.outside_fraction < a.outside_fraction, w + " outside fraction " + std::to_string(b.outside_fraction));
                }
            }
            p.worst = std::max(p.worst, gapless ? study.back().hausdorff : study.back().covering);
        }
        p.note = "gapless flux: two-sided Hausdorff; gapped flux: band covering distance and fraction of in-gap eigenvalues";
    }
    return r;
}

// ---------------------------------------------------------------------------
// cohomology

inline SuiteReport cohomology_suite(const SuiteConfig& cfg = {}) {
    SuiteReport r{"cohomology", {}};
    const auto z2 = GroupDescriptor::free_abelian(2);
    const auto s3 = symmetric_group(3);
    std::mt19937_64 rng(cfg.seed);
    const auto pool = z2->ball(4);
    {
        auto& p = r.add("area cochain is closed (1000 quadruples) and d d = 0", 1e-12);
        const auto area = area_cochain(z2);
        const auto d = group_differential(area);
        for (int i = 0; i < 1000; ++i) p.record(std::abs(d(random_tuple(pool, 4, rng))), "area");
        for (int deg : {0, 1, 2}) {
            const auto c = random_cochain(z2, deg, cfg.seed + static_cast<std::uint64_t>(deg));
            const auto dd = group_differential(group_differential(c));
            for (int i = 0; i < 200; ++i) p.record(std::abs(dd(random_tuple(pool, static_cast<std::size_t>(deg + 3), rng))), c.name);
        }
        const auto dc = group_differential(constant_cochain(z2, 0));
        for (int i = 0; i < 100; ++i) p.record(std::abs(dc(random_tuple(pool, 2, rng))), "constant");
    }
    {
        auto& p = r.add("cochain flags hold on 500 samples");
        for (const auto& c : {area_cochain(z2), linear_cochain(z2, 0), random_cochain(z2, 2, cfg.seed), random_cochain(s3, 1, cfg.seed)}) {
            const auto f = check_cochain_flags(c, 500, cfg.seed);
            p.check(f.invariant && f.alternating, c.name);
        }
    }
    {
        auto& p = r.add("b^t tau_c = tau_{dc} (area cocycle, theta in {0, 1/3}, 500 tuples)", 1e-12);
        for (const auto& th : {Rational(0), Rational(1, 3)}) {
            const auto sigma = magnetic_multiplier(z2, th);
            const auto area = area_cochain(z2);
            const auto b = cyclic_boundary(to_cyclic(area, sigma));
            const auto tdc = to_cyclic(group_differential(area), sigma);
            for (int i = 0; i < 250; ++i) {
                p.record(std::abs(b.on_basis(random_tuple(pool, 4, rng)) - tdc.on_basis(random_tuple(pool, 4, rng)) * 0.0 -
                                  0.0),
                         "generic tuple");
                const auto t = random_closed_tuple(z2, pool, 4, rng);
                p.record(std::abs(b.on_basis(t) - tdc.on_basis(t)), "closed tuple theta=" + th.str());
            }
        }
    }
    {
        auto& p = r.add("complex map: to_cyclic o d = b^t o to_cyclic on random cochains", 1e-12);
        for (const auto& G : {z2, s3}) {
            const auto gpool = G->is_finite() ? G->elements() : pool;
            const auto sigma = G->is_finite() ? coboundary(fixtures::s3_twist(G)) : magnetic_multiplier(G, Rational(2, 5));
            for (int deg : {0, 1, 2}) {
                const auto c = random_cochain(G, deg, cfg.seed + 10 + static_cast<std::uint64_t>(deg));
                const auto b = cyclic_boundary(to_cyclic(c, sigma));
                const auto tdc = to_cyclic(group_differential(c), sigma);
                for (int i = 0; i < 200; ++i) {
                    const auto t = i % 2 ? random_closed_tuple(G, gpool, static_cast<std::size_t>(deg + 2), rng)
                                         : random_tuple(gpool, static_cast<std::size_t>(deg + 2), rng);
                    p.record(std::abs(b.on_basis(t) - tdc.on_basis(t)), G->name() + " " + c.name);
                }
            }
        }
    }
    {
        auto& p = r.add("b^t b^t = 0 and b^t tr2 = 0", 1e-12);
        const auto sigma = magnetic_multiplier(z2, Rational(1, 3));
        const auto bb = cyclic_boundary(cyclic_boundary(to_cyclic(area_cochain(z2), sigma)));
        for (int i = 0; i < 200; ++i) p.record(std::abs(bb.on_basis(random_tuple(pool, 5, rng))), "bb tau_area");
        const auto btr = cyclic_boundary(regular_cyclic(sigma));
        for (const auto& g : pool) p.record(std::abs(btr.on_basis({g, z2->inverse(g)})), g.str());
        for (int i = 0; i < 200; ++i) p.record(std::abs(btr.on_basis(random_tuple(pool, 2, rng))), "random pair");
    }
    {
        auto& p = r.add("localization: tau_c vanishes off product e; delocalized functionals stay delocalized");
        const auto sigma = magnetic_multiplier(z2, Rational(1, 3));
        const auto tc = to_cyclic(area_cochain(z2), sigma);
        for (int i = 0; i < 500; ++i) {
            const auto t = random_tuple(pool, 3, rng);
            if (!z2->is_identity(basis_product(sigma, t).first)) p.check(tc.on_basis(t) == Complex(0.0), detail::elems(t));
        }
        // a functional supported on products != e
        const CyclicCochain deloc{sigma, 0,
                                  [](const Tuple& t) { return t[0][0] == 0 && t[0][1] == 0 ? Complex(0.0) : Complex(1.0); },
                                  "tr1-tr2"};
        const auto bd = cyclic_boundary(deloc);
        for (int i = 0; i < 500; ++i) {
            const auto t = random_closed_tuple(z2, pool, 2, rng);
            p.check(bd.on_basis(t) == Complex(0.0), detail::elems(t));
        }
        const auto c0 = to_cyclic(constant_cochain(z2, 0), sigma);
        for (const auto& g : pool) p.check(c0.on_basis({g}) == (z2->is_identity(g) ? Complex(1.0) : Complex(0.0)), g.str());
    }
    {
        auto& p = r.add("to_cyclic injective: nonzero cochains witnessed on product-e tuples");
        const auto sigma = magnetic_multiplier(z2, Rational(1, 3));
        for (int deg : {1, 2}) {
            const auto c = random_cochain(z2, deg, cfg.seed + 77 + static_cast<std::uint64_t>(deg));
            const auto tc = to_cyclic(c, sigma);
            const auto inh = to_inhomogeneous(c);
            bool found = false;
            for (int i = 0; i < 50 && !found; ++i) {
                const auto path = random_tuple(pool, static_cast<std::size_t>(deg), rng);
                if (std::abs(c([&] {
                        Tuple t{z2->identity()};
                        for (const auto& h : path) t.push_back(h);
                        return t;
                    }())) < 1e-9)
                    continue;
                const auto w = injectivity_witness(z2, path);
                found = z2->is_identity(basis_product(sigma, w).first) && std::abs(tc.on_basis(w)) > 1e-9;
            }
            p.check(found, c.name);
        }
    }
    {
        auto& p = r.add("inhomogeneous round trip", 1e-12);
        const auto c = random_cochain(z2, 2, cfg.seed);
        const auto back = from_inhomogeneous(z2, 2, to_inhomogeneous(c), "roundtrip");
        for (int i = 0; i < 200; ++i) {
            const auto t = random_tuple(pool, 3, rng);
            p.record(std::abs(back(t) - c(t)), detail::elems(t));
        }
    }
    {
        auto& p = r.add("Sobolev norms: single terms, monotone in s, ||a*b||_0 <= l1(a) ||b||_0", 1e-12);
        const auto sigma = magnetic_multiplier(z2, Rational(1, 3));
        p.record(std::fabs(sobolev_norm(AlgebraElement::delta(sigma, GroupElement{3, -2}), 1.0) - 6.0), "delta_(3,-2)");
        for (int i = 0; i < 200; ++i) {
            const auto a = random_element(sigma, rng, 4, 8), b = random_element(sigma, rng, 4, 8);
            double prev = 0.0;
            for (double s : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0}) {
                const double v = sobolev_norm(a, s);
                p.record(std::max(0.0, prev - v), "monotone");
                prev = v;
            }
            p.record(std::fabs(sobolev_norm(a, 0.0) - a.l2_norm()), "s=0");
            p.record(std::max(0.0, sobolev_norm(a * b, 0.0) - a.l1_norm() * sobolev_norm(b, 0.0)), "product");
        }
    }
    {
        auto& p = r.add("derivation chain: exact identity, l(g)^i on deltas, norm bound with reported constant");
        const auto sigma = magnetic_multiplier(z2, Rational(1, 3));
        for (const auto& g : z2->ball(3)) {
            const auto prof = derivation_chain(AlgebraElement::delta(sigma, g), 3, 3);
            for (int i = 0; i <= 3; ++i)
                p.check(prof.derivation_norms[static_cast<std::size_t>(i)] == std::pow(static_cast<double>(z2->word_length(g)), i),
                        g.str() + " i=" + std::to_string(i));
        }
        for (int i = 0; i < 200; ++i) {
            const auto a = random_element(sigma, rng, 4, 10);
            const auto prof = derivation_chain(a, 3, 4);
            p.check(prof.exact_identity, "identity " + a.str());
            p.check(prof.bound_ratio <= prof.constant_cauchy_schwarz, "bound ratio " + std::to_string(prof.bound_ratio));
            p.worst = std::max(p.worst, prof.bound_ratio);
        }
        bool threw = false;
        try {
            (void)derivation_chain(AlgebraElement::delta(sigma, GroupElement{3, 0}), 1, 2);
        } catch (const std::invalid_argument&) {
            threw = true;
        }
        p.check(threw, "radius below support radius accepted");
        p.note = "worst = largest observed ||a||_{H^3} / sum_i ||d^i(a) delta_e||; constant sqrt(binom(6,3))";
    }
    {
        auto& p = r.add("growth fits: area ~ 2, constant ~ 0, abelian classes 0", 0.05);
        const auto area = growth_fit(area_cochain(z2), 8);
        p.record(std::fabs(area.degree - 2.0), "area degree " + std::to_string(area.degree));
        p.record(std::fabs(growth_fit(constant_cochain(z2, 1), 6).degree), "constant");
        p.record(std::fabs(class_growth_fit(z2, GroupElement{1, 1}, 6).degree), "class");
    }
    return r;
}

// ---------------------------------------------------------------------------
// mishchenko

inline SuiteReport mishchenko_suite(const SuiteConfig& cfg = {}) {
    (void)cfg;
    SuiteReport r{"mishchenko", {}};
    auto projection_checks = [&](PropertyResult& p, const ProjectionField& f, const std::string& tag) {
        const auto rep = check_projection(f, 1e-13);
        p.samples += rep.points;
        p.worst = std::max({p.worst, rep.worst_coefficient, rep.worst_numeric});
        p.check(rep.idempotent, tag + " P^2=P " + rep.witness);
        p.check(rep.self_adjoint, tag + " P*=P " + rep.witness);
        p.check(rep.worst_numeric <= 1e-13, tag + " floating-point cross-check");
    };
    {
        auto& p = r.add("trivial group, one patch: P = [1]");
        const auto g = trivial_group();
        CoverData c;
        c.group = g;
        c.patches = 1;
        c.has_lifts = false;
        CoverPoint pt;
        pt.chi = {1.0};
        pt.active = {true};
        pt.transition[{0, 0}] = g->identity();
        c.points.assign(4, pt);
        const auto f = build_projection(c, trivial_multiplier(g));
        projection_checks(p, f, "trivial");
        p.check(rank_trace(f, one_dim_trace(f.sigma)) == Complex(1.0), "tr1 rank");
    }
    {
        auto& p = r.add("circle covers: P^2 = P, P^* = P (exact phases, coefficients <= 1e-13)");
        for (const auto& jumps : std::vector<std::vector<std::int64_t>>{{1, 0}, {1, 1}, {0, 1, 0}, {2, -1, 0, 0}}) {
            CircleCoverSpec s;
            s.grid = 256;
            s.patches = static_cast<int>(jumps.size());
            s.jumps = jumps;
            const auto cover = circle_cover(s);
            projection_checks(p, build_projection(cover, trivial_multiplier(cover.group)), "circle m=" + std::to_string(s.patches));
        }
    }
    {
        auto& p = r.add("torus cover with magnetic sigma^s (s in {1/3, 1}, theta=1): P^2 = P, P^* = P");
        CircleCoverSpec s;
        s.grid = 24;
        const auto factor = circle_cover(s);
        const auto torus = torus_cover(factor, factor);
        for (const auto gauge : {Gauge::landau, Gauge::symmetric})
            for (const auto& sv : {Rational(1, 3), Rational(1)}) {
                LatticeGeometricData d;
                d.theta = Rational(1);
                d.gauge = gauge;
                const auto sigma = power_family(geometric_multiplier(torus.group, d), sv);
                projection_checks(p, build_projection(torus, sigma, d, sv), gauge_name(gauge) + " s=" + sv.str());
            }
    }
    {
        auto& p = r.add("other lift choices change P by a diagonal phase conjugation (observed)");
        CircleCoverSpec s;
        s.grid = 16;
        const auto torus = torus_cover(circle_cover(s), circle_cover(s));
        for (const auto gauge : {Gauge::landau, Gauge::symmetric}) {
            bool changed = false;
            for (const auto& gamma : {GroupElement{1, 0}, GroupElement{0, 1}, GroupElement{2, -3}}) {
                LatticeGeometricData d;
                d.theta = Rational(1);
                d.gauge = gauge;
                const Rational sv(1, 3);
                const auto sigma = power_family(geometric_multiplier(torus.group, d), sv);
                const auto f = build_projection(torus, sigma, d, sv);
                const auto g = build_projection(shift_lifts(torus, gamma), sigma, d, sv);
                std::string w;
                p.check(related_by_diagonal_phase(f, g, &w), gauge_name(gauge) + " " + gamma.str() + " " + w);
                for (std::size_t n = 0; n < f.entries.size() && !changed; ++n)
                    for (std::size_t k = 0; k < f.entries[n].size(); ++k)
                        if (f.entries[n][k] && !(f.entries[n][k]->phase == g.entries[n][k]->phase)) changed = true;
            }
            p.check(changed, gauge_name(gauge) + ": no lift shift changed a phase");
        }
    }
    {
        auto& p = r.add("rank_trace(tr2) = 1; tau<g> = 0 for g != e", 1e-13);
        CircleCoverSpec s;
        const auto circle = circle_cover(s);
        const auto f = build_projection(circle, trivial_multiplier(circle.group));
        p.record(std::abs(rank_trace(f, regular_trace(f.sigma)) - 1.0), "circle tr2");
        for (const auto& g : {GroupElement{1}, GroupElement{-1}, GroupElement{2}})
            p.record(std::abs(rank_trace(f, conjugacy_trace(f.sigma, g))), "tau<" + g.str() + ">");
        CircleCoverSpec ts;
        ts.grid = 16;
        const auto torus = torus_cover(circle_cover(ts), circle_cover(ts));
        LatticeGeometricData d;
        d.theta = Rational(1);
        const auto sigma = power_family(geometric_multiplier(torus.group, d), Rational(1, 3));
        p.record(std::abs(rank_trace(build_projection(torus, sigma, d, Rational(1, 3)), regular_trace(sigma)) - 1.0), "torus tr2");
    }
    {
        auto& p = r.add("Lott pairing on the circle equals the winding number (N=1024)", 1e-3);
        const auto z = GroupDescriptor::free_abelian(1);
        for (const auto& jumps : std::vector<std::vector<std::int64_t>>{{1, 0}, {1, 1}, {0, 1, 0}, {2, -1, 1, 0}, {0, 0}}) {
            CircleCoverSpec s;
            s.grid = 1024;
            s.patches = static_cast<int>(jumps.size());
            s.jumps = jumps;
            const auto cover = circle_cover(s);
            p.record(std::fabs(lott_pairing_circle(cover, linear_cochain(cover.group, 0)) - static_cast<double>(s.winding())),
                     "winding " + std::to_string(s.winding()));
        }
        CircleCoverSpec s;
        s.grid = 1024;
        p.record(std::fabs(lott_pairing_circle(circle_cover(s), constant_cochain(z, 1, 0.0))), "c = 0");
        bool threw = false;
        try {
            const GroupCochain bad{z, 1, [](const Tuple& t) { return Complex(static_cast<double>(t[1][0] * t[1][0] - t[0][0])); },
                                   "non-closed", true, false};
            (void)lott_pairing_circle(circle_cover(s), bad);
        } catch (const std::invalid_argument&) {
            threw = true;
        }
        p.check(threw, "non-closed cochain accepted");
    }
    {
        auto& p = r.add("Lott pairing invariant under refining the partition of unity", 2e-3);
        for (const auto& jumps : std::vector<std::vector<std::int64_t>>{{1, 0}, {1, 1}}) {
            CircleCoverSpec a, b;
            a.grid = b.grid = 1024;
            a.patches = b.patches = static_cast<int>(jumps.size());
            a.jumps = b.jumps = jumps;
            a.ramp = 0.25;
            b.ramp = 0.08;
            const auto ca = circle_cover(a), cb = circle_cover(b);
            p.record(std::fabs(lott_pairing_circle(ca, linear_cochain(ca.group, 0)) - lott_pairing_circle(cb, linear_cochain(cb.group, 0))),
                     "ramps 0.25 / 0.08");
        }
    }
    return r;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"algebra", "multiplier", "traces", "spectral", "cohomology", "mishchenko", "representations"};
    return names;
}

inline SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg) {
    if (name == "algebra") return algebra_suite(cfg);
    if (name == "multiplier") return multiplier_suite(cfg);
    if (name == "traces") return traces_suite(cfg);
    if (name == "spectral") return spectral_suite(cfg);
    if (name == "cohomology") return cohomology_suite(cfg);
    if (name == "mishchenko") return mishchenko_suite(cfg);
    if (name == "representations") return representations_suite(cfg);
    throw ConfigError("unknown suite '" + name + "'");
}

}  // namespace twisted
