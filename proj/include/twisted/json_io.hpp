#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "twisted/algebra.hpp"
#include "twisted/cohomology.hpp"
#include "twisted/group.hpp"
#include "twisted/mishchenko.hpp"
#include "twisted/multiplier.hpp"
#include "twisted/spectral.hpp"
#include "twisted/traces.hpp"

namespace twisted {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

/// Malformed or inconsistent configuration input.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
    return j.at(key);
}

template <class F>
auto translate(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Json::exception& e) {
        throw ConfigError(e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    } catch (const std::out_of_range& e) {
        throw ConfigError(e.what());
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace detail

/// Rationals are written as strings "p/q" (or integers); floats are rejected.
inline Rational rational_from_json(const Json& j) {
    if (j.is_string()) return detail::translate([&] { return Rational::parse(j.get<std::string>()); });
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    throw ConfigError("rational values must be strings \"p/q\" or integers, got " + j.dump());
}

inline Json rational_to_json(const Rational& q) { return q.str(); }

// ---------------------------------------------------------------------------
// Groups

inline Group group_from_json(const Json& j) {
    return detail::translate([&]() -> Group {
        const auto kind = detail::field(j, "kind").get<std::string>();
        if (kind == "free-abelian") return GroupDescriptor::free_abelian(detail::field(j, "rank").get<int>());
        if (kind == "product")
            return GroupDescriptor::product(group_from_json(detail::field(j, "left")), group_from_json(detail::field(j, "right")));
        if (kind == "finite-table") {
            auto mul = detail::field(j, "mul").get<std::vector<std::vector<int>>>();
            if (j.contains("n") && j.at("n").get<std::size_t>() != mul.size())
                throw ConfigError("'n' does not match the table size");
            const int identity = j.value("identity", 0);
            const auto gens = detail::field(j, "generators").get<std::vector<int>>();
            auto g = GroupDescriptor::finite_table(std::move(mul), identity, gens, j.value("name", std::string("finite")));
            if (j.contains("inverse")) {
                const auto inv = j.at("inverse").get<std::vector<int>>();
                if (inv.size() != *g->order()) throw ConfigError("inverse table has wrong size");
                for (std::size_t a = 0; a < inv.size(); ++a)
                    if (GroupElement{inv[a]} != g->inverse(GroupElement{static_cast<std::int64_t>(a)}))
                        throw ConfigError("inverse table inconsistent at element " + std::to_string(a));
            }
            return g;
        }
        throw ConfigError("unknown group kind '" + kind + "'");
    });
}

inline Json group_to_json(const Group& g) {
    switch (g->kind()) {
        case GroupKind::free_abelian: return {{"kind", "free-abelian"}, {"rank", g->rank()}};
        case GroupKind::product: {
            return {{"kind", "product"}, {"left", group_to_json(g->left())}, {"right", group_to_json(g->right())}};
        }
        case GroupKind::finite_table: {
            const auto n = *g->order();
            std::vector<std::vector<std::int64_t>> mul(n, std::vector<std::int64_t>(n));
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    mul[a][b] = g->multiply_unchecked(GroupElement{static_cast<std::int64_t>(a)},
                                                      GroupElement{static_cast<std::int64_t>(b)})[0];
            std::vector<std::int64_t> gens;
            for (const auto& s : g->generators()) gens.push_back(s[0]);
            return {{"kind", "finite-table"}, {"n", n}, {"mul", mul}, {"identity", g->identity()[0]},
                    {"generators", gens}, {"name", g->name()}};
        }
    }
    return {};
}

/// Short names: z, z1..z9 (Z^k), s3..s5, a4, a5, c<n> (cyclic), and products "LxR".
inline Group group_from_name(const std::string& name) {
    return detail::translate([&]() -> Group {
        if (auto x = name.find('x'); x != std::string::npos)
            return GroupDescriptor::product(group_from_name(name.substr(0, x)), group_from_name(name.substr(x + 1)));
        static const std::regex zk("z([1-9])?"), sd("s([2-5])"), ad("a([3-5])"), cn("c([1-9][0-9]*)");
        std::smatch m;
        if (std::regex_match(name, m, zk)) return GroupDescriptor::free_abelian(m[1].matched ? std::stoi(m[1]) : 1);
        if (std::regex_match(name, m, sd)) return symmetric_group(std::stoi(m[1]));
        if (std::regex_match(name, m, ad)) return alternating_group(std::stoi(m[1]));
        if (std::regex_match(name, m, cn)) return cyclic_group(std::stoi(m[1]));
        throw ConfigError("unknown group name '" + name + "'");
    });
}

inline Json element_to_json(const GroupElement& g) { return g.c; }

inline GroupElement element_from_json(const Group& G, const Json& j) {
    return detail::translate([&] {
        GroupElement g;
        if (j.is_number_integer()) g = GroupElement{j.get<std::int64_t>()};
        else g.c = j.get<std::vector<std::int64_t>>();
        G->require(g);
        return g;
    });
}

// ---------------------------------------------------------------------------
// Multipliers

inline CoboundaryData coboundary_from_json(const Group& G, const Json& j) {
    return detail::translate([&] {
        std::map<GroupElement, Rational> entries;
        for (const auto& e : detail::field(j, "entries"))
            entries[element_from_json(G, detail::field(e, "g"))] = rational_from_json(detail::field(e, "angle"));
        return CoboundaryData::from_entries(G, std::move(entries));
    });
}

inline Gauge gauge_from_string(const std::string& s) {
    if (s == "landau") return Gauge::landau;
    if (s == "symmetric") return Gauge::symmetric;
    throw ConfigError("unknown gauge '" + s + "'");
}

inline LatticeGeometricData geometric_data_from_json(const Json& j) {
    LatticeGeometricData d;
    d.theta = rational_from_json(detail::field(j, "theta"));
    d.gauge = gauge_from_string(j.value("gauge", std::string("landau")));
    if (j.contains("base_point")) {
        const auto& bp = j.at("base_point");
        if (!bp.is_array() || bp.size() != 2) throw ConfigError("base_point needs two coordinates");
        d.base_point = {rational_from_json(bp[0]), rational_from_json(bp[1])};
    }
    const auto norm = j.value("normalization", std::string("psi_e_zero"));
    if (norm == "psi_e_zero") d.normalization = PsiNormalization::psi_e_zero;
    else if (norm == "psi_at_base_point_zero") d.normalization = PsiNormalization::psi_at_base_point_zero;
    else throw ConfigError("unknown normalization '" + norm + "'");
    return d;
}

/// Multiplier spec on the given group. Kinds: trivial, magnetic, geometric,
/// table, power, coboundary-twist, conjugate, product, pullback-right.
inline Multiplier multiplier_from_json(const Group& G, const Json& j) {
    return detail::translate([&]() -> Multiplier {
        const auto kind = detail::field(j, "kind").get<std::string>();
        if (kind == "trivial") return trivial_multiplier(G);
        if (kind == "magnetic") {
            const auto theta = rational_from_json(detail::field(j, "theta"));
            const auto gauge = gauge_from_string(j.value("gauge", std::string("landau")));
            if (j.contains("pairing"))
                return magnetic_multiplier(G, theta, gauge, j.at("pairing").get<std::vector<std::vector<std::int64_t>>>());
            return magnetic_multiplier(G, theta, gauge);
        }
        if (kind == "geometric") return geometric_multiplier(G, geometric_data_from_json(j));
        if (kind == "table") {
            std::vector<std::vector<Rational>> angles;
            for (const auto& row : detail::field(j, "phases")) {
                angles.emplace_back();
                for (const auto& q : row) angles.back().push_back(rational_from_json(q));
            }
            return table_multiplier(G, std::move(angles));
        }
        if (kind == "power")
            return power_family(multiplier_from_json(G, detail::field(j, "base")), rational_from_json(detail::field(j, "s")));
        if (kind == "coboundary-twist")
            return coboundary_twist(multiplier_from_json(G, detail::field(j, "base")), coboundary_from_json(G, detail::field(j, "z")));
        if (kind == "conjugate") return conjugate(multiplier_from_json(G, detail::field(j, "base")));
        if (kind == "product" || kind == "pullback-right") {
            if (G->kind() != GroupKind::product) throw ConfigError(kind + " multiplier needs a product group");
            const auto& l = G->left();
            const auto& r = G->right();
            if (kind == "pullback-right") return pullback_from_right(G, multiplier_from_json(r, detail::field(j, "base")));
            return product_multiplier(G, multiplier_from_json(l, detail::field(j, "left")),
                                      multiplier_from_json(r, detail::field(j, "right")));
        }
        throw ConfigError("unknown multiplier kind '" + kind + "'");
    });
}

/// Short names: trivial, magnetic:p/q, magnetic-symmetric:p/q, geometric:p/q.
inline Multiplier multiplier_from_name(const Group& G, const std::string& name) {
    if (name == "trivial") return multiplier_from_json(G, {{"kind", "trivial"}});
    const auto colon = name.find(':');
    if (colon == std::string::npos) throw ConfigError("unknown multiplier name '" + name + "'");
    const auto head = name.substr(0, colon);
    const auto theta = name.substr(colon + 1);
    if (head == "magnetic") return multiplier_from_json(G, {{"kind", "magnetic"}, {"theta", theta}});
    if (head == "magnetic-symmetric")
        return multiplier_from_json(G, {{"kind", "magnetic"}, {"theta", theta}, {"gauge", "symmetric"}});
    if (head == "geometric") return multiplier_from_json(G, {{"kind", "geometric"}, {"theta", theta}});
    throw ConfigError("unknown multiplier name '" + name + "'");
}

// ---------------------------------------------------------------------------
// Algebra elements, matrices, traces

inline AlgebraElement element_from_json(const Multiplier& sigma, const Json& j) {
    return detail::translate([&] {
        AlgebraElement::Terms terms;
        for (const auto& t : detail::field(j, "terms")) {
            const auto g = element_from_json(sigma.group(), detail::field(t, "g"));
            terms[g] += Complex(t.value("re", 0.0), t.value("im", 0.0));
        }
        return AlgebraElement(sigma, std::move(terms));
    });
}

inline Json algebra_to_json(const AlgebraElement& a) {
    Json terms = Json::array();
    for (const auto& [g, c] : a.terms()) terms.push_back({{"g", g.c}, {"re", c.real()}, {"im", c.imag()}});
    return {{"terms", terms}};
}

/// Dense matrix: rows of reals, or rows of [re, im] pairs.
inline CMatrix matrix_from_json(const Json& j) {
    return detail::translate([&] {
        if (!j.is_array() || j.empty()) throw ConfigError("matrix must be a non-empty array of rows");
        const auto n = static_cast<Eigen::Index>(j.size());
        const auto m = static_cast<Eigen::Index>(j[0].size());
        CMatrix out(n, m);
        for (Eigen::Index r = 0; r < n; ++r) {
            const auto& row = j[static_cast<std::size_t>(r)];
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m) throw ConfigError("ragged matrix");
            for (Eigen::Index c = 0; c < m; ++c) {
                const auto& v = row[static_cast<std::size_t>(c)];
                if (v.is_number()) out(r, c) = v.get<double>();
                else if (v.is_array() && v.size() == 2) out(r, c) = Complex(v[0].get<double>(), v[1].get<double>());
                else throw ConfigError("matrix entries must be numbers or [re, im] pairs");
            }
        }
        return out;
    });
}

inline Json matrix_to_json(const CMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

/// Trace spec. Kinds: regular, one-dim, conjugacy {g}, linear-combination
/// {parts: [{re, im, trace}]}, unitary {generators: [{g, matrix}], target: trivial|identity}.
inline TraceFunctional trace_from_json(const Multiplier& sigma, const Json& j) {
    return detail::translate([&]() -> TraceFunctional {
        const auto kind = detail::field(j, "kind").get<std::string>();
        if (kind == "regular") return regular_trace(sigma);
        if (kind == "one-dim") return one_dim_trace(sigma);
        if (kind == "conjugacy") return conjugacy_trace(sigma, element_from_json(sigma.group(), detail::field(j, "g")));
        if (kind == "linear-combination") {
            std::vector<std::pair<Complex, TraceFunctional>> parts;
            for (const auto& p : detail::field(j, "parts"))
                parts.emplace_back(Complex(p.value("re", 0.0), p.value("im", 0.0)), trace_from_json(sigma, detail::field(p, "trace")));
            return linear_combination(parts);
        }
        if (kind == "unitary") {
            std::map<GroupElement, CMatrix> gens;
            for (const auto& e : detail::field(j, "generators"))
                gens[element_from_json(sigma.group(), detail::field(e, "g"))] = matrix_from_json(detail::field(e, "matrix"));
            const UnitaryRep u(sigma.group(), std::move(gens));
            const auto target = j.value("target", std::string("trivial"));
            if (target == "trivial") {
                const auto pi = trivial_hom(sigma.group());
                return unitary_trace(sigma, u, pi, regular_trace(trivial_multiplier(pi.target)));
            }
            if (target == "identity") return unitary_trace(sigma, u, identity_hom(sigma.group()), regular_trace(sigma));
            throw ConfigError("unknown unitary trace target '" + target + "'");
        }
        throw ConfigError("unknown trace kind '" + kind + "'");
    });
}

// ---------------------------------------------------------------------------
// Covers and cochains

inline CircleCoverSpec circle_spec_from_json(const Json& j) {
    return detail::translate([&] {
        CircleCoverSpec s;
        s.grid = j.value("grid", s.grid);
        s.patches = j.value("patches", s.patches);
        if (j.contains("jumps")) s.jumps = j.at("jumps").get<std::vector<std::int64_t>>();
        else s.jumps.assign(static_cast<std::size_t>(s.patches), 0), s.jumps[0] = 1;
        s.ramp = j.value("ramp", s.ramp);
        return s;
    });
}

/// {"kind":"circle", grid, patches, jumps, ramp} or {"kind":"torus","factor":{circle spec}}.
inline CoverData cover_from_json(const Json& j) {
    return detail::translate([&]() -> CoverData {
        const auto kind = j.value("kind", std::string("circle"));
        if (kind == "circle") return circle_cover(circle_spec_from_json(j));
        if (kind == "torus") {
            const auto f = circle_cover(circle_spec_from_json(detail::field(j, "factor")));
            return torus_cover(f, f);
        }
        throw ConfigError("unknown cover kind '" + kind + "'");
    });
}

inline Json circle_spec_to_json(const CircleCoverSpec& s) {
    return {{"kind", "circle"}, {"grid", s.grid}, {"patches", s.patches}, {"jumps", s.jumps}, {"ramp", s.ramp}};
}

inline GroupCochain cochain_from_name(const std::string& name, const Group& G, int constant_degree = 0) {
    return detail::translate([&] { return cochain_by_name(name, G, constant_degree); });
}

// ---------------------------------------------------------------------------
// Files

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("malformed JSON in '" + path + "': " + e.what());
    }
}

/// Comma-separated rationals, e.g. "0,1/8,1/4".
inline std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (item.empty()) throw ConfigError("empty entry in list '" + text + "'");
        out.push_back(detail::translate([&] { return Rational::parse(item); }));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace twisted
