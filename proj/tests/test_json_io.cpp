#include <gtest/gtest.h>

#include "twisted/fixtures.hpp"
#include "twisted/json_io.hpp"

using namespace twisted;

TEST(JsonIo, Rationals) {
    EXPECT_EQ(rational_from_json(Json("2/6")), Rational(1, 3));
    EXPECT_EQ(rational_from_json(Json(3)), Rational(3));
    EXPECT_THROW(rational_from_json(Json(0.5)), ConfigError);
    EXPECT_THROW(rational_from_json(Json("1/0")), ConfigError);
    EXPECT_EQ(rational_to_json(Rational(-2, 4)), Json("-1/2"));
    const auto list = parse_rational_list("0,1/8,1/4");
    EXPECT_EQ(list, (std::vector<Rational>{Rational(0), Rational(1, 8), Rational(1, 4)}));
    EXPECT_THROW(parse_rational_list("0,,1"), ConfigError);
}

TEST(JsonIo, GroupNames) {
    EXPECT_EQ(group_from_name("z2")->rank(), 2);
    EXPECT_EQ(*group_from_name("s4")->order(), 24u);
    EXPECT_EQ(*group_from_name("a5")->order(), 60u);
    EXPECT_EQ(*group_from_name("c7")->order(), 7u);
    const auto p = group_from_name("z2xs3");
    EXPECT_EQ(p->kind(), GroupKind::product);
    EXPECT_EQ(*p->right()->order(), 6u);
    EXPECT_THROW(group_from_name("q8"), ConfigError);
    EXPECT_THROW(group_from_name("s9"), ConfigError);
}

TEST(JsonIo, GroupRoundTrip) {
    for (const auto& name : {"z3", "s3", "c5", "z1xa4"}) {
        const auto g = group_from_name(name);
        EXPECT_TRUE(same_group(group_from_json(group_to_json(g)), g)) << name;
    }
    EXPECT_THROW(group_from_json(Json{{"kind", "free-abelian"}}), ConfigError);
    EXPECT_THROW(group_from_json(Json{{"kind", "lie"}}), ConfigError);
    const Json bad_table = {{"kind", "finite-table"}, {"mul", {{0, 1}, {1, 1}}}, {"generators", {1}}};
    EXPECT_THROW(group_from_json(bad_table), ConfigError);
}

TEST(JsonIo, MultiplierSpecs) {
    const auto z2 = group_from_name("z2");
    const auto m = multiplier_from_name(z2, "magnetic:1/3");
    EXPECT_TRUE(m.same_as(magnetic_multiplier(z2, Rational(1, 3))));
    EXPECT_TRUE(multiplier_from_name(z2, "magnetic-symmetric:1/3").same_as(magnetic_multiplier(z2, Rational(1, 3), Gauge::symmetric)));
    EXPECT_TRUE(multiplier_from_name(z2, "trivial").same_as(trivial_multiplier(z2)));
    EXPECT_THROW(multiplier_from_name(z2, "magnetic"), ConfigError);
    EXPECT_THROW(multiplier_from_name(z2, "flux:1/2"), ConfigError);
    EXPECT_THROW(multiplier_from_json(z2, Json{{"kind", "magnetic"}, {"theta", 0.3}}), ConfigError);
    EXPECT_THROW(multiplier_from_json(z2, Json{{"kind", "magnetic"}, {"theta", "1/3"}, {"gauge", "coulomb"}}), ConfigError);

    const Json twisted = {{"kind", "coboundary-twist"},
                          {"base", {{"kind", "magnetic"}, {"theta", "1/5"}}},
                          {"z", {{"entries", {{{"g", {1, 0}}, {"angle", "1/7"}}}}}}};
    const auto t = multiplier_from_json(z2, twisted);
    const auto expect = coboundary_twist(magnetic_multiplier(z2, Rational(1, 5)),
                                         CoboundaryData::from_entries(z2, {{GroupElement{1, 0}, Rational(1, 7)}}));
    for (const auto& a : z2->ball(2))
        for (const auto& b : z2->ball(2)) EXPECT_TRUE(t(a, b) == expect(a, b));
}

TEST(JsonIo, CorruptedTableFixtureFileLoadsAndFailsCocycle) {
    const auto j = load_json_file(std::string(TWISTED_DATA) + "/corrupted_s3.json");
    const auto s3 = group_from_name(j.at("group").get<std::string>());
    const auto sigma = multiplier_from_json(s3, j.at("multiplier"));
    EXPECT_FALSE(verify_cocycle(sigma, 1).pass);
    const auto good = fixtures::s3_table(s3);
    EXPECT_TRUE(verify_cocycle(good, 1).pass);
}

TEST(JsonIo, MatricesAndElements) {
    const auto m = matrix_from_json(Json::parse("[[1, [0, 2]], [[0, -2], 3]]"));
    EXPECT_EQ(m(0, 1), Complex(0, 2));
    EXPECT_EQ(matrix_from_json(matrix_to_json(m)), m);
    EXPECT_THROW(matrix_from_json(Json::parse("[[1, 2], [3]]")), ConfigError);
    EXPECT_THROW(matrix_from_json(Json::parse("[]")), ConfigError);
    EXPECT_THROW(matrix_from_json(Json::parse("[[\"a\"]]")), ConfigError);

    const auto z2 = group_from_name("z2");
    const auto sigma = multiplier_from_name(z2, "magnetic:1/3");
    const auto a = element_from_json(sigma, Json::parse(R"({"terms": [{"g": [1, 0], "re": 1}, {"g": [0, -1], "im": 2}]})"));
    EXPECT_EQ(a.coefficient(GroupElement{0, -1}), Complex(0, 2));
    const auto b = element_from_json(sigma, algebra_to_json(a));
    EXPECT_EQ(a.distance(b), 0.0);
    EXPECT_THROW(element_from_json(sigma, Json::parse(R"({"terms": [{"g": [1, 0, 0]}]})")), ConfigError);
}

TEST(JsonIo, Traces) {
    const auto s3 = group_from_name("s3");
    const auto sigma = trivial_multiplier(s3);
    EXPECT_EQ(trace_from_json(sigma, Json{{"kind", "regular"}}).name(), "tr2");
    EXPECT_EQ(trace_from_json(sigma, Json{{"kind", "conjugacy"}, {"g", 1}}).kind(), "conjugacy");
    EXPECT_THROW(trace_from_json(sigma, Json{{"kind", "conjugacy"}, {"g", 17}}), ConfigError);
    EXPECT_THROW(trace_from_json(sigma, Json{{"kind", "dixmier"}}), ConfigError);
}

TEST(JsonIo, CoversAndCochains) {
    const auto c = cover_from_json(Json::parse(R"({"grid": 64, "patches": 2, "jumps": [1, 1]})"));
    EXPECT_EQ(c.points.size(), 64u);
    EXPECT_EQ(cover_from_json(Json::parse(R"({"kind": "torus", "factor": {"grid": 8}})")).patches, 4);
    EXPECT_THROW(cover_from_json(Json::parse(R"({"patches": 2, "jumps": [1]})")), ConfigError);
    EXPECT_THROW(cover_from_json(Json::parse(R"({"kind": "sphere"})")), ConfigError);
    EXPECT_THROW(cochain_from_name("linear-z(x)", group_from_name("z")), ConfigError);
    EXPECT_THROW(load_json_file(std::string(TWISTED_DATA) + "/malformed.json"), ConfigError);
    EXPECT_THROW(load_json_file("/nonexistent/config.json"), ConfigError);
}
