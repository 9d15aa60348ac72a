#include <doctest.h>

#include <algorithm>

#include "latticeflow/verify.hpp"
#include "run_spec.hpp"

using namespace lf;
using namespace lf::cli;

static Err code_of(const json& config, const json& flags = json::object()) {
    try {
        parse_config(config, flags);
    } catch (const Error& e) {
        return e.code;
    }
    FAIL("no error raised");
    return Err::BadInput;
}

TEST_CASE("parse_config: documented examples") {
    auto s = parse_config(json::parse(R"({"model":"loop-o2","x":0.7071067811865476,
                                          "domain":{"type":"hex_ball","radius":8}})"));
    CHECK(s.superdual_regime);
    CHECK(s.fkg_regime);
    CHECK(s.warnings.empty());
    CHECK(s.domain["radius"] == 8);

    auto six = parse_config(json::parse(R"({"model":"six-vertex","a":1,"b":1,"c":3})"));
    CHECK_FALSE(six.superdual_regime);
    CHECK(six.fkg_regime);
    CHECK(six.warnings.size() == 1);

    auto fk = parse_config(json::parse(R"({"model":"fk","q":0.5})"));
    CHECK_FALSE(fk.fkg_regime);
    CHECK(fk.warnings.size() == 1);
    CHECK(fk.bc == "free");
}

TEST_CASE("parse_config: defaults and errors") {
    auto s = parse_config(json::object());
    CHECK(s.model == "loop-o2");
    CHECK(s.bc == "r+w+");
    CHECK(s.domain["type"] == "hex_ball");
    CHECK(parse_config(json{{"bc", "b-"}}).bc == "r-");

    CHECK(code_of(json{{"model", "loop-o2"}, {"colour", 1}}) == Err::UnknownField);
    CHECK(code_of(json{{"model", "bkw"}, {"lambda", 1.2}}) == Err::OutOfRange);
    CHECK(code_of(json{{"model", "bkw"}, {"lambda", -0.1}}) == Err::OutOfRange);
    CHECK(code_of(json{{"x", -1}}) == Err::OutOfRange);
    CHECK(code_of(json{{"sweeps", 10}, {"burn_in", 10}}) == Err::OutOfRange);
    CHECK(code_of(json{{"model", "potts"}}) == Err::OutOfRange);
    CHECK(code_of(json{{"model", "fk"}, {"bc", "r+"}}) == Err::OutOfRange);
    CHECK(code_of(json{{"model", "loop-o2"}, {"q", 2}}) == Err::ConflictingFlags);
    CHECK(code_of(json{{"x", 0.8}}, json{{"x", 0.9}}) == Err::ConflictingFlags);
    CHECK(code_of(json{{"x", "big"}}) == Err::BadInput);
    CHECK(code_of(json{{"model", "six-vertex"}, {"domain", {{"type", "even_diamond"}, {"radius", 3}}}}) != Err::BadInput);

    // equal values from both sources are fine
    CHECK(parse_config(json{{"x", 0.8}}, json{{"x", 0.8}}).x == 0.8);
}

TEST_CASE("config hash and manifest") {
    auto a = parse_config(json{{"x", 0.8}, {"seed", 5}});
    auto b = parse_config_text(R"({"seed":5,"x":0.8})");
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 40);
    CHECK(config_hash(a) != config_hash(parse_config(json{{"x", 0.8}, {"seed", 6}})));

    auto m = manifest(a, false);
    CHECK(m["tool_version"] == kToolVersion);
    CHECK(m["config_hash"] == config_hash(a));
    CHECK_FALSE(m.contains("wall_clock"));
    CHECK(manifest(a, true).contains("wall_clock"));
    // the manifest's config reproduces the same spec
    auto again = parse_config(m["config"]);
    CHECK(again.to_json() == a.to_json());
    CHECK(config_hash(again) == config_hash(a));
}

TEST_CASE("verify: a mutated ingredient is caught and named") {
    VerifyOptions o;
    o.level = Level::Quick;
    o.only = {7, 9};
    auto good = run_criteria(o);
    REQUIRE(good.size() == 2);
    for (auto& r : good) CHECK(r.passed);

    o.mutation = "p8";
    auto bad = run_criteria(o);
    REQUIRE(bad.size() == 2);
    CHECK_FALSE(bad[0].passed);
    CHECK(bad[0].name == criterion_name(7));
    CHECK(bad[1].passed);
    auto rep = json::parse(report_json(bad, o));
    CHECK(rep.dump().find("p8 oracle") != std::string::npos);
    auto muts = known_mutations();
    CHECK(std::find(muts.begin(), muts.end(), "p8") != muts.end());
}
