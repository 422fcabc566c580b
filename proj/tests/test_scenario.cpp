#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "xamm/errors.hpp"
#include "xamm/scenario.hpp"
#include "xamm/snapshot.hpp"

using namespace xamm;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kBase = R"({
  "schema_version": 1,
  "chains": [
    {"id": "a", "assets": [{"id": "X", "amount": "100", "curve": {"kind": "volatile"}}]},
    {"id": "b", "assets": [{"id": "Y", "amount": "100", "curve": {"kind": "stable", "amplification": "5"}}]}
  ]
})";

std::string error_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("bundled scenarios parse") {
    for (const char* name : {"two_chain_volatile", "stable_pair", "three_chain_random",
                             "negative_balance_fixture"}) {
        CAPTURE(name);
        const Scenario s = load_scenario(std::string(XAMM_SCENARIO_DIR) + "/" + name + ".json");
        CHECK(s.name == name);
    }
    const std::string err = error_of(read_file(std::string(XAMM_SCENARIO_DIR) + "/malformed.json"));
    CHECK(err.find("events[0].asset_out") != std::string::npos);
}

TEST_CASE("minimal scenario") {
    const Scenario s = parse_scenario(kBase);
    REQUIRE(s.chains.size() == 2);
    const auto d = s.deposits();
    CHECK(d[0].weight == 1.0);
    CHECK(d[1].kind == CurveKind::Stable);
    CHECK(d[1].amplification == 5.0);
    CHECK(s.fee_rate == 0.0);
    CHECK(s.tolerance == kDefaultValueTolerance);
}

TEST_CASE("scenario diagnostics") {
    CHECK(error_of("{\n  \"chains\": [\n}").find("line 3") != std::string::npos);
    CHECK(error_of(R"({"schema_version": 2, "chains": []})").find("schema_version") != std::string::npos);

    std::string float_literal = kBase;
    float_literal.replace(float_literal.find("\"100\""), 5, "100.5");
    CHECK(error_of(float_literal).find("chains[0].assets[0].amount") != std::string::npos);

    std::string bad_kind = kBase;
    bad_kind.replace(bad_kind.find("volatile"), 8, "curvy");
    CHECK(error_of(bad_kind).find("chains[0].assets[0].curve.kind") != std::string::npos);

    std::string no_amp = kBase;
    no_amp.replace(no_amp.find(", \"amplification\": \"5\""), 22, "");
    CHECK(error_of(no_amp).find("amplification") != std::string::npos);

    std::string bad_fee = kBase;
    bad_fee.insert(1, "\"fee_rate\": \"1.5\",");
    CHECK(error_of(bad_fee).find("fee_rate") != std::string::npos);

    std::string bad_event = kBase;
    bad_event.insert(bad_event.rfind('}'), R"(, "events": [{"tick": 1, "type": "teleport"}])");
    CHECK(error_of(bad_event).find("events[0].type") != std::string::npos);

    std::string bad_number = kBase;
    bad_number.replace(bad_number.find("\"100\""), 5, "\"1e\"");
    CHECK(error_of(bad_number).find("amount") != std::string::npos);

    std::string single = R"({"chains": [{"id": "a", "assets": [{"id": "X", "amount": "1", "curve": {"kind": "volatile"}}]}]})";
    CHECK(error_of(single).find("two assets") != std::string::npos);
}

TEST_CASE("snapshot round trip") {
    const Scenario s = parse_scenario(kBase);
    const Genesis g = init_pool(s.deposits(), 0.003, "founder");
    const std::string text = snapshot_to_json(g.pools, g.ledger);
    const Genesis back = snapshot_from_json(text);
    CHECK(back.pools == g.pools);
    CHECK(back.ledger.total_supply() == g.ledger.total_supply());
    CHECK(snapshot_to_json(back.pools, back.ledger) == text);
}

TEST_CASE("golden snapshot") {
    const Scenario s = parse_scenario(kBase);
    const Genesis g = init_pool(s.deposits(), 0.0, "founder");
    const std::string expected = R"({
  "chains": [
    {
      "id": "a",
      "fee_rate": "0",
      "assets": [
        {
          "id": "X",
          "balance": "100",
          "reference": "100",
          "curve": {
            "kind": "volatile",
            "weight": "1"
          }
        }
      ]
    },
    {
      "id": "b",
      "fee_rate": "0",
      "assets": [
        {
          "id": "Y",
          "balance": "100",
          "reference": "100",
          "curve": {
            "kind": "stable",
            "weight": "1",
            "x_stable": "100",
            "amplification": "5"
          }
        }
      ]
    }
  ],
  "shares": {
    "total_supply": "100",
    "positions": {
      "founder": "100"
    }
  }
})";
    CHECK(snapshot_to_json(g.pools, g.ledger) == expected);
}
