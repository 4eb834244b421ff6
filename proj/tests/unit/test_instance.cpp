#include <doctest.h>

#include <fstream>
#include <set>

#include "bpmp/instance.hpp"
#include "support.hpp"

using namespace bpmp;

namespace {

bool has_rule(const std::vector<Violation>& vs, const std::string& rule) {
  for (const auto& v : vs)
    if (v.rule == rule) return true;
  return false;
}

std::string write_text(const std::filesystem::path& dir, const std::string& name, const std::string& text) {
  const auto p = dir / name;
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_SUITE("instance") {
  TEST_CASE("n = 3 with density 1 has exactly the three eligible requests") {
    GenerationParams params;
    params.density = 1.0;
    const auto inst = generate(3, 0, params);
    const std::vector<Arc> expected{{1, 2}, {1, 3}, {2, 3}};
    CHECK(requests(inst) == expected);
  }

  TEST_CASE("generation is a pure function of its inputs") {
    const auto a = to_json(generate(6, 42));
    const auto b = to_json(generate(6, 42));
    CHECK(a == b);
    CHECK(a != to_json(generate(6, 43)));
    GenerationParams sparse;
    sparse.density = 0.2;
    CHECK(a != to_json(generate(6, 42, sparse)));
  }

  TEST_CASE("origin-depot shortest path fits within D") {
    const auto inst = generate(8, 7);
    const auto sp = testing::bellman_ford_all(inst);
    CHECK(sp[0][7] <= inst.max_distance);
    CHECK(inst.max_distance == doctest::Approx(std::round(3.0 * inst.d(1, 8) * 100.0) / 100.0));
  }

  TEST_CASE("generated distances satisfy the triangle inequality") {
    for (int n : {4, 9, 15})
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst = generate(n, seed);
        for (int i = 1; i <= n; ++i)
          for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k) REQUIRE(inst.d(i, j) <= inst.d(i, k) + inst.d(k, j) + 1e-9);
      }
  }

  TEST_CASE("generated instances always validate") {
    for (int n = 3; n <= 50; ++n)
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto inst = generate(n, seed * 7919 + static_cast<std::uint64_t>(n));
        const auto v = validate(inst);
        INFO("n=" << n << " seed=" << seed);
        REQUIRE(v.empty());
      }
  }

  TEST_CASE("generated request weights stay in range and on the 0.01 grid") {
    const auto inst = generate(12, 3);
    for (const auto& r : requests(inst)) {
      const double w = inst.w(r.from, r.to);
      CHECK(w >= 0.1 * inst.capacity - 1e-9);
      CHECK(w <= inst.capacity);
      CHECK(std::fabs(w * 100.0 - std::round(w * 100.0)) < 1e-6);
    }
  }

  TEST_CASE("generation rejects bad parameters") {
    CHECK_THROWS_AS(generate(2, 0), std::invalid_argument);
    GenerationParams p;
    p.density = 0.0;
    CHECK_THROWS_AS(generate(5, 0, p), std::invalid_argument);
    p.density = 1.5;
    CHECK_THROWS_AS(generate(5, 0, p), std::invalid_argument);
    p = {};
    p.slack = 1.0;
    CHECK_THROWS_AS(generate(5, 0, p), std::invalid_argument);
  }

  TEST_CASE("save then load is the identity") {
    const auto dir = testing::temp_dir("instance_roundtrip");
    for (std::uint64_t seed : {42u, 1u, 99u}) {
      const auto inst = generate(6, seed);
      save(inst, dir / "a.json");
      CHECK(load(dir / "a.json") == inst);
    }
  }

  TEST_CASE("serialization has the fixed key order") {
    const auto text = to_json(generate(4, 1));
    const std::vector<std::string> keys{"\"n\"", "\"p\"", "\"c\"", "\"v\"", "\"Q\"", "\"D\"", "\"dist\"",
                                        "\"req_weight\""};
    std::size_t last = 0;
    for (const auto& k : keys) {
      const auto pos = text.find(k);
      REQUIRE(pos != std::string::npos);
      CHECK(pos >= last);
      last = pos;
    }
  }

  TEST_CASE("validate names violated invariants") {
    const auto good = generate(5, 2);
    CHECK(validate(good).empty());

    auto q0 = good;
    q0.capacity = 0.0;
    const auto v = validate(q0);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "Q");
    CHECK(v[0].rule == "capacity must be positive");

    auto heavy = good;
    heavy.req_weight[0][1] = heavy.capacity + 1.0;
    CHECK(has_rule(validate(heavy), "request exceeds capacity"));

    auto diag = good;
    diag.dist[2][2] = 1.0;
    CHECK(has_rule(validate(diag), "diagonal distance nonzero"));

    auto into_origin = good;
    into_origin.req_weight[2][0] = 1.0;
    CHECK(has_rule(validate(into_origin), "request into origin node"));

    auto out_of_depot = good;
    out_of_depot.req_weight[4][2] = 1.0;
    CHECK(has_rule(validate(out_of_depot), "request out of depot node"));

    auto tight = good;
    tight.max_distance = good.d(1, 5) / 2.0;
    CHECK(has_rule(validate(tight), "shortest origin-depot path exceeds max distance"));
  }

  TEST_CASE("loading reports parse and validation errors with context") {
    const auto dir = testing::temp_dir("instance_errors");
    const auto inst = generate(4, 0);

    auto bad_diag = inst;
    bad_diag.dist[1][1] = 1.0;
    const auto p1 = write_text(dir, "diag.json", to_json(bad_diag));
    try {
      load(p1);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("diagonal distance nonzero") != std::string::npos);
    }

    auto back = inst;
    back.req_weight[2][0] = 1.0;
    CHECK_THROWS_AS(load(write_text(dir, "back.json", to_json(back))), ValidationError);

    const auto p2 = write_text(dir, "broken.json", "{\n  \"n\": 4,\n  \"p\": ,\n}");
    try {
      load(p2);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    const auto p3 = write_text(dir, "type.json",
                               R"({"n": 3, "p": 1, "c": 1, "v": 1, "Q": "ten", "D": 5, "dist": [], "req_weight": []})");
    try {
      load(p3);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("'Q'") != std::string::npos);
    }
  }

  TEST_CASE("arc and request sets follow the index conventions") {
    const auto inst = generate(6, 5);
    const auto a = arcs(inst);
    CHECK(a.size() == static_cast<std::size_t>((6 - 1) * (6 - 2) + 1));
    CHECK(std::is_sorted(a.begin(), a.end()));
    for (const auto& arc : a) {
      CHECK(arc.from != arc.to);
      CHECK(arc.to != 1);
      CHECK(arc.from != 6);
    }
    for (const auto& r : requests(inst)) CHECK(inst.w(r.from, r.to) > 0.0);
  }
}
