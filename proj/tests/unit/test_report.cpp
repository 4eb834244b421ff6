#include <doctest.h>

#include <sstream>

#include "bpmp/cim.hpp"
#include "bpmp/measure.hpp"
#include "bpmp/report.hpp"
#include "support.hpp"

using namespace bpmp;

namespace {

CompositeReport fixture_report() {
  const auto w = WeightScheme::node_arc();
  const auto base = load_run_table(testing::data_dir() / "table2_original_node_arc_n20.csv");
  const auto chal = load_run_table(testing::data_dir() / "table3_conditional_arc_flow_n20.csv");
  auto r = composite_report("t1", {given_size_result(10, 1.52, 1.35, 1.72, w), size_result(20, speedups(base, chal), w)}, w);
  r.incumbent = "node_arc[none]";
  r.challenger = "node_arc[t1]";
  return r;
}

std::string without_bold(std::string s) {
  for (auto p = s.find("**"); p != std::string::npos; p = s.find("**")) s.erase(p, 2);
  return s;
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("markdown has the fixture median row") {
    const auto md = render_markdown({fixture_report()});
    CHECK(without_bold(md).find("| Median | 6.64 | 9.52 | 8.10 |") != std::string::npos);
    CHECK(md.find("| Median | **6.64** | **9.52** | **8.10** |") != std::string::npos);
    CHECK(md.find("| **n = 20** | | | |") != std::string::npos);
    CHECK(md.find("Decision: adopt (GCI 8.24)") != std::string::npos);
  }

  TEST_CASE("markdown index table") {
    const auto md = without_bold(render_markdown({fixture_report()}));
    CHECK(md.find("| n | C_n (CPU) | T_n (Ticks) | R_n (Real Time) | I_n | GCI |") != std::string::npos);
    CHECK(md.find("| 10 | 1.52 | 1.35 | 1.72 | 1.53 | 8.24 |") != std::string::npos);
    CHECK(md.find("| 20 | 8.08 | 9.96 | 8.49 | 8.91 | |") != std::string::npos);
  }

  TEST_CASE("only values above one are bold") {
    const auto w = WeightScheme::node_arc();
    auto r = composite_report("slow", {given_size_result(20, 0.5, 1.0, 1.25, w)}, w);
    const auto md = render_markdown({r});
    CHECK(md.find("| 20 | 0.50 | 1.00 | **1.25** | 0.95 | 0.95 |") != std::string::npos);
    CHECK(md.find("Decision: reject (GCI 0.95)") != std::string::npos);
  }

  TEST_CASE("notes are rendered") {
    CompositeReport r;
    r.label = "t10";
    r.gci = 1.0;
    r.note = "not evaluated: wrong formulation";
    const auto md = render_markdown({r});
    CHECK(md.find("## t10") != std::string::npos);
    CHECK(md.find("not evaluated: wrong formulation") != std::string::npos);
    CHECK(render_csv({r}) == "label,size,metric,statistic,value\nt10,all,composite,gci,1\n");
  }

  TEST_CASE("empty report lists give header-only documents") {
    CHECK(render_markdown({}) == "# CIM report\n");
    CHECK(render_csv({}) == "label,size,metric,statistic,value\n");
    std::istringstream in(render_csv({}));
    CHECK(parse_report_csv(in).empty());
  }

  TEST_CASE("CSV round trip reproduces the report fields") {
    auto r = fixture_report();
    r.label = "t1, \"quoted\"";
    std::istringstream in(render_csv({r}));
    const auto rows = parse_report_csv(in);
    // 12 statistics and 4 indices for n = 20, 4 indices for n = 10, one GCI
    REQUIRE(rows.size() == 21);
    const auto& s20 = *r.sizes[1].stats;
    int matched = 0;
    for (const auto& row : rows) {
      CHECK(row.label == r.label);
      if (row.size == "20" && row.metric == "cpu" && row.statistic == "max") {
        CHECK(row.value == s20.cpu.max);
        ++matched;
      }
      if (row.size == "20" && row.metric == "real" && row.statistic == "median") {
        CHECK(row.value == s20.real.median);
        ++matched;
      }
      if (row.size == "10" && row.metric == "composite" && row.statistic == "index") {
        CHECK(row.value == r.sizes[0].indices.i);
        ++matched;
      }
      if (row.size == "all") {
        CHECK(row.value == r.gci);
        ++matched;
      }
    }
    CHECK(matched == 4);
  }

  TEST_CASE("CSV parser rejects malformed rows") {
    std::istringstream header("a,b\n");
    CHECK_THROWS_AS(parse_report_csv(header), std::invalid_argument);
    std::istringstream fields("label,size,metric,statistic,value\nx,1,cpu\n");
    CHECK_THROWS_AS(parse_report_csv(fields), std::invalid_argument);
    std::istringstream value("label,size,metric,statistic,value\nx,1,cpu,min,abc\n");
    CHECK_THROWS_AS(parse_report_csv(value), std::invalid_argument);
  }
}
