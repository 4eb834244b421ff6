#include <doctest.h>

#include <fstream>

#include "bpmp/bench.hpp"
#include "bpmp/cim.hpp"
#include "bpmp/measure.hpp"
#include "support.hpp"

using namespace bpmp;

namespace {

// Values derived from the shipped 20-node run tables by an independent
// recomputation (per-instance ratios of trial means, then statistics).
constexpr double kCpu[4] = {1.3712908011869436, 12.212945256864298, 6.6449986416425579, 46.53198127925117};
constexpr double kTicks[4] = {4.70092825966681, 11.346945455273994, 9.5211038332103026, 22.637474541751526};
constexpr double kReal[4] = {3.5460992907801416, 9.746277464357302, 8.1001544735541291, 19.0};
constexpr double kC20 = 8.076098711265967;
constexpr double kT20 = 9.9604472408208089;
constexpr double kR20 = 8.4851373182574168;
constexpr double kI20 = 8.9100576700100742;
constexpr double kGci = 8.2392259810008941;

std::vector<RunMeasurement> table(const std::string& name) { return load_run_table(testing::data_dir() / name); }

SpeedupStats fixture_stats() {
  return speedups(table("table2_original_node_arc_n20.csv"), table("table3_conditional_arc_flow_n20.csv"));
}

void check_summary(const StatSummary& s, const double (&want)[4]) {
  CHECK(s.min == doctest::Approx(want[0]).epsilon(1e-12));
  CHECK(s.mean == doctest::Approx(want[1]).epsilon(1e-12));
  CHECK(s.median == doctest::Approx(want[2]).epsilon(1e-12));
  CHECK(s.max == doctest::Approx(want[3]).epsilon(1e-12));
}

RunMeasurement run(const std::string& id, std::vector<double> cpu, std::vector<double> wall, double ticks) {
  RunMeasurement m;
  m.instance_id = id;
  for (std::size_t k = 0; k < cpu.size(); ++k) m.trials.push_back({cpu[k], wall[k]});
  m.ticks = ticks;
  return m;
}

std::vector<RunMeasurement> scaled(std::vector<RunMeasurement> runs, double cpu, double wall, double ticks) {
  for (auto& r : runs) {
    for (auto& t : r.trials) {
      t.cpu_s *= cpu;
      t.wall_s *= wall;
    }
    r.ticks *= ticks;
  }
  return runs;
}

double gci_of(const std::vector<RunMeasurement>& base, const std::vector<RunMeasurement>& chal, int size = 20) {
  const auto w = WeightScheme::node_arc();
  return composite_report("x", {size_result(size, speedups(base, chal), w)}, w).gci;
}

// Deterministic synthetic timings: t1 halves every metric, t2 doubles it,
// every other technique leaves it unchanged.
struct SyntheticMeasurer {
  int* calls;
  RunMeasurement operator()(const Approach& a, const BenchInstance& b, int trials) const {
    ++*calls;
    double f = 1.0 + 0.1 * b.size + 0.01 * static_cast<double>(b.id.size());
    if (a.techniques.t1_conditional_arc_flow) f *= 0.5;
    if (a.techniques.t2_relax_node_degree) f *= 2.0;
    RunMeasurement m;
    m.instance_id = b.id;
    for (int k = 0; k < trials; ++k) m.trials.push_back({f * (1.0 + 0.25 * k), 2.0 * f});
    m.ticks = 1000.0 * f;
    return m;
  }
};

}  // namespace

TEST_SUITE("cim") {
  TEST_CASE("run tables load with their stored averages") {
    const auto base = table("table2_original_node_arc_n20.csv");
    REQUIRE(base.size() == 10);
    CHECK(base[0].instance_id == "1");
    CHECK(base[0].trials.size() == 3);
    CHECK(base[0].avg_cpu() == doctest::Approx(12378.666666666666));
    CHECK(base[0].ticks == 1244880.0);
    CHECK(base[2].avg_wall() == doctest::Approx(500.0));
  }

  TEST_CASE("fixture speedup statistics") {
    const auto s = fixture_stats();
    check_summary(s.cpu, kCpu);
    check_summary(s.ticks, kTicks);
    check_summary(s.real, kReal);
    REQUIRE(s.per_instance.size() == 10);
    CHECK(s.per_instance[2].cpu == doctest::Approx(2465.0 / 1797.0).epsilon(1e-3));
  }

  TEST_CASE("fixture indices and grand composite") {
    const auto w = WeightScheme::node_arc();
    const auto n20 = size_result(20, fixture_stats(), w);
    CHECK(n20.indices.c == doctest::Approx(kC20).epsilon(1e-12));
    CHECK(n20.indices.t == doctest::Approx(kT20).epsilon(1e-12));
    CHECK(n20.indices.r == doctest::Approx(kR20).epsilon(1e-12));
    CHECK(n20.indices.i == doctest::Approx(kI20).epsilon(1e-12));
    const auto n10 = given_size_result(10, 1.52, 1.35, 1.72, w);
    CHECK(n10.indices.i == doctest::Approx(1.530909090909091).epsilon(1e-12));
    const auto rep = composite_report("t1", {n20, n10}, w);
    CHECK(rep.gci == doctest::Approx(kGci).epsilon(1e-12));
    CHECK(rep.adopt);
    CHECK(rep.sizes.front().size == 10);
  }

  TEST_CASE("index examples with rounded inputs") {
    const StatWeights sw;
    CHECK(std::fabs(composite_metric_index({1.37, 12.21, 6.65, 46.52}, sw) - 8.08) <= 0.01);
    CHECK(std::fabs(composite_metric_index({4.70, 11.35, 9.52, 22.64}, sw) - 9.96) <= 0.01);
    CHECK(composite_metric_index({3.0, 3.0, 3.0, 3.0}, {1.0, 0.0, 2.0, 7.0}) == doctest::Approx(3.0));
    const MetricWeights mw;
    CHECK(std::fabs(size_index(8.08, 9.96, 8.48, mw) - 8.91) <= 0.01);
    CHECK(std::fabs(size_index(1.52, 1.35, 1.72, mw) - 1.53) <= 0.01);
    CHECK(size_index(2.5, 2.5, 2.5, mw) == doctest::Approx(2.5));
    const std::map<int, double> sizes{{10, 1.0}, {20, 10.0}, {30, 12.0}};
    CHECK(std::fabs(grand_composite({{10, 1.53}, {20, 8.91}}, sizes) - 8.24) <= 0.01);
    CHECK(std::fabs(grand_composite({{10, 0.95}, {20, 1.17}, {30, 1.40}}, sizes) - 1.28) <= 0.01);
    CHECK(std::fabs(grand_composite({{10, 1.24}, {20, 1.09}, {30, 1.24}}, sizes) - 1.18) <= 0.01);
    CHECK(grand_composite({{30, 1.7}}, sizes) == 1.7);
  }

  TEST_CASE("index functions reject bad weights") {
    CHECK_THROWS_AS(composite_metric_index({1, 1, 1, 1}, {0, 0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(size_index(1, 1, 1, {0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(grand_composite({{40, 1.0}}, {{10, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(grand_composite({}, {{10, 1.0}}), std::invalid_argument);
  }

  TEST_CASE("summary statistics") {
    const auto odd = summarize({3.0, 1.0, 2.0});
    CHECK(odd.median == 2.0);
    CHECK(odd.mean == 2.0);
    const auto even = summarize({6.20, 1.0, 7.09, 100.0});
    CHECK(even.median == doctest::Approx(6.645));
    CHECK(even.min == 1.0);
    CHECK(even.max == 100.0);
    CHECK_THROWS_AS(summarize({}), std::invalid_argument);
  }

  TEST_CASE("speedups pair instances by id and floor tiny values") {
    const std::vector<RunMeasurement> base{run("a", {2.0}, {4.0}, 10.0), run("b", {0.0}, {1.0}, 0.0)};
    const std::vector<RunMeasurement> chal{run("b", {0.0}, {2.0}, 0.0), run("a", {1.0}, {1.0}, 5.0)};
    const auto s = speedups(base, chal);
    CHECK(s.per_instance[0].cpu == 2.0);
    CHECK(s.per_instance[0].real == 4.0);
    CHECK(s.per_instance[1].cpu == 1.0);
    CHECK(s.per_instance[1].ticks == 1.0);
    CHECK(s.per_instance[1].real == 0.5);

    CHECK_THROWS_AS(speedups(base, {chal[0]}), std::invalid_argument);
    CHECK_THROWS_AS(speedups(base, {chal[0], run("c", {1.0}, {1.0}, 1.0)}), std::invalid_argument);
    CHECK_THROWS_AS(speedups({}, {}), std::invalid_argument);
  }

  TEST_CASE("identical measurements give unit speedups and a rejected GCI of 1") {
    const auto base = table("table2_original_node_arc_n20.csv");
    const auto s = speedups(base, base);
    for (Metric m : kMetrics) {
      CHECK(s.get(m).min == 1.0);
      CHECK(s.get(m).max == 1.0);
    }
    const auto w = WeightScheme::node_arc();
    const auto rep = composite_report("same", {size_result(20, s, w)}, w);
    CHECK(rep.gci == 1.0);
    CHECK_FALSE(rep.adopt);
  }

  TEST_CASE("halving every challenger metric gives GCI 2 exactly") {
    const auto base = table("table3_conditional_arc_flow_n20.csv");
    CHECK(gci_of(base, scaled(base, 0.5, 0.5, 0.5)) == 2.0);
  }

  TEST_CASE("uniform scaling leaves the chain unchanged") {
    const auto base = table("table2_original_node_arc_n20.csv");
    const auto chal = table("table3_conditional_arc_flow_n20.csv");
    const double g = gci_of(base, chal);
    for (double k : {1e-3, 0.37, 3.0, 1e4})
      CHECK(std::fabs(gci_of(scaled(base, k, k, k), scaled(chal, k, k, k)) - g) <= 1e-12 * g);
  }

  TEST_CASE("a faster challenger never lowers the GCI") {
    const auto base = table("table2_original_node_arc_n20.csv");
    auto chal = table("table3_conditional_arc_flow_n20.csv");
    double g = gci_of(base, chal);
    for (std::size_t i = 0; i < chal.size(); ++i) {
      chal[i].trials[0].cpu_s *= 0.8;
      const double next = gci_of(base, chal);
      CHECK(next >= g);
      g = next;
      chal[i].ticks *= 0.9;
      CHECK(gci_of(base, chal) >= g);
      g = gci_of(base, chal);
    }
  }

  TEST_CASE("adoption boundary is strict") {
    const auto w = WeightScheme::node_arc();
    CHECK_FALSE(composite_report("eq", {given_size_result(20, 1.0, 1.0, 1.0, w)}, w).adopt);
    CHECK(composite_report("up", {given_size_result(20, 1.0, 1.0, 1.0 + 1e-9, w)}, w).adopt);
    CHECK_THROWS_AS(
        composite_report("dup", {given_size_result(20, 1, 1, 1, w), given_size_result(20, 1, 1, 1, w)}, w),
        std::invalid_argument);
  }

  TEST_CASE("weight schemes: defaults, presets and JSON") {
    const auto na = WeightScheme::node_arc();
    CHECK(na.metric.cpu == 6.0);
    CHECK(na.metric.ticks == 8.0);
    CHECK(na.metric.real == 8.0);
    CHECK(na.stat.median == 40.0);
    CHECK(na.stat.mean == 10.0);
    CHECK(na.stat.min == 0.5);
    CHECK(na.stat.max == 0.5);
    CHECK(na.size.at(30) == 12.0);
    const auto tr = WeightScheme::triples();
    CHECK(tr.size == std::map<int, double>{{10, 6.0}, {20, 10.0}, {30, 13.0}, {40, 14.0}, {50, 16.0}});

    const auto back = weights_from_json(nlohmann::json::parse(to_json(tr).dump()));
    CHECK(back.size == tr.size);
    CHECK(back.stat.median == tr.stat.median);

    const auto dir = testing::temp_dir("weights");
    std::ofstream(dir / "w.json") << R"({"metric_weights": {"cpu": 0, "ticks": 1, "real": 0}, "size_weights": {"4": 1, "5": 2}})";
    const auto loaded = load_weights(dir / "w.json");
    CHECK(loaded.metric.ticks == 1.0);
    CHECK(loaded.metric.cpu == 0.0);
    CHECK(loaded.stat.median == 40.0);
    CHECK(loaded.size.at(5) == 2.0);

    CHECK_THROWS_AS(weights_from_json(nlohmann::json::parse(R"({"metric_weights": {"cpu": 0, "ticks": 0, "real": 0}})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(weights_from_json(nlohmann::json::parse(R"({"stat_weights": {"min": -1, "mean": 1, "median": 1, "max": 1}})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(weights_from_json(nlohmann::json::parse(R"({"size_weights": {"ten": 1}})")), std::invalid_argument);
    CHECK_THROWS_AS(weights_from_json(nlohmann::json::parse(R"({"metric_weights": {"cpu": 1}})")), std::invalid_argument);
    CHECK_THROWS_AS(load_weights(dir / "missing.json"), std::invalid_argument);
  }

  TEST_CASE("report JSON round trip") {
    const auto w = WeightScheme::node_arc();
    auto rep = composite_report("t1", {size_result(20, fixture_stats(), w), given_size_result(10, 1.52, 1.35, 1.72, w)}, w);
    rep.incumbent = "node_arc[none]";
    rep.note = "fixture";
    const auto back = report_from_json(nlohmann::json::parse(to_json(rep).dump()));
    CHECK(back.label == "t1");
    CHECK(back.gci == rep.gci);
    CHECK(back.adopt);
    CHECK(back.note == "fixture");
    REQUIRE(back.sizes.size() == 2);
    CHECK_FALSE(back.sizes[0].stats.has_value());
    REQUIRE(back.sizes[1].stats.has_value());
    CHECK(back.sizes[1].stats->cpu.max == rep.sizes[1].stats->cpu.max);
    CHECK(back.sizes[1].indices.i == rep.sizes[1].indices.i);
  }

  TEST_CASE("evaluate_technique with synthetic measurements") {
    const auto instances = make_instances({4, 5}, 3, 0);
    auto w = fill_size_weights(WeightScheme::node_arc(), instances);
    CHECK(w.size.at(4) == 4.0);
    int calls = 0;
    const Measurer measure = SyntheticMeasurer{&calls};
    const Approach base;
    Approach t1 = base;
    t1.techniques.t1_conditional_arc_flow = true;

    const auto faster = evaluate_technique("t1", base, t1, instances, w, 3, measure);
    CHECK(faster.report.gci == 2.0);
    CHECK(faster.report.adopt);
    CHECK(faster.report.sizes.size() == 2);
    CHECK(faster.report.incumbent == "node_arc[none]");
    CHECK(faster.report.challenger == "node_arc[t1]");
    CHECK(calls == 12);

    calls = 0;
    const auto same = evaluate_technique("same", base, base, instances, w, 3, measure);
    CHECK(same.report.gci == 1.0);
    CHECK_FALSE(same.report.adopt);
    CHECK(calls == 6);

    CHECK_THROWS_AS(evaluate_technique("none", base, t1, {}, w, 3, measure), std::invalid_argument);
    const Measurer failing = [](const Approach&, const BenchInstance&, int) -> RunMeasurement {
      throw MeasurementError("boom");
    };
    try {
      evaluate_technique("t9", base, t1, instances, w, 1, failing);
      FAIL("expected a measurement error");
    } catch (const MeasurementError& e) {
      CHECK(std::string(e.what()).find("t9") != std::string::npos);
    }
  }

  TEST_CASE("sequential evaluation folds adopted techniques into the incumbent") {
    const auto instances = make_instances({4, 5}, 2, 0);
    const auto w = fill_size_weights(WeightScheme::node_arc(), instances);
    int calls = 0;
    const Measurer measure = SyntheticMeasurer{&calls};

    const auto empty = sequential_evaluation({}, {}, instances, w, 2, measure);
    CHECK(empty.steps.empty());
    CHECK(empty.final_approach.techniques == TechniqueSet{});

    std::vector<std::string> seen;
    const auto res = sequential_evaluation({}, {1, 2, 4, 10, 1}, instances, w, 2, measure,
                                           [&](const Evaluation& e) { seen.push_back(e.report.label); });
    CHECK(seen == std::vector<std::string>{"t1", "t2", "t4", "t10", "t1"});
    REQUIRE(res.steps.size() == 5);
    CHECK(res.steps[0].report.adopt);
    CHECK_FALSE(res.steps[1].report.adopt);
    CHECK(res.steps[2].report.gci == 1.0);
    CHECK_FALSE(res.steps[2].report.adopt);
    CHECK(res.steps[3].report.note.find("not evaluated") != std::string::npos);
    CHECK(res.steps[4].report.note.find("already") != std::string::npos);
    CHECK(to_string(res.final_approach.techniques) == "t1");
    // incumbent once, then one challenger measurement per evaluated step
    CHECK(calls == 4 * 4);

    Approach consistent;
    for (const auto& s : res.steps)
      if (s.report.adopt) consistent.techniques.set(std::stoi(s.report.label.substr(1)), true);
    CHECK(consistent.techniques == res.final_approach.techniques);

    const auto rejected_t4 = sequential_evaluation({}, {4}, instances, w, 1, measure);
    CHECK(rejected_t4.steps[0].report.note.find("t4_relax_xz_linking requires") != std::string::npos);
    CHECK_THROWS_AS(sequential_evaluation({}, {12}, instances, w, 1, measure), std::invalid_argument);
  }

  TEST_CASE("built-in sequential decisions replay identically with ticks-only weights") {
    const auto instances = make_instances({4, 5}, 2, 11);
    auto w = fill_size_weights(WeightScheme::node_arc(), instances);
    w.metric = {0.0, 1.0, 0.0};
    const auto a = sequential_evaluation({}, {1, 2}, instances, w, 1, builtin_measurer());
    const auto b = sequential_evaluation({}, {1, 2}, instances, w, 1, builtin_measurer());
    REQUIRE(a.steps.size() == 2);
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(a.steps[k].report.gci == b.steps[k].report.gci);
      CHECK(a.steps[k].report.adopt == b.steps[k].report.adopt);
    }
    CHECK(a.final_approach.techniques == b.final_approach.techniques);
  }
}
