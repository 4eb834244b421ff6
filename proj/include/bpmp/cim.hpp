#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace bpmp {

// One instance solved `trials` times by one solution approach.
struct Trial {
  double cpu_s = 0.0;
  double wall_s = 0.0;
};

struct RunMeasurement {
  std::string instance_id;
  std::vector<Trial> trials;
  double ticks = 0.0;
  std::vector<std::string> warnings;

  double avg_cpu() const;
  double avg_wall() const;
};

// Table column order: CPU, ticks, real (wall) time.
enum class Metric { kCpu, kTicks, kReal };
inline constexpr std::array<Metric, 3> kMetrics = {Metric::kCpu, Metric::kTicks, Metric::kReal};
std::string to_string(Metric m);

struct StatSummary {
  double min = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double max = 0.0;
};

// min, arithmetic mean, median (mean of the two middle values for even
// counts), max. Throws on an empty list.
StatSummary summarize(std::vector<double> values);

struct InstanceSpeedup {
  std::string instance_id;
  double cpu = 0.0;
  double ticks = 0.0;
  double real = 0.0;
};

struct SpeedupStats {
  StatSummary cpu, ticks, real;
  std::vector<InstanceSpeedup> per_instance;

  const StatSummary& get(Metric m) const;
};

inline constexpr double kSpeedupFloor = 1e-6;

// Per-instance baseline / challenger ratios of trial means (ticks: the
// single count), both sides floored at kSpeedupFloor, then summarized
// across instances. Instances are paired by id; mismatched sets throw
// std::invalid_argument.
SpeedupStats speedups(const std::vector<RunMeasurement>& baseline, const std::vector<RunMeasurement>& challenger);

struct StatWeights {
  double min = 0.5;
  double mean = 10.0;
  double median = 40.0;
  double max = 0.5;
};

struct MetricWeights {
  double cpu = 6.0;
  double ticks = 8.0;
  double real = 8.0;
};

struct WeightScheme {
  StatWeights stat;
  MetricWeights metric;
  std::map<int, double> size{{10, 1.0}, {20, 10.0}, {30, 12.0}};

  static WeightScheme node_arc();
  static WeightScheme triples();

  // Throws std::invalid_argument on negative entries or all-zero groups.
  void validate() const;
};

WeightScheme weights_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const WeightScheme& w);
WeightScheme load_weights(const std::filesystem::path& path);

double composite_metric_index(const StatSummary& s, const StatWeights& w);
double size_index(double c, double t, double r, const MetricWeights& w);
// Throws std::invalid_argument when a size has no weight.
double grand_composite(const std::map<int, double>& index_by_size, const std::map<int, double>& size_weights);

struct SizeIndices {
  double c = 0.0;
  double t = 0.0;
  double r = 0.0;
  double i = 0.0;
};

struct SizeResult {
  int size = 0;
  // Absent when the per-size indices were supplied instead of measured.
  std::optional<SpeedupStats> stats;
  SizeIndices indices;
};

// Measured size: indices from the speedup statistics.
SizeResult size_result(int size, SpeedupStats stats, const WeightScheme& w);
// Size with given C_n, T_n, R_n (I_n is still computed).
SizeResult given_size_result(int size, double c, double t, double r, const WeightScheme& w);

struct CompositeReport {
  std::string label;
  std::string incumbent;
  std::string challenger;
  std::vector<SizeResult> sizes;  // ascending size
  double gci = 0.0;
  bool adopt = false;
  std::string note;  // e.g. why a technique was skipped
};

// GCI over the sizes and the strict GCI > 1 decision.
CompositeReport composite_report(std::string label, std::vector<SizeResult> sizes, const WeightScheme& w);

nlohmann::ordered_json to_json(const CompositeReport& r);
CompositeReport report_from_json(const nlohmann::json& j);

}  // namespace bpmp
