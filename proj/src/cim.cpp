#include "bpmp/cim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace bpmp {

namespace {

double mean_of(const std::vector<Trial>& trials, double Trial::*field) {
  if (trials.empty()) throw std::invalid_argument("measurement has no trials");
  double sum = 0.0;
  for (const auto& t : trials) sum += t.*field;
  return sum / static_cast<double>(trials.size());
}

double ratio(double baseline, double challenger) {
  return std::max(baseline, kSpeedupFloor) / std::max(challenger, kSpeedupFloor);
}

void check_weight(double w, const std::string& what) {
  if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument(what + " must be a finite nonnegative number");
}

template <typename Json>
SpeedupStats stats_from_json(const Json& j) {
  SpeedupStats s;
  auto summary = [](const Json& x) {
    return StatSummary{x.at("min").template get<double>(), x.at("mean").template get<double>(),
                       x.at("median").template get<double>(), x.at("max").template get<double>()};
  };
  s.cpu = summary(j.at("cpu"));
  s.ticks = summary(j.at("ticks"));
  s.real = summary(j.at("real"));
  if (j.contains("per_instance"))
    for (const auto& p : j.at("per_instance"))
      s.per_instance.push_back({p.at("instance").template get<std::string>(), p.at("cpu").template get<double>(),
                                p.at("ticks").template get<double>(), p.at("real").template get<double>()});
  return s;
}

}  // namespace

double RunMeasurement::avg_cpu() const { return mean_of(trials, &Trial::cpu_s); }
double RunMeasurement::avg_wall() const { return mean_of(trials, &Trial::wall_s); }

std::string to_string(Metric m) {
  switch (m) {
    case Metric::kCpu: return "cpu";
    case Metric::kTicks: return "ticks";
    case Metric::kReal: return "real";
  }
  return "unknown";
}

StatSummary summarize(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("cannot summarize an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  StatSummary s;
  s.min = values.front();
  s.max = values.back();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  s.median = n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  return s;
}

const StatSummary& SpeedupStats::get(Metric m) const {
  switch (m) {
    case Metric::kCpu: return cpu;
    case Metric::kTicks: return ticks;
    case Metric::kReal: return real;
  }
  return cpu;
}

SpeedupStats speedups(const std::vector<RunMeasurement>& baseline, const std::vector<RunMeasurement>& challenger) {
  if (baseline.empty()) throw std::invalid_argument("speedups need at least one instance");
  std::map<std::string, const RunMeasurement*> by_id;
  for (const auto& m : challenger)
    if (!by_id.emplace(m.instance_id, &m).second)
      throw std::invalid_argument("duplicate challenger instance '" + m.instance_id + "'");
  if (baseline.size() != challenger.size())
    throw std::invalid_argument("baseline has " + std::to_string(baseline.size()) + " instances, challenger " +
                                std::to_string(challenger.size()));

  SpeedupStats s;
  std::vector<double> cpu, ticks, real;
  for (const auto& b : baseline) {
    const auto it = by_id.find(b.instance_id);
    if (it == by_id.end()) throw std::invalid_argument("instance '" + b.instance_id + "' missing from challenger");
    const auto& c = *it->second;
    InstanceSpeedup row{b.instance_id, ratio(b.avg_cpu(), c.avg_cpu()), ratio(b.ticks, c.ticks),
                        ratio(b.avg_wall(), c.avg_wall())};
    cpu.push_back(row.cpu);
    ticks.push_back(row.ticks);
    real.push_back(row.real);
    s.per_instance.push_back(std::move(row));
  }
  s.cpu = summarize(cpu);
  s.ticks = summarize(ticks);
  s.real = summarize(real);
  return s;
}

WeightScheme WeightScheme::node_arc() { return {}; }

WeightScheme WeightScheme::triples() {
  WeightScheme w;
  w.size = {{10, 6.0}, {20, 10.0}, {30, 13.0}, {40, 14.0}, {50, 16.0}};
  return w;
}

void WeightScheme::validate() const {
  check_weight(stat.min, "stat weight min");
  check_weight(stat.mean, "stat weight mean");
  check_weight(stat.median, "stat weight median");
  check_weight(stat.max, "stat weight max");
  if (stat.min + stat.mean + stat.median + stat.max <= 0.0) throw std::invalid_argument("stat weights are all zero");
  check_weight(metric.cpu, "metric weight cpu");
  check_weight(metric.ticks, "metric weight ticks");
  check_weight(metric.real, "metric weight real");
  if (metric.cpu + metric.ticks + metric.real <= 0.0) throw std::invalid_argument("metric weights are all zero");
  double total = 0.0;
  for (const auto& [n, w] : size) {
    check_weight(w, "size weight " + std::to_string(n));
    total += w;
  }
  if (!size.empty() && total <= 0.0) throw std::invalid_argument("size weights are all zero");
}

WeightScheme weights_from_json(const nlohmann::json& j) {
  WeightScheme w;
  try {
    if (j.contains("stat_weights")) {
      const auto& s = j.at("stat_weights");
      w.stat = {s.at("min").get<double>(), s.at("mean").get<double>(), s.at("median").get<double>(),
                s.at("max").get<double>()};
    }
    if (j.contains("metric_weights")) {
      const auto& m = j.at("metric_weights");
      w.metric = {m.at("cpu").get<double>(), m.at("ticks").get<double>(), m.at("real").get<double>()};
    }
    if (j.contains("size_weights")) {
      w.size.clear();
      for (const auto& [key, value] : j.at("size_weights").items()) {
        std::size_t used = 0;
        const int n = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument("size key '" + key + "' is not an integer");
        w.size[n] = value.get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("weight scheme: ") + e.what());
  } catch (const std::logic_error& e) {
    throw std::invalid_argument(std::string("weight scheme: ") + e.what());
  }
  w.validate();
  return w;
}

nlohmann::ordered_json to_json(const WeightScheme& w) {
  nlohmann::ordered_json j;
  j["stat_weights"] = {{"min", w.stat.min}, {"mean", w.stat.mean}, {"median", w.stat.median}, {"max", w.stat.max}};
  j["metric_weights"] = {{"cpu", w.metric.cpu}, {"ticks", w.metric.ticks}, {"real", w.metric.real}};
  auto sizes = nlohmann::ordered_json::object();
  for (const auto& [n, v] : w.size) sizes[std::to_string(n)] = v;
  j["size_weights"] = std::move(sizes);
  return j;
}

WeightScheme load_weights(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open weight file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return weights_from_json(j);
}

double composite_metric_index(const StatSummary& s, const StatWeights& w) {
  const double total = w.min + w.mean + w.median + w.max;
  if (!(total > 0.0)) throw std::invalid_argument("stat weights are all zero");
  return (w.min * s.min + w.mean * s.mean + w.median * s.median + w.max * s.max) / total;
}

double size_index(double c, double t, double r, const MetricWeights& w) {
  const double total = w.cpu + w.ticks + w.real;
  if (!(total > 0.0)) throw std::invalid_argument("metric weights are all zero");
  return (w.cpu * c + w.real * r + w.ticks * t) / total;
}

double grand_composite(const std::map<int, double>& index_by_size, const std::map<int, double>& size_weights) {
  if (index_by_size.empty()) throw std::invalid_argument("no sizes to combine");
  double num = 0.0, den = 0.0;
  for (const auto& [n, index] : index_by_size) {
    const auto it = size_weights.find(n);
    if (it == size_weights.end()) throw std::invalid_argument("no size weight for n = " + std::to_string(n));
    num += it->second * index;
    den += it->second;
  }
  if (!(den > 0.0)) throw std::invalid_argument("size weights of the present sizes are all zero");
  return num / den;
}

SizeResult size_result(int size, SpeedupStats stats, const WeightScheme& w) {
  SizeResult r;
  r.size = size;
  r.indices.c = composite_metric_index(stats.cpu, w.stat);
  r.indices.t = composite_metric_index(stats.ticks, w.stat);
  r.indices.r = composite_metric_index(stats.real, w.stat);
  r.indices.i = size_index(r.indices.c, r.indices.t, r.indices.r, w.metric);
  r.stats = std::move(stats);
  return r;
}

SizeResult given_size_result(int size, double c, double t, double r, const WeightScheme& w) {
  SizeResult out;
  out.size = size;
  out.indices = {c, t, r, size_index(c, t, r, w.metric)};
  return out;
}

CompositeReport composite_report(std::string label, std::vector<SizeResult> sizes, const WeightScheme& w) {
  std::sort(sizes.begin(), sizes.end(), [](const SizeResult& a, const SizeResult& b) { return a.size < b.size; });
  std::map<int, double> index_by_size;
  for (const auto& s : sizes)
    if (!index_by_size.emplace(s.size, s.indices.i).second)
      throw std::invalid_argument("size " + std::to_string(s.size) + " appears twice");
  CompositeReport r;
  r.label = std::move(label);
  r.gci = grand_composite(index_by_size, w.size);
  r.adopt = r.gci > 1.0;
  r.sizes = std::move(sizes);
  return r;
}

nlohmann::ordered_json to_json(const CompositeReport& r) {
  nlohmann::ordered_json j;
  j["label"] = r.label;
  j["incumbent"] = r.incumbent;
  j["challenger"] = r.challenger;
  auto sizes = nlohmann::ordered_json::array();
  for (const auto& s : r.sizes) {
    nlohmann::ordered_json e;
    e["size"] = s.size;
    e["indices"] = {{"C", s.indices.c}, {"T", s.indices.t}, {"R", s.indices.r}, {"I", s.indices.i}};
    if (s.stats) {
      nlohmann::ordered_json stats;
      for (Metric m : kMetrics) {
        const auto& st = s.stats->get(m);
        stats[to_string(m)] = {{"min", st.min}, {"mean", st.mean}, {"median", st.median}, {"max", st.max}};
      }
      auto per = nlohmann::ordered_json::array();
      for (const auto& p : s.stats->per_instance)
        per.push_back({{"instance", p.instance_id}, {"cpu", p.cpu}, {"ticks", p.ticks}, {"real", p.real}});
      stats["per_instance"] = std::move(per);
      e["speedups"] = std::move(stats);
    }
    sizes.push_back(std::move(e));
  }
  j["sizes"] = std::move(sizes);
  j["gci"] = r.gci;
  j["decision"] = r.adopt ? "adopt" : "reject";
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

CompositeReport report_from_json(const nlohmann::json& j) {
  CompositeReport r;
  try {
    r.label = j.at("label").get<std::string>();
    r.incumbent = j.value("incumbent", "");
    r.challenger = j.value("challenger", "");
    for (const auto& e : j.at("sizes")) {
      SizeResult s;
      s.size = e.at("size").get<int>();
      const auto& idx = e.at("indices");
      s.indices = {idx.at("C").get<double>(), idx.at("T").get<double>(), idx.at("R").get<double>(),
                   idx.at("I").get<double>()};
      if (e.contains("speedups")) s.stats = stats_from_json(e.at("speedups"));
      r.sizes.push_back(std::move(s));
    }
    r.gci = j.at("gci").get<double>();
    const auto decision = j.at("decision").get<std::string>();
    if (decision != "adopt" && decision != "reject") throw std::invalid_argument("decision '" + decision + "'");
    r.adopt = decision == "adopt";
    r.note = j.value("note", "");
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("report: ") + e.what());
  }
  return r;
}

}  // namespace bpmp
