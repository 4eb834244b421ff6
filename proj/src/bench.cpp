#include "bpmp/bench.hpp"

#include <fstream>
#include <map>
#include <stdexcept>

#include "bpmp/measure.hpp"
#include "bpmp/solve.hpp"

namespace bpmp {

std::string Approach::describe() const {
  const auto t = to_string(techniques);
  return to_string(formulation) + "[" + (t.empty() ? "none" : t) + "]";
}

Approach approach_from_preset(std::string_view preset) {
  const auto p = apply_preset(preset);
  return {p.formulation, p.techniques};
}

std::vector<BenchInstance> make_instances(const std::vector<int>& sizes, int per_size, std::uint64_t base_seed,
                                          const GenerationParams& params) {
  if (per_size < 1) throw std::invalid_argument("per-size instance count must be at least 1");
  std::vector<BenchInstance> out;
  for (int n : sizes)
    for (int k = 0; k < per_size; ++k) {
      const auto seed = base_seed + static_cast<std::uint64_t>(k);
      out.push_back({"n" + std::to_string(n) + "_s" + std::to_string(seed), n, generate(n, seed, params)});
    }
  return out;
}

Measurer builtin_measurer() {
  return [](const Approach& a, const BenchInstance& b, int trials) {
    const auto model = build_model(b.instance, a.formulation, a.techniques);
    return measure_builtin(model, b.instance, trials, b.id);
  };
}

Measurer external_measurer(std::string command_template, std::filesystem::path scratch_dir) {
  return [command_template = std::move(command_template), scratch_dir = std::move(scratch_dir)](
             const Approach& a, const BenchInstance& b, int trials) {
    std::filesystem::create_directories(scratch_dir);
    const auto model = build_model(b.instance, a.formulation, a.techniques);
    auto tag = to_string(a.techniques);
    for (auto& ch : tag)
      if (ch == ',') ch = '-';
    const auto path =
        scratch_dir / (b.id + "_" + to_string(a.formulation) + "_" + (tag.empty() ? "none" : tag) + ".mps");
    {
      std::ofstream out(path);
      if (!out) throw MeasurementError("cannot write " + path.string());
      out << emit_mps(model);
    }
    return measure_external(command_template, path, trials, b.id);
  };
}

WeightScheme fill_size_weights(WeightScheme w, const std::vector<BenchInstance>& instances) {
  for (const auto& b : instances) w.size.try_emplace(b.size, static_cast<double>(b.size));
  return w;
}

Evaluation evaluate_technique(const std::string& label, const Approach& incumbent, const Approach& challenger,
                              const std::vector<BenchInstance>& instances, const WeightScheme& weights, int trials,
                              const Measurer& measure, const std::vector<RunMeasurement>* incumbent_runs) {
  if (instances.empty()) throw std::invalid_argument("no instances to evaluate on");
  if (incumbent_runs && incumbent_runs->size() != instances.size())
    throw std::invalid_argument("cached incumbent measurements do not match the instance list");
  Evaluation ev;
  std::map<int, std::pair<std::vector<RunMeasurement>, std::vector<RunMeasurement>>> by_size;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const auto& b = instances[k];
    try {
      auto inc = incumbent_runs ? (*incumbent_runs)[k] : measure(incumbent, b, trials);
      // The same approach measured twice is still the same approach.
      const bool same = incumbent.formulation == challenger.formulation && incumbent.techniques == challenger.techniques;
      auto chal = same ? inc : measure(challenger, b, trials);
      by_size[b.size].first.push_back(inc);
      by_size[b.size].second.push_back(chal);
      ev.incumbent_runs.push_back(std::move(inc));
      ev.challenger_runs.push_back(std::move(chal));
    } catch (const MeasurementError& e) {
      throw MeasurementError(label + ": " + e.what());
    }
  }
  std::vector<SizeResult> sizes;
  for (auto& [n, runs] : by_size) sizes.push_back(size_result(n, speedups(runs.first, runs.second), weights));
  ev.report = composite_report(label, std::move(sizes), weights);
  ev.report.incumbent = incumbent.describe();
  ev.report.challenger = challenger.describe();
  return ev;
}

SequentialResult sequential_evaluation(const Approach& initial, const std::vector<int>& order,
                                       const std::vector<BenchInstance>& instances, const WeightScheme& weights,
                                       int trials, const Measurer& measure,
                                       const std::function<void(const Evaluation&)>& on_step) {
  check_techniques(initial.formulation, initial.techniques);
  SequentialResult result;
  result.final_approach = initial;
  std::vector<RunMeasurement> incumbent_runs;
  bool have_runs = false;

  for (int t : order) {
    const auto label = "t" + std::to_string(t);
    Approach challenger = result.final_approach;
    std::string skip;
    if (t < 1 || t > TechniqueSet::kCount) {
      throw std::invalid_argument("unknown technique " + label);
    } else if (challenger.techniques.get(t)) {
      skip = label + " is already part of the incumbent";
    } else {
      challenger.techniques.set(t, true);
      try {
        check_techniques(challenger.formulation, challenger.techniques);
      } catch (const std::invalid_argument& e) {
        skip = e.what();
      }
    }

    Evaluation ev;
    if (!skip.empty()) {
      ev.report.label = label;
      ev.report.incumbent = result.final_approach.describe();
      ev.report.challenger = challenger.describe();
      ev.report.gci = 1.0;
      ev.report.adopt = false;
      ev.report.note = "not evaluated: " + skip;
    } else {
      ev = evaluate_technique(label, result.final_approach, challenger, instances, weights, trials, measure,
                              have_runs ? &incumbent_runs : nullptr);
      if (ev.report.adopt) {
        result.final_approach = challenger;
        incumbent_runs = ev.challenger_runs;
      } else {
        incumbent_runs = ev.incumbent_runs;
      }
      have_runs = true;
    }
    if (on_step) on_step(ev);
    result.steps.push_back(std::move(ev));
  }
  return result;
}

}  // namespace bpmp
