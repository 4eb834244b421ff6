#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "bpmp/cim.hpp"
#include "bpmp/formulations.hpp"
#include "bpmp/instance.hpp"

namespace bpmp {

// A solution approach: a formulation plus its technique set.
struct Approach {
  Formulation formulation = Formulation::kNodeArc;
  TechniqueSet techniques;

  std::string describe() const;  // e.g. "node_arc[t1,t2]"
};

Approach approach_from_preset(std::string_view preset);

struct BenchInstance {
  std::string id;
  int size = 0;
  Instance instance;
};

// per_size instances for every size, seeds base_seed, base_seed + 1, ...
// and ids "n<size>_s<seed>".
std::vector<BenchInstance> make_instances(const std::vector<int>& sizes, int per_size, std::uint64_t base_seed = 0,
                                          const GenerationParams& params = {});

using Measurer = std::function<RunMeasurement(const Approach&, const BenchInstance&, int trials)>;

// Built-in branch and bound, with t8/t9 separation as configured.
Measurer builtin_measurer();
// Writes each model as MPS under scratch_dir and runs the command on it.
Measurer external_measurer(std::string command_template, std::filesystem::path scratch_dir);

// Sizes without a weight get weight n, so larger instances count more.
WeightScheme fill_size_weights(WeightScheme w, const std::vector<BenchInstance>& instances);

struct Evaluation {
  CompositeReport report;
  std::vector<RunMeasurement> incumbent_runs;
  std::vector<RunMeasurement> challenger_runs;
};

// Measures both approaches on every instance (one instance at a time,
// trials in sequence) and runs the CIM chain per size. Passing
// incumbent_runs skips re-measuring the incumbent.
Evaluation evaluate_technique(const std::string& label, const Approach& incumbent, const Approach& challenger,
                              const std::vector<BenchInstance>& instances, const WeightScheme& weights, int trials,
                              const Measurer& measure, const std::vector<RunMeasurement>* incumbent_runs = nullptr);

struct SequentialResult {
  std::vector<Evaluation> steps;
  Approach final_approach;
};

// Adds the techniques one at a time in the given order; an adopted
// technique becomes part of the incumbent. A technique that cannot be
// added (already present, wrong formulation, or missing a prerequisite)
// is recorded as a rejected step with a note and no measurements.
SequentialResult sequential_evaluation(const Approach& initial, const std::vector<int>& order,
                                       const std::vector<BenchInstance>& instances, const WeightScheme& weights,
                                       int trials, const Measurer& measure,
                                       const std::function<void(const Evaluation&)>& on_step = {});

}  // namespace bpmp
