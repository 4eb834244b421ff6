#pragma once

#include <vector>

#include <json.hpp>

#include "bpmp/cuts.hpp"
#include "bpmp/instance.hpp"
#include "bpmp/mip.hpp"
#include "bpmp/model.hpp"
#include "bpmp/oracle.hpp"

namespace bpmp {

struct SolveOutcome {
  MipSolution solution;
  std::vector<Cut> cuts;
  int cut_rounds = 0;
  bool round_limit_hit = false;
};

// Cut families requested by the model's "separation" metadata (t8/t9).
std::vector<CutFamily> model_separation(const MipModel& model);

// Solves with the model's own separation families plus `extra`. Without
// any family this is a plain branch-and-bound solve.
SolveOutcome solve(const MipModel& model, const Instance& inst, const std::vector<CutFamily>& extra = {},
                   const CutLoopConfig& config = {});

// status, objective, nonzero variable values, nodes, pivots, ticks, cuts.
nlohmann::ordered_json to_json(const MipModel& model, const SolveOutcome& outcome);
nlohmann::ordered_json to_json(const Instance& inst, const ExactSolution& exact);

}  // namespace bpmp
