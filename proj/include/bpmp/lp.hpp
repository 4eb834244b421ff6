#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bpmp/model.hpp"

namespace bpmp {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;      // maximization sense
  std::vector<double> values;  // indexed like MipModel::variables()
  std::int64_t pivots = 0;     // simplex iterations, bound flips included
};

struct LpOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-7;
  double pivot_tol = 1e-9;
  // Consecutive degenerate iterations before switching from largest
  // reduced cost to Bland's lowest-index rule.
  int bland_after_degenerate = 300;
  std::int64_t iteration_limit = 200000;
};

// Bounded-variable primal simplex on a dense tableau, two phases.
// Integrality is ignored. Bounds may be overridden per variable, which is
// how branch-and-bound fixes binaries without copying the model.
LpSolution solve_lp(const MipModel& model, const LpOptions& options = {});
LpSolution solve_lp(const MipModel& model, const std::vector<double>& lower, const std::vector<double>& upper,
                    const LpOptions& options = {});

}  // namespace bpmp
