#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bpmp/lp.hpp"
#include "bpmp/model.hpp"

namespace bpmp {

enum class MipStatus { kOptimal, kInfeasible, kUnbounded, kNodeLimit, kTimeLimit, kError };

std::string to_string(MipStatus s);

struct MipConfig {
  std::optional<std::int64_t> node_limit;
  std::optional<double> time_limit_seconds;  // wall clock; breaks determinism when hit
  double integrality_tol = 1e-6;
  LpOptions lp;
  bool record_trace = false;
};

// One processed branch-and-bound node.
struct NodeRecord {
  std::int64_t id;
  std::int64_t parent;  // -1 at the root
  int depth;
  double parent_bound;  // +inf at the root
  double bound;         // LP value, or -inf when infeasible
  int branch_var;       // -1 when the node was not branched on
};

struct MipSolution {
  MipStatus status = MipStatus::kInfeasible;
  double objective = 0.0;  // best incumbent
  double best_bound = 0.0;
  std::vector<double> values;
  std::int64_t nodes = 0;
  std::int64_t pivots = 0;
  std::int64_t ticks = 0;  // pivots + 100 * nodes
  std::vector<NodeRecord> trace;
};

inline constexpr std::int64_t kTicksPerNode = 100;

// Best-bound branch and bound. Branches on the fractional binary with the
// highest priority, then the most fractional, then the lowest index; open
// nodes are ordered by bound, then depth (deeper first), then creation order.
MipSolution solve_mip(const MipModel& model, const MipConfig& config = {});

}  // namespace bpmp
