#include "bpmp/mip.hpp"

#include <chrono>
#include <cmath>
#include <set>
#include <tuple>

namespace bpmp {

std::string to_string(MipStatus s) {
  switch (s) {
    case MipStatus::kOptimal: return "optimal";
    case MipStatus::kInfeasible: return "infeasible";
    case MipStatus::kUnbounded: return "unbounded";
    case MipStatus::kNodeLimit: return "node_limit";
    case MipStatus::kTimeLimit: return "time_limit";
    case MipStatus::kError: return "error";
  }
  return "unknown";
}

namespace {

struct Fixing {
  int var;
  double value;
};

struct OpenNode {
  std::int64_t id;
  std::int64_t parent;
  int depth;
  double bound;  // parent's LP value
  std::vector<Fixing> fixings;
};

struct NodeOrder {
  bool operator()(const OpenNode& a, const OpenNode& b) const {
    return std::tuple(-a.bound, -a.depth, a.id) < std::tuple(-b.bound, -b.depth, b.id);
  }
};

constexpr double kGapTol = 1e-7;

}  // namespace

MipSolution solve_mip(const MipModel& model, const MipConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const auto& vars = model.variables();
  const std::size_t nv = vars.size();

  std::vector<double> base_lo(nv), base_hi(nv);
  std::vector<int> binaries;
  for (std::size_t j = 0; j < nv; ++j) {
    base_lo[j] = vars[j].lower;
    base_hi[j] = vars[j].upper;
    if (vars[j].kind == VarKind::kBinary) binaries.push_back(static_cast<int>(j));
  }

  MipSolution sol;
  bool have_incumbent = false;
  double incumbent = -kInf;
  std::set<OpenNode, NodeOrder> open;
  std::int64_t next_id = 0;
  open.insert(OpenNode{next_id++, -1, 0, kInf, {}});

  std::vector<double> lo, hi;
  MipStatus limit_status = MipStatus::kOptimal;
  bool lp_error = false;

  while (!open.empty()) {
    if (config.node_limit && sol.nodes >= *config.node_limit) {
      limit_status = MipStatus::kNodeLimit;
      break;
    }
    if (config.time_limit_seconds) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      if (elapsed.count() >= *config.time_limit_seconds) {
        limit_status = MipStatus::kTimeLimit;
        break;
      }
    }

    OpenNode node = std::move(open.extract(open.begin()).value());
    if (have_incumbent && node.bound <= incumbent + kGapTol) continue;

    lo = base_lo;
    hi = base_hi;
    for (const auto& f : node.fixings) lo[f.var] = hi[f.var] = f.value;

    const LpSolution lp = solve_lp(model, lo, hi, config.lp);
    ++sol.nodes;
    sol.pivots += lp.pivots;

    NodeRecord rec{node.id, node.parent, node.depth, node.bound, -kInf, -1};
    if (lp.status == LpStatus::kUnbounded) {
      sol.status = MipStatus::kUnbounded;
      sol.ticks = sol.pivots + kTicksPerNode * sol.nodes;
      if (config.record_trace) sol.trace.push_back(rec);
      return sol;
    }
    if (lp.status == LpStatus::kIterationLimit) {
      lp_error = true;
      if (config.record_trace) sol.trace.push_back(rec);
      break;
    }
    if (lp.status == LpStatus::kInfeasible) {
      if (config.record_trace) sol.trace.push_back(rec);
      continue;
    }
    rec.bound = lp.objective;

    if (have_incumbent && lp.objective <= incumbent + kGapTol) {
      if (config.record_trace) sol.trace.push_back(rec);
      continue;
    }

    // Branching candidate: priority, then fractionality, then index.
    int branch = -1;
    int best_priority = 0;
    double best_frac = -1.0;
    for (int j : binaries) {
      const double v = lp.values[j];
      const double frac = std::fabs(v - std::round(v));
      if (frac <= config.integrality_tol) continue;
      const int prio = vars[j].branch_priority;
      if (branch < 0 || prio > best_priority || (prio == best_priority && frac > best_frac + 1e-12)) {
        branch = j;
        best_priority = prio;
        best_frac = frac;
      }
    }

    if (branch < 0) {
      have_incumbent = true;
      incumbent = lp.objective;
      sol.values = lp.values;
      sol.objective = lp.objective;
    } else {
      rec.branch_var = branch;
      for (double value : {1.0, 0.0}) {
        OpenNode child{next_id++, node.id, node.depth + 1, lp.objective, node.fixings};
        child.fixings.push_back({branch, value});
        open.insert(std::move(child));
      }
    }
    if (config.record_trace) sol.trace.push_back(rec);
  }

  sol.ticks = sol.pivots + kTicksPerNode * sol.nodes;
  double open_bound = -kInf;
  for (const auto& node : open) open_bound = std::max(open_bound, node.bound);

  if (lp_error) {
    sol.status = MipStatus::kError;
  } else if (limit_status != MipStatus::kOptimal && !open.empty()) {
    sol.status = limit_status;
  } else {
    sol.status = have_incumbent ? MipStatus::kOptimal : MipStatus::kInfeasible;
  }
  sol.best_bound = have_incumbent ? std::max(incumbent, open_bound) : open_bound;
  if (sol.status == MipStatus::kOptimal) sol.best_bound = incumbent;
  return sol;
}

}  // namespace bpmp
