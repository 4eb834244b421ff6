#include "bpmp/solve.hpp"

#include <algorithm>
#include <cmath>

namespace bpmp {

std::vector<CutFamily> model_separation(const MipModel& model) {
  const auto it = model.metadata().find("separation");
  if (it == model.metadata().end()) return {};
  return parse_cut_families(it->second);
}

SolveOutcome solve(const MipModel& model, const Instance& inst, const std::vector<CutFamily>& extra,
                   const CutLoopConfig& config) {
  auto families = model_separation(model);
  for (auto f : extra)
    if (std::find(families.begin(), families.end(), f) == families.end()) families.push_back(f);
  std::sort(families.begin(), families.end());

  SolveOutcome out;
  if (families.empty()) {
    out.solution = solve_mip(model, config.mip);
    return out;
  }
  auto result = cutting_plane_solve(model, inst, families, config);
  out.solution = std::move(result.solution);
  out.cuts = std::move(result.cuts);
  out.cut_rounds = result.rounds;
  out.round_limit_hit = result.round_limit_hit;
  return out;
}

nlohmann::ordered_json to_json(const MipModel& model, const SolveOutcome& outcome) {
  const auto& s = outcome.solution;
  nlohmann::ordered_json j;
  j["status"] = to_string(s.status);
  j["objective"] = s.values.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(s.objective);
  auto values = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < s.values.size(); ++i)
    if (std::fabs(s.values[i]) > 1e-9) values[model.variable(static_cast<int>(i)).name] = s.values[i];
  j["values"] = std::move(values);
  j["nodes"] = s.nodes;
  j["pivots"] = s.pivots;
  j["ticks"] = s.ticks;
  auto cuts = nlohmann::ordered_json::array();
  for (const auto& c : outcome.cuts)
    cuts.push_back({{"name", c.name()}, {"family", to_string(c.family)}, {"round", c.round}});
  j["cuts"] = std::move(cuts);
  j["cut_rounds"] = outcome.cut_rounds;
  j["round_limit_hit"] = outcome.round_limit_hit;
  return j;
}

nlohmann::ordered_json to_json(const Instance& inst, const ExactSolution& exact) {
  nlohmann::ordered_json j;
  j["route"] = exact.route;
  auto accepted = nlohmann::ordered_json::array();
  for (const auto& r : exact.accepted) accepted.push_back({r.from, r.to});
  j["accepted"] = std::move(accepted);
  j["objective"] = exact.objective;
  auto loads = nlohmann::ordered_json::array();
  for (std::size_t p = 0; p + 1 < exact.route.size(); ++p) {
    const int a = exact.route[p], b = exact.route[p + 1];
    loads.push_back({{"arc", {a, b}}, {"load", exact.load[a - 1][b - 1]}});
  }
  j["loads"] = std::move(loads);
  j["length"] = route_length(inst, exact.route);
  return j;
}

}  // namespace bpmp
