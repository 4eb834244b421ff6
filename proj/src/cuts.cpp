#include "bpmp/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "bpmp/formulations.hpp"
#include "bpmp/lp.hpp"

namespace bpmp {

std::string to_string(CutFamily f) { return f == CutFamily::kCover ? "cover" : "pairwise_demand"; }

std::vector<CutFamily> parse_cut_families(const std::string& list) {
  std::vector<CutFamily> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const auto tok = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!tok.empty()) {
      CutFamily f;
      if (tok == "cover") f = CutFamily::kCover;
      else if (tok == "pairwise" || tok == "pairwise_demand") f = CutFamily::kPairwiseDemand;
      else throw std::invalid_argument("unknown cut family '" + tok + "' (expected cover or pairwise)");
      if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string Cut::name() const {
  if (family == CutFamily::kCover) return "cover_r" + std::to_string(round);
  return "pair_r" + std::to_string(round) + "_" + std::to_string(support[0].from) + "_" +
         std::to_string(support[0].to) + "_" + std::to_string(support[1].to);
}

double Cut::violation(const Matrix& values) const {
  double lhs = 0.0;
  for (const auto& a : support) lhs += values[a.from - 1][a.to - 1];
  return lhs - rhs;
}

Constraint Cut::to_row(const MipModel& model) const {
  Constraint c{name(), {}, Sense::kLessEqual, rhs};
  for (const auto& a : support) {
    const auto var = family == CutFamily::kCover ? x_name(a.from, a.to) : y_name(a.from, a.to);
    c.terms.push_back({model.variable_index(var), 1.0});
  }
  std::sort(c.terms.begin(), c.terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
  return c;
}

std::vector<Cut> separate_cover_cuts(const Instance& inst, const Matrix& x_values, double tolerance) {
  const auto arc_list = arcs(inst);
  // Smallest total (in hundredths) strictly above D.
  const auto target = static_cast<std::int64_t>(std::floor(inst.max_distance * 100.0 + 1e-9)) + 1;
  const auto cap = static_cast<std::size_t>(target);

  std::vector<std::int64_t> weight(arc_list.size());
  std::vector<double> cost(arc_list.size());
  for (std::size_t a = 0; a < arc_list.size(); ++a) {
    weight[a] = std::llround(inst.d(arc_list[a].from, arc_list[a].to) * 100.0);
    cost[a] = 1.0 - std::clamp(x_values[arc_list[a].from - 1][arc_list[a].to - 1], 0.0, 1.0);
  }

  // best[w]: minimum cost reaching exactly w hundredths, with w == cap
  // meaning "at least cap". pred[a][w] is the state item a extended when
  // it last improved best[w], or -1.
  std::vector<double> best(cap + 1, kInf);
  std::vector<std::vector<std::int32_t>> pred(arc_list.size(), std::vector<std::int32_t>(cap + 1, -1));
  best[0] = 0.0;
  for (std::size_t a = 0; a < arc_list.size(); ++a) {
    for (std::size_t w = cap + 1; w-- > 0;) {
      if (!std::isfinite(best[w])) continue;
      const auto nw = static_cast<std::size_t>(std::min<std::int64_t>(target, static_cast<std::int64_t>(w) + weight[a]));
      if (nw == w) continue;
      const double c = best[w] + cost[a];
      if (c < best[nw]) {
        best[nw] = c;
        pred[a][nw] = static_cast<std::int32_t>(w);
      }
    }
  }
  if (!(best[cap] < 1.0 - tolerance)) return {};

  std::vector<Arc> support;
  std::size_t state = cap;
  for (std::size_t a = arc_list.size(); a-- > 0 && state != 0;) {
    if (pred[a][state] < 0) continue;
    support.push_back(arc_list[a]);
    state = static_cast<std::size_t>(pred[a][state]);
  }
  if (state != 0) throw std::logic_error("cover separation reconstruction failed");

  std::sort(support.begin(), support.end());
  Cut cut;
  cut.family = CutFamily::kCover;
  cut.support = std::move(support);
  cut.rhs = static_cast<double>(cut.support.size()) - 1.0;
  return {std::move(cut)};
}

std::vector<Cut> separate_pairwise_demand(const Instance& inst, const Matrix& y_values, double tolerance) {
  std::vector<Cut> out;
  const int n = inst.n;
  for (int k = 1; k <= n; ++k)
    for (int i = 1; i <= n; ++i) {
      if (!inst.has_request(k, i)) continue;
      for (int j = i + 1; j <= n; ++j) {
        if (!inst.has_request(k, j)) continue;
        if (!(inst.w(k, i) + inst.w(k, j) > inst.capacity + 1e-9)) continue;
        if (!(y_values[k - 1][i - 1] + y_values[k - 1][j - 1] > 1.0 + tolerance)) continue;
        Cut cut;
        cut.family = CutFamily::kPairwiseDemand;
        cut.support = {{k, i}, {k, j}};
        cut.rhs = 1.0;
        out.push_back(std::move(cut));
      }
    }
  return out;
}

Matrix arc_values(const Instance& inst, const MipModel& model, const std::vector<double>& values) {
  Matrix out(inst.n, std::vector<double>(inst.n, 0.0));
  for (const auto& a : arcs(inst))
    if (auto idx = model.find_variable(x_name(a.from, a.to))) out[a.from - 1][a.to - 1] = values[*idx];
  return out;
}

Matrix request_values(const Instance& inst, const MipModel& model, const std::vector<double>& values) {
  Matrix out(inst.n, std::vector<double>(inst.n, 0.0));
  for (const auto& r : requests(inst))
    if (auto idx = model.find_variable(y_name(r.from, r.to))) out[r.from - 1][r.to - 1] = values[*idx];
  return out;
}

CutSolveResult cutting_plane_solve(const MipModel& model, const Instance& inst,
                                   const std::vector<CutFamily>& families, const CutLoopConfig& config) {
  CutSolveResult result;
  MipModel work = model;
  const bool cover = std::find(families.begin(), families.end(), CutFamily::kCover) != families.end();
  const bool pairwise = std::find(families.begin(), families.end(), CutFamily::kPairwiseDemand) != families.end();
  std::int64_t loop_pivots = 0;

  for (int round = 1;; ++round) {
    const LpSolution lp = solve_lp(work, config.mip.lp);
    loop_pivots += lp.pivots;
    result.rounds = round;
    if (lp.status != LpStatus::kOptimal) break;
    if (round == 1) result.root_bound_before = lp.objective;
    result.root_bound_after = lp.objective;

    std::vector<Cut> found;
    if (cover) {
      auto cuts = separate_cover_cuts(inst, arc_values(inst, work, lp.values), config.tolerance);
      found.insert(found.end(), cuts.begin(), cuts.end());
    }
    if (pairwise) {
      auto cuts = separate_pairwise_demand(inst, request_values(inst, work, lp.values), config.tolerance);
      found.insert(found.end(), cuts.begin(), cuts.end());
    }
    if (found.empty()) break;
    for (auto& cut : found) {
      cut.round = round;
      work.add_constraint(cut.to_row(work));
      result.cuts.push_back(std::move(cut));
    }
    if (round >= config.max_rounds) {
      result.round_limit_hit = true;
      break;
    }
  }

  result.solution = solve_mip(work, config.mip);
  result.solution.pivots += loop_pivots;
  result.solution.ticks = result.solution.pivots + kTicksPerNode * result.solution.nodes;
  return result;
}

}  // namespace bpmp
