#include "bpmp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bpmp {

namespace {

void guard_nodes(const Instance& inst) {
  if (inst.n > kOracleMaxNodes)
    throw OracleSizeError("oracle refuses n = " + std::to_string(inst.n) + " (limit " +
                          std::to_string(kOracleMaxNodes) + ")");
}

constexpr double kTieTol = 1e-9;

// Depth-first include/exclude search over on-route requests with
// capacity pruning on the per-position load profile.
class SubsetSearch {
 public:
  SubsetSearch(const Instance& inst, const Route& route)
      : inst_(inst), cands_(on_route_requests(inst, route)), load_(route.size() - 1, 0.0) {
    if (cands_.size() > static_cast<std::size_t>(kOracleMaxOnRouteRequests))
      throw OracleSizeError("route carries " + std::to_string(cands_.size()) + " on-route requests (limit " +
                            std::to_string(kOracleMaxOnRouteRequests) + ")");
    pos_.assign(inst.n + 1, -1);
    for (std::size_t p = 0; p < route.size(); ++p) pos_[route[p]] = static_cast<int>(p);
    gain_.reserve(cands_.size());
    for (const auto& r : cands_) {
      double carried = 0.0;
      for (int p = pos_[r.from]; p < pos_[r.to]; ++p) carried += inst.d(route[p], route[p + 1]);
      const double w = inst.w(r.from, r.to);
      gain_.push_back(inst.price * inst.d(r.from, r.to) * w - inst.cost * carried * w);
    }
  }

  const std::vector<Arc>& candidates() const { return cands_; }

  // Calls visit(chosen indices, total gain) for every feasible subset.
  template <typename Visit>
  void run(Visit&& visit) {
    chosen_.clear();
    recurse(0, 0.0, visit);
  }

 private:
  template <typename Visit>
  void recurse(std::size_t idx, double gain, Visit& visit) {
    if (idx == cands_.size()) {
      visit(chosen_, gain);
      return;
    }
    // Include branch first.
    const auto& r = cands_[idx];
    const double w = inst_.w(r.from, r.to);
    bool fits = true;
    for (int p = pos_[r.from]; p < pos_[r.to]; ++p)
      if (load_[p] + w > inst_.capacity + 1e-9) {
        fits = false;
        break;
      }
    if (fits) {
      for (int p = pos_[r.from]; p < pos_[r.to]; ++p) load_[p] += w;
      chosen_.push_back(idx);
      recurse(idx + 1, gain + gain_[idx], visit);
      chosen_.pop_back();
      for (int p = pos_[r.from]; p < pos_[r.to]; ++p) load_[p] -= w;
    }
    recurse(idx + 1, gain, visit);
  }

  const Instance& inst_;
  std::vector<Arc> cands_;
  std::vector<double> load_;
  std::vector<int> pos_;
  std::vector<double> gain_;
  std::vector<std::size_t> chosen_;
};

}  // namespace

double route_length(const Instance& inst, const Route& route) {
  double len = 0.0;
  for (std::size_t p = 0; p + 1 < route.size(); ++p) len += inst.d(route[p], route[p + 1]);
  return len;
}

std::vector<Arc> on_route_requests(const Instance& inst, const Route& route) {
  std::vector<Arc> out;
  for (std::size_t a = 0; a < route.size(); ++a)
    for (std::size_t b = a + 1; b < route.size(); ++b)
      if (inst.has_request(route[a], route[b])) out.push_back({route[a], route[b]});
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> route_loads(const Instance& inst, const Route& route, const std::vector<Arc>& accepted) {
  std::vector<double> load(route.size() > 0 ? route.size() - 1 : 0, 0.0);
  std::vector<int> pos(inst.n + 1, -1);
  for (std::size_t p = 0; p < route.size(); ++p) pos[route[p]] = static_cast<int>(p);
  for (const auto& r : accepted) {
    if (pos[r.from] < 0 || pos[r.to] < 0 || pos[r.from] >= pos[r.to])
      throw std::invalid_argument("request (" + std::to_string(r.from) + "," + std::to_string(r.to) +
                                  ") is not served by the route");
    for (int p = pos[r.from]; p < pos[r.to]; ++p) load[p] += inst.w(r.from, r.to);
  }
  return load;
}

double profit(const Instance& inst, const Route& route, const std::vector<Arc>& accepted) {
  double revenue = 0.0;
  for (const auto& r : accepted) revenue += inst.price * inst.d(r.from, r.to) * inst.w(r.from, r.to);
  const auto load = route_loads(inst, route, accepted);
  double load_cost = 0.0;
  for (std::size_t p = 0; p < load.size(); ++p) load_cost += inst.d(route[p], route[p + 1]) * load[p];
  return revenue - inst.cost * load_cost - inst.cost * inst.vehicle_weight * route_length(inst, route);
}

std::vector<Route> enumerate_routes(const Instance& inst) {
  guard_nodes(inst);
  std::vector<Route> out;
  Route path{1};
  std::vector<bool> used(inst.n + 1, false);
  used[1] = true;
  const auto sp = shortest_paths(inst);
  const double limit = inst.max_distance + 1e-9;

  auto dfs = [&](auto&& self, double len) -> void {
    const int at = path.back();
    if (at == inst.n) {
      out.push_back(path);
      return;
    }
    for (int next = 1; next <= inst.n; ++next) {
      if (used[next] || !inst.is_arc(at, next)) continue;
      const double nl = len + inst.d(at, next);
      // Any completion needs at least the shortest remaining distance.
      if (nl + sp[next - 1][inst.n - 1] > limit) continue;
      used[next] = true;
      path.push_back(next);
      self(self, nl);
      path.pop_back();
      used[next] = false;
    }
  };
  dfs(dfs, 0.0);
  return out;
}

RequestChoice best_request_set(const Instance& inst, const Route& route) {
  guard_nodes(inst);
  SubsetSearch search(inst, route);
  bool have = false;
  double best_gain = 0.0;
  std::vector<std::size_t> best_idx;
  search.run([&](const std::vector<std::size_t>& chosen, double gain) {
    const bool tie = have && std::fabs(gain - best_gain) <= kTieTol;
    if (!have || gain > best_gain + kTieTol || (tie && chosen < best_idx)) {
      have = true;
      best_gain = gain;
      best_idx = chosen;
    }
  });
  RequestChoice out;
  for (auto i : best_idx) out.accepted.push_back(search.candidates()[i]);
  out.objective = profit(inst, route, out.accepted);
  return out;
}

ExactSolution solve_exact(const Instance& inst) {
  guard_nodes(inst);
  const auto routes = enumerate_routes(inst);
  ExactSolution best;
  bool have = false;
  for (const auto& route : routes) {
    auto choice = best_request_set(inst, route);
    bool better = !have || choice.objective > best.objective + kTieTol;
    if (!better && std::fabs(choice.objective - best.objective) <= kTieTol) {
      better = route.size() < best.route.size() || (route.size() == best.route.size() && route < best.route);
    }
    if (better) {
      have = true;
      best.route = route;
      best.accepted = std::move(choice.accepted);
      best.objective = choice.objective;
    }
  }
  if (!have) throw std::invalid_argument("instance has no route within the distance limit");
  best.load.assign(inst.n, std::vector<double>(inst.n, 0.0));
  const auto load = route_loads(inst, best.route, best.accepted);
  for (std::size_t p = 0; p < load.size(); ++p) best.load[best.route[p] - 1][best.route[p + 1] - 1] = load[p];
  return best;
}

void for_each_feasible(const Instance& inst,
                       const std::function<void(const Route&, const std::vector<Arc>&)>& visit) {
  for (const auto& route : enumerate_routes(inst)) {
    SubsetSearch search(inst, route);
    std::vector<Arc> accepted;
    search.run([&](const std::vector<std::size_t>& chosen, double) {
      accepted.clear();
      for (auto i : chosen) accepted.push_back(search.candidates()[i]);
      visit(route, accepted);
    });
  }
}

}  // namespace bpmp
