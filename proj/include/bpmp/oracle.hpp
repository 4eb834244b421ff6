#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "bpmp/instance.hpp"

namespace bpmp {

using Route = std::vector<int>;  // node sequence 1, ..., n

class OracleSizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kOracleMaxNodes = 10;
inline constexpr int kOracleMaxOnRouteRequests = 22;

struct ExactSolution {
  Route route;
  std::vector<Arc> accepted;  // sorted
  double objective = 0.0;
  Matrix load;                // n x n per-arc loads (0-based), zero off-route
};

double route_length(const Instance& inst, const Route& route);

// Profit of a (route, accepted set) pair: revenue minus load and empty
// vehicle costs. Does not check feasibility.
double profit(const Instance& inst, const Route& route, const std::vector<Arc>& accepted);

// Requests whose origin precedes the destination on the route, in
// lexicographic order.
std::vector<Arc> on_route_requests(const Instance& inst, const Route& route);

// Arc loads along the route for an accepted set, indexed by route position.
std::vector<double> route_loads(const Instance& inst, const Route& route, const std::vector<Arc>& accepted);

// Simple 1 -> n paths of length <= D, DFS order over increasing successor.
std::vector<Route> enumerate_routes(const Instance& inst);

struct RequestChoice {
  std::vector<Arc> accepted;
  double objective = 0.0;
};

// Exhaustive best capacity-feasible subset of on-route requests; ties go to
// the lexicographically smallest accepted list.
RequestChoice best_request_set(const Instance& inst, const Route& route);

// Global optimum over all (route, subset) pairs; ties go to the route with
// fewer arcs, then the lexicographically smaller route.
ExactSolution solve_exact(const Instance& inst);

// Visits every integer-feasible (route, accepted set) pair.
void for_each_feasible(const Instance& inst,
                       const std::function<void(const Route&, const std::vector<Arc>&)>& visit);

}  // namespace bpmp
