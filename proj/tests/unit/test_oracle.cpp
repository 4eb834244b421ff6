#include <doctest.h>

#include <random>
#include <set>

#include "bpmp/oracle.hpp"
#include "support.hpp"

using namespace bpmp;

namespace {

void check_solution_invariants(const Instance& inst, const ExactSolution& s) {
  REQUIRE(s.route.front() == 1);
  REQUIRE(s.route.back() == inst.n);
  CHECK(std::set<int>(s.route.begin(), s.route.end()).size() == s.route.size());
  CHECK(route_length(inst, s.route) <= inst.max_distance + 1e-9);
  for (const auto& a : s.accepted) {
    const auto from = std::find(s.route.begin(), s.route.end(), a.from);
    const auto to = std::find(s.route.begin(), s.route.end(), a.to);
    REQUIRE(from != s.route.end());
    REQUIRE(to != s.route.end());
    CHECK(from < to);
  }
  for (double l : route_loads(inst, s.route, s.accepted)) CHECK(l <= inst.capacity + 1e-9);
  CHECK(profit(inst, s.route, s.accepted) == doctest::Approx(s.objective).epsilon(1e-12));
}

Instance line3(double price) {
  auto inst = testing::hand_instance({{0, 0}, {3, 4}, {6, 0}}, 10.0, 100.0, 4.0, price, 0.25);
  inst.req_weight[0][2] = 10.0;
  return inst;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("n = 3 routes by hand") {
    auto inst = testing::hand_instance({{0, 0}, {3, 4}, {6, 0}}, 10.0, 100.0);
    const std::vector<Route> both{{1, 2, 3}, {1, 3}};
    auto routes = enumerate_routes(inst);
    std::sort(routes.begin(), routes.end());
    CHECK(routes == both);

    inst.max_distance = 8.0;
    CHECK(enumerate_routes(inst) == std::vector<Route>{{1, 3}});
  }

  TEST_CASE("route enumeration matches permutation filtering") {
    for (std::uint64_t seed : {42u, 1u, 7u}) {
      const auto inst = generate(6, seed);
      auto routes = enumerate_routes(inst);
      const auto again = enumerate_routes(inst);
      CHECK(routes == again);
      std::sort(routes.begin(), routes.end());
      CHECK(routes == testing::routes_by_permutation(inst));
    }
  }

  TEST_CASE("no requests: cheapest path only") {
    auto inst = generate(6, 3);
    for (auto& row : inst.req_weight)
      for (auto& w : row) w = 0.0;
    const auto sp = testing::bellman_ford_all(inst);
    const auto s = solve_exact(inst);
    CHECK(s.accepted.empty());
    CHECK(s.objective == doctest::Approx(-inst.cost * inst.vehicle_weight * sp[0][5]).epsilon(1e-12));
    const auto choice = best_request_set(inst, s.route);
    CHECK(choice.accepted.empty());
    CHECK(choice.objective == doctest::Approx(-inst.cost * inst.vehicle_weight * route_length(inst, s.route)));
  }

  TEST_CASE("a full-capacity request is taken exactly when it pays") {
    const Route detour{1, 2, 3};
    // revenue 0.5 * 6 per ton against load cost 0.25 * 10 per ton
    auto pays = best_request_set(line3(0.5), detour);
    CHECK(pays.accepted == std::vector<Arc>{{1, 3}});
    auto loses = best_request_set(line3(0.4), detour);
    CHECK(loses.accepted.empty());
    CHECK(pays.objective == doctest::Approx(0.5 * 6 * 10 - 0.25 * 10 * 10 - 0.25 * 4 * 10));
  }

  TEST_CASE("overlapping heavy requests exclude each other") {
    auto inst = testing::hand_instance({{0, 0}, {1, 0}, {2, 0}, {3, 0}}, 10.0, 100.0);
    inst.req_weight[0][2] = 6.0;
    inst.req_weight[1][3] = 6.0;
    const auto choice = best_request_set(inst, {1, 2, 3, 4});
    CHECK(choice.accepted.size() == 1);
    // Visiting 3 before 2 removes the overlap, so the optimum may carry both.
    check_solution_invariants(inst, solve_exact(inst));
  }

  TEST_CASE("six-node instance in the style of the introductory example") {
    auto inst = testing::hand_instance({{0, 0}, {2, 1}, {4, 1}, {2, -1.5}, {4, -1.5}, {6, 0}}, 2.0, 7.0, 1.0);
    inst.req_weight[0][2] = 1.0;
    inst.req_weight[1][5] = 1.5;
    inst.req_weight[0][5] = 0.5;
    inst.req_weight[3][4] = 2.0;
    inst.req_weight[1][2] = 1.0;
    REQUIRE(validate(inst).empty());
    for (int i = 1; i <= 6; ++i)
      for (int j = 1; j <= 6; ++j)
        if (i != j) REQUIRE(inst.d(i, j) >= 2.0);
    const auto s = solve_exact(inst);
    CHECK(s.route.size() <= 4);
    CHECK(route_length(inst, s.route) <= 7.0 + 1e-9);
    check_solution_invariants(inst, s);
    CHECK(s.objective > 0.0);
  }

  TEST_CASE("exact solutions satisfy their invariants") {
    for (int n : {4, 5, 6, 7})
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto inst = generate(n, seed);
        const auto s = solve_exact(inst);
        check_solution_invariants(inst, s);
        const auto again = solve_exact(inst);
        CHECK(again.route == s.route);
        CHECK(again.accepted == s.accepted);
      }
  }

  TEST_CASE("no random feasible pair beats the oracle") {
    std::mt19937_64 rng(99);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto inst = generate(6, seed + 10);
      const double best = solve_exact(inst).objective;
      int feasible = 0;
      for (int k = 0; k < 1000; ++k) {
        std::vector<int> mid{2, 3, 4, 5};
        std::shuffle(mid.begin(), mid.end(), rng);
        mid.resize(std::uniform_int_distribution<std::size_t>(0, 4)(rng));
        Route r{1};
        r.insert(r.end(), mid.begin(), mid.end());
        r.push_back(6);
        if (route_length(inst, r) > inst.max_distance) continue;
        std::vector<Arc> acc;
        for (const auto& a : on_route_requests(inst, r))
          if (rng() & 1) acc.push_back(a);
        bool ok = true;
        for (double l : route_loads(inst, r, acc)) ok = ok && l <= inst.capacity + 1e-9;
        if (!ok) continue;
        ++feasible;
        REQUIRE(profit(inst, r, acc) <= best + 1e-9);
      }
      CHECK(feasible > 0);
    }
  }

  TEST_CASE("adding a request never lowers the optimum") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      GenerationParams sparse;
      sparse.density = 0.3;
      auto inst = generate(6, seed, sparse);
      const double before = solve_exact(inst).objective;
      for (const auto& a : arcs(inst))
        if (inst.w(a.from, a.to) == 0.0) {
          inst.req_weight[a.from - 1][a.to - 1] = 0.4 * inst.capacity;
          break;
        }
      CHECK(solve_exact(inst).objective >= before - 1e-12);
    }
  }

  TEST_CASE("for_each_feasible visits the optimum") {
    const auto inst = generate(5, 4);
    double best = -1e300;
    for_each_feasible(inst, [&](const Route& r, const std::vector<Arc>& acc) { best = std::max(best, profit(inst, r, acc)); });
    CHECK(best == doctest::Approx(solve_exact(inst).objective).epsilon(1e-12));
  }

  TEST_CASE("size guard refuses large instances") {
    const auto inst = generate(11, 0);
    CHECK_THROWS_AS(enumerate_routes(inst), OracleSizeError);
    CHECK_THROWS_AS(solve_exact(inst), OracleSizeError);
  }
}
