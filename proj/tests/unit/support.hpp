#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "bpmp/instance.hpp"

namespace testing {

// Symmetric instance from node coordinates; distances are rounded
// Euclidean and requests are given explicitly.
inline bpmp::Instance hand_instance(const std::vector<std::pair<double, double>>& xy, double capacity,
                                    double max_distance, double vehicle_weight = 4.0, double price = 1.0,
                                    double cost = 0.25) {
  bpmp::Instance inst;
  inst.n = static_cast<int>(xy.size());
  inst.capacity = capacity;
  inst.max_distance = max_distance;
  inst.vehicle_weight = vehicle_weight;
  inst.price = price;
  inst.cost = cost;
  inst.dist.assign(inst.n, std::vector<double>(inst.n, 0.0));
  inst.req_weight.assign(inst.n, std::vector<double>(inst.n, 0.0));
  for (int i = 0; i < inst.n; ++i)
    for (int j = 0; j < inst.n; ++j)
      if (i != j)
        inst.dist[i][j] =
            std::round(std::hypot(xy[i].first - xy[j].first, xy[i].second - xy[j].second) * 100.0) / 100.0;
  return inst;
}

// Independent all-pairs shortest paths by repeated relaxation.
inline std::vector<std::vector<double>> bellman_ford_all(const bpmp::Instance& inst) {
  const int n = inst.n;
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 1e300));
  for (int s = 0; s < n; ++s) {
    d[s][s] = 0.0;
    for (int round = 0; round < n; ++round)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j) d[s][j] = std::min(d[s][j], d[s][i] + inst.dist[i][j]);
  }
  return d;
}

// All simple 1 -> n paths by permutation filtering over node subsets.
inline std::vector<std::vector<int>> routes_by_permutation(const bpmp::Instance& inst) {
  const int n = inst.n;
  std::vector<std::vector<int>> out;
  const int inner = n - 2;
  for (int mask = 0; mask < (1 << inner); ++mask) {
    std::vector<int> mid;
    for (int b = 0; b < inner; ++b)
      if (mask & (1 << b)) mid.push_back(b + 2);
    std::sort(mid.begin(), mid.end());
    do {
      std::vector<int> r{1};
      r.insert(r.end(), mid.begin(), mid.end());
      r.push_back(n);
      double len = 0.0;
      for (std::size_t p = 0; p + 1 < r.size(); ++p) len += inst.d(r[p], r[p + 1]);
      if (len <= inst.max_distance + 1e-9) out.push_back(r);
    } while (std::next_permutation(mid.begin(), mid.end()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("bpmp_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::filesystem::path data_dir() { return BPMP_TEST_DATA_DIR; }

}  // namespace testing
