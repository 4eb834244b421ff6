#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace bpmp {

// Nodes are 1-based throughout the public API: node 1 is the vehicle's
// current location and node n is the depot.
using Matrix = std::vector<std::vector<double>>;

struct Instance {
  int n = 0;
  double price = 0.0;           // revenue per ton-mile of accepted request
  double cost = 0.0;            // cost per ton-mile of gross load
  double vehicle_weight = 0.0;  // tons
  double capacity = 0.0;        // Q, tons
  double max_distance = 0.0;    // D, miles
  Matrix dist;                  // n x n, miles
  Matrix req_weight;            // n x n, tons, 0 = no request

  double d(int i, int j) const { return dist[i - 1][j - 1]; }
  double w(int k, int l) const { return req_weight[k - 1][l - 1]; }

  // (i, j) with i != j, j != 1, i != n.
  bool is_arc(int i, int j) const { return i != j && j != 1 && i != n; }
  bool has_request(int k, int l) const { return is_arc(k, l) && w(k, l) > 0.0; }

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct Arc {
  int from;
  int to;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

// Arc set in lexicographic order.
std::vector<Arc> arcs(const Instance& inst);
// Request set (arcs carrying a positive weight) in lexicographic order.
std::vector<Arc> requests(const Instance& inst);

struct GenerationParams {
  double box = 100.0;        // nodes are placed uniformly in [0, box]^2
  double density = 0.5;      // probability an eligible pair carries a request
  double weight_lo = 0.1;    // request weight ~ U(weight_lo*Q, weight_hi*Q)
  double weight_hi = 1.0;
  double slack = 3.0;        // D = slack * dist(1, n)
  double capacity = 10.0;
  double vehicle_weight = 4.0;
  double price = 1.0;
  double cost = 0.25;
};

Instance generate(int n, std::uint64_t seed, const GenerationParams& params = {});

struct Violation {
  std::string field;
  std::string rule;
};

std::vector<Violation> validate(const Instance& inst);

// All-pairs shortest path lengths (Floyd-Warshall), 0-based indexing.
Matrix shortest_paths(const Instance& inst);

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

std::string to_json(const Instance& inst);
// Throws ParseError for malformed documents and ValidationError when the
// document parses but violates an instance invariant.
Instance from_json(const std::string& text);

void save(const Instance& inst, const std::filesystem::path& path);
Instance load(const std::filesystem::path& path);

}  // namespace bpmp
