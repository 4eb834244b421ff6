#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bpmp/instance.hpp"
#include "bpmp/model.hpp"

namespace bpmp {

enum class Formulation { kNodeArc, kTriples };

std::string to_string(Formulation f);
Formulation parse_formulation(std::string_view text);  // "node-arc" | "node_arc" | "triples"

// Model enhancements. t1-t9 apply to the node-arc formulation, t10-t11 to
// the triples formulation. t8 and t9 activate root separation loops rather
// than adding static rows.
struct TechniqueSet {
  bool t1_conditional_arc_flow = false;
  bool t2_relax_node_degree = false;
  bool t3_single_node_demand = false;
  bool t4_relax_xz_linking = false;
  bool t5_branch_priority = false;
  bool t6_lifted_mtz = false;
  bool t7_mtz_upper_bound = false;
  bool t8_cover_cuts = false;
  bool t9_pairwise_demand_cuts = false;
  bool t10_relax_triples_linking = false;
  bool t11_enforce_node_degree = false;
  // Big-M of the x-z link; unset means the number of requests.
  std::optional<int> big_m;

  static constexpr int kCount = 11;

  bool get(int technique) const;  // 1-based
  void set(int technique, bool on);
  std::vector<int> enabled() const;

  friend bool operator==(const TechniqueSet&, const TechniqueSet&) = default;
};

// "t1,t2,t4,t5" <-> TechniqueSet. An empty string is the empty set.
TechniqueSet parse_techniques(std::string_view list);
std::string to_string(const TechniqueSet& t);
// Ordered list such as "t1,t3,t2"; duplicates are rejected.
std::vector<int> parse_technique_order(std::string_view list);

// Throws std::invalid_argument naming the first offending flag.
void check_techniques(Formulation f, const TechniqueSet& t);

struct Preset {
  Formulation formulation;
  TechniqueSet techniques;
};

// original_node_arc, best_node_arc, original_triples, best_triples.
Preset apply_preset(std::string_view name);
const std::vector<std::string>& preset_names();

MipModel build_node_arc(const Instance& inst, const TechniqueSet& t = {});
MipModel build_triples(const Instance& inst, const TechniqueSet& t = {});
MipModel build_model(const Instance& inst, Formulation f, const TechniqueSet& t);

// Per-origin and per-destination accepted-weight rows over the model's y
// variables: sum_j w_ij y_ij <= Q and sum_i w_ij y_ij <= Q.
std::vector<Constraint> single_node_demand_rows(const Instance& inst, const MipModel& model);

// Triples (i, j, k): distinct nodes with (i, k) and (k, j) both arcs, in
// lexicographic order. Flow u_ij^k leaves i on (i, k) and continues from k
// towards j, so k cannot be the depot and j cannot be the origin.
struct Triple {
  int i, j, k;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};
std::vector<Triple> triples(const Instance& inst);

// Variable names shared by both formulations.
std::string x_name(int i, int j);
std::string y_name(int k, int l);
std::string z_name(int k, int l, int i, int j);
std::string theta_name(int i, int j);
std::string s_name(int i);
std::string u_name(int i, int j, int k);

}  // namespace bpmp
