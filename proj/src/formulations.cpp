#include "bpmp/formulations.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace bpmp {

namespace {

std::string idx(int a) { return std::to_string(a); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view list) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const auto piece = trim(list.substr(start, comma == std::string_view::npos ? list.size() - start : comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

int parse_technique_token(const std::string& tok) {
  if (tok.size() >= 2 && (tok[0] == 't' || tok[0] == 'T')) {
    try {
      std::size_t used = 0;
      const int id = std::stoi(tok.substr(1), &used);
      if (used == tok.size() - 1 && id >= 1 && id <= TechniqueSet::kCount) return id;
    } catch (const std::logic_error&) {
    }
  }
  throw std::invalid_argument("unknown technique '" + tok + "' (expected t1..t11)");
}

const char* flag_name(int t) {
  static const char* names[] = {"",
                                "t1_conditional_arc_flow",
                                "t2_relax_node_degree",
                                "t3_single_node_demand",
                                "t4_relax_xz_linking",
                                "t5_branch_priority",
                                "t6_lifted_mtz",
                                "t7_mtz_upper_bound",
                                "t8_cover_cuts",
                                "t9_pairwise_demand_cuts",
                                "t10_relax_triples_linking",
                                "t11_enforce_node_degree"};
  return names[t];
}

// Rows shared by both formulations: departure, arrival, route
// conservation, distance limit, node degree and MTZ.
struct RouteRows {
  const Instance& inst;
  MipModel& m;
  std::map<std::pair<int, int>, int> x;
  std::vector<int> s;  // 1-based

  void add_depot_rows() {
    const int n = inst.n;
    std::vector<Term> depart, arrive;
    for (int j = 2; j <= n; ++j) depart.push_back({x.at({1, j}), 1.0});
    for (int i = 1; i < n; ++i) arrive.push_back({x.at({i, n}), 1.0});
    m.add_constraint("depart", std::move(depart), Sense::kEqual, 1.0);
    m.add_constraint("arrive", std::move(arrive), Sense::kEqual, 1.0);
    for (int k = 2; k < n; ++k) {
      std::vector<Term> row;
      for (int i = 1; i <= n; ++i)
        if (inst.is_arc(i, k)) row.push_back({x.at({i, k}), 1.0});
      for (int j = 1; j <= n; ++j)
        if (inst.is_arc(k, j)) row.push_back({x.at({k, j}), -1.0});
      std::sort(row.begin(), row.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
      m.add_constraint("route_" + idx(k), std::move(row), Sense::kEqual, 0.0);
    }
    std::vector<Term> dist;
    for (const auto& [a, v] : x) dist.push_back({v, inst.d(a.first, a.second)});
    m.add_constraint("distance", std::move(dist), Sense::kLessEqual, inst.max_distance);
  }

  void add_degree_rows() {
    const int n = inst.n;
    for (int k = 2; k <= n; ++k) {
      std::vector<Term> row;
      for (int i = 1; i <= n; ++i)
        if (inst.is_arc(i, k)) row.push_back({x.at({i, k}), 1.0});
      m.add_constraint("degree_" + idx(k), std::move(row), Sense::kLessEqual, 1.0);
    }
  }

  void add_mtz_rows(bool lifted) {
    const int n = inst.n;
    const auto interior = [n](int v) { return v != 1 && v != n; };
    for (const auto& [a, v] : x) {
      const auto [i, j] = a;
      if (lifted && interior(i) && interior(j)) {
        m.add_constraint("lmtz_" + idx(i) + "_" + idx(j),
                         {{v, static_cast<double>(n - 1)},
                          {x.at({j, i}), static_cast<double>(n - 3)},
                          {s[i], 1.0},
                          {s[j], -1.0}},
                         Sense::kLessEqual, static_cast<double>(n - 2));
      } else {
        m.add_constraint("mtz_" + idx(i) + "_" + idx(j),
                         {{v, static_cast<double>(n + 1)}, {s[i], 1.0}, {s[j], -1.0}}, Sense::kLessEqual,
                         static_cast<double>(n));
      }
    }
  }
};

std::string techniques_metadata(const TechniqueSet& t) {
  auto s = to_string(t);
  return s.empty() ? "none" : s;
}

std::string separation_metadata(const TechniqueSet& t) {
  std::string out;
  if (t.t8_cover_cuts) out = "cover";
  if (t.t9_pairwise_demand_cuts) out += out.empty() ? "pairwise_demand" : ",pairwise_demand";
  return out;
}

}  // namespace

std::string to_string(Formulation f) { return f == Formulation::kNodeArc ? "node_arc" : "triples"; }

Formulation parse_formulation(std::string_view text) {
  if (text == "node-arc" || text == "node_arc") return Formulation::kNodeArc;
  if (text == "triples") return Formulation::kTriples;
  throw std::invalid_argument("unknown formulation '" + std::string(text) + "' (expected node-arc or triples)");
}

bool TechniqueSet::get(int t) const {
  switch (t) {
    case 1: return t1_conditional_arc_flow;
    case 2: return t2_relax_node_degree;
    case 3: return t3_single_node_demand;
    case 4: return t4_relax_xz_linking;
    case 5: return t5_branch_priority;
    case 6: return t6_lifted_mtz;
    case 7: return t7_mtz_upper_bound;
    case 8: return t8_cover_cuts;
    case 9: return t9_pairwise_demand_cuts;
    case 10: return t10_relax_triples_linking;
    case 11: return t11_enforce_node_degree;
  }
  throw std::out_of_range("technique id " + std::to_string(t));
}

void TechniqueSet::set(int t, bool on) {
  switch (t) {
    case 1: t1_conditional_arc_flow = on; return;
    case 2: t2_relax_node_degree = on; return;
    case 3: t3_single_node_demand = on; return;
    case 4: t4_relax_xz_linking = on; return;
    case 5: t5_branch_priority = on; return;
    case 6: t6_lifted_mtz = on; return;
    case 7: t7_mtz_upper_bound = on; return;
    case 8: t8_cover_cuts = on; return;
    case 9: t9_pairwise_demand_cuts = on; return;
    case 10: t10_relax_triples_linking = on; return;
    case 11: t11_enforce_node_degree = on; return;
  }
  throw std::out_of_range("technique id " + std::to_string(t));
}

std::vector<int> TechniqueSet::enabled() const {
  std::vector<int> out;
  for (int t = 1; t <= kCount; ++t)
    if (get(t)) out.push_back(t);
  return out;
}

TechniqueSet parse_techniques(std::string_view list) {
  TechniqueSet t;
  for (int id : parse_technique_order(list)) t.set(id, true);
  return t;
}

std::vector<int> parse_technique_order(std::string_view list) {
  std::vector<int> out;
  for (const auto& tok : split(list)) {
    const int id = parse_technique_token(tok);
    if (std::find(out.begin(), out.end(), id) != out.end())
      throw std::invalid_argument("technique '" + tok + "' listed twice");
    out.push_back(id);
  }
  return out;
}

std::string to_string(const TechniqueSet& t) {
  std::string out;
  for (int id : t.enabled()) out += (out.empty() ? "t" : ",t") + std::to_string(id);
  return out;
}

void check_techniques(Formulation f, const TechniqueSet& t) {
  for (int id : t.enabled()) {
    const bool node_arc_only = id <= 9;
    if (f == Formulation::kNodeArc && !node_arc_only)
      throw std::invalid_argument(std::string(flag_name(id)) + " is only valid with the triples formulation");
    if (f == Formulation::kTriples && node_arc_only)
      throw std::invalid_argument(std::string(flag_name(id)) + " is only valid with the node-arc formulation");
  }
  if (t.t4_relax_xz_linking && !t.t1_conditional_arc_flow)
    throw std::invalid_argument("t4_relax_xz_linking requires t1_conditional_arc_flow");
  if (t.big_m && *t.big_m <= 0) throw std::invalid_argument("big_m must be a positive integer");
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"original_node_arc", "best_node_arc", "original_triples",
                                                 "best_triples"};
  return names;
}

Preset apply_preset(std::string_view name) {
  if (name == "original_node_arc") return {Formulation::kNodeArc, {}};
  if (name == "best_node_arc") return {Formulation::kNodeArc, parse_techniques("t1,t2,t4,t5")};
  if (name == "original_triples") return {Formulation::kTriples, {}};
  if (name == "best_triples") return {Formulation::kTriples, parse_techniques("t10,t11")};
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

std::string x_name(int i, int j) { return "x_" + idx(i) + "_" + idx(j); }
std::string y_name(int k, int l) { return "y_" + idx(k) + "_" + idx(l); }
std::string z_name(int k, int l, int i, int j) {
  return "z_" + idx(k) + "_" + idx(l) + "_" + idx(i) + "_" + idx(j);
}
std::string theta_name(int i, int j) { return "th_" + idx(i) + "_" + idx(j); }
std::string s_name(int i) { return "s_" + idx(i); }
std::string u_name(int i, int j, int k) { return "u_" + idx(i) + "_" + idx(j) + "_" + idx(k); }

std::vector<Triple> triples(const Instance& inst) {
  std::vector<Triple> out;
  for (int i = 1; i <= inst.n; ++i)
    for (int j = 1; j <= inst.n; ++j)
      for (int k = 1; k <= inst.n; ++k)
        if (i != j && j != k && i != k && inst.is_arc(i, k) && inst.is_arc(k, j)) out.push_back({i, j, k});
  return out;
}

std::vector<Constraint> single_node_demand_rows(const Instance& inst, const MipModel& model) {
  std::vector<Constraint> rows;
  const int n = inst.n;
  for (int i = 1; i <= n; ++i) {
    Constraint c{"sndo_" + idx(i), {}, Sense::kLessEqual, inst.capacity};
    for (int j = 1; j <= n; ++j)
      if (inst.has_request(i, j)) c.terms.push_back({model.variable_index(y_name(i, j)), inst.w(i, j)});
    if (!c.terms.empty()) rows.push_back(std::move(c));
  }
  for (int j = 1; j <= n; ++j) {
    Constraint c{"sndd_" + idx(j), {}, Sense::kLessEqual, inst.capacity};
    for (int i = 1; i <= n; ++i)
      if (inst.has_request(i, j)) c.terms.push_back({model.variable_index(y_name(i, j)), inst.w(i, j)});
    if (!c.terms.empty()) rows.push_back(std::move(c));
  }
  return rows;
}

MipModel build_node_arc(const Instance& inst, const TechniqueSet& t) {
  check_techniques(Formulation::kNodeArc, t);
  if (auto v = validate(inst); !v.empty()) throw ValidationError(std::move(v));

  const int n = inst.n;
  const double p = inst.price, c = inst.cost, veh = inst.vehicle_weight, q = inst.capacity;
  const auto arc_list = arcs(inst);
  const auto req_list = requests(inst);
  const int big_m = t.big_m.value_or(std::max<int>(1, static_cast<int>(req_list.size())));

  MipModel m("bpmp_node_arc");
  m.metadata()["formulation"] = "node_arc";
  m.metadata()["techniques"] = techniques_metadata(t);
  m.metadata()["separation"] = separation_metadata(t);
  m.metadata()["big_m"] = std::to_string(big_m);

  RouteRows route{inst, m, {}, std::vector<int>(n + 1, -1)};
  const int x_priority = t.t5_branch_priority ? 10 : 0;
  for (const auto& a : arc_list)
    route.x[{a.from, a.to}] = m.add_binary(x_name(a.from, a.to), -c * veh * inst.d(a.from, a.to), x_priority);
  std::map<std::pair<int, int>, int> y;
  for (const auto& r : req_list)
    y[{r.from, r.to}] = m.add_binary(y_name(r.from, r.to), p * inst.d(r.from, r.to) * inst.w(r.from, r.to));
  std::map<std::tuple<int, int, int, int>, int> z;
  for (const auto& r : req_list)
    for (const auto& a : arc_list) z[{r.from, r.to, a.from, a.to}] = m.add_binary(z_name(r.from, r.to, a.from, a.to));
  std::map<std::pair<int, int>, int> th;
  for (const auto& a : arc_list)
    th[{a.from, a.to}] = m.add_continuous(theta_name(a.from, a.to), 0.0, kInf, -c * inst.d(a.from, a.to));
  for (int i = 1; i <= n; ++i) {
    const bool bounded = t.t7_mtz_upper_bound && i != 1;
    route.s[i] = m.add_continuous(s_name(i), bounded ? 1.0 : 0.0, bounded ? static_cast<double>(n - 1) : kInf);
  }

  route.add_depot_rows();
  if (!t.t2_relax_node_degree) route.add_degree_rows();
  route.add_mtz_rows(t.t6_lifted_mtz);

  if (!t.t4_relax_xz_linking) {
    for (const auto& a : arc_list) {
      std::vector<Term> row;
      row.push_back({route.x.at({a.from, a.to}), -static_cast<double>(big_m)});
      for (const auto& r : req_list) row.push_back({z.at({r.from, r.to, a.from, a.to}), 1.0});
      m.add_constraint("xz_" + idx(a.from) + "_" + idx(a.to), std::move(row), Sense::kLessEqual, 0.0);
    }
  }

  for (const auto& r : req_list) {
    const auto [k, l] = std::pair{r.from, r.to};
    std::vector<Term> out_row{{y.at({k, l}), -1.0}};
    for (int j = 1; j <= n; ++j)
      if (inst.is_arc(k, j)) out_row.push_back({z.at({k, l, k, j}), 1.0});
    m.add_constraint("yzo_" + idx(k) + "_" + idx(l), std::move(out_row), Sense::kEqual, 0.0);
    std::vector<Term> in_row{{y.at({k, l}), -1.0}};
    for (int i = 1; i <= n; ++i)
      if (inst.is_arc(i, l)) in_row.push_back({z.at({k, l, i, l}), 1.0});
    m.add_constraint("yzi_" + idx(k) + "_" + idx(l), std::move(in_row), Sense::kEqual, 0.0);
  }

  for (const auto& r : req_list)
    for (int h = 1; h <= n; ++h) {
      if (h == r.from || h == r.to) continue;
      std::vector<Term> row;
      for (int i = 1; i <= n; ++i)
        if (inst.is_arc(i, h)) row.push_back({z.at({r.from, r.to, i, h}), 1.0});
      for (int j = 1; j <= n; ++j)
        if (inst.is_arc(h, j)) row.push_back({z.at({r.from, r.to, h, j}), -1.0});
      std::sort(row.begin(), row.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
      m.add_constraint("flow_" + idx(r.from) + "_" + idx(r.to) + "_" + idx(h), std::move(row), Sense::kEqual, 0.0);
    }

  for (const auto& a : arc_list) {
    std::vector<Term> row;
    for (const auto& r : req_list) row.push_back({z.at({r.from, r.to, a.from, a.to}), -inst.w(r.from, r.to)});
    row.push_back({th.at({a.from, a.to}), 1.0});
    m.add_constraint("theta_" + idx(a.from) + "_" + idx(a.to), std::move(row), Sense::kEqual, 0.0);
  }

  for (const auto& a : arc_list) {
    const auto tag = idx(a.from) + "_" + idx(a.to);
    if (t.t1_conditional_arc_flow) {
      m.add_constraint("caf_" + tag, {{route.x.at({a.from, a.to}), -q}, {th.at({a.from, a.to}), 1.0}},
                       Sense::kLessEqual, 0.0);
    } else {
      m.add_constraint("cap_" + tag, {{th.at({a.from, a.to}), 1.0}}, Sense::kLessEqual, q);
    }
  }

  if (t.t3_single_node_demand)
    for (auto& row : single_node_demand_rows(inst, m)) m.add_constraint(std::move(row));

  return m;
}

MipModel build_triples(const Instance& inst, const TechniqueSet& t) {
  check_techniques(Formulation::kTriples, t);
  if (auto v = validate(inst); !v.empty()) throw ValidationError(std::move(v));

  const int n = inst.n;
  const double p = inst.price, c = inst.cost, veh = inst.vehicle_weight, q = inst.capacity;
  const auto arc_list = arcs(inst);
  const auto req_list = requests(inst);
  const auto triple_list = triples(inst);

  MipModel m("bpmp_triples");
  m.metadata()["formulation"] = "triples";
  m.metadata()["techniques"] = techniques_metadata(t);
  m.metadata()["separation"] = "";

  RouteRows route{inst, m, {}, std::vector<int>(n + 1, -1)};
  for (const auto& a : arc_list)
    route.x[{a.from, a.to}] = m.add_binary(x_name(a.from, a.to), -c * veh * inst.d(a.from, a.to));
  std::map<std::pair<int, int>, int> y;
  for (const auto& r : req_list)
    y[{r.from, r.to}] = m.add_binary(y_name(r.from, r.to), p * inst.d(r.from, r.to) * inst.w(r.from, r.to));
  std::map<std::pair<int, int>, int> th;
  for (const auto& a : arc_list)
    th[{a.from, a.to}] = m.add_continuous(theta_name(a.from, a.to), 0.0, kInf, -c * inst.d(a.from, a.to));
  for (int i = 1; i <= n; ++i) route.s[i] = m.add_continuous(s_name(i));
  std::map<Triple, int> u;
  for (const auto& tr : triple_list) u[tr] = m.add_continuous(u_name(tr.i, tr.j, tr.k));

  route.add_depot_rows();
  if (t.t11_enforce_node_degree) route.add_degree_rows();
  route.add_mtz_rows(false);

  for (const auto& a : arc_list) {
    const int i = a.from, j = a.to;
    std::vector<Term> row{{th.at({i, j}), 1.0}};
    if (inst.has_request(i, j)) row.push_back({y.at({i, j}), -inst.w(i, j)});
    for (int k = 1; k <= n; ++k) {
      if (k == i || k == j) continue;
      // flow from i to k whose first arc is (i, j)
      if (auto it = u.find({i, k, j}); it != u.end()) row.push_back({it->second, -1.0});
      // flow from k to j that entered i on its first arc, continuing on (i, j)
      if (auto it = u.find({k, j, i}); it != u.end()) row.push_back({it->second, -1.0});
      // flow from i to j leaving on (i, k) instead
      if (auto it = u.find({i, j, k}); it != u.end()) row.push_back({it->second, 1.0});
    }
    std::sort(row.begin(), row.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    m.add_constraint("balance_" + idx(i) + "_" + idx(j), std::move(row), Sense::kEqual, 0.0);
  }

  for (const auto& a : arc_list)
    m.add_constraint("caf_" + idx(a.from) + "_" + idx(a.to),
                     {{route.x.at({a.from, a.to}), -q}, {th.at({a.from, a.to}), 1.0}}, Sense::kLessEqual, 0.0);

  if (!t.t10_relax_triples_linking)
    for (const auto& tr : triple_list)
      m.add_constraint("ux_" + idx(tr.i) + "_" + idx(tr.j) + "_" + idx(tr.k),
                       {{route.x.at({tr.i, tr.k}), -q}, {u.at(tr), 1.0}}, Sense::kLessEqual, 0.0);

  return m;
}

MipModel build_model(const Instance& inst, Formulation f, const TechniqueSet& t) {
  return f == Formulation::kNodeArc ? build_node_arc(inst, t) : build_triples(inst, t);
}

}  // namespace bpmp
