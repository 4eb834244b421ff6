#include "bpmp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"

namespace bpmp {

namespace {

using ordered_json = nlohmann::ordered_json;

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

std::string join(const std::vector<Violation>& vs) {
  std::string out;
  for (const auto& v : vs) {
    if (!out.empty()) out += "; ";
    out += v.field + ": " + v.rule;
  }
  return out;
}

int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace

std::vector<Arc> arcs(const Instance& inst) {
  std::vector<Arc> out;
  for (int i = 1; i <= inst.n; ++i)
    for (int j = 1; j <= inst.n; ++j)
      if (inst.is_arc(i, j)) out.push_back({i, j});
  return out;
}

std::vector<Arc> requests(const Instance& inst) {
  std::vector<Arc> out;
  for (int k = 1; k <= inst.n; ++k)
    for (int l = 1; l <= inst.n; ++l)
      if (inst.has_request(k, l)) out.push_back({k, l});
  return out;
}

Instance generate(int n, std::uint64_t seed, const GenerationParams& params) {
  if (n < 3) throw std::invalid_argument("n must be at least 3");
  if (!(params.density > 0.0 && params.density <= 1.0))
    throw std::invalid_argument("density must lie in (0, 1]");
  if (!(params.slack > 1.0)) throw std::invalid_argument("slack must exceed 1");
  if (!(params.box > 0.0)) throw std::invalid_argument("box must be positive");
  if (!(params.weight_lo > 0.0 && params.weight_lo <= params.weight_hi && params.weight_hi <= 1.0))
    throw std::invalid_argument("weight range must satisfy 0 < lo <= hi <= 1");
  if (!(params.capacity > 0.0 && params.vehicle_weight > 0.0 && params.price > 0.0 &&
        params.cost > 0.0))
    throw std::invalid_argument("capacity, vehicle weight, price and cost must be positive");

  std::mt19937_64 rng(seed);
  std::vector<std::pair<double, double>> xy(n);
  for (auto& [x, y] : xy) {
    x = unit(rng) * params.box;
    y = unit(rng) * params.box;
  }

  // Work in integer hundredths, then close under shortest paths so the
  // rounded matrix still satisfies the triangle inequality exactly.
  std::vector<std::vector<std::int64_t>> hundredths(n, std::vector<std::int64_t>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) {
        const double e = std::hypot(xy[i].first - xy[j].first, xy[i].second - xy[j].second);
        hundredths[i][j] = std::max<std::int64_t>(1, std::llround(e * 100.0));
      }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) hundredths[i][j] = std::min(hundredths[i][j], hundredths[i][k] + hundredths[k][j]);

  Instance inst;
  inst.n = n;
  inst.price = params.price;
  inst.cost = params.cost;
  inst.vehicle_weight = params.vehicle_weight;
  inst.capacity = params.capacity;
  inst.dist.assign(n, std::vector<double>(n, 0.0));
  inst.req_weight.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inst.dist[i][j] = static_cast<double>(hundredths[i][j]) / 100.0;

  const double q = params.capacity;
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l) {
      if (!inst.is_arc(k, l)) continue;
      const double draw = unit(rng);
      const double size = unit(rng);
      if (draw < params.density) {
        const double lo = params.weight_lo * q;
        const double hi = params.weight_hi * q;
        inst.req_weight[k - 1][l - 1] = std::clamp(round2(lo + size * (hi - lo)), 0.01, q);
      }
    }

  inst.max_distance = round2(params.slack * inst.d(1, n));
  return inst;
}

Matrix shortest_paths(const Instance& inst) {
  const int n = inst.n;
  Matrix sp(n, std::vector<double>(n, std::numeric_limits<double>::infinity()));
  for (int i = 0; i < n; ++i) {
    sp[i][i] = 0.0;
    for (int j = 0; j < n; ++j)
      if (inst.is_arc(i + 1, j + 1)) sp[i][j] = inst.dist[i][j];
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) sp[i][j] = std::min(sp[i][j], sp[i][k] + sp[k][j]);
  return sp;
}

std::vector<Violation> validate(const Instance& inst) {
  std::vector<Violation> out;
  auto add = [&](std::string field, std::string rule) {
    out.push_back({std::move(field), std::move(rule)});
  };

  if (inst.n < 3) add("n", "node count must be at least 3");
  if (!(inst.price > 0.0)) add("p", "price must be positive");
  if (!(inst.cost > 0.0)) add("c", "cost must be positive");
  if (!(inst.vehicle_weight > 0.0)) add("v", "vehicle weight must be positive");
  if (!(inst.capacity > 0.0)) add("Q", "capacity must be positive");
  if (!(inst.max_distance > 0.0)) add("D", "max distance must be positive");

  const auto n = static_cast<std::size_t>(std::max(inst.n, 0));
  auto square = [n](const Matrix& m) {
    return m.size() == n && std::all_of(m.begin(), m.end(), [n](const auto& r) { return r.size() == n; });
  };
  if (!square(inst.dist)) add("dist", "matrix must be n x n");
  if (!square(inst.req_weight)) add("req_weight", "matrix must be n x n");
  if (!out.empty() && (inst.n < 3 || !square(inst.dist) || !square(inst.req_weight))) return out;

  bool diag = false, offdiag = false;
  for (int i = 1; i <= inst.n; ++i)
    for (int j = 1; j <= inst.n; ++j) {
      const double d = inst.d(i, j);
      if (i == j && d != 0.0) diag = true;
      if (i != j && !(d > 0.0 && std::isfinite(d))) offdiag = true;
    }
  if (diag) add("dist", "diagonal distance nonzero");
  if (offdiag) add("dist", "off-diagonal distance must be positive and finite");

  bool negative = false, exceeds = false, self = false, into_origin = false, out_of_depot = false;
  for (int k = 1; k <= inst.n; ++k)
    for (int l = 1; l <= inst.n; ++l) {
      const double w = inst.w(k, l);
      if (!(w >= 0.0) || !std::isfinite(w)) negative = true;
      if (inst.capacity > 0.0 && w > inst.capacity) exceeds = true;
      if (w != 0.0) {
        if (k == l) self = true;
        else if (l == 1) into_origin = true;
        else if (k == inst.n) out_of_depot = true;
      }
    }
  if (negative) add("req_weight", "request weight must be nonnegative and finite");
  if (exceeds) add("req_weight", "request exceeds capacity");
  if (self) add("req_weight", "diagonal request nonzero");
  if (into_origin) add("req_weight", "request into origin node");
  if (out_of_depot) add("req_weight", "request out of depot node");

  if (!diag && !offdiag && inst.max_distance > 0.0) {
    const double shortest = shortest_paths(inst)[0][inst.n - 1];
    if (shortest > inst.max_distance) add("D", "shortest origin-depot path exceeds max distance");
  }
  return out;
}

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error("invalid instance: " + join(violations)),
      violations_(std::move(violations)) {}

std::string to_json(const Instance& inst) {
  ordered_json j;
  j["n"] = inst.n;
  j["p"] = inst.price;
  j["c"] = inst.cost;
  j["v"] = inst.vehicle_weight;
  j["Q"] = inst.capacity;
  j["D"] = inst.max_distance;
  j["dist"] = inst.dist;
  j["req_weight"] = inst.req_weight;
  return j.dump() + "\n";
}

Instance from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError("line 1: instance document must be a JSON object");

  auto field = [&](const char* key) -> const ordered_json& {
    if (!j.contains(key)) throw ParseError(std::string("field '") + key + "': missing");
    return j.at(key);
  };
  auto number = [&](const char* key) {
    const auto& v = field(key);
    if (!v.is_number()) throw ParseError(std::string("field '") + key + "': expected a number");
    return v.get<double>();
  };
  auto matrix = [&](const char* key) {
    const auto& v = field(key);
    Matrix m;
    if (!v.is_array()) throw ParseError(std::string("field '") + key + "': expected an array of arrays");
    for (std::size_t r = 0; r < v.size(); ++r) {
      if (!v[r].is_array())
        throw ParseError(std::string("field '") + key + "[" + std::to_string(r) + "]': expected an array");
      std::vector<double> row;
      for (std::size_t c = 0; c < v[r].size(); ++c) {
        if (!v[r][c].is_number())
          throw ParseError(std::string("field '") + key + "[" + std::to_string(r) + "][" +
                           std::to_string(c) + "]': expected a number");
        row.push_back(v[r][c].get<double>());
      }
      m.push_back(std::move(row));
    }
    return m;
  };

  Instance inst;
  const auto& nv = field("n");
  if (!nv.is_number_integer()) throw ParseError("field 'n': expected an integer");
  inst.n = nv.get<int>();
  inst.price = number("p");
  inst.cost = number("c");
  inst.vehicle_weight = number("v");
  inst.capacity = number("Q");
  inst.max_distance = number("D");
  inst.dist = matrix("dist");
  inst.req_weight = matrix("req_weight");

  if (auto violations = validate(inst); !violations.empty()) throw ValidationError(std::move(violations));
  return inst;
}

void save(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << to_json(inst);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Instance load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

}  // namespace bpmp
