#include "bpmp/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace bpmp {

namespace {

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::kLessEqual: return "<=";
    case Sense::kEqual: return "=";
    case Sense::kGreaterEqual: return ">=";
  }
  return "?";
}

const char* mps_row_type(Sense s) {
  switch (s) {
    case Sense::kLessEqual: return "L";
    case Sense::kEqual: return "E";
    case Sense::kGreaterEqual: return "G";
  }
  return "?";
}

std::string class_of(const std::string& name) {
  const auto pos = name.find('_');
  return pos == std::string::npos ? name : name.substr(0, pos);
}

// Appends " + 1.5 name" style terms, wrapping long rows.
class LpLine {
 public:
  explicit LpLine(std::string& out) : out_(out) {}

  void term(double coeff, const std::string& var) {
    std::string piece;
    if (first_) {
      piece = (coeff < 0 ? "- " : "") + format_number(std::fabs(coeff)) + " " + var;
    } else {
      piece = std::string(coeff < 0 ? " - " : " + ") + format_number(std::fabs(coeff)) + " " + var;
    }
    if (width_ + piece.size() > 100) {
      out_ += "\n  ";
      width_ = 2;
      if (!first_ && piece.front() == ' ') piece.erase(0, 1);
    }
    out_ += piece;
    width_ += piece.size();
    first_ = false;
  }

  void text(const std::string& s) {
    out_ += s;
    width_ += s.size();
  }

 private:
  std::string& out_;
  std::size_t width_ = 0;
  bool first_ = true;
};

}  // namespace

int MipModel::add_variable(Variable v) {
  if (v.name.empty()) throw std::invalid_argument("variable name must be nonempty");
  if (var_index_.contains(v.name)) throw std::invalid_argument("duplicate variable '" + v.name + "'");
  if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper)
    throw std::invalid_argument("variable '" + v.name + "': lower bound exceeds upper bound");
  if (v.kind == VarKind::kBinary && (v.lower < 0.0 || v.upper > 1.0))
    throw std::invalid_argument("binary variable '" + v.name + "': bounds must lie within [0, 1]");
  if (!std::isfinite(v.objective))
    throw std::invalid_argument("variable '" + v.name + "': objective coefficient must be finite");
  const int idx = static_cast<int>(variables_.size());
  var_index_.emplace(v.name, idx);
  variables_.push_back(std::move(v));
  return idx;
}

int MipModel::add_binary(std::string name, double objective, int priority) {
  return add_variable({std::move(name), VarKind::kBinary, 0.0, 1.0, objective, priority});
}

int MipModel::add_continuous(std::string name, double lower, double upper, double objective) {
  return add_variable({std::move(name), VarKind::kContinuous, lower, upper, objective, 0});
}

int MipModel::add_constraint(Constraint c) {
  if (c.name.empty()) throw std::invalid_argument("constraint name must be nonempty");
  if (con_index_.contains(c.name)) throw std::invalid_argument("duplicate constraint '" + c.name + "'");
  if (!std::isfinite(c.rhs)) throw std::invalid_argument("constraint '" + c.name + "': rhs must be finite");
  std::set<int> seen;
  for (const auto& t : c.terms) {
    if (t.var < 0 || static_cast<std::size_t>(t.var) >= variables_.size())
      throw std::invalid_argument("constraint '" + c.name + "': unknown variable index " + std::to_string(t.var));
    if (!seen.insert(t.var).second)
      throw std::invalid_argument("constraint '" + c.name + "': variable '" + variables_[t.var].name +
                                  "' appears twice");
    if (!std::isfinite(t.coeff))
      throw std::invalid_argument("constraint '" + c.name + "': coefficient must be finite");
  }
  const int idx = static_cast<int>(constraints_.size());
  con_index_.emplace(c.name, idx);
  constraints_.push_back(std::move(c));
  return idx;
}

int MipModel::add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs) {
  return add_constraint(Constraint{std::move(name), std::move(terms), sense, rhs});
}

std::optional<int> MipModel::find_variable(std::string_view name) const {
  if (auto it = var_index_.find(std::string(name)); it != var_index_.end()) return it->second;
  return std::nullopt;
}

std::optional<int> MipModel::find_constraint(std::string_view name) const {
  if (auto it = con_index_.find(std::string(name)); it != con_index_.end()) return it->second;
  return std::nullopt;
}

int MipModel::variable_index(std::string_view name) const {
  if (auto idx = find_variable(name)) return *idx;
  throw std::invalid_argument("unknown variable '" + std::string(name) + "'");
}

double MipModel::objective_value(const std::vector<double>& values) const {
  double obj = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) obj += variables_[j].objective * values[j];
  return obj;
}

double MipModel::max_violation(const std::vector<double>& values) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    worst = std::max(worst, variables_[j].lower - values[j]);
    worst = std::max(worst, values[j] - variables_[j].upper);
  }
  for (const auto& c : constraints_) {
    double lhs = 0.0;
    for (const auto& t : c.terms) lhs += t.coeff * values[t.var];
    const double diff = lhs - c.rhs;
    switch (c.sense) {
      case Sense::kLessEqual: worst = std::max(worst, diff); break;
      case Sense::kGreaterEqual: worst = std::max(worst, -diff); break;
      case Sense::kEqual: worst = std::max(worst, std::fabs(diff)); break;
    }
  }
  return worst;
}

ModelStats model_stats(const MipModel& model) {
  ModelStats s;
  for (const auto& v : model.variables()) {
    (v.kind == VarKind::kBinary ? s.binaries : s.continuous)++;
    s.by_class[class_of(v.name)]++;
  }
  s.constraints = model.num_constraints();
  for (const auto& c : model.constraints()) s.nonzeros += c.terms.size();
  return s;
}

std::string format_number(double x) {
  if (x == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string emit_lp(const MipModel& model) {
  const auto& vars = model.variables();
  std::string out;
  out += "\\ Problem: " + model.name() + "\n";
  for (const auto& [key, value] : model.metadata()) out += "\\ " + key + ": " + value + "\n";

  out += "Maximize\n obj: ";
  {
    LpLine line(out);
    bool any = false;
    for (const auto& v : vars)
      if (v.objective != 0.0) {
        line.term(v.objective, v.name);
        any = true;
      }
    if (!any && !vars.empty()) line.term(0.0, vars.front().name);
  }
  out += "\nSubject To\n";
  for (const auto& c : model.constraints()) {
    out += " " + c.name + ": ";
    LpLine line(out);
    if (c.terms.empty()) {
      if (vars.empty()) line.text("0");
      else line.term(0.0, vars.front().name);
    }
    for (const auto& t : c.terms) line.term(t.coeff, vars[t.var].name);
    line.text(std::string(" ") + sense_text(c.sense) + " " + format_number(c.rhs));
    out += "\n";
  }

  out += "Bounds\n";
  for (const auto& v : vars) {
    const bool lo_inf = v.lower == -kInf;
    const bool up_inf = v.upper == kInf;
    if (v.kind == VarKind::kBinary) {
      if (v.lower == 0.0 && v.upper == 1.0) continue;
      out += " " + format_number(v.lower) + " <= " + v.name + " <= " + format_number(v.upper) + "\n";
    } else if (lo_inf && up_inf) {
      out += " " + v.name + " free\n";
    } else if (up_inf) {
      out += " " + v.name + " >= " + format_number(v.lower) + "\n";
    } else if (lo_inf) {
      out += " -inf <= " + v.name + " <= " + format_number(v.upper) + "\n";
    } else {
      out += " " + format_number(v.lower) + " <= " + v.name + " <= " + format_number(v.upper) + "\n";
    }
  }

  bool header = false;
  for (const auto& v : vars) {
    if (v.kind != VarKind::kBinary) continue;
    if (!header) {
      out += "Binaries\n";
      header = true;
    }
    out += " " + v.name + "\n";
  }
  out += "End\n";
  return out;
}

std::string emit_mps(const MipModel& model) {
  const auto& vars = model.variables();
  const auto& cons = model.constraints();

  // Column-major view of the rows.
  std::vector<std::vector<std::pair<int, double>>> columns(vars.size());
  for (std::size_t r = 0; r < cons.size(); ++r)
    for (const auto& t : cons[r].terms) columns[t.var].emplace_back(static_cast<int>(r), t.coeff);

  std::string out;
  out += "NAME " + model.name() + "\n";
  out += "OBJSENSE\n    MAX\n";
  out += "ROWS\n N  obj\n";
  for (const auto& c : cons) out += std::string(" ") + mps_row_type(c.sense) + "  " + c.name + "\n";

  out += "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const auto& v = vars[j];
    const bool is_int = v.kind == VarKind::kBinary;
    if (is_int != in_int) {
      out += "    MARKER" + std::to_string(marker++) + " 'MARKER' " + (is_int ? "'INTORG'" : "'INTEND'") + "\n";
      in_int = is_int;
    }
    if (v.objective != 0.0 || columns[j].empty())
      out += "    " + v.name + " obj " + format_number(v.objective) + "\n";
    for (const auto& [r, coeff] : columns[j])
      out += "    " + v.name + " " + cons[r].name + " " + format_number(coeff) + "\n";
  }
  if (in_int) out += "    MARKER" + std::to_string(marker++) + " 'MARKER' 'INTEND'\n";

  out += "RHS\n";
  for (const auto& c : cons)
    if (c.rhs != 0.0) out += "    RHS " + c.name + " " + format_number(c.rhs) + "\n";

  out += "BOUNDS\n";
  for (const auto& v : vars) {
    const bool lo_inf = v.lower == -kInf;
    const bool up_inf = v.upper == kInf;
    if (v.kind == VarKind::kBinary) {
      if (v.lower != 0.0) out += " LO BND " + v.name + " " + format_number(v.lower) + "\n";
      out += " UP BND " + v.name + " " + format_number(v.upper) + "\n";
      continue;
    }
    if (lo_inf && up_inf) {
      out += " FR BND " + v.name + "\n";
    } else if (!lo_inf && !up_inf && v.lower == v.upper) {
      out += " FX BND " + v.name + " " + format_number(v.lower) + "\n";
    } else {
      if (lo_inf) out += " MI BND " + v.name + "\n";
      else if (v.lower != 0.0) out += " LO BND " + v.name + " " + format_number(v.lower) + "\n";
      if (!up_inf) out += " UP BND " + v.name + " " + format_number(v.upper) + "\n";
    }
  }
  out += "ENDATA\n";
  return out;
}

MipModel parse_mps(const std::string& text) {
  enum class Section { kNone, kName, kObjSense, kRows, kColumns, kRhs, kBounds, kEnd };

  struct RawColumn {
    std::string name;
    bool integer = false;
    double objective = 0.0;
    double lower = 0.0;
    double upper = kInf;
    bool upper_set = false;
    std::vector<std::pair<std::string, double>> entries;
  };
  struct RawRow {
    std::string name;
    Sense sense;
    double rhs = 0.0;
  };

  std::string model_name = "bpmp";
  bool minimize = false;
  std::string objective_row;
  std::vector<RawRow> rows;
  std::unordered_map<std::string, std::size_t> row_index;
  std::vector<RawColumn> columns;
  std::unordered_map<std::string, std::size_t> column_index;
  bool integer_block = false;

  auto fail = [](int line, const std::string& msg) -> void {
    throw MpsParseError("line " + std::to_string(line) + ": " + msg);
  };
  auto number = [&](int line, const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) fail(line, "malformed number '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      fail(line, "malformed number '" + s + "'");
    }
    return 0.0;
  };

  Section section = Section::kNone;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty() || raw[0] == '*') continue;
    std::istringstream ls(raw);
    std::vector<std::string> f;
    for (std::string tok; ls >> tok;) f.push_back(tok);
    if (f.empty()) continue;

    if (!std::isspace(static_cast<unsigned char>(raw[0]))) {
      const std::string& head = f[0];
      if (head == "NAME") {
        section = Section::kName;
        if (f.size() > 1) model_name = f[1];
      } else if (head == "OBJSENSE") {
        section = Section::kObjSense;
        if (f.size() > 1) minimize = f[1] == "MIN" || f[1] == "MINIMIZE";
      } else if (head == "ROWS") {
        section = Section::kRows;
      } else if (head == "COLUMNS") {
        section = Section::kColumns;
      } else if (head == "RHS") {
        section = Section::kRhs;
      } else if (head == "BOUNDS") {
        section = Section::kBounds;
      } else if (head == "ENDATA") {
        section = Section::kEnd;
        break;
      } else if (head == "RANGES") {
        fail(lineno, "RANGES section is not supported");
      } else {
        fail(lineno, "unknown section '" + head + "'");
      }
      continue;
    }

    switch (section) {
      case Section::kObjSense:
        minimize = f[0] == "MIN" || f[0] == "MINIMIZE";
        break;
      case Section::kRows: {
        if (f.size() != 2) fail(lineno, "ROWS entry needs a type and a name");
        const std::string& type = f[0];
        if (type == "N") {
          if (objective_row.empty()) objective_row = f[1];
          break;
        }
        Sense s;
        if (type == "L") s = Sense::kLessEqual;
        else if (type == "G") s = Sense::kGreaterEqual;
        else if (type == "E") s = Sense::kEqual;
        else {
          fail(lineno, "unknown row type '" + type + "'");
          break;
        }
        if (row_index.contains(f[1])) fail(lineno, "duplicate row '" + f[1] + "'");
        row_index.emplace(f[1], rows.size());
        rows.push_back({f[1], s, 0.0});
        break;
      }
      case Section::kColumns: {
        if (f.size() >= 3 && f[1] == "'MARKER'") {
          if (f[2] == "'INTORG'") integer_block = true;
          else if (f[2] == "'INTEND'") integer_block = false;
          else fail(lineno, "unknown marker " + f[2]);
          break;
        }
        if (f.size() != 3 && f.size() != 5) fail(lineno, "COLUMNS entry needs 3 or 5 fields");
        auto [it, inserted] = column_index.try_emplace(f[0], columns.size());
        if (inserted) {
          RawColumn col;
          col.name = f[0];
          col.integer = integer_block;
          columns.push_back(std::move(col));
        }
        auto& col = columns[it->second];
        for (std::size_t p = 1; p + 1 < f.size(); p += 2) {
          const double v = number(lineno, f[p + 1]);
          if (f[p] == objective_row) col.objective = v;
          else if (row_index.contains(f[p])) col.entries.emplace_back(f[p], v);
          else fail(lineno, "unknown row '" + f[p] + "'");
        }
        break;
      }
      case Section::kRhs: {
        if (f.size() != 3 && f.size() != 5) fail(lineno, "RHS entry needs 3 or 5 fields");
        for (std::size_t p = 1; p + 1 < f.size(); p += 2) {
          const double v = number(lineno, f[p + 1]);
          if (f[p] == objective_row) continue;
          auto it = row_index.find(f[p]);
          if (it == row_index.end()) fail(lineno, "unknown row '" + f[p] + "'");
          rows[it->second].rhs = v;
        }
        break;
      }
      case Section::kBounds: {
        if (f.size() < 3) fail(lineno, "BOUNDS entry needs a type, a set name and a column");
        auto it = column_index.find(f[2]);
        if (it == column_index.end()) fail(lineno, "unknown column '" + f[2] + "'");
        auto& col = columns[it->second];
        const std::string& type = f[0];
        auto value = [&]() {
          if (f.size() < 4) fail(lineno, "bound " + type + " needs a value");
          return number(lineno, f[3]);
        };
        if (type == "UP") {
          col.upper = value();
          col.upper_set = true;
        } else if (type == "LO") {
          col.lower = value();
        } else if (type == "FX") {
          col.lower = col.upper = value();
          col.upper_set = true;
        } else if (type == "FR") {
          col.lower = -kInf;
          col.upper = kInf;
        } else if (type == "MI") {
          col.lower = -kInf;
        } else if (type == "PL") {
          col.upper = kInf;
        } else if (type == "BV") {
          col.integer = true;
          col.lower = 0.0;
          col.upper = 1.0;
          col.upper_set = true;
        } else {
          fail(lineno, "unsupported bound type '" + type + "'");
        }
        break;
      }
      default:
        fail(lineno, "data line outside of a section");
    }
  }
  if (section != Section::kEnd) throw MpsParseError("line " + std::to_string(lineno) + ": missing ENDATA");

  MipModel model(model_name);
  const double sign = minimize ? -1.0 : 1.0;
  for (const auto& col : columns) {
    Variable v;
    v.name = col.name;
    v.objective = sign * col.objective;
    v.lower = col.lower;
    v.upper = col.upper;
    if (col.integer) {
      if (!col.upper_set) v.upper = 1.0;
      if (v.lower < 0.0 || v.upper > 1.0)
        throw MpsParseError("column '" + col.name + "': general integers are not supported");
      v.kind = VarKind::kBinary;
    }
    model.add_variable(std::move(v));
  }
  std::vector<std::vector<Term>> row_terms(rows.size());
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (const auto& [row, coeff] : columns[j].entries)
      row_terms[row_index.at(row)].push_back({static_cast<int>(j), coeff});
  for (std::size_t r = 0; r < rows.size(); ++r)
    model.add_constraint(rows[r].name, std::move(row_terms[r]), rows[r].sense, rows[r].rhs);
  return model;
}

}  // namespace bpmp
