#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bpmp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { kBinary, kContinuous };
enum class Sense { kLessEqual, kEqual, kGreaterEqual };

struct Variable {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  double upper = kInf;
  double objective = 0.0;
  int branch_priority = 0;  // higher branches first

  friend bool operator==(const Variable&, const Variable&) = default;
};

struct Term {
  int var;  // index into MipModel::variables()
  double coeff;

  friend bool operator==(const Term&, const Term&) = default;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

// Always a maximization. Variables and constraints keep insertion order;
// builders insert in canonical (class, indices) order so emitted text and
// solver work counts are reproducible.
class MipModel {
 public:
  MipModel() = default;
  explicit MipModel(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }

  // Free-form tag/value pairs, e.g. formulation and technique list.
  std::map<std::string, std::string>& metadata() { return metadata_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }

  int add_variable(Variable v);
  int add_binary(std::string name, double objective = 0.0, int priority = 0);
  int add_continuous(std::string name, double lower = 0.0, double upper = kInf, double objective = 0.0);

  // Throws std::invalid_argument on duplicate names, unknown or repeated
  // variables, or non-finite data.
  int add_constraint(Constraint c);
  int add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs);

  std::optional<int> find_variable(std::string_view name) const;
  std::optional<int> find_constraint(std::string_view name) const;
  int variable_index(std::string_view name) const;  // throws when absent

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Variable& variable(int i) const { return variables_[static_cast<std::size_t>(i)]; }
  Variable& variable(int i) { return variables_[static_cast<std::size_t>(i)]; }
  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }

  double objective_value(const std::vector<double>& values) const;
  // Largest bound or row violation of a point (0 when feasible).
  double max_violation(const std::vector<double>& values) const;

  friend bool operator==(const MipModel& a, const MipModel& b) {
    return a.name_ == b.name_ && a.variables_ == b.variables_ && a.constraints_ == b.constraints_;
  }

 private:
  std::string name_ = "bpmp";
  std::map<std::string, std::string> metadata_;
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::unordered_map<std::string, int> var_index_;
  std::unordered_map<std::string, int> con_index_;
};

struct ModelStats {
  std::size_t binaries = 0;
  std::size_t continuous = 0;
  std::size_t constraints = 0;
  std::size_t nonzeros = 0;
  // Variable counts keyed by name class (text before the first '_').
  std::map<std::string, std::size_t> by_class;
};

ModelStats model_stats(const MipModel& model);

// Coefficients are written with 12 significant digits.
std::string format_number(double x);

std::string emit_lp(const MipModel& model);
std::string emit_mps(const MipModel& model);

class MpsParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads the free-MPS subset produced by emit_mps (plus OBJSENSE MIN/MAX,
// BV/UP/LO/FX/FR/MI/PL bounds and RANGES-free files from other writers).
MipModel parse_mps(const std::string& text);

}  // namespace bpmp
