#include "bpmp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bpmp {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

enum class At : unsigned char { kBasic, kLower, kUpper, kZero };

// Dense tableau T = B^-1 [A | I | artificials] kept row-major. Every row
// starts with either its logical (slack) column or an artificial column as
// the basic variable, so no factorization is ever needed.
class Tableau {
 public:
  Tableau(const MipModel& model, const std::vector<double>& lower, const std::vector<double>& upper,
          const LpOptions& opt)
      : opt_(opt), nv_(static_cast<int>(model.num_variables())), m_(static_cast<int>(model.num_constraints())) {
    const auto& cons = model.constraints();
    ncol_ = nv_ + m_;
    lo_.assign(ncol_, 0.0);
    hi_.assign(ncol_, 0.0);
    for (int j = 0; j < nv_; ++j) {
      lo_[j] = lower[j];
      hi_[j] = upper[j];
    }
    for (int r = 0; r < m_; ++r) {
      switch (cons[r].sense) {
        case Sense::kLessEqual: lo_[nv_ + r] = 0.0; hi_[nv_ + r] = kInf; break;
        case Sense::kGreaterEqual: lo_[nv_ + r] = -kInf; hi_[nv_ + r] = 0.0; break;
        case Sense::kEqual: lo_[nv_ + r] = 0.0; hi_[nv_ + r] = 0.0; break;
      }
    }

    status_.assign(ncol_, At::kLower);
    value_.assign(ncol_, 0.0);
    for (int j = 0; j < nv_; ++j) {
      if (std::isfinite(lo_[j])) {
        status_[j] = At::kLower;
        value_[j] = lo_[j];
      } else if (std::isfinite(hi_[j])) {
        status_[j] = At::kUpper;
        value_[j] = hi_[j];
      } else {
        status_[j] = At::kZero;
        value_[j] = 0.0;
      }
    }

    // Residuals decide which rows need an artificial.
    std::vector<double> residual(m_);
    std::vector<int> art_sign(m_, 0);
    int n_art = 0;
    for (int r = 0; r < m_; ++r) {
      double res = cons[r].rhs;
      for (const auto& t : cons[r].terms) res -= t.coeff * value_[t.var];
      residual[r] = res;
      const int s = nv_ + r;
      if (res < lo_[s] - opt_.feasibility_tol || res > hi_[s] + opt_.feasibility_tol) {
        art_sign[r] = 1;
        ++n_art;
      }
    }

    const int first_art = ncol_;
    ncol_ += n_art;
    lo_.resize(ncol_, 0.0);
    hi_.resize(ncol_, kInf);
    status_.resize(ncol_, At::kLower);
    value_.resize(ncol_, 0.0);
    first_art_ = first_art;

    t_.assign(static_cast<std::size_t>(m_) * ncol_, 0.0);
    basis_.assign(m_, -1);
    int art = first_art;
    for (int r = 0; r < m_; ++r) {
      double* row = &t_[static_cast<std::size_t>(r) * ncol_];
      for (const auto& t : cons[r].terms) row[t.var] = t.coeff;
      row[nv_ + r] = 1.0;
      const int s = nv_ + r;
      if (art_sign[r] == 0) {
        basis_[r] = s;
        status_[s] = At::kBasic;
        value_[s] = std::clamp(residual[r], lo_[s], hi_[s]);
      } else {
        const double sv = std::clamp(residual[r], lo_[s], hi_[s]);
        status_[s] = sv == lo_[s] ? At::kLower : At::kUpper;
        if (!std::isfinite(sv)) throw std::logic_error("slack clamped to an infinite bound");
        value_[s] = sv;
        const double gap = residual[r] - sv;
        const double sign = gap >= 0.0 ? 1.0 : -1.0;
        row[art] = sign;
        // Normalize so the artificial has a unit coefficient.
        if (sign < 0.0)
          for (int j = 0; j < ncol_; ++j) row[j] = -row[j];
        basis_[r] = art;
        status_[art] = At::kBasic;
        value_[art] = std::fabs(gap);
        ++art;
      }
    }
  }

  LpSolution run(const MipModel& model) {
    LpSolution sol;
    if (first_art_ < ncol_) {
      std::vector<double> phase1(ncol_, 0.0);
      for (int j = first_art_; j < ncol_; ++j) phase1[j] = 1.0;
      set_costs(phase1);
      const LpStatus st = iterate();
      sol.pivots = pivots_;
      if (st == LpStatus::kIterationLimit) {
        sol.status = st;
        return sol;
      }
      double infeas = 0.0;
      for (int j = first_art_; j < ncol_; ++j) infeas += value_[j];
      if (infeas > 1e-6) {
        sol.status = LpStatus::kInfeasible;
        return sol;
      }
      for (int j = first_art_; j < ncol_; ++j) {
        hi_[j] = 0.0;
        if (status_[j] != At::kBasic) {
          status_[j] = At::kLower;
          value_[j] = 0.0;
        }
      }
    }

    std::vector<double> phase2(ncol_, 0.0);
    for (int j = 0; j < nv_; ++j) phase2[j] = -model.variable(j).objective;
    set_costs(phase2);
    sol.status = iterate();
    sol.pivots = pivots_;
    if (sol.status != LpStatus::kOptimal) return sol;

    sol.values.assign(value_.begin(), value_.begin() + nv_);
    for (int j = 0; j < nv_; ++j) {
      // Snap values within tolerance of a bound onto it.
      if (std::fabs(sol.values[j] - lo_[j]) < 1e-11) sol.values[j] = lo_[j];
      if (std::fabs(sol.values[j] - hi_[j]) < 1e-11) sol.values[j] = hi_[j];
    }
    sol.objective = model.objective_value(sol.values);
    return sol;
  }

 private:
  double& at(int r, int c) { return t_[static_cast<std::size_t>(r) * ncol_ + c]; }

  void set_costs(const std::vector<double>& cost) {
    cost_ = cost;
    d_ = cost;
    for (int r = 0; r < m_; ++r) {
      const double cb = cost_[basis_[r]];
      if (cb == 0.0) continue;
      const double* row = &t_[static_cast<std::size_t>(r) * ncol_];
      for (int j = 0; j < ncol_; ++j) d_[j] -= cb * row[j];
    }
    for (int r = 0; r < m_; ++r) d_[basis_[r]] = 0.0;
  }

  // Returns the entering column and its direction (+1 increase, -1 decrease).
  std::pair<int, int> choose_entering(bool bland) const {
    int best = -1, best_dir = 0;
    double best_score = 0.0;
    for (int j = 0; j < ncol_; ++j) {
      const At st = status_[j];
      if (st == At::kBasic) continue;
      if (lo_[j] == hi_[j]) continue;
      const double dj = d_[j];
      int dir = 0;
      if (st == At::kLower && dj < -opt_.optimality_tol) dir = 1;
      else if (st == At::kUpper && dj > opt_.optimality_tol) dir = -1;
      else if (st == At::kZero && std::fabs(dj) > opt_.optimality_tol) dir = dj < 0 ? 1 : -1;
      if (dir == 0) continue;
      if (bland) return {j, dir};
      const double score = std::fabs(dj);
      if (score > best_score) {
        best_score = score;
        best = j;
        best_dir = dir;
      }
    }
    return {best, best_dir};
  }

  LpStatus iterate() {
    int degenerate_run = 0;
    while (true) {
      if (pivots_ >= opt_.iteration_limit) return LpStatus::kIterationLimit;
      const bool bland = degenerate_run >= opt_.bland_after_degenerate;
      const auto [q, dir] = choose_entering(bland);
      if (q < 0) return LpStatus::kOptimal;

      // Ratio test.
      int leave = -1;
      double step = kInf, leave_alpha = 0.0;
      for (int r = 0; r < m_; ++r) {
        const double alpha = at(r, q);
        if (std::fabs(alpha) < opt_.pivot_tol) continue;
        const int b = basis_[r];
        const double rate = -dir * alpha;
        double limit;
        if (rate < 0.0) {
          if (!std::isfinite(lo_[b])) continue;
          limit = (value_[b] - lo_[b]) / -rate;
        } else {
          if (!std::isfinite(hi_[b])) continue;
          limit = (hi_[b] - value_[b]) / rate;
        }
        limit = std::max(limit, 0.0);
        bool take = false;
        if (leave < 0 || limit < step - 1e-12) {
          take = true;
        } else if (limit <= step + 1e-12) {
          take = bland ? b < basis_[leave] : std::fabs(alpha) > std::fabs(leave_alpha);
        }
        if (take) {
          leave = r;
          step = limit;
          leave_alpha = alpha;
        }
      }

      const double range = hi_[q] - lo_[q];
      ++pivots_;
      if (std::isfinite(range) && (leave < 0 || range <= step)) {
        // Bound flip, no basis change.
        for (int r = 0; r < m_; ++r) {
          const double alpha = at(r, q);
          if (alpha != 0.0) value_[basis_[r]] -= dir * alpha * range;
        }
        status_[q] = dir > 0 ? At::kUpper : At::kLower;
        value_[q] = dir > 0 ? hi_[q] : lo_[q];
        degenerate_run = 0;
        continue;
      }
      if (leave < 0) return LpStatus::kUnbounded;

      degenerate_run = step < 1e-11 ? degenerate_run + 1 : 0;
      for (int r = 0; r < m_; ++r) {
        const double alpha = at(r, q);
        if (alpha != 0.0) value_[basis_[r]] -= dir * alpha * step;
      }
      const int out = basis_[leave];
      const double rate = -dir * leave_alpha;
      status_[out] = rate < 0.0 ? At::kLower : At::kUpper;
      value_[out] = rate < 0.0 ? lo_[out] : hi_[out];
      const double entering_value = value_[q] + dir * step;
      pivot(leave, q);
      basis_[leave] = q;
      status_[q] = At::kBasic;
      value_[q] = entering_value;
    }
  }

  void pivot(int pr, int pc) {
    double* prow = &t_[static_cast<std::size_t>(pr) * ncol_];
    const double inv = 1.0 / prow[pc];
    nz_.clear();
    for (int j = 0; j < ncol_; ++j) {
      if (prow[j] == 0.0) continue;
      prow[j] *= inv;
      if (std::fabs(prow[j]) < 1e-14) {
        prow[j] = 0.0;
        continue;
      }
      nz_.push_back(j);
    }
    prow[pc] = 1.0;
    for (int r = 0; r < m_; ++r) {
      if (r == pr) continue;
      double* row = &t_[static_cast<std::size_t>(r) * ncol_];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (int j : nz_) {
        double v = row[j] - f * prow[j];
        if (std::fabs(v) < 1e-13) v = 0.0;
        row[j] = v;
      }
      row[pc] = 0.0;
    }
    const double f = d_[pc];
    if (f != 0.0) {
      for (int j : nz_) d_[j] -= f * prow[j];
      d_[pc] = 0.0;
    }
  }

  const LpOptions& opt_;
  int nv_, m_, ncol_ = 0, first_art_ = 0;
  std::vector<double> lo_, hi_, value_, cost_, d_, t_;
  std::vector<At> status_;
  std::vector<int> basis_, nz_;
  std::int64_t pivots_ = 0;
};

}  // namespace

LpSolution solve_lp(const MipModel& model, const LpOptions& options) {
  std::vector<double> lower, upper;
  lower.reserve(model.num_variables());
  upper.reserve(model.num_variables());
  for (const auto& v : model.variables()) {
    lower.push_back(v.lower);
    upper.push_back(v.upper);
  }
  return solve_lp(model, lower, upper, options);
}

LpSolution solve_lp(const MipModel& model, const std::vector<double>& lower, const std::vector<double>& upper,
                    const LpOptions& options) {
  if (lower.size() != model.num_variables() || upper.size() != model.num_variables())
    throw std::invalid_argument("bound vectors must match the variable count");
  for (std::size_t j = 0; j < lower.size(); ++j)
    if (lower[j] > upper[j]) return LpSolution{LpStatus::kInfeasible, 0.0, {}, 0};
  Tableau tab(model, lower, upper, options);
  return tab.run(model);
}

}  // namespace bpmp
