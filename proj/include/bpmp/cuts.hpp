#pragma once

#include <string>
#include <vector>

#include "bpmp/instance.hpp"
#include "bpmp/mip.hpp"
#include "bpmp/model.hpp"

namespace bpmp {

enum class CutFamily { kCover, kPairwiseDemand };

std::string to_string(CutFamily f);
// "cover,pairwise" style list; "pairwise" and "pairwise_demand" both accepted.
std::vector<CutFamily> parse_cut_families(const std::string& list);

// A row with unit coefficients on x (cover) or y (pairwise demand)
// variables: sum over support <= rhs.
struct Cut {
  CutFamily family = CutFamily::kCover;
  int round = 0;
  std::vector<Arc> support;  // arcs (cover) or requests (pairwise demand)
  double rhs = 0.0;

  std::string name() const;
  // Left-hand side minus rhs at a point given as n x n matrices (0-based).
  double violation(const Matrix& values) const;
  Constraint to_row(const MipModel& model) const;
};

// Most violated cover cut  sum_{S} x_ij <= |S| - 1  over arc sets with
// total distance above D, found by a knapsack dynamic program over
// distances in hundredths. Returns at most one cut; empty when the
// minimum cover weight sum (1 - x*) is not below 1 - tolerance.
std::vector<Cut> separate_cover_cuts(const Instance& inst, const Matrix& x_values, double tolerance = 1e-6);

// Every same-origin pair (k,i), (k,j) with w_ki + w_kj > Q and
// y*_ki + y*_kj > 1 + tolerance, in (k, i, j) order.
std::vector<Cut> separate_pairwise_demand(const Instance& inst, const Matrix& y_values, double tolerance = 1e-6);

struct CutLoopConfig {
  int max_rounds = 50;
  double tolerance = 1e-6;
  MipConfig mip;
};

struct CutSolveResult {
  MipSolution solution;  // pivots and ticks include the separation LPs
  std::vector<Cut> cuts;
  int rounds = 0;
  bool round_limit_hit = false;
  double root_bound_before = 0.0;
  double root_bound_after = 0.0;
};

// Root separation loop: solve the LP relaxation, add violated cuts of the
// active families, repeat until none are found or the round limit is hit,
// then solve the MIP with all accumulated cuts.
CutSolveResult cutting_plane_solve(const MipModel& model, const Instance& inst,
                                   const std::vector<CutFamily>& families, const CutLoopConfig& config = {});

// Reads x_i_j / y_k_l values of a model solution into n x n matrices.
Matrix arc_values(const Instance& inst, const MipModel& model, const std::vector<double>& values);
Matrix request_values(const Instance& inst, const MipModel& model, const std::vector<double>& values);

}  // namespace bpmp
