#pragma once

#include "pantograph/rational.hpp"

#include <vector>

namespace pantograph {

// Exact rational linear feasibility: rows  sum_j a_ij x_j  REL  b_i  with
// x >= 0, REL in {<=, =, >=}.
struct LinearRow {
  std::vector<Rat> a;
  int rel = +1;  // -1: <=, 0: =, +1: >=
  Rat b;
};

struct LinearSystem {
  int nvars = 0;
  std::vector<LinearRow> rows;
};

struct SimplexResult {
  bool feasible = false;
  std::vector<Rat> x;         // feasible point when feasible
  std::vector<Rat> farkas_y;  // per-row multipliers certifying infeasibility
};

// Phase-1 simplex with Bland's rule over exact rationals; on infeasibility
// returns the Farkas dual ray (y_i >= 0 on >=-rows, <= 0 on <=-rows, free on
// equalities; y^T A <= 0 componentwise and y^T b > 0).
SimplexResult solve_feasibility(const LinearSystem& sys);

// Exact verification helpers.
bool verify_point(const LinearSystem& sys, const std::vector<Rat>& x);
bool verify_farkas(const LinearSystem& sys, const std::vector<Rat>& y);

}  // namespace pantograph
