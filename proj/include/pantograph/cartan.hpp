#pragma once

#include "pantograph/flags.hpp"
#include "pantograph/matrix.hpp"

namespace pantograph {

// Jordan projection value: weakly decreasing reals summing to zero.
struct CartanVector {
  std::vector<double> v;

  double norm() const {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  }
  double sum() const {
    double s = 0;
    for (double x : v) s += x;
    return s;
  }
  bool sorted_descending(double tol = 0.0) const {
    for (size_t i = 1; i < v.size(); ++i)
      if (v[i] > v[i - 1] + tol) return false;
    return true;
  }
  CartanVector reversed_negated() const {
    CartanVector out;
    for (auto it = v.rbegin(); it != v.rend(); ++it) out.v.push_back(-*it);
    return out;
  }
  double distance(const CartanVector& o) const {
    double s = 0;
    for (size_t i = 0; i < v.size(); ++i) s += (v[i] - o.v[i]) * (v[i] - o.v[i]);
    return std::sqrt(s);
  }
};

// Sorted log-moduli of eigenvalues, shifted to sum zero (PSL normalization).
CartanVector jordan_projection(const GroupElement& g);

// Power-iteration oracle: (1/m) log singular values of g^m, renormalized to
// sum zero; used as an independent cross-check of jordan_projection.
CartanVector jordan_projection_power_oracle(const GroupElement& g, int m);

struct ProximalData {
  Flag attracting;
  Flag repelling;
  double gap = 0.0;  // smallest spacing of sorted log-moduli
};

// Eigenvector-chain flags ordered by eigenvalue modulus; absent when some
// log-modulus spacing is below tol_prox (not proximal at tolerance).
std::optional<ProximalData> proximal_data(const GroupElement& g, double tol_prox);

}  // namespace pantograph
