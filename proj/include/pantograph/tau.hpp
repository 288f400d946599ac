#pragma once

#include "pantograph/flags.hpp"
#include "pantograph/matrix.hpp"
#include "pantograph/metric.hpp"

#include <functional>

namespace pantograph {

// Context for the irreducible embedding tau_n : PSL(2,R) -> PSL(n,K) given by
// the action on degree n-1 homogeneous polynomials in the basis
// (X^{i-1} Y^{n-i})_{1<=i<=n}, P |-> P(h^{-1} (X,Y)^T).
class TauContext {
 public:
  TauContext(int n, Field field, Tolerances tol = Tolerances{});

  int n() const { return n_; }
  Field field() const { return field_; }
  const Tolerances& tol() const { return tol_; }

  // Symmetric-power image of a 2x2 determinant-1 matrix.
  GroupElement tau(const Mat& h2) const;
  GroupElement tau(const GroupElement& h) const { return tau(h.mat()); }

  // Lie algebra map; dtau(diag(1,-1)) = diag(n-1, n-3, ..., -(n-1)) exactly.
  Mat dtau(const Mat& xi2) const;

  // h = dtau(diag(1,-1)) as exact integers on the diagonal.
  const Mat& h_element() const { return h_; }
  std::vector<long long> h_diag_ints() const;
  bool h_regular() const;

  // Standard transform generators.
  Mat omega() const { return omega_; }           // tau([[1,1],[-1,0]])   (rot)
  Mat inv_j() const { return inv_j_; }           // tau([[0,1],[-1,0]])   (inv)
  Mat phi(double t) const;                       // tau(diag(e^{t/2}, e^{-t/2}))
  Mat refl_j() const { return refl_j_; }         // tau(diag(i,-i)), condition (R) element
  Mat flip_u() const { return flip_u_; }         // tau([[0,i],[i,0]]) = right translator of I

  // tau-circle point tau_underline(x), x in P^1(R) (p1_infinity() allowed).
  Flag veronese_flag(double x) const;
  Flag veronese_flag_ratio(double alpha, double beta) const;  // [alpha : beta]

  // Averaged left-invariant metric, right-invariant under <rot, I>.
  const GroupMetric& metric() const { return metric_; }
  // Calibrated stage-weighted chordal metric on flags.
  const FlagMetric& flag_metric() const { return flag_metric_; }

  GroupElement exp_h(double t) const;  // exp(t * h)

 private:
  int n_;
  Field field_;
  Tolerances tol_;
  Mat h_, omega_, inv_j_, refl_j_, flip_u_;
  GroupMetric metric_;
  FlagMetric flag_metric_;
};

struct CheckReport {
  bool passed = true;
  std::vector<std::pair<std::string, double>> items;  // (label, residual)
  void add(const std::string& label, double residual, double tol) {
    items.emplace_back(label, residual);
    if (!(residual < tol)) passed = false;
  }
};

// Condition (R) for PSL(n,C) with j = tau(diag(i,-i)): order two in PSL,
// commutes with exp(t h), and flips tau(0,infty,-1) to tau(0,infty,1).
CheckReport check_condition_R(const TauContext& ctx);

// For n odd: finds the positive anti-diagonal hermitian form H with
// tau(h)^* H tau(h) = H, reports residual and signature (q+1, q).
struct HermitianReport {
  CheckReport checks;
  Mat form;
  int positives = 0, negatives = 0;
};
HermitianReport hermitian_invariance_check(const TauContext& ctx, unsigned seed);

// sl(2)-triple residuals: [h,e]=2e, [h,f]=-2f, [e,f]=h.
double sl2_triple_residual(const Mat& h, const Mat& e, const Mat& f);

// Random SL(2,R) / SL(2,C) elements (det exactly normalized).
Mat random_sl2(std::function<double()>& unit, Field f, double spread = 1.0);

}  // namespace pantograph
