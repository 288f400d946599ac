#pragma once

#include "pantograph/matrix.hpp"

namespace pantograph {

// Complete flag in K^n stored as n-1 orthonormal columns: the first k columns
// span V_k.
class Flag {
 public:
  Flag() = default;
  explicit Flag(Mat q) : q_(std::move(q)) {}

  // Builds the flag V_k = span(chain columns 0..k-1) by stage-wise
  // Gram-Schmidt; chain columns need not be orthonormal.
  static Flag from_chain(const Mat& chain);

  int n() const { return static_cast<int>(q_.rows()); }
  int stages() const { return static_cast<int>(q_.cols()); }
  const Mat& basis() const { return q_; }

  // Orthogonal projector onto V_k (k = 1..n-1).
  Mat projector(int k) const;

  double nesting_error() const;        // orthonormality defect of the basis
  bool valid(double tol) const;

  // Left action of g in GL(n): spans are mapped, then re-orthonormalized.
  Flag acted_by(const Mat& g) const;

 private:
  Mat q_;  // n x (n-1), orthonormal columns
};

// Stage-weighted chordal metric on the flag variety with a global calibration
// factor; K-invariant because unitary conjugation preserves Frobenius norms.
struct FlagMetric {
  std::vector<double> stage_weights;  // size n-1
  double scale = 1.0;                 // calibration so tau-circles are near-isometric
  double measured_distortion = 1.0;   // bi-Lipschitz constant observed by calibration

  static FlagMetric uniform(int n) {
    FlagMetric m;
    m.stage_weights.assign(n - 1, 1.0);
    return m;
  }
};

double flag_distance(const Flag& a, const Flag& b, const FlagMetric& metric);

// PSO(2)-invariant distance on P^1(R), d(0,t) = |arctan t|.
double p1_distance(double x, double y);  // points as reals; use p1_infinity() for the point at infinity
double p1_infinity();
double moebius_p1(const Mat& h, double x);  // real 2x2 acting on P^1(R)

}  // namespace pantograph
