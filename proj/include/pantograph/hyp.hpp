#pragma once

#include "pantograph/metric.hpp"
#include "pantograph/transforms.hpp"

namespace pantograph {

// Frame of H^2: an element T of PSL(2,R) identified with the ideal triangle
// T*(0, inf, -1).
struct TriangleFrame {
  Mat m = Mat::Identity(2, 2);

  TriangleFrame() = default;
  explicit TriangleFrame(Mat mm) : m(std::move(mm)) {}

  std::array<double, 3> triple() const {
    return {moebius_p1(m, 0.0), moebius_p1(m, p1_infinity()), moebius_p1(m, -1.0)};
  }
  bool distinct_points(double tol = 1e-9) const {
    auto t = triple();
    return p1_distance(t[0], t[1]) > tol && p1_distance(t[1], t[2]) > tol &&
           p1_distance(t[0], t[2]) > tol;
  }
};

Mat frame_rot(const Mat& t);            // right product by [[1,1],[-1,0]]
Mat frame_inv(const Mat& t);            // right product by [[0,1],[-1,0]]
Mat frame_phi(double s, const Mat& t);  // right product by diag(e^{s/2}, e^{-s/2})

// Hyperbolic translation length 2*arccosh(|tr|/2); zero for elliptics.
double translation_length(const Mat& g);

// Pants representation of <a,b,c | cba = 1> with all boundary lengths 2R and
// the frames (T, T') realizing the defining triangle conditions.
struct PantsRep {
  int sign = +1;  // +R or -R
  double R = 0.0;
  Mat A, B, C;    // images of a, b, c (SL(2,R), C*B*A = I exactly)
  Mat T, Tprime;  // realizing frames
};

// Closed-form (+-R)-perfect pants; A at T = id equals
// [[e^R, 0],[1+e^{-R}, e^{-R}]] for sign +1 and its transpose flip for -1.
PantsRep r_perfect_pants(double R, int sign, const Mat& T = Mat::Identity(2, 2));

// Anti-diagonal conjugator (orientation-reversing in PGL(2,R)) exchanging the
// +R and -R constructions entrywise.
Mat pm_exchange_conjugator();

// Residual of the condition "alpha is (sign R)-realized by (T1, T2)":
// max(d(step(T1), T2), d(step(T2), alpha*T1)) in the given metric.  All
// inputs are G-elements (tau-embed PSL(2,R) frames before calling).
double realized_by(const Mat& alpha, const Mat& T1, const Mat& T2, int sign, double R,
                   const TauContext& ctx, const GroupMetric& metric);

// Residuals of the three realizing conditions of a pants representation,
// measured after tau-embedding into ctx.
std::array<double, 3> pants_realization_residuals(const PantsRep& p, const TauContext& ctx,
                                                  const GroupMetric& metric);

}  // namespace pantograph
