#include "pantograph/flags.hpp"

#include <cmath>

namespace pantograph {

Flag Flag::from_chain(const Mat& chain) {
  const int n = static_cast<int>(chain.rows());
  const int s = static_cast<int>(chain.cols());
  Mat q(n, s);
  int filled = 0;
  for (int j = 0; j < s; ++j) {
    Vec v = chain.col(j);
    real_t scale = v.norm();
    if ((double)scale < 1e-300)
      throw std::invalid_argument("Flag::from_chain: zero column");
    v /= scale;
    for (int k = 0; k < filled; ++k) v -= (q.col(k).adjoint() * v)(0, 0) * q.col(k);
    double nn = (double)v.norm();
    if (nn < 1e-13)
      throw std::invalid_argument("Flag::from_chain: degenerate chain (dependent columns)");
    q.col(filled++) = v / v.norm();
  }
  return Flag(q);
}

Mat Flag::projector(int k) const {
  if (k < 1 || k > stages()) throw std::out_of_range("Flag::projector: stage out of range");
  Mat b = q_.leftCols(k);
  return b * b.adjoint();
}

double Flag::nesting_error() const {
  Mat g = q_.adjoint() * q_;
  return (g - Mat::Identity(stages(), stages())).norm();
}

bool Flag::valid(double tol) const { return nesting_error() < tol; }

Flag Flag::acted_by(const Mat& g) const { return Flag::from_chain(g * q_); }

double flag_distance(const Flag& a, const Flag& b, const FlagMetric& metric) {
  if (a.n() != b.n()) throw std::invalid_argument("flag_distance: dimension mismatch");
  double acc = 0.0;
  for (int k = 1; k <= a.stages(); ++k) {
    double w = metric.stage_weights.empty() ? 1.0 : metric.stage_weights[k - 1];
    acc += w * (a.projector(k) - b.projector(k)).norm();
  }
  return metric.scale * acc;
}

double p1_infinity() { return std::numeric_limits<double>::infinity(); }

static double p1_angle(double x) {
  if (std::isinf(x)) return M_PI_2;
  return std::atan(x);
}

double p1_distance(double x, double y) {
  double d = std::fabs(p1_angle(x) - p1_angle(y));
  return std::min(d, M_PI - d);
}

double moebius_p1(const Mat& h, double x) {
  double a = h(0, 0).real(), b = h(0, 1).real(), c = h(1, 0).real(), d = h(1, 1).real();
  if (std::isinf(x)) {
    if (std::fabs(c) < 1e-300) return p1_infinity();
    return a / c;
  }
  double den = c * x + d;
  if (std::fabs(den) < 1e-300) return p1_infinity();
  return (a * x + b) / den;
}

}  // namespace pantograph
