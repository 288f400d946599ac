#include "pantograph/hyp.hpp"

#include <cmath>

namespace pantograph {

namespace {
Mat omega2() { return mat2(1, 1, -1, 0); }
Mat jinv2() { return mat2(0, 1, -1, 0); }
Mat dphi2(double s) { return mat2(std::exp(0.5 * s), 0, 0, std::exp(-0.5 * s)); }
Mat omega_pow(int k) {
  k = ((k % 3) + 3) % 3;
  Mat m = Mat::Identity(2, 2);
  for (int i = 0; i < k; ++i) m = m * omega2();
  return m;
}
}  // namespace

Mat frame_rot(const Mat& t) { return t * omega2(); }
Mat frame_inv(const Mat& t) { return t * jinv2(); }
Mat frame_phi(double s, const Mat& t) { return t * dphi2(s); }

double translation_length(const Mat& g) {
  double tr = std::abs(g.trace().real());
  double half = tr / 2.0;
  if (half <= 1.0) return 0.0;
  return 2.0 * std::acosh(half);
}

PantsRep r_perfect_pants(double R, int sign, const Mat& T) {
  if (!(R > 0)) throw std::invalid_argument("r_perfect_pants: R > 0 required");
  if (sign != 1 && sign != -1) throw std::invalid_argument("r_perfect_pants: sign must be +-1");
  const Mat M = dphi2(sign * R) * jinv2() * omega_pow(sign > 0 ? 1 : 2);
  const Mat Ms = omega_pow(sign);          // Omega^sign
  const Mat Mns = omega_pow(-2 * sign);    // Omega^{-2 sign}
  const Mat Ti = T.inverse();

  PantsRep p;
  p.sign = sign;
  p.R = R;
  p.T = T;
  p.Tprime = T * M;
  p.A = T * M * M * Ti;
  p.B = T * (Ms * M * Mns * M.inverse()) * Ti;

  // Fix SL sign conventions, then close the relation with the exact 2x2
  // adjugate so C*B*A recovers the identity to the last ulp.
  auto fix_sign = [](Mat& m) {
    if (m.trace().real() < 0) m = -m;
  };
  fix_sign(p.A);
  fix_sign(p.B);
  Mat BA = p.B * p.A;
  Mat Cadj(2, 2);
  Cadj << BA(1, 1), -BA(0, 1), -BA(1, 0), BA(0, 0);
  p.C = Cadj / (BA(0, 0) * BA(1, 1) - BA(0, 1) * BA(1, 0));
  Mat Cref = p.A.inverse() * T * (M * Ms * M * Mns) * Ti;
  if ((p.C + Cref).norm() < (p.C - Cref).norm()) p.C = -p.C;  // keep the SL lift of the closed form
  if ((p.C * BA)(0, 0).real() < 0) p.C = -p.C;
  return p;
}

Mat pm_exchange_conjugator() { return mat2(0, 1, 1, 0); }

double realized_by(const Mat& alpha, const Mat& T1, const Mat& T2, int sign, double R,
                   const TauContext& ctx, const GroupMetric& metric) {
  Mat step = step_multiplier(R, sign, ctx);
  GroupElement s1(T1 * step, ctx.field()), t2(T2, ctx.field());
  GroupElement s2(T2 * step, ctx.field()), at1(alpha * T1, ctx.field());
  return std::max(metric.distance(s1, t2), metric.distance(s2, at1));
}

std::array<double, 3> pants_realization_residuals(const PantsRep& p, const TauContext& ctx,
                                                  const GroupMetric& metric) {
  const int s = p.sign;
  auto T = [&](const Mat& m) { return ctx.tau(m).mat(); };
  Mat A = T(p.A), B = T(p.B), C = T(p.C), Ainv = T(p.A.inverse());
  Mat tT = T(p.T), tTp = T(p.Tprime);
  Mat w = ctx.omega(), w2 = ctx.omega() * ctx.omega();
  Mat ws = (s > 0) ? w : w2;
  Mat w2s = (s > 0) ? w2 : w;
  return {realized_by(A, tT, tTp, s, p.R, ctx, metric),
          realized_by(B, tT * ws, B * (tTp * w2s), s, p.R, ctx, metric),
          realized_by(C, tT * w2s, Ainv * (tTp * ws), s, p.R, ctx, metric)};
}

}  // namespace pantograph
