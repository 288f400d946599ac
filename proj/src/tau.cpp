#include "pantograph/tau.hpp"

#include <cmath>
#include <random>

namespace pantograph {

namespace {

real_t binom(int n, int k) {
  if (k < 0 || k > n) return real_t(0);
  real_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * real_t(n - k + i) / real_t(i);
  return r;
}

// Coefficient vector of (p X + q Y)^m over X^a Y^{m-a}, a = 0..m.
std::vector<cplx> linear_power(cplx p, cplx q, int m) {
  std::vector<cplx> c(m + 1);
  for (int a = 0; a <= m; ++a) c[a] = binom(m, a) * std::pow(p, a) * std::pow(q, m - a);
  return c;
}

std::vector<cplx> poly_mul(const std::vector<cplx>& u, const std::vector<cplx>& v) {
  std::vector<cplx> w(u.size() + v.size() - 1, cplx(0, 0));
  for (size_t i = 0; i < u.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) w[i + j] += u[i] * v[j];
  return w;
}

}  // namespace

TauContext::TauContext(int n, Field field, Tolerances tol) : n_(n), field_(field), tol_(tol) {
  if (n < 2) throw std::invalid_argument("TauContext: n >= 2 required");
  h_ = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) h_(i, i) = cplx(double(n - 1 - 2 * i), 0.0);

  omega_ = tau(mat2(1, 1, -1, 0)).mat();
  inv_j_ = tau(mat2(0, 1, -1, 0)).mat();
  refl_j_ = tau(mat2c(cplx(0, 1), 0, 0, cplx(0, -1))).mat();
  flip_u_ = tau(mat2c(0, cplx(0, 1), cplx(0, 1), 0)).mat();

  std::vector<Mat> s;
  Mat id = Mat::Identity(n, n);
  Mat w2 = omega_ * omega_;
  s = {id, omega_, w2, flip_u_, omega_ * flip_u_, w2 * flip_u_};
  metric_ = GroupMetric(std::move(s));

  // Calibrate the flag metric so tau-circles are near-isometric: fix the
  // median ratio d_raw / d_P1 to one on a deterministic sample, then record
  // the residual distortion over random pairs.
  flag_metric_ = FlagMetric::uniform(n);
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> ang(-M_PI_2, M_PI_2);
  std::vector<double> ratios;
  for (int k = 0; k < 100; ++k) {
    double a = ang(rng), b = ang(rng);
    if (std::fabs(a - b) < 1e-3) continue;
    double x = std::tan(a), y = std::tan(b);
    double raw = flag_distance(veronese_flag(x), veronese_flag(y), flag_metric_);
    double ref = p1_distance(x, y);
    if (ref > 1e-9) ratios.push_back(raw / ref);
  }
  std::sort(ratios.begin(), ratios.end());
  double med = ratios[ratios.size() / 2];
  flag_metric_.scale = 1.0 / med;
  double k_hi = 0.0, k_lo = std::numeric_limits<double>::infinity();
  for (double r : ratios) {
    k_hi = std::max(k_hi, r / med);
    k_lo = std::min(k_lo, r / med);
  }
  flag_metric_.measured_distortion = std::max(k_hi, 1.0 / k_lo);
}

GroupElement TauContext::tau(const Mat& h2) const {
  if (h2.rows() != 2 || h2.cols() != 2) throw std::invalid_argument("tau: 2x2 input required");
  cplx a = h2(0, 0), b = h2(0, 1), c = h2(1, 0), d = h2(1, 1);
  if (std::abs(a * d - b * c - cplx(1, 0)) > 1e-6)
    throw std::invalid_argument("tau: determinant-1 input required");
  Mat out = Mat::Zero(n_, n_);
  // e_j = X^{j-1} Y^{n-j} maps to (dX - bY)^{j-1} (-cX + aY)^{n-j}.
  for (int j = 1; j <= n_; ++j) {
    auto u = linear_power(d, -b, j - 1);
    auto v = linear_power(-c, a, n_ - j);
    auto w = poly_mul(u, v);  // w[p] multiplies X^p Y^{n-1-p}
    for (int p = 0; p < n_; ++p) out(p, j - 1) = w[p];
  }
  return GroupElement(out, field_);
}

Mat TauContext::dtau(const Mat& xi2) const {
  Mat out = Mat::Zero(n_, n_);
  cplx x11 = xi2(0, 0), x12 = xi2(0, 1), x21 = xi2(1, 0), x22 = xi2(1, 1);
  for (int j = 1; j <= n_; ++j) {
    out(j - 1, j - 1) += -real_t(j - 1) * x11 - real_t(n_ - j) * x22;
    if (j >= 2) out(j - 2, j - 1) += -real_t(j - 1) * x12;
    if (j < n_) out(j, j - 1) += -real_t(n_ - j) * x21;
  }
  return out;
}

std::vector<long long> TauContext::h_diag_ints() const {
  std::vector<long long> d(n_);
  for (int i = 0; i < n_; ++i) d[i] = llround(h_(i, i).real());
  return d;
}

bool TauContext::h_regular() const {
  auto d = h_diag_ints();
  for (size_t i = 0; i < d.size(); ++i)
    for (size_t j = i + 1; j < d.size(); ++j)
      if (d[i] == d[j]) return false;
  return true;
}

Mat TauContext::phi(double t) const {
  Mat m = Mat::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) m(i, i) = std::exp(0.5 * t * h_(i, i).real());
  return m;
}

GroupElement TauContext::exp_h(double t) const {
  Mat m = Mat::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) m(i, i) = std::exp(t * h_(i, i).real());
  return GroupElement(m, field_);
}

Flag TauContext::veronese_flag_ratio(double alpha, double beta) const {
  if (std::fabs(alpha) < 1e-300 && std::fabs(beta) < 1e-300)
    throw std::invalid_argument("veronese_flag: [0:0] is not a point of P^1");
  // q = -beta X + alpha Y; V_i = q^{n-i} * (polynomials of degree i-1).
  Mat chain(n_, n_ - 1);
  std::vector<Vec> basis;
  for (int i = 1; i <= n_ - 1; ++i) {
    auto qp = linear_power(-beta, alpha, n_ - i);
    // Generators q^{n-i} X^k Y^{i-1-k}; pick the one with the largest
    // component off the already-built V_{i-1}.
    Vec best = Vec::Zero(n_);
    double best_norm = -1.0;
    for (int k = 0; k < i; ++k) {
      std::vector<cplx> xk(k + 1, cplx(0, 0));
      xk[k] = cplx(1, 0);  // X^k Y^0 within degree k
      auto w = poly_mul(qp, xk);
      Vec v = Vec::Zero(n_);
      for (size_t p = 0; p < w.size() && p < size_t(n_); ++p) v(long(p)) = w[p];
      Vec r = v;
      for (auto& u : basis) r -= (u.adjoint() * v)(0, 0) * u;
      if (r.norm() > best_norm) {
        best_norm = r.norm();
        best = r;
      }
    }
    if (best_norm < 1e-12) throw std::runtime_error("veronese_flag: degenerate stage");
    basis.push_back(best / best.norm());
    chain.col(i - 1) = basis.back();
  }
  return Flag(chain);
}

Flag TauContext::veronese_flag(double x) const {
  if (std::isinf(x)) return veronese_flag_ratio(1.0, 0.0);
  return veronese_flag_ratio(x, 1.0);
}

CheckReport check_condition_R(const TauContext& ctx) {
  CheckReport rep;
  const double tol = ctx.tol().alg;
  GroupElement j(ctx.refl_j(), ctx.field());
  rep.add("j^2 = id in PSL", psl_distance(j * j, GroupElement::identity(ctx.n())), tol);
  for (double t : {0.37, 1.21}) {
    GroupElement e = ctx.exp_h(t);
    rep.add("j commutes with exp(t h)", psl_distance(j * e, e * j), tol);
  }
  const FlagMetric& fm = ctx.flag_metric();
  double d0 = flag_distance(ctx.veronese_flag(0.0).acted_by(j.mat()), ctx.veronese_flag(0.0), fm);
  double di = flag_distance(ctx.veronese_flag(p1_infinity()).acted_by(j.mat()),
                            ctx.veronese_flag(p1_infinity()), fm);
  double dm = flag_distance(ctx.veronese_flag(-1.0).acted_by(j.mat()), ctx.veronese_flag(1.0), fm);
  rep.add("j fixes tau(0)", d0, 1e-7);
  rep.add("j fixes tau(inf)", di, 1e-7);
  rep.add("j flips tau(-1) to tau(1)", dm, 1e-7);
  return rep;
}

Mat random_sl2(std::function<double()>& unit, Field f, double spread) {
  auto rnd = [&](bool im) {
    double re = spread * unit();
    double imag = im ? spread * unit() : 0.0;
    return cplx(re, imag);
  };
  bool cx = (f == Field::Complex);
  for (int attempt = 0; attempt < 64; ++attempt) {
    cplx a = rnd(cx), b = rnd(cx), c = rnd(cx);
    if (std::abs(a) < 0.2) continue;
    cplx d = (cplx(1, 0) + b * c) / a;
    return mat2c(a, b, c, d);
  }
  return Mat::Identity(2, 2);
}

HermitianReport hermitian_invariance_check(const TauContext& ctx, unsigned seed) {
  HermitianReport out;
  const int n = ctx.n();
  if (n % 2 == 0) throw std::invalid_argument("hermitian_invariance_check: n must be odd");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::function<double()> unit = [&]() { return u(rng); };

  // Real parametrization of hermitian H: n diagonal reals + (re, im) per
  // off-diagonal pair.
  const int dof = n * n;
  auto unpack = [&](const RealVec& v) {
    Mat H = Mat::Zero(n, n);
    int idx = 0;
    for (int i = 0; i < n; ++i) H(i, i) = cplx(v(idx++), 0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double re = v(idx++), im = v(idx++);
        H(i, j) = cplx(re, im);
        H(j, i) = cplx(re, -im);
      }
    return H;
  };

  const int eq_sets = 3;
  RealMat A(eq_sets * 2 * n * n, dof);
  for (int s = 0; s < eq_sets; ++s) {
    Mat T = ctx.tau(random_sl2(unit, Field::Real, 0.8)).mat();
    for (int col = 0; col < dof; ++col) {
      RealVec e = RealVec::Zero(dof);
      e(col) = 1.0;
      Mat H = unpack(e);
      Mat r = T.adjoint() * H * T - H;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          A(s * 2 * n * n + 2 * (i * n + j), col) = r(i, j).real();
          A(s * 2 * n * n + 2 * (i * n + j) + 1, col) = r(i, j).imag();
        }
    }
  }
  Eigen::JacobiSVD<RealMat> svd(A, Eigen::ComputeThinV);
  RealVec null_vec = svd.matrixV().col(dof - 1);
  Mat H = unpack(null_vec);
  // Normalize so the anti-diagonal is positive; the middle diagonal entry of
  // the positive form is real positive.
  real_t mid = H((n - 1) / 2, (n - 1) / 2).real();
  real_t s = mid >= 0 ? 1.0L : -1.0L;
  if ((double)std::abs(mid) < 1e-9) s = H(0, n - 1).real() >= 0 ? 1.0L : -1.0L;
  H *= s / H.cwiseAbs().maxCoeff();
  out.form = H;

  Mat Tf = ctx.tau(random_sl2(unit, Field::Real, 0.8)).mat();
  out.checks.add("invariance residual on fresh h", (Tf.adjoint() * H * Tf - H).norm(),
                 ctx.tol().alg * 1e2);
  double off_anti = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i + j != n - 1) off_anti += std::abs(H(i, j));
  out.checks.add("anti-diagonal shape", off_anti, 1e-7);
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  for (int i = 0; i < n; ++i)
    (es.eigenvalues()(i) > 0 ? out.positives : out.negatives)++;
  return out;
}

double sl2_triple_residual(const Mat& h, const Mat& e, const Mat& f) {
  auto br = [](const Mat& a, const Mat& b) { return (a * b - b * a).eval(); };
  return (br(h, e) - 2.0 * e).norm() + (br(h, f) + 2.0 * f).norm() + (br(e, f) - h).norm();
}

}  // namespace pantograph
