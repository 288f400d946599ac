#include "pantograph/matrix.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace pantograph {

std::vector<cplx> center_lifts(int n, Field f) {
  std::vector<cplx> out;
  if (f == Field::Real) {
    out.push_back(cplx(1, 0));
    if (n % 2 == 0) out.push_back(cplx(-1, 0));
    return out;
  }
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    real_t t = real_t(2.0L) * real_t(M_PIl) * real_t(k) / real_t(n);
    out.emplace_back(std::cos(t), std::sin(t));
  }
  return out;
}

double psl_distance(const GroupElement& a, const GroupElement& b) {
  if (a.n() != b.n()) throw std::invalid_argument("psl_distance: dimension mismatch");
  real_t best = std::numeric_limits<real_t>::infinity();
  for (cplx z : center_lifts(a.n(), a.field())) {
    best = std::min<real_t>(best, (a.mat() - z * b.mat()).norm());
  }
  return (double)best;
}

bool psl_equal(const GroupElement& a, const GroupElement& b, double tol) {
  return psl_distance(a, b) < tol;
}

namespace {

void branch_check(const cplx& ev, double cut_margin) {
  if (std::abs(ev) < 1e-300) throw std::domain_error("principal_log: singular matrix");
  if ((double)std::abs(real_t(M_PIl) - std::abs(std::arg(ev))) < cut_margin)
    throw std::domain_error(
        "principal_log: eigenvalue on the negative real axis; "
        "compare via a conjugate or a different center lift");
}

}  // namespace

Mat principal_log(const Mat& m, double cut_margin) {
  if (m.rows() == 2) {
    // log m = a I + b m on the eigenbasis (quadratic eigenvalues).
    cplx t = m.trace() / real_t(2);
    cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    cplx disc = std::sqrt(t * t - det);
    cplx l1 = t + disc, l2 = t - disc;
    branch_check(l1, cut_margin);
    branch_check(l2, cut_margin);
    if (std::abs(l1 - l2) > 1e-9 * std::abs(l1)) {
      cplx b = (std::log(l1) - std::log(l2)) / (l1 - l2);
      cplx a = std::log(l1) - b * l1;
      return a * Mat::Identity(2, 2) + b * m;
    }
    // near-scalar: log m = log(l) I + (m/l - I) to second order is not exact
    // enough; fall through to the generic path.
  }
  Eigen::ComplexEigenSolver<Mat> es(m, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("principal_log: eigensolver failed");
  for (int i = 0; i < m.rows(); ++i) branch_check(es.eigenvalues()(i), cut_margin);
  return m.log();
}

Mat matrix_exp(const Mat& m) {
  if (m.rows() == 2) {
    // exp(m) = e^{t}(cosh(s) I + sinh(s)/s xi), m = t I + xi, xi traceless,
    // s^2 = -det(xi).
    cplx t = m.trace() / real_t(2);
    Mat xi = m - t * Mat::Identity(2, 2);
    cplx s2 = -(xi(0, 0) * xi(1, 1) - xi(0, 1) * xi(1, 0));
    cplx s = std::sqrt(s2);
    cplx ch, shs;
    if (std::abs(s) < 1e-8) {
      ch = real_t(1) + s2 / real_t(2) + s2 * s2 / real_t(24);
      shs = real_t(1) + s2 / real_t(6) + s2 * s2 / real_t(120);
    } else {
      ch = std::cosh(s);
      shs = std::sinh(s) / s;
    }
    return std::exp(t) * (ch * Mat::Identity(2, 2) + shs * xi);
  }
  return m.exp();
}

Mat psl_log(const GroupElement& x) {
  std::optional<Mat> best;
  double best_norm = std::numeric_limits<double>::infinity();
  std::string last_err;
  for (cplx z : center_lifts(x.n(), x.field())) {
    try {
      Mat l = principal_log(z * x.mat());
      double nn = (double)l.norm();
      if (nn < best_norm) {
        best_norm = nn;
        best = l;
      }
    } catch (const std::domain_error& e) {
      last_err = e.what();
    }
  }
  if (!best)
    throw std::domain_error("psl_log: no center lift admits a principal logarithm (" + last_err +
                            ")");
  return *best;
}

double frobenius(const Mat& m) { return (double)m.norm(); }

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << cplx(a, 0), cplx(b, 0), cplx(c, 0), cplx(d, 0);
  return m;
}

Mat mat2c(cplx a, cplx b, cplx c, cplx d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace pantograph
