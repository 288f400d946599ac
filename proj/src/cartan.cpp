#include "pantograph/cartan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pantograph {

CartanVector jordan_projection(const GroupElement& g) {
  Eigen::ComplexEigenSolver<Mat> es(g.mat(), false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("jordan_projection: eigensolver failed");
  CartanVector out;
  for (int i = 0; i < g.n(); ++i) {
    double m = std::abs(es.eigenvalues()(i));
    if (m < 1e-300) throw std::runtime_error("jordan_projection: singular input");
    out.v.push_back(std::log(m));
  }
  std::sort(out.v.begin(), out.v.end(), std::greater<double>());
  double mean = out.sum() / out.v.size();
  for (double& x : out.v) x -= mean;
  return out;
}

CartanVector jordan_projection_power_oracle(const GroupElement& g, int m) {
  // QR-accumulated power iteration (Lyapunov-exponent style): the per-step
  // renormalization keeps the growth rates of g^m within working precision
  // for any conditioning.
  const int n = g.n();
  Mat q = Mat::Identity(n, n);
  std::vector<double> acc(n, 0.0);
  for (int k = 0; k < m; ++k) {
    Mat b = g.mat() * q;
    Eigen::HouseholderQR<Mat> qr(b);
    q = qr.householderQ() * Mat::Identity(n, n);
    Mat r = q.adjoint() * b;
    for (int i = 0; i < n; ++i) acc[i] += std::log((double)std::abs(r(i, i)));
  }
  CartanVector out;
  for (int i = 0; i < n; ++i) out.v.push_back(acc[i] / double(m));
  std::sort(out.v.begin(), out.v.end(), std::greater<double>());
  double mean = out.sum() / out.v.size();
  for (double& x : out.v) x -= mean;
  return out;
}

namespace {

// Osborne-style balancing: diagonal similarity equalizing row/column norms.
// Exact similarity, so eigenvalues are preserved and eigenvectors unbalance
// by the diagonal.
Mat balance_diagonal(const Mat& m) {
  const int n = int(m.rows());
  Mat d = Mat::Identity(n, n);
  Mat b = m;
  for (int sweep = 0; sweep < 8; ++sweep) {
    for (int i = 0; i < n; ++i) {
      real_t rn = 0, cn = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        rn += std::abs(b(i, j));
        cn += std::abs(b(j, i));
      }
      if (!(rn > 0) || !(cn > 0) || !std::isfinite((double)(rn + cn))) continue;
      double lg = std::log2((double)(cn / rn)) / 2.0;
      if (!std::isfinite(lg)) continue;
      real_t f = std::pow((real_t)2.0, std::floor(lg + 0.5));
      if (!(f > 0) || !std::isfinite((double)f)) continue;
      double mag = std::fabs(std::log2((double)std::abs(d(i, i) * f)));
      if (mag > 60) continue;  // keep the similarity well-conditioned
      d(i, i) *= f;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        b(i, j) /= f;
        b(j, i) *= f;
      }
    }
  }
  return d;
}

}  // namespace

namespace {
bool finite_mat(const Mat& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      if (!std::isfinite((double)m(i, j).real()) || !std::isfinite((double)m(i, j).imag()))
        return false;
      if (std::abs(m(i, j)) > 1e280) return false;
    }
  return true;
}
}  // namespace

std::optional<ProximalData> proximal_data(const GroupElement& g, double tol_prox) {
  const int n = g.n();
  auto attempt = [&](const Mat& d) -> std::optional<ProximalData> {
    Mat balanced = d.inverse() * g.mat() * d;
    if (!finite_mat(balanced)) return std::nullopt;
    Eigen::ComplexEigenSolver<Mat> es(balanced, true);
    if (es.info() != Eigen::Success) return std::nullopt;
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      return std::abs(es.eigenvalues()(a)) > std::abs(es.eigenvalues()(b));
    });
    double gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < n; ++i) {
      double la = std::log(std::abs(es.eigenvalues()(idx[i])));
      double lb = std::log(std::abs(es.eigenvalues()(idx[i + 1])));
      gap = std::min(gap, la - lb);
    }
    if (!(gap > tol_prox)) return std::nullopt;
    Mat chain_att(n, n - 1), chain_rep(n, n - 1);
    for (int k = 0; k < n - 1; ++k) {
      chain_att.col(k) = d * es.eigenvectors().col(idx[k]);
      chain_rep.col(k) = d * es.eigenvectors().col(idx[n - 1 - k]);
    }
    ProximalData out;
    out.attracting = Flag::from_chain(chain_att);
    out.repelling = Flag::from_chain(chain_rep);
    out.gap = gap;
    // the candidate must actually fix its flags
    double fres = (double)(g.mat() * out.attracting.basis().col(0) -
                           (g.mat() * out.attracting.basis().col(0)).norm() *
                               out.attracting.basis().col(0) *
                               ((out.attracting.basis().col(0).adjoint() *
                                 (g.mat() * out.attracting.basis().col(0)))(0, 0) /
                                std::abs((out.attracting.basis().col(0).adjoint() *
                                          (g.mat() * out.attracting.basis().col(0)))(0, 0))))
                      .norm() /
                  std::max<double>(1.0, (double)(g.mat() * out.attracting.basis().col(0)).norm());
    if (fres > 1e-4) return std::nullopt;
    return out;
  };
  // Direct solve first; a power-of-two balancing similarity as fallback for
  // badly scaled inputs.
  auto direct = attempt(Mat::Identity(n, n));
  if (direct) return direct;
  Mat d = balance_diagonal(g.mat());
  bool bad = !finite_mat(d);
  for (int i = 0; i < n && !bad; ++i)
    if (std::abs(d(i, i)) < 1e-280) bad = true;
  if (bad) return std::nullopt;
  return attempt(d);
}

}  // namespace pantograph
