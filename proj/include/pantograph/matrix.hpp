#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pantograph {

// Extended-precision scalar: boundary holonomies have condition e^{4R} in
// PSL(3,C), and the acceptance tolerances sit below what double storage of
// such matrices can satisfy.
using real_t = long double;
using cplx = std::complex<real_t>;
using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;
using RealMat = Eigen::Matrix<real_t, Eigen::Dynamic, Eigen::Dynamic>;
using RealVec = Eigen::Matrix<real_t, Eigen::Dynamic, 1>;

enum class Field { Real, Complex };

struct Tolerances {
  double alg = 1e-10;   // exact algebraic identities
  double num = 1e-8;    // metric / numeric assertions
  double prox = 1e-6;   // spectral gap floor
};

// Element of SL(n,K) carried as a det-1 matrix; comparisons are modulo the
// center mu_n * I, so values represent points of PSL(n,K).
class GroupElement {
 public:
  GroupElement() = default;
  GroupElement(Mat m, Field f) : m_(std::move(m)), field_(f) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("GroupElement: square matrix required");
  }

  static GroupElement identity(int n, Field f = Field::Complex) {
    return GroupElement(Mat::Identity(n, n), f);
  }

  int n() const { return static_cast<int>(m_.rows()); }
  const Mat& mat() const { return m_; }
  Field field() const { return field_; }

  double det_error() const { return (double)std::abs(m_.determinant() - cplx(1.0, 0.0)); }

  // Rescale so det = 1 (principal n-th root). Throws on singular input.
  GroupElement& normalize() {
    cplx d = m_.determinant();
    if (std::abs(d) < 1e-300) throw std::domain_error("GroupElement: singular matrix");
    m_ /= std::pow(d, 1.0 / double(n()));
    return *this;
  }

  GroupElement operator*(const GroupElement& o) const { return GroupElement(m_ * o.m_, field_); }
  GroupElement inverse() const { return GroupElement(m_.inverse(), field_); }
  GroupElement conjugate_by(const GroupElement& x) const {
    return GroupElement(x.m_ * m_ * x.m_.inverse(), field_);
  }

 private:
  Mat m_;
  Field field_ = Field::Complex;
};

// n-th roots of unity (center lifts of PSL(n,C)); for a real field only +-1.
std::vector<cplx> center_lifts(int n, Field f);

// Frobenius distance minimized over center lifts; zero iff equal in PSL.
double psl_distance(const GroupElement& a, const GroupElement& b);

bool psl_equal(const GroupElement& a, const GroupElement& b, double tol);

// Principal matrix logarithm; throws std::domain_error when an eigenvalue is
// too close to the negative real axis (branch cut).
Mat principal_log(const Mat& m, double cut_margin = 1e-9);

Mat matrix_exp(const Mat& m);

// log of the center lift of x with smallest Frobenius norm; domain errors
// propagate with a remedy hint.
Mat psl_log(const GroupElement& x);

double frobenius(const Mat& m);

// 2x2 helpers used throughout the hyperbolic layer.
Mat mat2(double a, double b, double c, double d);
Mat mat2c(cplx a, cplx b, cplx c, cplx d);

}  // namespace pantograph
