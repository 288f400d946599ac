#pragma once

#include "pantograph/matrix.hpp"

namespace pantograph {

// Left-invariant distance d_G(x,y) = N(log(x^{-1} y)) where N is the
// Frobenius norm averaged over the six right-translators representing the
// group generated by rot and I; the average makes d_G exactly invariant
// under right multiplication by those translators.
class GroupMetric {
 public:
  GroupMetric() = default;
  explicit GroupMetric(std::vector<Mat> right_translators)
      : s_(std::move(right_translators)) {
    for (auto& m : s_) si_.push_back(m.inverse());
  }

  // Averaged Ad-norm on the Lie algebra.
  double algebra_norm(const Mat& xi) const {
    if (s_.empty()) return xi.norm();
    double acc = 0.0;
    for (size_t k = 0; k < s_.size(); ++k) acc += (si_[k] * xi * s_[k]).norm();
    return acc / double(s_.size());
  }

  double distance(const GroupElement& x, const GroupElement& y) const {
    GroupElement step(x.mat().inverse() * y.mat(), x.field());
    return algebra_norm(psl_log(step));
  }

  const std::vector<Mat>& translators() const { return s_; }

 private:
  std::vector<Mat> s_, si_;
};

}  // namespace pantograph
