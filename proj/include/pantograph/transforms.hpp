#pragma once

#include "pantograph/tau.hpp"

namespace pantograph {

// Transformations of G commuting with left multiplication: right products by
// fixed tau-images. rot sends g*tau(0,inf,-1) to g*tau(inf,-1,0); inv swaps
// the first two points; phi_t flows the third along the axis; refl flips
// tau(-1) to tau(1); I = inv o refl.
inline GroupElement rot(const GroupElement& x, const TauContext& c) {
  return GroupElement(x.mat() * c.omega(), x.field());
}
inline GroupElement rot2(const GroupElement& x, const TauContext& c) {
  return GroupElement(x.mat() * c.omega() * c.omega(), x.field());
}
inline GroupElement rot_pow(const GroupElement& x, int k, const TauContext& c) {
  k = ((k % 3) + 3) % 3;
  GroupElement out = x;
  for (int i = 0; i < k; ++i) out = rot(out, c);
  return out;
}
inline GroupElement inv(const GroupElement& x, const TauContext& c) {
  return GroupElement(x.mat() * c.inv_j(), x.field());
}
inline GroupElement phi(double t, const GroupElement& x, const TauContext& c) {
  return GroupElement(x.mat() * c.phi(t), x.field());
}
inline GroupElement refl(const GroupElement& x, const TauContext& c) {
  return GroupElement(x.mat() * c.refl_j(), x.field());
}
inline GroupElement flip_I(const GroupElement& x, const TauContext& c) {
  // I = inv o refl: first refl, then inv; both are right multiplications.
  return GroupElement(x.mat() * c.refl_j() * c.inv_j(), x.field());
}

// rot^{+-1} o inv o phi_{+-R}; the fundamental half-pants step.  At sign +1
// this is right multiplication by tau([[e^{R/2},0],[e^{-R/2},e^{-R/2}]]).
inline Mat step_multiplier(double R, int sign, const TauContext& c) {
  Mat m = c.phi(sign * R) * c.inv_j();
  if (sign > 0) return m * c.omega();
  return m * c.omega() * c.omega();  // rot^{-1} = rot^2 mod center
}
inline GroupElement half_pants_step(const GroupElement& x, double R, int sign,
                                    const TauContext& c) {
  return GroupElement(x.mat() * step_multiplier(R, sign, c), x.field());
}

}  // namespace pantograph
