#pragma once

#include "pantograph/cartan.hpp"
#include "pantograph/hyp.hpp"

#include <random>

namespace pantograph {

// Quintuple (A, B, C, g, g') attached to an almost-perfect pants
// representation, with its parameters.
struct GeometricData {
  GroupElement A, B, C;  // images of a, b, c; C*B*A = id mod center
  GroupElement g, gp;
  double eps = 0.0;
  double R = 0.0;
  int sign = +1;

  GeometricData left_translated(const GroupElement& x) const {
    GeometricData q = *this;
    q.A = A.conjugate_by(x);
    q.B = B.conjugate_by(x);
    q.C = C.conjugate_by(x);
    q.g = x * g;
    q.gp = x * gp;
    return q;
  }
};

// tau-push of a perfect PSL(2,R) pants: the canonical exact geometric data.
GeometricData perfect_geometric_data(const TauContext& ctx, double R, int sign,
                                     const Mat& frame2 = Mat::Identity(2, 2));

double relation_residual(const GeometricData& q);

// Cyclic symmetry (order three mod center):
// sym(Q) = (B, C, A, rot^{s}(g), B*rot^{2s}(g')).
GeometricData sym(const GeometricData& q, const TauContext& ctx);

struct WitnessResult {
  bool accepted = false;
  GroupElement h, hp;
  std::array<double, 4> residuals{};  // d(g,h), d(step h, g'), d(g',h'), d(step h', alpha g)
  unsigned seed = 0;
  int evaluations = 0;
};

// (eps, sign R)-almost realization of alpha by (g, g'): searches for a
// witness (h, h') satisfying the four strict d_G inequalities.  Conservative
// candidates first, then local descent within the evaluation budget; a
// rejection means "no witness found within budget".
WitnessResult almost_realized(const GroupElement& alpha, const GroupElement& g,
                              const GroupElement& gp, double eps, double R, int sign,
                              const TauContext& ctx, unsigned seed = 1, int budget = 200);

struct AlmostPerfectReport {
  bool accepted = false;
  std::array<WitnessResult, 3> conditions;  // for alpha, beta, gamma
};

AlmostPerfectReport is_almost_perfect(const GeometricData& q, const TauContext& ctx,
                                      unsigned seed = 1, int budget = 200);

// Proximality consequences of an almost realization: flag distance of the
// attracting flag of g^{-1} alpha g to tau(inf), Jordan deviation from
// R * h, and a one-sided certificate for g^{-1} g' in B_eps tau(h_R) B_eps.
struct ProximalConsequences {
  bool proximal = false;
  double flag_gap = 0.0;        // d_tau(attracting(g^-1 alpha g), tau(inf or 0))
  double lambda_deviation = 0.0;
  double membership_radius = 0.0;
  double envelope = 0.0;        // eps + e^{-R/2}
};
ProximalConsequences proximal_consequences(const GroupElement& alpha, const GroupElement& g,
                                           const GroupElement& gp, double eps, double R, int sign,
                                           const TauContext& ctx);

// Foot map context for a proximal alpha: base change g_alpha (eigenvector
// matrix sending (tau(0), tau(inf)) to (alpha^-, alpha^+)) plus the
// neighborhood radius in flag-distance coordinates.
struct FootContext {
  GroupElement alpha;
  GroupElement base_change;  // g_alpha
  Flag attracting, repelling;
  double radius = 0.2;
};

FootContext make_foot_context(const GroupElement& alpha, const TauContext& ctx,
                              double radius = 0.2);

// Bruhat (LDU) foot: Psi(g) = g_alpha * D where g_alpha^{-1} g = L D U.
// Throws std::domain_error when g is outside the neighborhood or the
// factorization breaks down (vanishing principal minor).
GroupElement foot_map(const GroupElement& g, const FootContext& fc, const TauContext& ctx);

struct GluingReport {
  bool structural_ok = false;  // boundaries literally equal mod center
  bool accepted = false;
  double defect = std::numeric_limits<double>::infinity();
  std::string error;
};

// eps'-well-gluing of Q+ (sign +R) and Q- (sign -R) along their a-boundaries:
// requires A+ = A- exactly (mod center) and
// d_G(Psi_alpha(g+), phi_1 o inv o Psi_{alpha^{-1}}(g-)) < eps'.
GluingReport well_glued(const GeometricData& qp, const GeometricData& qm, double eps_prime,
                        const TauContext& ctx);

// Left-translation x making base_minus glue exactly (defect 0 at eps = 0)
// onto q_plus along the boundary exposed by sym^{i_plus}(q_plus) and
// sym^{i_minus}(base_minus); works for either sign of q_plus.
GroupElement canonical_gluing_translation(const GeometricData& q_plus_sym,
                                          const GeometricData& base_minus_sym,
                                          const TauContext& ctx);

// One-parameter subgroup through alpha pinned at y = Psi_alpha(g):
// alpha_t = y exp(t(h/2 + v)) y^{-1} with v = (1/2R) log of the diagonal
// exp(-R h) y^{-1} alpha y.
struct OneParamData {
  GroupElement base;            // y
  Mat generator;                // h/2 + v
  double closure_error = 0.0;   // psl distance of alpha_{2R} to alpha
  double deviation = 0.0;       // sup over sampled (t, x) of d(phi_t x, alpha_t x)
  double deviation_endpoint = 0.0;
};
OneParamData one_param_approx(const GroupElement& alpha, const GeometricData& q,
                              const TauContext& ctx, int t_samples = 9, int x_samples = 5);

// I-transform of a geometric datum (flips the sign; prop. "mesures-I" item 1).
GeometricData flip_data(const GeometricData& q, const TauContext& ctx);

}  // namespace pantograph
