#pragma once

#include "pantograph/pants.hpp"

#include <functional>

namespace pantograph {

// Smooth bump exp(-1/(1-t^2)) on (-1,1), scaled to the eps-ball of the
// identity; the normalization constant is Monte-Carlo integrated once in
// exponential coordinates (unit Jacobian) and cached.
class BumpFunction {
 public:
  BumpFunction(double eps, const TauContext& ctx, unsigned seed = 2024, int samples = 20000);

  double eps() const { return eps_; }
  double normalization() const { return norm_; }
  double normalization_error() const { return norm_err_; }

  static double profile(double t) {
    double t2 = t * t;
    if (t2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - t2));
  }
  // chi_eps(g) for d = d_G(g, id); includes the 1/normalization factor.
  double density_at_distance(double d) const { return profile((d / eps_) * (d / eps_)) / norm_; }
  // Unnormalized profile chi(d^2/eps^2).
  double raw_at_distance(double d) const { return profile(d / eps_); }  // argument already squared/scaled

 private:
  double eps_, norm_ = 1.0, norm_err_ = 0.0;
};

// Finitely generated subgroup provider with a word-ball enumerator and
// (optionally) a reduction to a Dirichlet-type fundamental domain.
struct LatticeProvider {
  std::string name;
  int n = 2;
  Field field = Field::Real;
  bool cocompact = false;
  std::vector<Mat> generators;                      // without inverses
  std::vector<std::vector<int>> relations;          // words in gens: +k / -k are gen k-1 / inverse
  std::function<Mat(const Mat&)> reduce;            // reduction mod Gamma (may be empty)

  Mat word(const std::vector<int>& w) const;
  double relation_residual() const;
  // Duplicate-free enumeration of the word ball of the given radius (mod
  // center); the identity is included.
  std::vector<Mat> ball(int radius) const;
};

LatticeProvider trivial_lattice(int n, Field f);
// Cocompact genus-2 Fuchsian group from the closed-form FN construction at
// boundary length 2R, twist 1.
LatticeProvider genus2_lattice(double R);
// (2,3,7) triangle group: rotations of orders 2,3,7 about the vertices of the
// (pi/2, pi/3, pi/7) triangle with product one.
LatticeProvider triangle237_lattice();
// PSL(2, Z[i]) in PSL(2,C); non-cocompact, for demos only.
LatticeProvider pslzi_lattice();
// tau_n-image of the genus-2 provider (synthetic finitely generated
// subgroup of PSL(n,C)).
LatticeProvider synthetic_tau_lattice(const TauContext& ctx, double R);

struct MonteCarloValue {
  double value = 0.0;
  double std_error = 0.0;
};

// Monte-Carlo estimate of the pair weight
//   W_{eps,sR}(x,y) = int chi_{eps/R}(x^-1 g) chi_{eps/R}(y^-1 step(g)) dg
// in exponential coordinates around x (unit Jacobian).
MonteCarloValue weight_W(const GroupElement& x, const GroupElement& y, double eps, double R,
                         int sign, const TauContext& ctx, unsigned seed, int samples);

// Support bound: W(x, .) vanishes outside this d_G-radius around step(x).
double weight_support_radius(double eps, double R, int sign, const TauContext& ctx);

// Lattice sum w = sum_gamma W(x, gamma y), covolume-normalized when the
// provider declares a covolume; emits a coverage warning if the word ball
// cannot certify支 support coverage.
struct LatticeWeight {
  MonteCarloValue value;
  int terms = 0;
  bool coverage_ok = false;
  double covolume = 0.0;  // 0 = unnormalized
};
LatticeWeight weight_w(const GroupElement& x, const GroupElement& y, double eps, double R,
                       int sign, const LatticeProvider& lat, int word_radius,
                       const TauContext& ctx, unsigned seed, int samples);

// Covolume of the genus-2 provider in the library normalization (area of the
// curvature -2 surface times the PSO(2) fiber length).
double genus2_covolume();

// Triple and double products of weight_W per the triconnected /biconnected
// weight definitions.
MonteCarloValue weight_W_tri(const GroupElement& x, const GroupElement& y0, const GroupElement& y1,
                             const GroupElement& y2, double eps, double R, int sign,
                             const TauContext& ctx, unsigned seed, int samples);
MonteCarloValue weight_W_bi(const GroupElement& x, const GroupElement& y0, const GroupElement& y1,
                            double eps, double R, const TauContext& ctx, unsigned seed,
                            int samples);

// Triconnected point: class of (x, y0, y1, y2) = (g, g', a^{-1}g', b g') for
// sign +R and (g, g'', a g'', (ba) g'') for sign -R.
struct TriconnPoint {
  GroupElement g, gp;
  GroupElement a, b;
  int sign = +1;
  std::array<GroupElement, 4> tuple(const TauContext& ctx) const;
};

// Finite-support measure in a declared metric space.
struct DiscreteMeasure {
  std::vector<GroupElement> points;
  std::vector<double> weights;
  std::function<double(const GroupElement&, const GroupElement&)> metric;
  std::string metric_tag;

  double mass() const {
    double s = 0;
    for (double w : weights) s += w;
    return s;
  }
};

// Levy-Prokhorov distance by bisection over delta with a max-flow
// feasibility certificate at each level (closed neighborhoods).
double levy_prokhorov(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2,
                      double bisect_tol = 1e-9);
// Exhaustive-subset oracle (supports <= ~12); same closed-neighborhood
// convention.
double levy_prokhorov_bruteforce(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2,
                                 double bisect_tol = 1e-9);

// Discretized torus averaging check: on T^ell with N^ell atoms and h within
// e^{+-2delta} of its average over the first k coordinates, verifies
// d_LP(h n, hbar n) <= (2^k - 1) delta (l-infinity metric, unit side).
struct TorusCheckReport {
  int trials = 0;
  int violations = 0;
  double worst_margin = 0.0;  // max over trials of required bound - certified bound
};
TorusCheckReport torus_average_check(int N, double delta, int k, int ell, int trials,
                                     unsigned seed);

// Quotient geodesic-flow correlation experiment on a cocompact provider.
struct Observable {
  bool constant = false;
  GroupElement center;  // bump center in G
  double scale = 0.8;
};
struct MixingRow {
  double R = 0;
  double correlation = 0;
  double std_error = 0;
};
struct MixingReport {
  std::vector<MixingRow> rows;
  double fitted_slope = 0.0;  // log-linear fit of |correlation| vs R
};
MixingReport mixing_experiment(const LatticeProvider& lat, const Observable& psi,
                               const Observable& theta, const std::vector<double>& R_grid,
                               int samples, unsigned seed);

// Pushforward of sampled triconnected weights through the foot map, in
// Z_Gamma(alpha)-quotient coordinates on L_alpha.
struct MAlphaResult {
  DiscreteMeasure measure;
  int excluded = 0;              // foot-map domain failures
  double f_factor_mean = 1.0;    // sampled Radon-Nikodym style factor
};
MAlphaResult measure_m_alpha(const std::vector<TriconnPoint>& points, double eps, double R,
                             int sign, const TauContext& ctx, unsigned seed, int samples,
                             const LatticeProvider* lat = nullptr, int word_radius = 0);

// Exact I-transport of a sampled family: supports transported, weights kept.
std::vector<TriconnPoint> flip_family(const std::vector<TriconnPoint>& pts,
                                      const TauContext& ctx);

}  // namespace pantograph
