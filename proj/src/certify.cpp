#include "pantograph/certify.hpp"

#include <cmath>
#include <random>

namespace pantograph {

namespace {

std::pair<double, double> axis_endpoints2(const Mat& g) {
  double a = (double)g(0, 0).real(), b = (double)g(0, 1).real();
  double c = (double)g(1, 0).real(), d = (double)g(1, 1).real();
  if (std::fabs(c) < 1e-14) {
    double other = std::fabs(d - a) < 1e-14 ? p1_infinity() : b / (d - a);
    bool inf_attracting = std::fabs(a) > std::fabs(d);
    return inf_attracting ? std::make_pair(other, p1_infinity())
                          : std::make_pair(p1_infinity(), other);
  }
  double tr = a + d;
  double disc = std::sqrt(std::max(0.0, tr * tr - 4.0));
  double l1 = (tr + disc) / 2.0, l2 = (tr - disc) / 2.0;
  double x1 = (l1 - d) / c, x2 = (l2 - d) / c;
  return std::fabs(l1) > std::fabs(l2) ? std::make_pair(x2, x1) : std::make_pair(x1, x2);
}

}  // namespace

SampledBoundaryMap boundary_map(const std::vector<GroupElement>& target_gens,
                                const RPerfectSurfaceRep& reference, const TauContext& ctx,
                                int depth, int max_samples) {
  SampledBoundaryMap out;
  ThetaWords tw = theta_words(reference.rep);
  TauContext c2(2, Field::Complex);
  std::vector<double> seen;
  for (size_t k = 0; k < reference.rep.nodes.size() && int(out.points.size()) < max_samples; ++k) {
    const auto& nd = reference.rep.nodes[k];
    if (nd.depth > depth) continue;
    GeometricData q = nd.lift;
    for (int m = 0; m < 3; ++m) {
      if (m > 0) q = sym(q, c2);
      auto [rp, at] = axis_endpoints2(unembed2(q.A.mat()));
      (void)rp;
      bool dup = false;
      for (double s : seen)
        if (p1_distance(s, at) < 1e-9) dup = true;
      if (dup) continue;
      Word w = tw.boundary(reference.rep, int(k), m);
      GroupElement img = word_eval(w, target_gens);
      auto pd = proximal_data(img, ctx.tol().prox);
      if (!pd) {
        ++out.excluded_nonproximal;
        continue;
      }
      seen.push_back(at);
      out.points.push_back(at);
      out.flags.push_back(pd->attracting);
      out.words.push_back(w);
      if (int(out.points.size()) >= max_samples) break;
    }
  }
  return out;
}

namespace {

// One-dimensional intersection of V_k(F1) and V_{n-k+1}(F2) via the product
// of orthogonal projectors.
Vec flag_intersection(const Flag& f1, const Flag& f2, int k) {
  const int n = f1.n();
  Mat pa = (k == n) ? Mat::Identity(n, n) : f1.projector(k);
  int k2 = n - k + 1;
  Mat pb = (k2 == n) ? Mat::Identity(n, n) : f2.projector(k2);
  Mat m = pa * pb * pa;
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  return es.eigenvectors().col(n - 1);  // eigenvector of the largest eigenvalue
}

// Element mapping the standard triple (tau(0), tau(inf), tau(-1)) to the
// given flag triple; exact when the flags lie on a common tau-circle.
Mat initial_aligner(const TauContext& ctx, const Flag& F0, const Flag& Finf, const Flag& Fm1) {
  const int n = ctx.n();
  // g maps the standard ascending flag (tau(inf)) to Finf and the descending
  // one (tau(0)) to F0: column k spans V_k(Finf) cap V_{n-k+1}(F0).
  Mat V(n, n);
  for (int k = 1; k <= n; ++k) V.col(k - 1) = flag_intersection(Finf, F0, k);
  // Diagonal fixed by the first line of Fm1: D * (binomial line of tau(-1)).
  Vec target = V.inverse() * Fm1.basis().col(0);
  Vec binom(n);
  double c = 1.0;
  for (int i = 0; i < n; ++i) {
    binom(i) = cplx(c, 0.0);
    c = c * double(n - 1 - i) / double(i + 1);
  }
  Mat D = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) D(i, i) = target(i) / binom(i);
  Mat g = V * D;
  cplx det = g.determinant();
  g /= std::pow(det, 1.0 / double(n));
  return g;
}

}  // namespace

SullivanReport sullivan_check(const SampledBoundaryMap& xi, const TauContext& ctx, int triple_grid,
                              int aligner_budget, unsigned seed) {
  if (xi.points.size() < 16) throw std::invalid_argument("sullivan_check: need >= 16 samples");
  SullivanReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::function<double()> unit = [&]() { return u(rng); };
  const int n = ctx.n();
  const int nsamp = int(xi.points.size());
  const FlagMetric& fm = ctx.flag_metric();

  // Global aligner for the identity triple: flag-matching init from three
  // well-separated samples, then descent.  For every other triple h the
  // composition g_hat * tau(h) is the exact aligner when the samples lie on
  // a tau-circle, and an excellent start otherwise.
  auto nearest = [&](double p) {
    int best = 0;
    double bd = 1e18;
    for (int i = 0; i < nsamp; ++i) {
      double d = p1_distance(p, xi.points[i]);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    return best;
  };
  // g_hat maps the standard circle to the sampled one: it is composed from
  // the triple-matching elements of the sampled flags and of the reference
  // circle flags at the same anchor points.
  Mat g_hat;
  {
    int a0 = nearest(0.0), ai = nearest(p1_infinity()), am = nearest(-1.0);
    try {
      Mat ms = initial_aligner(ctx, xi.flags[a0], xi.flags[ai], xi.flags[am]);
      Mat mt = initial_aligner(ctx, ctx.veronese_flag(xi.points[a0]),
                               ctx.veronese_flag(xi.points[ai]),
                               ctx.veronese_flag(xi.points[am]));
      g_hat = ms * mt.inverse();
    } catch (...) {
      g_hat = Mat::Identity(n, n);
    }
  }
  {
    std::vector<Flag> id_targets;
    for (int i = 0; i < nsamp; ++i) id_targets.push_back(ctx.veronese_flag(xi.points[i]));
    auto obj = [&](const Mat& gg) {
      Mat gi = gg.inverse();
      double worst = 0;
      try {
        for (int i = 0; i < nsamp; ++i)
          worst = std::max(worst, flag_distance(xi.flags[i].acted_by(gi), id_targets[i], fm));
      } catch (const std::invalid_argument&) {
        return std::numeric_limits<double>::infinity();
      }
      return worst;
    };
    std::normal_distribution<double> gauss(0.0, 1.0);
    double cur = obj(g_hat), step = 0.2 * cur + 1e-9;
    for (int e = 0; e < aligner_budget; ++e) {
      Mat zeta = Mat::Zero(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) zeta(i, j) = cplx(gauss(rng), gauss(rng));
      zeta -= (zeta.trace() / real_t(n)) * Mat::Identity(n, n);
      zeta *= real_t(step) / std::max<real_t>(1e-15L, zeta.norm());
      Mat g2 = g_hat * matrix_exp(zeta);
      double v = obj(g2);
      if (v < cur) {
        cur = v;
        g_hat = g2;
        step *= 1.3;
      } else {
        step *= 0.7;
        if (step < 1e-12) step = 0.05 * cur + 1e-12;
      }
    }
  }

  for (int t = 0; t < triple_grid; ++t) {
    // Quasi-uniform triples with a strongly degenerate tail.
    Mat h = random_sl2(unit, Field::Real, 1.0).real().cast<cplx>();
    if (t % 3 == 2) {
      double lam = std::exp(1.0 + 1.5 * (u(rng) + 1.0));
      Mat squeeze = mat2(lam, 0, 0, 1.0 / lam);
      h = h * squeeze;
    }
    Mat hinv = h.inverse();
    std::vector<Flag> targets;
    targets.reserve(nsamp);
    for (int i = 0; i < nsamp; ++i)
      targets.push_back(ctx.veronese_flag(moebius_p1(hinv, xi.points[i])));

    Mat g = g_hat * ctx.tau(h).mat();

    auto objective = [&](const Mat& gg) {
      Mat gi = gg.inverse();
      double worst = 0;
      try {
        for (int i = 0; i < nsamp; ++i)
          worst = std::max(worst, flag_distance(xi.flags[i].acted_by(gi), targets[i], fm));
      } catch (const std::invalid_argument&) {
        return std::numeric_limits<double>::infinity();
      }
      return worst;
    };
    double cur = objective(g);
    if (!std::isfinite(cur)) {
      g = Mat::Identity(n, n);
      cur = objective(g);
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    double step = 0.2 * cur + 1e-9;
    int evals = 1;
    while (evals < aligner_budget) {
      Mat zeta = Mat::Zero(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) zeta(i, j) = cplx(gauss(rng), gauss(rng));
      zeta -= (zeta.trace() / real_t(n)) * Mat::Identity(n, n);
      zeta *= real_t(step) / std::max<real_t>(1e-15L, zeta.norm());
      Mat g2 = g * matrix_exp(zeta);
      double v = objective(g2);
      ++evals;
      if (v < cur) {
        cur = v;
        g = g2;
        step *= 1.3;
      } else {
        step *= 0.7;
        if (step < 1e-12) step = 0.05 * cur + 1e-12;
      }
    }
    rep.per_triple.push_back(cur);
    rep.delta_hat = std::max(rep.delta_hat, cur);
  }

  // Empirical Hoelder modulus from sample pairs (identity frame).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int i = 0; i < nsamp; i += 2)
    for (int j = i + 1; j < nsamp; j += 3) {
      double dp = p1_distance(xi.points[i], xi.points[j]);
      double df = flag_distance(xi.flags[i], xi.flags[j], fm);
      if (dp < 1e-9 || df < 1e-12) continue;
      double lx = std::log(dp), ly = std::log(df);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++m;
    }
  if (m > 4) {
    rep.holder_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.holder_constant = std::exp((sy - rep.holder_exponent * sx) / m);
  }
  return rep;
}

namespace {

// Quantified transversality of two flags: the smallest singular value over
// the stacked-stage bases ([V_k(F) | V_{n-k}(F')] must be invertible for
// every k).  Metric balls are not enough at n >= 3: a flag can be far from
// F' and still share a partial incidence with it.
double flag_transversality(const Flag& a, const Flag& b) {
  const int n = a.n();
  double worst = 1e18;
  for (int k = 1; k <= n - 1; ++k) {
    Mat m(n, n);
    m.leftCols(k) = a.basis().leftCols(k);
    m.rightCols(n - k) = b.basis().leftCols(n - k);
    Eigen::JacobiSVD<Mat> svd(m);
    worst = std::min(worst, (double)svd.singularValues()(n - 1));
  }
  return worst;
}

}  // namespace

SchottkyCertificate schottky_certificate(const std::vector<GroupElement>& generators,
                                         const TauContext& ctx, double neighborhood_radius,
                                         int net_size, unsigned seed) {
  SchottkyCertificate cert;
  const int n = ctx.n();
  const FlagMetric& fm = ctx.flag_metric();
  struct Pole {
    GroupElement g;
    Flag att, rep;
  };
  std::vector<Pole> poles;
  for (const auto& g : generators) {
    auto pd = proximal_data(g, ctx.tol().prox);
    if (!pd) {
      cert.failure = "missing proximal data for a generator";
      return cert;
    }
    poles.push_back({g, pd->attracting, pd->repelling});
  }
  std::vector<Flag> fixed;
  for (auto& p : poles) {
    fixed.push_back(p.att);
    fixed.push_back(p.rep);
  }
  double min_tv = 1e18;
  for (size_t i = 0; i < fixed.size(); ++i)
    for (size_t j = i + 1; j < fixed.size(); ++j)
      min_tv = std::min(min_tv, flag_transversality(fixed[i], fixed[j]));
  cert.transversality_margin = min_tv;
  if (!(min_tv > 1e-6)) {
    cert.failure = "fixed flags not transverse (coincident or incident poles)";
    return cert;
  }
  // Repelling neighborhoods are sublevel sets of the transversality margin;
  // attracting neighborhoods are metric balls.
  double m0 = 0.4 * min_tv;
  double minsep = 1e18;
  for (size_t i = 0; i < fixed.size(); ++i)
    for (size_t j = i + 1; j < fixed.size(); ++j)
      minsep = std::min(minsep, flag_distance(fixed[i], fixed[j], fm));
  double r = neighborhood_radius > 0 ? neighborhood_radius : 0.3 * minsep;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_flag = [&]() {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = cplx(gauss(rng), gauss(rng));
    return Flag::from_chain(m.leftCols(n - 1));
  };

  double worst_contr = 0, worst_incl = 0, worst_pong = 0;
  struct Side {
    GroupElement g;
    const Flag* rep;
    const Flag* att;
  };
  std::vector<Side> sides;
  for (auto& p : poles) {
    sides.push_back({p.g, &p.rep, &p.att});
    sides.push_back({p.g.inverse(), &p.att, &p.rep});
  }
  for (size_t si = 0; si < sides.size(); ++si) {
    const Side& s = sides[si];
    std::vector<Flag> net;
    std::vector<Flag> images;
    int tries = 0;
    while (int(net.size()) < net_size && tries < 60 * net_size) {
      ++tries;
      Flag f = random_flag();
      if (flag_transversality(f, *s.rep) <= m0) continue;  // repelling nbhd
      net.push_back(f);
      images.push_back(f.acted_by(s.g.mat()));
    }
    for (size_t i = 0; i < net.size(); ++i) {
      double din = flag_distance(images[i], *s.att, fm);
      worst_incl = std::max(worst_incl, din / r);
      // ping-pong closure: the image must stay in the domain of every side
      // except the inverse of the one just applied
      for (size_t sj = 0; sj < sides.size(); ++sj) {
        if (sj == (si ^ 1)) continue;
        double tvi = flag_transversality(images[i], *sides[sj].rep);
        worst_pong = std::max(worst_pong, m0 / std::max(tvi, 1e-300));
      }
      if (i + 1 < net.size()) {
        double d0 = flag_distance(net[i], net[i + 1], fm);
        double d1 = flag_distance(images[i], images[i + 1], fm);
        if (d0 > 1e-9) worst_contr = std::max(worst_contr, d1 / d0);
      }
    }
  }
  cert.worst_contraction = worst_contr;
  cert.worst_inclusion = worst_incl;
  if (worst_incl >= 1.0)
    cert.failure = "image of a complement point leaves the attracting neighborhood";
  else if (worst_pong >= 1.0)
    cert.failure = "image of a complement point re-enters another repelling neighborhood";
  else if (worst_contr >= 1.0)
    cert.failure = "sampled contraction factor >= 1";
  cert.certified = cert.failure.empty();
  return cert;
}

CrossRatioReport cross_ratio_qs_check(const std::function<cplx(double)>& xi, int quadruples,
                                      unsigned seed) {
  CrossRatioReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::function<double()> unit = [&]() { return u(rng); };
  auto toh = [](cplx z) -> std::array<cplx, 2> {
    if (std::abs(z) > 1e12) return {cplx(1, 0), cplx(0, 0)};
    return {z, cplx(1, 0)};
  };
  auto cross = [&](cplx w, cplx x, cplx y, cplx z) -> cplx {
    auto W = toh(w), X = toh(x), Y = toh(y), Z = toh(z);
    auto d = [](const std::array<cplx, 2>& a, const std::array<cplx, 2>& b) {
      return a[0] * b[1] - a[1] * b[0];
    };
    cplx num = d(W, Y) * d(X, Z);
    cplx den = d(W, Z) * d(X, Y);
    if (std::abs(den) < 1e-14) throw std::domain_error("degenerate quadruple");
    return num / den;
  };
  for (int k = 0; k < quadruples; ++k) {
    Mat h = random_sl2(unit, Field::Real, 1.2).real().cast<cplx>();
    double w = moebius_p1(h, 0.0), x = moebius_p1(h, p1_infinity());
    double y = moebius_p1(h, 1.0), z = moebius_p1(h, -1.0);
    try {
      cplx cr = cross(xi(w), xi(x), xi(y), xi(z));
      double m = std::abs(cr);
      if (m < 1e-12) throw std::domain_error("degenerate image");
      rep.k_hat = std::max({rep.k_hat, m, 1.0 / m});
    } catch (const std::domain_error&) {
      ++rep.degenerate_skipped;
    }
  }
  return rep;
}

}  // namespace pantograph
