#include "pantograph/pants.hpp"

#include <cmath>
#include <numeric>

namespace pantograph {

namespace {

double safe_distance(const GroupMetric& m, const GroupElement& x, const GroupElement& y) {
  try {
    return m.distance(x, y);
  } catch (const std::domain_error&) {
    return std::numeric_limits<double>::infinity();
  }
}

Mat step_mat(double R, int sign, const TauContext& ctx) { return step_multiplier(R, sign, ctx); }

}  // namespace

GeometricData perfect_geometric_data(const TauContext& ctx, double R, int sign,
                                     const Mat& frame2) {
  PantsRep p = r_perfect_pants(R, sign, frame2);
  GeometricData q{ctx.tau(p.A), ctx.tau(p.B), ctx.tau(p.C), ctx.tau(p.T), ctx.tau(p.Tprime),
                  0.0,          R,            sign};
  return q;
}

double relation_residual(const GeometricData& q) {
  GroupElement ba = q.B * q.A;
  return psl_distance(q.C * ba, GroupElement::identity(q.A.n(), q.A.field()));
}

GeometricData sym(const GeometricData& q, const TauContext& ctx) {
  GeometricData out = q;
  out.A = q.B;
  out.B = q.C;
  out.C = q.A;
  out.g = rot_pow(q.g, q.sign, ctx);
  out.gp = q.B * rot_pow(q.gp, 2 * q.sign, ctx);
  return out;
}

WitnessResult almost_realized(const GroupElement& alpha, const GroupElement& g,
                              const GroupElement& gp, double eps, double R, int sign,
                              const TauContext& ctx, unsigned seed, int budget) {
  if (!(eps > 0) || !(R > 0)) throw std::invalid_argument("almost_realized: eps, R > 0 required");
  const GroupMetric& m = ctx.metric();
  const Mat M = step_mat(R, sign, ctx);
  const Mat Mi = M.inverse();
  const Field f = g.field();
  GroupElement ag = alpha * g;

  auto residuals = [&](const GroupElement& h, const GroupElement& hp) {
    std::array<double, 4> r;
    r[0] = safe_distance(m, g, h);
    r[1] = safe_distance(m, GroupElement(h.mat() * M, f), gp);
    r[2] = safe_distance(m, gp, hp);
    r[3] = safe_distance(m, GroupElement(hp.mat() * M, f), ag);
    return r;
  };
  auto score = [](const std::array<double, 4>& r) {
    return std::max(std::max(r[0], r[1]), std::max(r[2], r[3]));
  };

  WitnessResult best;
  best.seed = seed;
  auto consider = [&](const GroupElement& h, const GroupElement& hp) {
    auto r = residuals(h, hp);
    ++best.evaluations;
    double s = score(r);
    if (best.evaluations == 1 || s < score(best.residuals)) {
      best.h = h;
      best.hp = hp;
      best.residuals = r;
    }
    return s;
  };

  // Candidate witnesses: the data itself, the step pullbacks, and the
  // interpolation family between them (the pullback direction is strongly
  // contracted by the step, so a small motion along it balances the four
  // residuals).
  GroupElement pull_h(gp.mat() * Mi, f), pull_hp(ag.mat() * Mi, f);
  // Non-expanding spectral projector of Ad(M): the residual toward the step
  // image only sees the Ad(M^{-1})-expanded components, so a witness keeps
  // exactly those components of the pullback direction.
  const int n2 = g.n() * g.n();
  Mat admat(n2, n2);
  {
    for (int j = 0; j < g.n(); ++j)
      for (int i = 0; i < g.n(); ++i) {
        Mat e = Mat::Zero(g.n(), g.n());
        e(i, j) = 1.0;
        Mat img = M * e * Mi;
        for (int jj = 0; jj < g.n(); ++jj)
          for (int ii = 0; ii < g.n(); ++ii) admat(jj * g.n() + ii, j * g.n() + i) = img(ii, jj);
      }
  }
  Eigen::ComplexEigenSolver<Mat> ad_es(admat, true);
  auto project_nonexpanding = [&](const Mat& zeta) {
    Vec v(n2);
    for (int j = 0; j < g.n(); ++j)
      for (int i = 0; i < g.n(); ++i) v(j * g.n() + i) = zeta(i, j);
    Vec c = ad_es.eigenvectors().colPivHouseholderQr().solve(v);
    for (int k = 0; k < n2; ++k)
      if (std::abs(ad_es.eigenvalues()(k)) > 1.0001) c(k) = 0.0;
    Vec w = ad_es.eigenvectors() * c;
    Mat out(g.n(), g.n());
    for (int j = 0; j < g.n(); ++j)
      for (int i = 0; i < g.n(); ++i) out(i, j) = w(j * g.n() + i);
    out -= (out.trace() / real_t(g.n())) * Mat::Identity(g.n(), g.n());
    return out;
  };
  auto family = [&](const GroupElement& a, const GroupElement& b) {
    std::vector<GroupElement> out = {a, b};
    try {
      Mat zeta = psl_log(GroupElement(a.mat().inverse() * b.mat(), f));
      out.emplace_back(a.mat() * matrix_exp(project_nonexpanding(zeta)), f);
      for (double t : {0.03, 0.1, 0.3, 0.6})
        out.emplace_back(a.mat() * matrix_exp(Mat(real_t(t) * zeta)), f);
    } catch (const std::domain_error&) {
    }
    return out;
  };
  std::vector<GroupElement> hc = family(g, pull_h);
  std::vector<GroupElement> hpc = family(gp, pull_hp);
  for (const auto& h1 : hc)
    for (const auto& h2 : hpc) {
      if (consider(h1, h2) < eps) {
        best.accepted = true;
        return best;
      }
    }

  // Local descent around the best candidate.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = g.n();
  const bool cx = (f == Field::Complex);
  double step = 0.5 * eps;
  GroupElement h = best.h, hp = best.hp;
  double cur = score(best.residuals);
  while (best.evaluations < budget) {
    auto bump = [&](const GroupElement& x) {
      Mat xi = Mat::Zero(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) xi(i, j) = cplx(gauss(rng), cx ? gauss(rng) : 0.0);
      xi -= (xi.trace() / real_t(n)) * Mat::Identity(n, n);
      xi *= real_t(step) / std::max<real_t>(1e-12L, xi.norm());
      return GroupElement(x.mat() * matrix_exp(xi), f);
    };
    GroupElement h2 = bump(h), hp2 = bump(hp);
    auto r2 = residuals(h2, hp2);
    ++best.evaluations;
    double s2 = score(r2);
    if (s2 < cur) {
      cur = s2;
      h = h2;
      hp = hp2;
      best.h = h;
      best.hp = hp;
      best.residuals = r2;
      if (s2 < eps) {
        best.accepted = true;
        return best;
      }
    } else {
      step *= 0.8;
      if (step < 1e-4 * eps) step = 0.5 * eps;
    }
  }
  best.accepted = score(best.residuals) < eps;
  return best;
}

AlmostPerfectReport is_almost_perfect(const GeometricData& q, const TauContext& ctx, unsigned seed,
                                      int budget) {
  AlmostPerfectReport rep;
  const int s = q.sign;
  GroupElement rg = rot_pow(q.g, s, ctx);
  GroupElement r2g = rot_pow(q.g, 2 * s, ctx);
  GroupElement rgp = rot_pow(q.gp, s, ctx);
  GroupElement r2gp = rot_pow(q.gp, 2 * s, ctx);
  rep.conditions[0] = almost_realized(q.A, q.g, q.gp, q.eps, q.R, s, ctx, seed, budget);
  rep.conditions[1] =
      almost_realized(q.B, rg, q.B * r2gp, q.eps, q.R, s, ctx, seed + 1, budget);
  rep.conditions[2] =
      almost_realized(q.C, r2g, q.A.inverse() * rgp, q.eps, q.R, s, ctx, seed + 2, budget);
  rep.accepted = rep.conditions[0].accepted && rep.conditions[1].accepted &&
                 rep.conditions[2].accepted;
  return rep;
}

ProximalConsequences proximal_consequences(const GroupElement& alpha, const GroupElement& g,
                                           const GroupElement& gp, double eps, double R, int sign,
                                           const TauContext& ctx) {
  ProximalConsequences out;
  out.envelope = eps + std::exp(-R / 2.0);
  auto pd = proximal_data(alpha, ctx.tol().prox);
  if (!pd) return out;
  out.proximal = true;

  GroupElement conj(g.mat().inverse() * alpha.mat() * g.mat(), alpha.field());
  auto pdc = proximal_data(conj, ctx.tol().prox);
  if (!pdc) return out;
  const Flag& target =
      (sign > 0) ? ctx.veronese_flag(p1_infinity()) : ctx.veronese_flag(0.0);
  out.flag_gap = flag_distance(pdc->attracting, target, ctx.flag_metric());

  CartanVector lam = jordan_projection(alpha);
  CartanVector ref;
  for (long long d : ctx.h_diag_ints()) ref.v.push_back(R * double(d));
  out.lambda_deviation = lam.distance(ref);

  // One-sided membership certificate: g1 tau(h_{sR}) g2 with (g1,g2) the
  // cheaper of the two trivial splits.
  Mat M = step_mat(R, sign, ctx);
  GroupElement u1(g.mat().inverse() * gp.mat() * M.inverse(), alpha.field());
  GroupElement u2(M.inverse() * g.mat().inverse() * gp.mat(), alpha.field());
  GroupElement id = GroupElement::identity(alpha.n(), alpha.field());
  out.membership_radius =
      std::min(safe_distance(ctx.metric(), u1, id), safe_distance(ctx.metric(), u2, id));
  return out;
}

FootContext make_foot_context(const GroupElement& alpha, const TauContext& ctx, double radius) {
  auto pd = proximal_data(alpha, ctx.tol().prox);
  if (!pd) throw std::domain_error("make_foot_context: alpha is not proximal at tolerance");
  Eigen::ComplexEigenSolver<Mat> es(alpha.mat(), true);
  if (es.info() != Eigen::Success) throw std::runtime_error("make_foot_context: eigensolver failed");
  const int n = alpha.n();
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return std::abs(es.eigenvalues()(a)) > std::abs(es.eigenvalues()(b));
  });
  for (int i = 0; i + 1 < n; ++i) {
    double gap = std::log(std::abs(es.eigenvalues()(idx[i]))) -
                 std::log(std::abs(es.eigenvalues()(idx[i + 1])));
    if (!(gap > ctx.tol().prox))
      throw std::domain_error("make_foot_context: alpha is not proximal at tolerance");
  }
  Mat ga(n, n);
  for (int k = 0; k < n; ++k) ga.col(k) = es.eigenvectors().col(idx[k]);
  GroupElement base(ga, alpha.field());
  base.normalize();
  FootContext fc;
  fc.alpha = alpha;
  fc.base_change = base;
  Mat chain_att(n, n - 1), chain_rep(n, n - 1);
  for (int k = 0; k < n - 1; ++k) {
    chain_att.col(k) = ga.col(k);
    chain_rep.col(k) = ga.col(n - 1 - k);
  }
  fc.attracting = Flag::from_chain(chain_att);
  fc.repelling = Flag::from_chain(chain_rep);
  fc.radius = radius;
  return fc;
}

GroupElement foot_map(const GroupElement& g, const FootContext& fc, const TauContext& ctx) {
  const int n = g.n();
  Mat gi = g.mat().inverse();
  double d_rep = flag_distance(fc.repelling.acted_by(gi), ctx.veronese_flag(0.0), ctx.flag_metric());
  double d_att =
      flag_distance(fc.attracting.acted_by(gi), ctx.veronese_flag(p1_infinity()), ctx.flag_metric());
  if (d_rep > fc.radius || d_att > fc.radius)
    throw std::domain_error("foot_map: element outside the U_alpha neighborhood (flag distances " +
                            std::to_string(d_rep) + ", " + std::to_string(d_att) + ")");

  Mat h = fc.base_change.mat().inverse() * g.mat();
  // Doolittle LDU without pivoting; breakdown = vanishing principal minor.
  Mat L = Mat::Identity(n, n), U = h;
  for (int k = 0; k < n; ++k) {
    if (std::abs(U(k, k)) < real_t(1e-12L) * h.norm())
      throw std::domain_error("foot_map: Bruhat factorization breakdown (vanishing minor)");
    for (int i = k + 1; i < n; ++i) {
      cplx f = U(i, k) / U(k, k);
      L(i, k) = f;
      U.row(i) -= f * U.row(k);
    }
  }
  Mat D = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) D(i, i) = U(i, i);
  return GroupElement(fc.base_change.mat() * D, g.field());
}

GluingReport well_glued(const GeometricData& qp, const GeometricData& qm, double eps_prime,
                        const TauContext& ctx) {
  GluingReport rep;
  if (qp.sign != +1 || qm.sign != -1) {
    rep.error = "well_glued: expected signs (+R, -R)";
    return rep;
  }
  double scale = std::max<double>(1.0, (double)qp.A.mat().norm());
  if (psl_distance(qp.A, qm.A) > ctx.tol().alg * scale) {
    rep.error = "boundary mismatch: A+ != A- (distance " +
                std::to_string(psl_distance(qp.A, qm.A)) + ")";
    return rep;
  }
  rep.structural_ok = true;
  GroupElement alpha = qp.A;
  FootContext fa = make_foot_context(alpha, ctx);
  FootContext fai = make_foot_context(alpha.inverse(), ctx);
  GroupElement foot_p = foot_map(qp.g, fa, ctx);
  GroupElement foot_m = foot_map(qm.g, fai, ctx);
  GroupElement shifted(foot_m.mat() * ctx.inv_j() * ctx.phi(1.0L), alpha.field());
  rep.defect = ctx.metric().distance(foot_p, shifted);
  rep.accepted = rep.defect < eps_prime;
  return rep;
}

GroupElement canonical_gluing_translation(const GeometricData& q_parent,
                                          const GeometricData& q_child_base,
                                          const TauContext& ctx) {
  if (q_parent.sign == q_child_base.sign)
    throw std::invalid_argument("canonical_gluing_translation: signs must be opposite");
  GroupElement alpha = q_parent.A;
  FootContext f_own = make_foot_context(q_parent.sign > 0 ? alpha : alpha.inverse(), ctx);
  GroupElement foot_parent = foot_map(q_parent.g, f_own, ctx);
  // Well-gluing ties Psi_alpha(g+) = Psi_{alpha^{-1}}(g-) * J * Phi_1.
  GroupElement foot_target =
      (q_parent.sign > 0)
          ? GroupElement(foot_parent.mat() * (ctx.inv_j() * ctx.phi(1.0)).inverse(),
                         alpha.field())
          : GroupElement(foot_parent.mat() * ctx.inv_j() * ctx.phi(1.0), alpha.field());
  GroupElement a0 = q_child_base.A;
  FootContext f_child =
      make_foot_context(q_child_base.sign > 0 ? a0 : a0.inverse(), ctx);
  GroupElement foot_child = foot_map(q_child_base.g, f_child, ctx);
  return GroupElement(foot_target.mat() * foot_child.mat().inverse(), alpha.field());
}

OneParamData one_param_approx(const GroupElement& alpha, const GeometricData& q,
                              const TauContext& ctx, int t_samples, int x_samples) {
  const int n = alpha.n();
  FootContext fc = make_foot_context(q.sign > 0 ? alpha : alpha.inverse(), ctx);
  GroupElement y = foot_map(q.g, fc, ctx);
  Mat z = matrix_exp(real_t(-q.R) * ctx.h_element()) * y.mat().inverse() * alpha.mat() * y.mat();
  // z is diagonal for y on L_alpha; log it entrywise, traceless mod center.
  Mat v = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    cplx d = z(i, i);
    if ((double)std::abs(real_t(M_PIl) - std::abs(std::arg(d))) < 1e-9)
      throw std::domain_error("one_param_approx: principal log out of domain");
    v(i, i) = std::log(d);
  }
  v -= (v.trace() / real_t(n)) * Mat::Identity(n, n);
  v /= real_t(2.0L * q.R);

  OneParamData out;
  out.base = y;
  out.generator = 0.5 * ctx.h_element() + v;
  Mat a2R = y.mat() * matrix_exp(real_t(2.0L * q.R) * out.generator) * y.mat().inverse();
  out.closure_error = psl_distance(GroupElement(a2R, alpha.field()), alpha) /
                      std::max<double>(1.0, (double)alpha.mat().norm());

  // Deviation sup over a (t, x) grid on [0, 2R] x L_alpha.
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<GroupElement> xs;
  xs.push_back(y);
  for (int k = 1; k < x_samples; ++k) {
    Mat d = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
      d(i, i) = cplx(0.3 * gauss(rng), alpha.field() == Field::Complex ? 0.3 * gauss(rng) : 0.0);
    d -= (d.trace() / real_t(n)) * Mat::Identity(n, n);
    xs.emplace_back(y.mat() * matrix_exp(d), alpha.field());
  }
  double dev = 0.0;
  for (int it = 0; it <= t_samples; ++it) {
    double t = 2.0 * q.R * double(it) / double(t_samples);
    Mat at = y.mat() * matrix_exp(real_t(t) * out.generator) * y.mat().inverse();
    for (auto& x : xs) {
      GroupElement lhs(x.mat() * ctx.phi(t), alpha.field());
      GroupElement rhs(at * x.mat(), alpha.field());
      dev = std::max(dev, safe_distance(ctx.metric(), lhs, rhs));
      if (it == t_samples && (&x == &xs.front()))
        out.deviation_endpoint = safe_distance(ctx.metric(), lhs, rhs);
    }
  }
  out.deviation = dev;
  return out;
}

GeometricData flip_data(const GeometricData& q, const TauContext& ctx) {
  GeometricData out = q;
  out.g = flip_I(q.g, ctx);
  out.gp = flip_I(q.gp, ctx);
  out.sign = -q.sign;
  return out;
}

}  // namespace pantograph
