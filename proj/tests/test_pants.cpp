#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pantograph/pants.hpp"

#include <random>

using namespace pantograph;

namespace {

Mat small_algebra(std::mt19937_64& rng, int n, double mag) {
  std::normal_distribution<double> g(0, 1);
  Mat xi(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) xi(i, j) = cplx(g(rng), g(rng));
  xi -= (xi.trace() / real_t(n)) * Mat::Identity(n, n);
  return xi * (real_t(mag) / xi.norm());
}

// scaled so the averaged metric length is mag
Mat small_algebra_avg(std::mt19937_64& rng, const TauContext& ctx, double mag) {
  Mat xi = small_algebra(rng, ctx.n(), 1.0);
  return xi * real_t(mag / ctx.metric().algebra_norm(xi));
}

}  // namespace

TEST_CASE("almost_realized: exact, perturbed, and contracted-direction rejection") {
  TauContext c3(3, Field::Complex);
  double R = 6.0, eps = 1e-2;
  GeometricData q = perfect_geometric_data(c3, R, +1);

  auto r0 = almost_realized(q.A, q.g, q.gp, eps, R, +1, c3, 1);
  CHECK(r0.accepted);
  for (double v : r0.residuals) CHECK(v < 1e-9);

  // perturb g by eps/2: still accepted
  std::mt19937_64 rng(5);
  GroupElement gp2(q.g.mat() * matrix_exp(small_algebra_avg(rng, c3, eps / 2)), Field::Complex);
  auto r1 = almost_realized(q.A, gp2, q.gp, eps, R, +1, c3, 2);
  CHECK(r1.accepted);

  // replace g' three eps away along the most contracted direction of
  // Ad(step^{-1}): the triangle inequality bounds any witness away
  Mat M = step_multiplier(R, +1, c3);
  Mat Mi = M.inverse();
  Mat best;
  double best_ratio = 1e18;
  for (int k = 0; k < 300; ++k) {
    Mat xi = small_algebra(rng, 3, 1.0);
    double ratio = c3.metric().algebra_norm(Mat(Mi * xi * M)) / c3.metric().algebra_norm(xi);
    if (ratio < best_ratio) {
      best_ratio = ratio;
      best = xi;
    }
  }
  // direction as seen from g': apply after the step so the witness cannot
  // track it. scale to exactly 3 eps in the averaged norm
  Mat zeta = best * (real_t(3.0 * eps) / real_t(c3.metric().algebra_norm(best)));
  GroupElement gp_bad(q.gp.mat() * matrix_exp(zeta), Field::Complex);
  auto r2 = almost_realized(q.A, q.g, gp_bad, eps, R, +1, c3, 3);
  CHECK(!r2.accepted);
}

TEST_CASE("is_almost_perfect: exact data, sym stability, sym order three") {
  TauContext c3(3, Field::Complex);
  double R = 5.0;
  for (int sign : {+1, -1}) {
    GeometricData q = perfect_geometric_data(c3, R, sign);
    q.eps = 1e-3;
    auto rep = is_almost_perfect(q, c3);
    CHECK(rep.accepted);
    GeometricData s = sym(q, c3);
    auto rep2 = is_almost_perfect(s, c3);
    CHECK(rep2.accepted);  // acceptance is sym-stable
    GeometricData s3 = sym(sym(s, c3), c3);
    CHECK(psl_distance(s3.A, q.A) < 1e-9);
    CHECK(psl_distance(s3.g, q.g) < 1e-9 * std::max(1.0, (double)q.g.mat().norm()));
    CHECK(psl_distance(s3.gp, q.gp) < 1e-6 * std::max(1.0, (double)q.gp.mat().norm()));
  }
  // sym commutes with simultaneous left conjugation
  GeometricData q = perfect_geometric_data(c3, R, +1);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::function<double()> unit = [&]() { return u(rng); };
  GroupElement x = c3.tau(random_sl2(unit, Field::Complex));
  GeometricData a = sym(q.left_translated(x), c3);
  GeometricData b = sym(q, c3).left_translated(x);
  CHECK(psl_distance(a.g, b.g) < 1e-8 * std::max(1.0, (double)a.g.mat().norm()));
  CHECK(psl_distance(a.gp, b.gp) < 1e-8 * std::max(1.0, (double)a.gp.mat().norm()));
  // sym of perfect data is the perfect data of the cyclic relabeling
  GeometricData s = sym(q, c3);
  CHECK(psl_distance(s.A, q.B) == doctest::Approx(0.0));
  CHECK(psl_distance(s.B, q.C) == doctest::Approx(0.0));
}

TEST_CASE("proximal consequences: decay in R, lambda bound, elliptic failure") {
  TauContext c3(3, Field::Complex);
  double eps = 1e-3;
  std::vector<double> gaps;
  for (double R : {6.0, 8.0, 10.0, 12.0}) {
    GeometricData q = perfect_geometric_data(c3, R, +1);
    auto pc = proximal_consequences(q.A, q.g, q.gp, eps, R, +1, c3);
    CHECK(pc.proximal);
    CHECK(pc.flag_gap < 10.0 * pc.envelope);
    CHECK(pc.lambda_deviation < 10.0 * pc.envelope);
    gaps.push_back(pc.flag_gap);
  }
  // exact-data flag gaps decay like e^{-R}: log-linear slope about -1
  double slope = (std::log(gaps[3]) - std::log(gaps[0])) / (12.0 - 6.0);
  MESSAGE("flag-gap slope: ", slope);
  CHECK(slope < -0.5);
  CHECK(slope > -1.5);

  // elliptic alpha is declared non-proximal
  Mat k = mat2(std::cos(0.5), -std::sin(0.5), std::sin(0.5), std::cos(0.5));
  auto pc = proximal_consequences(c3.tau(k), GroupElement::identity(3, Field::Complex),
                                  GroupElement::identity(3, Field::Complex), eps, 6.0, +1, c3);
  CHECK(!pc.proximal);
}

TEST_CASE("foot map: fixes L_alpha, LU example, equivariance, idempotence, domain") {
  TauContext c3(3, Field::Complex);
  TauContext c2(2, Field::Complex);
  double R = 6.0;
  GeometricData q = perfect_geometric_data(c3, R, +1);
  FootContext fc = make_foot_context(q.A, c3);

  GroupElement f = foot_map(q.g, fc, c3);
  GroupElement f2 = foot_map(f, fc, c3);
  CHECK(psl_distance(f, f2) < 1e-10 * std::max(1.0, (double)f.mat().norm()));

  // n = 2 explicit LU example: alpha = exp(R h), g upper triangular times diag
  GroupElement a2 = c2.exp_h(2.0);
  FootContext fc2 = make_foot_context(a2, c2);
  double x = 0.05, d = 1.3;
  Mat g2 = mat2(1, x, 0, 1) * mat2(d, 0, 0, 1 / d);
  GroupElement foot2 = foot_map(GroupElement(g2, Field::Complex), fc2, c2);
  CHECK(psl_distance(foot2, GroupElement(mat2(d, 0, 0, 1 / d), Field::Complex)) < 1e-10);

  // equivariance under stab(alpha-, alpha+) = g_alpha Z g_alpha^{-1}
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    std::normal_distribution<double> gg(0, 0.4);
    Mat z = Mat::Zero(3, 3);
    for (int i = 0; i < 3; ++i) z(i, i) = std::exp(cplx(gg(rng), gg(rng)));
    z /= std::pow(z.determinant(), 1.0 / 3.0);
    GroupElement s(fc.base_change.mat() * z * fc.base_change.mat().inverse(), Field::Complex);
    GroupElement lhs = foot_map(s * q.g, fc, c3);
    GroupElement rhs = s * foot_map(q.g, fc, c3);
    CHECK(psl_distance(lhs, rhs) < 1e-8 * std::max(1.0, (double)rhs.mat().norm()));
  }

  // far elements are rejected with a domain error
  GroupElement far(c3.tau(mat2(0, 1, -1, 0)).mat() * q.g.mat(), Field::Complex);
  CHECK_THROWS_AS(foot_map(far, fc, c3), std::domain_error);
}

TEST_CASE("well glued: canonical pair, perturbation scale, invariances") {
  TauContext c3(3, Field::Complex);
  double R = 6.0;
  GeometricData qp = perfect_geometric_data(c3, R, +1);
  GeometricData qm0 = perfect_geometric_data(c3, R, -1);
  GroupElement x = canonical_gluing_translation(qp, qm0, c3);
  GeometricData qm = qm0.left_translated(x);
  qm.A = qp.A;
  qm.C = (qm.B * qm.A).inverse();

  auto rep = well_glued(qp, qm, 1e-9, c3);
  CHECK(rep.structural_ok);
  CHECK(rep.accepted);
  CHECK(rep.defect < 1e-12);

  // boundary replaced by a conjugate: structural error, not tolerance failure
  GeometricData qm_bad = qm;
  GroupElement gamma = c3.tau(mat2(1, 1, 0, 1));
  qm_bad.A = qm.A.conjugate_by(gamma);
  auto rep2 = well_glued(qp, qm_bad, 1e-3, c3);
  CHECK(!rep2.structural_ok);

  // perturb g-: defect about eps'/2
  double epr = 1e-3;
  std::mt19937_64 rng(7);
  GeometricData qm_p = qm;
  Mat xi = small_algebra(rng, 3, 1.0);
  // move along L_alpha-normal coordinates measured by the defect itself
  qm_p.g = GroupElement(qm.g.mat() * matrix_exp(Mat(xi * real_t(epr / 2.0))), Field::Complex);
  auto rep3 = well_glued(qp, qm_p, epr, c3);
  CHECK(rep3.structural_ok);
  CHECK(rep3.defect < epr);
  CHECK(rep3.defect > 0);

  // defect invariant under simultaneous left translation
  std::uniform_real_distribution<double> u(-1, 1);
  std::function<double()> unit = [&]() { return u(rng); };
  GroupElement t = c3.tau(random_sl2(unit, Field::Complex));
  auto rep4 = well_glued(qp.left_translated(t), qm.left_translated(t), 1e-9, c3);
  CHECK(std::fabs(rep4.defect - rep.defect) < 1e-9);
}

TEST_CASE("flip compatibility and I-foot first-order identity") {
  TauContext c3(3, Field::Complex);
  double R = 5.0;
  std::mt19937_64 rng(13);
  int checked = 0;
  for (int t = 0; t < 20; ++t) {
    GeometricData q = perfect_geometric_data(c3, R, +1);
    double mag = 1e-4;
    q.g = GroupElement(q.g.mat() * matrix_exp(small_algebra_avg(rng, c3, mag)), Field::Complex);
    q.gp = GroupElement(q.gp.mat() * matrix_exp(small_algebra_avg(rng, c3, mag)), Field::Complex);
    q.eps = 1e-2;
    auto plus = is_almost_perfect(q, c3, 100 + t);
    GeometricData qf = flip_data(q, c3);
    auto minus = is_almost_perfect(qf, c3, 200 + t);
    CHECK(plus.accepted == minus.accepted);
    checked += plus.accepted;
  }
  CHECK(checked >= 15);

  // I(L_alpha) = L_{alpha^{-1}} and I o Psi = Psi o I to first order
  GeometricData q = perfect_geometric_data(c3, R, +1);
  FootContext fa = make_foot_context(q.A, c3);
  FootContext fai = make_foot_context(q.A.inverse(), c3);
  GroupElement lhs = flip_I(foot_map(q.g, fa, c3), c3);
  GroupElement rhs = foot_map(flip_I(q.g, c3), fai, c3);
  double scale = std::max(1.0, (double)rhs.mat().norm());
  MESSAGE("I-foot agreement: ", psl_distance(lhs, rhs) / scale);
  CHECK(psl_distance(lhs, rhs) / scale < 1e-3);
}

TEST_CASE("one-parameter approximation") {
  TauContext c3(3, Field::Complex);
  double R = 6.0;
  GeometricData q = perfect_geometric_data(c3, R, +1);
  auto op = one_param_approx(q.A, q, c3);
  CHECK(op.closure_error < 1e-10);
  CHECK(op.deviation < std::exp(-R) * 50 + 1e-8);

  // endpoint identity at t = 2R, x = y
  FootContext fc = make_foot_context(q.A, c3);
  GroupElement y = foot_map(q.g, fc, c3);
  GroupElement lhs(y.mat() * c3.phi(2 * R), Field::Complex);
  GroupElement rhs = q.A * y;
  double direct = c3.metric().distance(lhs, rhs);
  CHECK(std::fabs(op.deviation_endpoint - direct) < 1e-10);

  // deviation envelope over an (eps, R) grid with stable fitted constant
  std::mt19937_64 rng(17);
  double cmin = 1e18, cmax = 0;
  for (double RR : {5.0, 7.0, 9.0}) {
    for (double mag : {1e-4, 1e-3}) {
      GeometricData qq = perfect_geometric_data(c3, RR, +1);
      qq.g = GroupElement(qq.g.mat() * matrix_exp(small_algebra(rng, 3, mag)), Field::Complex);
      auto o = one_param_approx(qq.A, qq, c3);
      double envelope = mag / RR + std::exp(-RR);
      double c = o.deviation / envelope;
      cmin = std::min(cmin, c);
      cmax = std::max(cmax, c);
    }
  }
  MESSAGE("one-param fitted constant range: ", cmin, " .. ", cmax);
  CHECK(cmax < 500.0);
}
