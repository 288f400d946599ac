#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pantograph/cartan.hpp"
#include "pantograph/tau.hpp"
#include "pantograph/transforms.hpp"

#include <random>

using namespace pantograph;

namespace {

std::function<double()> unit_source(std::mt19937_64& rng) {
  return [&rng]() {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return u(rng);
  };
}

// Test-side symbolic oracle for the symmetric-power action: polynomials with
// rational coefficients over X^{i-1} Y^{n-i}, substitution P -> P(h^{-1} v).
std::vector<std::vector<long long>> sym_power_oracle_unipotent(int n, long long t) {
  // h = [[1, t],[0, 1]], h^{-1} = [[1, -t],[0, 1]]: X -> X - tY, Y -> Y.
  // e_j = X^{j-1} Y^{n-j} -> (X - tY)^{j-1} Y^{n-j}
  std::vector<std::vector<long long>> cols;
  for (int j = 1; j <= n; ++j) {
    std::vector<long long> col(n, 0);
    // (X - tY)^{j-1} = sum_k C(j-1,k) X^k (-t)^{j-1-k} Y^{j-1-k}
    long long binom = 1;
    for (int k = j - 1; k >= 0; --k) {
      long long sign_pow = 1;
      for (int p = 0; p < j - 1 - k; ++p) sign_pow *= -t;
      // X^k Y^{n-1-k} = e_{k+1}
      long long c = 1;  // C(j-1, k)
      for (int p = 1; p <= k; ++p) c = c * (j - 1 - k + p) / p;
      col[k] = c * sign_pow;
      (void)binom;
    }
    cols.push_back(col);
  }
  return cols;
}

}  // namespace

TEST_CASE("tau embedding: homomorphism and h-element") {
  std::mt19937_64 rng(101);
  auto unit = unit_source(rng);
  for (int n : {2, 3, 5}) {
    TauContext ctx(n, Field::Complex);
    // h = dtau(diag(1,-1)) equals (n-1, n-3, ..., -(n-1)) exactly
    auto d = ctx.h_diag_ints();
    for (int i = 0; i < n; ++i) CHECK(d[i] == n - 1 - 2 * i);
    CHECK(ctx.h_regular());
    double worst = 0;
    for (int k = 0; k < 200; ++k) {
      Mat h1 = random_sl2(unit, Field::Complex), h2 = random_sl2(unit, Field::Complex);
      worst = std::max(worst, psl_distance(ctx.tau(h1) * ctx.tau(h2), ctx.tau(Mat(h1 * h2))));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("tau embedding: n=2 is the inner twist by diag(1,-1)") {
  TauContext ctx(2, Field::Complex);
  std::mt19937_64 rng(5);
  auto unit = unit_source(rng);
  Mat e = mat2(1, 0, 0, -1);
  for (int k = 0; k < 20; ++k) {
    Mat h = random_sl2(unit, Field::Real);
    CHECK((ctx.tau(h).mat() - e * h * e).norm() < 1e-14);
  }
}

TEST_CASE("tau embedding: unipotent value against the symbolic oracle") {
  TauContext c3(3, Field::Complex);
  Mat u = c3.tau(mat2(1, 1, 0, 1)).mat();
  auto cols = sym_power_oracle_unipotent(3, 1);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) CHECK(std::abs(u(i, j) - cplx(double(cols[j][i]), 0)) < 1e-14);
  // frozen value from the oracle: [[1,-1,1],[0,1,-2],[0,0,1]]
  CHECK(std::abs(u(0, 1) - cplx(-1, 0)) < 1e-14);
  CHECK(std::abs(u(1, 2) - cplx(-2, 0)) < 1e-14);
}

TEST_CASE("tau embedding: exp/dtau compatibility and sl2 triple") {
  TauContext c4(4, Field::Complex);
  Mat h0 = mat2(1, 0, 0, -1), e0 = mat2(0, 1, 0, 0), f0 = mat2(0, 0, 1, 0);
  CHECK(sl2_triple_residual(c4.dtau(h0), c4.dtau(e0), c4.dtau(f0)) < 1e-12);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0, 0.3);
  for (int k = 0; k < 10; ++k) {
    Mat xi(2, 2);
    xi << cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(0, 0);
    xi(1, 1) = -xi(0, 0);
    CHECK((matrix_exp(c4.dtau(xi)) - c4.tau(Mat(matrix_exp(xi))).mat()).norm() < 1e-12);
  }
}

TEST_CASE("veronese flag: endpoints and equivariance") {
  for (int n : {3, 4}) {
    TauContext ctx(n, Field::Complex);
    // [0:1] -> V_1 = span(X^{n-1}) = span(e_n); [1:0] -> V_1 = span(Y^{n-1}) = span(e_1)
    Flag f0 = ctx.veronese_flag_ratio(0.0, 1.0);
    Flag finf = ctx.veronese_flag_ratio(1.0, 0.0);
    Vec v0 = f0.basis().col(0), vinf = finf.basis().col(0);
    CHECK(std::abs(std::abs(v0(n - 1)) - 1.0) < 1e-12);
    CHECK(std::abs(std::abs(vinf(0)) - 1.0) < 1e-12);

    std::mt19937_64 rng(31);
    auto unit = unit_source(rng);
    double worst = 0;
    for (int k = 0; k < 100; ++k) {
      Mat h = random_sl2(unit, Field::Real);
      std::uniform_real_distribution<double> a(-M_PI_2, M_PI_2);
      double x = std::tan(a(rng));
      Flag lhs = ctx.veronese_flag(moebius_p1(h, x));
      Flag rhs = ctx.veronese_flag(x).acted_by(ctx.tau(h).mat());
      worst = std::max(worst, flag_distance(lhs, rhs, ctx.flag_metric()));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("jordan projection: diagonal, unitary, oracle, inverse symmetry") {
  TauContext c3(3, Field::Complex);
  double R = 1.7;
  CartanVector lam = jordan_projection(c3.exp_h(R));
  CHECK(lam.v[0] == doctest::Approx(2 * R).epsilon(1e-12));
  CHECK(std::fabs(lam.v[1]) < 1e-12);

  // unitary: zero vector
  Mat k(2, 2);
  k << cplx(std::cos(0.7), 0), cplx(-std::sin(0.7), 0), cplx(std::sin(0.7), 0),
      cplx(std::cos(0.7), 0);
  CartanVector lz = jordan_projection(c3.tau(k));
  CHECK(lz.norm() < 1e-10);

  std::mt19937_64 rng(13);
  auto unit = unit_source(rng);
  for (int t = 0; t < 10; ++t) {
    GroupElement g = c3.tau(random_sl2(unit, Field::Complex, 0.35));
    CartanVector a = jordan_projection(g);
    CartanVector b64 = jordan_projection_power_oracle(g, 64);
    CartanVector b256 = jordan_projection_power_oracle(g, 256);
    CHECK(a.distance(b64) < 0.25);  // QR power oracle converges like 1/m
    CHECK(a.distance(b256) < a.distance(b64) + 1e-9);
    CartanVector c = jordan_projection(g.inverse());
    CHECK(c.distance(a.reversed_negated()) < 1e-9);
    CHECK(a.sorted_descending(1e-14));
    CHECK(std::fabs(a.sum()) < 1e-10);
  }
}

TEST_CASE("proximal data: standard flags, unitary absence, fixed-flag property") {
  TauContext c3(3, Field::Complex);
  auto pd = proximal_data(c3.exp_h(2.0), 1e-6);
  REQUIRE(pd.has_value());
  CHECK(flag_distance(pd->attracting, c3.veronese_flag(p1_infinity()), c3.flag_metric()) < 1e-9);
  CHECK(flag_distance(pd->repelling, c3.veronese_flag(0.0), c3.flag_metric()) < 1e-9);

  Mat k(2, 2);
  k << cplx(std::cos(0.4), 0), cplx(-std::sin(0.4), 0), cplx(std::sin(0.4), 0),
      cplx(std::cos(0.4), 0);
  CHECK(!proximal_data(c3.tau(k), 1e-6).has_value());

  std::mt19937_64 rng(17);
  auto unit = unit_source(rng);
  for (int t = 0; t < 10; ++t) {
    GroupElement g(c3.exp_h(1.5).mat(), Field::Complex);
    Mat x = c3.tau(random_sl2(unit, Field::Complex)).mat();
    g = GroupElement(x * g.mat() * x.inverse(), Field::Complex);
    auto p = proximal_data(g, 1e-6);
    REQUIRE(p.has_value());
    Flag moved = p->attracting.acted_by(g.mat());
    CHECK(flag_distance(moved, p->attracting, c3.flag_metric()) < 1e-8);
  }
}

TEST_CASE("group distance: first order, invariances, triangle inequality") {
  TauContext c3(3, Field::Complex);
  const GroupMetric& m = c3.metric();
  std::mt19937_64 rng(23);
  auto unit = unit_source(rng);
  GroupElement x = c3.tau(random_sl2(unit, Field::Complex));
  CHECK(m.distance(x, x) == doctest::Approx(0.0));

  std::normal_distribution<double> gauss(0, 1);
  auto small_xi = [&](double mag) {
    Mat xi(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) xi(i, j) = cplx(gauss(rng), gauss(rng));
    xi -= (xi.trace() / real_t(3)) * Mat::Identity(3, 3);
    xi *= real_t(mag) / xi.norm();
    return xi;
  };
  for (int t = 0; t < 10; ++t) {
    Mat xi = small_xi(1e-2);
    GroupElement y(x.mat() * matrix_exp(xi), Field::Complex);
    double d = m.distance(x, y);
    double n = m.algebra_norm(xi);
    CHECK(std::fabs(d - n) / n < 1e-3);
  }
  // left invariance and right S-invariance
  GroupElement y(x.mat() * matrix_exp(small_xi(0.3)), Field::Complex);
  double d0 = m.distance(x, y);
  GroupElement g = c3.tau(random_sl2(unit, Field::Complex));
  CHECK(std::fabs(m.distance(g * x, g * y) - d0) < 1e-10);
  for (const Mat& s : m.translators()) {
    GroupElement xs(x.mat() * s, Field::Complex), ys(y.mat() * s, Field::Complex);
    CHECK(std::fabs(m.distance(xs, ys) - d0) < 1e-10);
  }
  // triangle inequality on small random triples (within the log domain)
  for (int t = 0; t < 50; ++t) {
    GroupElement a = c3.tau(random_sl2(unit, Field::Complex));
    GroupElement b(a.mat() * matrix_exp(small_xi(2e-3)), Field::Complex);
    GroupElement c(b.mat() * matrix_exp(small_xi(2e-3)), Field::Complex);
    CHECK(m.distance(a, c) <= m.distance(a, b) + m.distance(b, c) + 1e-8);
  }
}

TEST_CASE("flag distance: zero, maximal separation, calibration distortion") {
  TauContext c3(3, Field::Complex);
  const FlagMetric& fm = c3.flag_metric();
  Flag f = c3.veronese_flag(0.3);
  CHECK(flag_distance(f, f, fm) == doctest::Approx(0.0));
  // tau(0) vs tau(inf): full angle at every stage (maximal projector gap)
  Flag f0 = c3.veronese_flag(0.0), fi = c3.veronese_flag(p1_infinity());
  double raw = 0;
  for (int k = 1; k <= 2; ++k) raw += (f0.projector(k) - fi.projector(k)).norm();
  CHECK(raw == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
  // measured distortion from the calibration sweep is reported and modest
  CHECK(fm.measured_distortion >= 1.0);
  CHECK(fm.measured_distortion < 10.0);
  // K-invariance: unitary actions preserve the distance
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0, 1);
  Mat a(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = cplx(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  Flag g1 = c3.veronese_flag(1.2), g2 = c3.veronese_flag(-0.4);
  CHECK(flag_distance(g1.acted_by(q), g2.acted_by(q), fm) ==
        doctest::Approx(flag_distance(g1, g2, fm)).epsilon(1e-10));
}

TEST_CASE("condition (R) checks") {
  for (int n : {2, 3}) {
    TauContext ctx(n, Field::Complex);
    CheckReport rep = check_condition_R(ctx);
    CHECK(rep.passed);
  }
  // replacing j by the identity breaks the flip check: tau(-1) is fixed
  TauContext c3(3, Field::Complex);
  double d = flag_distance(c3.veronese_flag(-1.0), c3.veronese_flag(1.0), c3.flag_metric());
  CHECK(d > 1e-2);
}

TEST_CASE("hermitian invariance for odd n") {
  TauContext c3(3, Field::Complex);
  HermitianReport rep = hermitian_invariance_check(c3, 2024);
  CHECK(rep.checks.passed);
  CHECK(rep.positives == 2);
  CHECK(rep.negatives == 1);
  TauContext c4(4, Field::Complex);
  CHECK_THROWS_AS(hermitian_invariance_check(c4, 1), std::invalid_argument);
}
