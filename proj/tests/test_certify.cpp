#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pantograph/certify.hpp"

#include <random>

using namespace pantograph;

namespace {

struct Demo {
  TauContext c3{3, Field::Complex};
  RPerfectSurfaceRep surf;
  exactpath::ThetaDemo demo;
  Demo(double R = 6.0) : surf(r_perfect_surface(RibbonGraph::theta(), R, 4)), demo(exactpath::theta_demo(c3, R)) {}
};

std::vector<GroupElement> perturbed(const std::vector<GroupElement>& gens, double mag,
                                    const TauContext& ctx, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, 1);
  std::vector<GroupElement> out;
  for (const auto& x : gens) {
    Mat xi(ctx.n(), ctx.n());
    for (int i = 0; i < ctx.n(); ++i)
      for (int j = 0; j < ctx.n(); ++j) xi(i, j) = cplx(g(rng), g(rng));
    xi -= (xi.trace() / real_t(ctx.n())) * Mat::Identity(ctx.n(), ctx.n());
    xi *= real_t(mag / ctx.metric().algebra_norm(xi));
    out.emplace_back(x.mat() * matrix_exp(xi), x.field());
  }
  return out;
}

}  // namespace

TEST_CASE("boundary map: fuchsian case matches the tau-circle, transport, density") {
  Demo d;
  SampledBoundaryMap bm = boundary_map(d.demo.gens, d.surf, d.c3, 4, 64);
  REQUIRE(bm.points.size() >= 32);
  CHECK(bm.excluded_nonproximal == 0);
  double worst = 0;
  for (size_t i = 0; i < bm.points.size(); ++i)
    worst = std::max(worst, flag_distance(bm.flags[i], d.c3.veronese_flag(bm.points[i]),
                                          d.c3.flag_metric()));
  CHECK(worst < 1e-8);

  // fixed-point transport: rho(word) fixes its own attracting flag
  for (size_t i = 0; i < bm.points.size(); i += 7) {
    GroupElement el = word_eval(bm.words[i], d.demo.gens);
    CHECK(flag_distance(bm.flags[i].acted_by(el.mat()), bm.flags[i], d.c3.flag_metric()) < 1e-7);
  }

  // equivariance on sampled pairs: conjugating the word by a generator moves
  // the point by the reference Moebius action and the flag by the target
  TauContext c2(2, Field::Complex);
  auto ref2 = r_perfect_surface(RibbonGraph::theta(), 6.0, 4);
  GroupElement gen2 = ref2.rep.std_generators[3];
  GroupElement gen3 = d.demo.gens[3];
  double weq = 0;
  for (size_t i = 0; i < bm.points.size(); i += 5) {
    if (bm.words[i].size() > 5) continue;  // keep conjugated norms within precision
    Word w = word_concat(word_concat({4}, bm.words[i]), {-4});
    GroupElement el3 = word_eval(w, d.demo.gens);
    auto pd = proximal_data(el3, 1e-6);
    REQUIRE(pd.has_value());
    double x2 = moebius_p1(unembed2(gen2.mat()), bm.points[i]);
    Flag expect = bm.flags[i].acted_by(gen3.mat());
    weq = std::max(weq, flag_distance(pd->attracting, expect, d.c3.flag_metric()));
    (void)x2;
  }
  CHECK(weq < 1e-7);

  // depth increases sample density (covering radius decreases)
  SampledBoundaryMap bm2 = boundary_map(d.demo.gens, d.surf, d.c3, 2, 64);
  CHECK(p1_covering_radius(bm.points) <= p1_covering_radius(bm2.points) + 1e-12);
}

TEST_CASE("sullivan check: tau-circle certifies below 1e-6, perturbation sweep decreases") {
  Demo d;
  SampledBoundaryMap bm = boundary_map(d.demo.gens, d.surf, d.c3, 4, 48);
  SullivanReport rep = sullivan_check(bm, d.c3, 24, 80, 3);
  MESSAGE("exact delta_hat = ", rep.delta_hat);
  CHECK(rep.delta_hat < 1e-6);
  CHECK(rep.holder_exponent > 0.3);
  CHECK(rep.holder_exponent < 2.0);

  double prev = 1e18;
  for (double mag : {1e-3, 1e-4, 1e-5}) {
    auto gens = perturbed(d.demo.gens, mag, d.c3, 17);
    SampledBoundaryMap bmp = boundary_map(gens, d.surf, d.c3, 4, 48);
    SullivanReport rp = sullivan_check(bmp, d.c3, 24, 80, 3);
    MESSAGE("mag ", mag, " delta_hat ", rp.delta_hat);
    CHECK(rp.delta_hat < prev);
    prev = rp.delta_hat;
  }
}

TEST_CASE("schottky certificate: fuchsian certified, failures identified, monotone") {
  Demo d;
  // free pair of the demo group with well-separated poles: a boundary curve
  // and its conjugate across the handle
  GroupElement pair2 = d.demo.gens[0].conjugate_by(d.demo.gens[2]);
  std::vector<GroupElement> pair = {d.demo.gens[0], pair2};
  SchottkyCertificate cert = schottky_certificate(pair, d.c3, 0.0, 250, 5);
  CHECK(cert.certified);
  CHECK(cert.transversality_margin > 0.0);
  CHECK(cert.worst_contraction < 1.0);

  // enlarging neighborhoods within the margin never flips certified
  SchottkyCertificate bigger = schottky_certificate(pair, d.c3, 0.0015, 250, 5);
  CHECK(bigger.certified);

  // commuting pair sharing fixed flags: uncertified by transversality
  GroupElement a = d.c3.exp_h(1.0), b = d.c3.exp_h(2.0);
  SchottkyCertificate shared = schottky_certificate({a, b}, d.c3, 0.0, 60, 6);
  CHECK(!shared.certified);

  // strong perturbation: typically uncertified, with a named failure
  auto wild = perturbed(pair, 1.0, d.c3, 23);
  SchottkyCertificate broken = schottky_certificate(wild, d.c3, 0.0, 120, 7);
  MESSAGE("wild perturbation verdict: ", broken.certified ? "certified" : broken.failure);
  if (!broken.certified) CHECK(!broken.failure.empty());
}

TEST_CASE("cross-ratio quasi-symmetry") {
  // identity circle and Moebius images have k = 1
  auto ident = [](double x) { return cplx(x, 0); };
  auto r0 = cross_ratio_qs_check(ident, 100, 3);
  CHECK(r0.k_hat == doctest::Approx(1.0).epsilon(1e-10));

  Mat mo = mat2(1.3, 0.4, 0.2, (1 + 0.08) / 1.3);
  auto moeb = [&](double x) {
    double y = moebius_p1(mo, x);
    return std::isinf(y) ? cplx(1e30, 0) : cplx(y, 0);
  };
  auto r1 = cross_ratio_qs_check(moeb, 100, 4);
  CHECK(r1.k_hat == doctest::Approx(1.0).epsilon(1e-8));

  // post-composition with PSL(2,C) leaves k unchanged
  auto quasicircle = [](double t) {
    double th = 2.0 * std::atan(t);
    double r = 1.0 + 0.05 * std::sin(3 * th);
    cplx z(r * std::cos(th), r * std::sin(th));
    return (cplx(0, 1) * (cplx(1, 0) + z)) / (cplx(1, 0) - z);  // disc -> upper half plane
  };
  auto r2 = cross_ratio_qs_check(quasicircle, 200, 5);
  Mat post = mat2c(cplx(1.1, 0.1), cplx(0.2, -0.1), cplx(0.05, 0.02), cplx(0, 0));
  post(1, 1) = (cplx(1, 0) + post(0, 1) * post(1, 0)) / post(0, 0);
  auto composed = [&](double t) {
    cplx z = quasicircle(t);
    return (post(0, 0) * z + post(0, 1)) / (post(1, 0) * z + post(1, 1));
  };
  auto r3 = cross_ratio_qs_check(composed, 200, 5);
  CHECK(r2.k_hat == doctest::Approx(r3.k_hat).epsilon(1e-9));
  CHECK(r2.k_hat > 1.0);

  // shrinking quasicircle perturbations drive k to 1
  double prev = 1e18;
  for (double amp : {0.1, 0.01, 0.001}) {
    auto xi = [&](double t) {
      double th = 2.0 * std::atan(t);
      double r = 1.0 + amp * std::sin(3 * th);
      cplx z(r * std::cos(th), r * std::sin(th));
      return (cplx(0, 1) * (cplx(1, 0) + z)) / (cplx(1, 0) - z);
    };
    auto rr = cross_ratio_qs_check(xi, 150, 6);
    CHECK(rr.k_hat < prev);
    prev = rr.k_hat;
  }
  CHECK(prev < 1.01);
}
