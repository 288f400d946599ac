#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pantograph/surface.hpp"
#include "pantograph/measures.hpp"

#include <random>

using namespace pantograph;

TEST_CASE("transform identities at the matrix level") {
  TauContext c3(3, Field::Complex);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  std::function<double()> unit = [&]() { return u(rng); };
  GroupElement id = GroupElement::identity(3, Field::Complex);
  for (int k = 0; k < 100; ++k) {
    GroupElement x = c3.tau(random_sl2(unit, Field::Complex));
    CHECK(psl_distance(rot(rot(rot(x, c3), c3), c3), x) < 1e-10);
    CHECK(psl_distance(inv(inv(x, c3), c3), x) < 1e-10);
    CHECK(psl_distance(refl(refl(x, c3), c3), x) < 1e-10);
    double s = u(rng), t = u(rng);
    CHECK(psl_distance(phi(s, phi(t, x, c3), c3), phi(s + t, x, c3)) < 1e-10);
    // inv o phi_t = phi_{-t} o inv
    CHECK(psl_distance(inv(phi(t, x, c3), c3), phi(-t, inv(x, c3), c3)) < 1e-10);
    // I o rot = rot^2 o I
    CHECK(psl_distance(flip_I(rot(x, c3), c3), rot2(flip_I(x, c3), c3)) < 1e-10);
  }
}

TEST_CASE("r_perfect_pants: paper matrix, lengths, relation, residuals") {
  TauContext c2(2, Field::Complex);
  for (double R : {3.0, 6.0, 9.0}) {
    PantsRep p = r_perfect_pants(R, +1);
    Mat Aexp = mat2(std::exp(R), 0, 1 + std::exp(-R), std::exp(-R));
    CHECK((p.A - Aexp).norm() < 1e-12);
    for (const Mat* m : {&p.A, &p.B, &p.C})
      CHECK(std::fabs(translation_length(*m) - 2 * R) < 1e-9);
    Mat ba = p.B * p.A;
    CHECK((p.C * ba - Mat::Identity(2, 2)).norm() < 1e-12);
    auto res = pants_realization_residuals(p, c2, c2.metric());
    for (double r : res) CHECK(r < 1e-10);
    CHECK_THROWS_AS(r_perfect_pants(-1.0, +1), std::invalid_argument);
  }
}

TEST_CASE("plus and minus pants exchanged by the antidiagonal conjugator") {
  double R = 2.4;
  PantsRep pp = r_perfect_pants(R, +1), pm = r_perfect_pants(R, -1);
  Mat s = pm_exchange_conjugator();
  auto err = [&](const Mat& a, const Mat& b) {
    return std::min((double)(a - b).norm(), (double)(a + b).norm());
  };
  CHECK(err(s * pp.A * s.inverse(), pm.A) < 1e-10);
  CHECK(err(s * pp.B * s.inverse(), pm.B) < 1e-10);
  CHECK(err(s * pp.C * s.inverse(), pm.C) < 1e-10);
  CHECK(err(s * pp.Tprime * s.inverse(), pm.Tprime) < 1e-10);
}

TEST_CASE("realized_by: perfect zero, metric expansion, unrelated large") {
  TauContext c2(2, Field::Complex);
  double R = 4.0;
  PantsRep p = r_perfect_pants(R, +1);
  auto emb = [&](const Mat& m) { return c2.tau(m).mat(); };
  CHECK(realized_by(emb(p.A), emb(p.T), emb(p.Tprime), +1, R, c2, c2.metric()) < 1e-10);
  // shifting T2 by phi_s moves the residual by about s
  double s = 0.1;
  Mat T2s = frame_phi(s, p.Tprime);
  double r = realized_by(emb(p.A), emb(p.T), emb(T2s), +1, R, c2, c2.metric());
  CHECK(std::fabs(r - s) < 0.1 * s);
  // a random unrelated alpha typically produces a residual over 1 (reported)
  Mat alpha = mat2(2.0, 0.3, 0.1, (1 + 0.3 * 0.1) / 2.0);
  double rr = realized_by(emb(alpha), emb(p.T), emb(p.Tprime), +1, R, c2, c2.metric());
  MESSAGE("unrelated alpha residual: ", rr);
}

TEST_CASE("r_perfect_surface: relation, boundary lengths, invalid graphs") {
  double R = 6.0;
  RPerfectSurfaceRep surf = r_perfect_surface(RibbonGraph::theta(), R, 3);
  CHECK(surf.rep.relation_residual < 1e-8);
  for (double l : surf.rep.boundary_lengths) CHECK(std::fabs(l - 2 * R) < 1e-9);
  CHECK(surf.rep.max_gluing_defect < 1e-12);

  RibbonGraph bad = RibbonGraph::theta();
  bad.vertices[1].side = +1;  // not bipartite
  CHECK_THROWS(r_perfect_surface(bad, R, 2));
}

TEST_CASE("r_perfect_surface: fundamental-domain diameter bounded over R") {
  // Qualitative check: the circumradius estimate of the Dirichlet domain at
  // the base point stays bounded as R grows.
  std::vector<double> rads;
  for (double R : {4.0, 6.0, 8.0, 10.0}) {
    LatticeProvider lat = genus2_lattice(R);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u01(0, 1);
    double rad = 0;
    for (int k = 0; k < 120; ++k) {
      double th = 2 * M_PI * u01(rng);
      double r = std::acosh(1.0 + (std::cosh(7.0) - 1.0) * u01(rng));
      std::complex<double> zd(std::tanh(r / 2) * std::cos(th), std::tanh(r / 2) * std::sin(th));
      std::complex<double> z = std::complex<double>(0, 1) * (1.0 + zd) / (1.0 - zd);
      Mat g = mat2(std::sqrt(z.imag()), z.real() / std::sqrt(z.imag()), 0, 1.0 / std::sqrt(z.imag()));
      Mat red = lat.reduce(g);
      std::complex<double> a((double)red(0, 0).real(), 0), b((double)red(0, 1).real(), 0),
          c((double)red(1, 0).real(), 0), d((double)red(1, 1).real(), 0);
      std::complex<double> zr = (a * std::complex<double>(0, 1) + b) / (c * std::complex<double>(0, 1) + d);
      double num = std::norm(zr - std::complex<double>(0, 1));
      rad = std::max(rad, std::acosh(1.0 + num / (2.0 * zr.imag())));
    }
    rads.push_back(rad);
    MESSAGE("R = ", R, " circumradius estimate = ", rad);
  }
  for (double r : rads) CHECK(r < 12.0);
}

TEST_CASE("hexagon tiling: base residuals, overlap R-1, equivariance") {
  TauContext c2(2, Field::Complex);
  double R = 5.0;
  RPerfectSurfaceRep surf = r_perfect_surface(RibbonGraph::theta(), R, 3);
  CHECK_THROWS_AS(hexagon_tiling(RPerfectSurfaceRep{0.5, surf.rep}, c2, 1), std::invalid_argument);
  auto hex = hexagon_tiling(surf, c2, 0);
  REQUIRE(hex.size() >= 3);
  for (const auto& h : hex) CHECK(h.realized_residual < 1e-9);

  CHECK(std::fabs(hexagon_overlap_on_axis(surf, c2) - (R - 1)) < 1e-6);

  // rho-equivariance: frames of deck-translated hexagons are the deck
  // translates of frames (tree nodes expose exactly this structure)
  ThetaWords tw = theta_words(surf.rep);
  for (size_t k = 1; k < std::min<size_t>(surf.rep.nodes.size(), 8); ++k) {
    const auto& nd = surf.rep.nodes[k];
    GroupElement gamma = word_eval(tw.node_deck[k], surf.rep.std_generators);
    GroupElement base_lift = surf.rep.nodes[0].lift.g;  // root frame
    (void)base_lift;
    // the node's translation equals rho(gamma) times the base translation of
    // its graph vertex
    int v = nd.graph_vertex;
    GroupElement tbase = GroupElement::identity(2, Field::Complex);
    for (size_t j = 0; j < surf.rep.nodes.size(); ++j)
      if (surf.rep.nodes[j].graph_vertex == v && surf.rep.nodes[j].depth <= 1) {
        tbase = surf.rep.nodes[j].translation;
        break;
      }
    GroupElement expect = gamma * tbase;
    double scale = std::max(1.0, (double)expect.mat().norm());
    CHECK(psl_distance(nd.translation, expect) / scale < 1e-9);
  }
}

TEST_CASE("accessible endpoints: covering radius improves from small R") {
  TauContext c2(2, Field::Complex);
  auto radius_at = [&](double R) {
    RPerfectSurfaceRep s = r_perfect_surface(RibbonGraph::theta(), R, 8);
    return accessible_points(s, c2, 8, 6000).covering_radius;
  };
  double r2 = radius_at(2.0), r6 = radius_at(6.0);
  MESSAGE("covering radius: R=2 ", r2, "  R=6 ", r6);
  CHECK(r6 < r2);
}
