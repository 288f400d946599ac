#include "pantograph/surface.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pantograph {

Mat unembed2(const Mat& m) {
  Mat e = mat2(1, 0, 0, -1);
  return e * m * e;
}

RPerfectSurfaceRep r_perfect_surface(const RibbonGraph& graph, double R, int depth) {
  if (!(R > 0)) throw std::invalid_argument("r_perfect_surface: R > 0 required");
  TauContext c2(2, Field::Complex);
  std::vector<GeometricData> labels;
  for (const auto& v : graph.vertices)
    labels.push_back(perfect_geometric_data(c2, R, v.side));
  RPerfectSurfaceRep out;
  out.R = R;
  out.rep = assemble_representation(graph, labels, c2, 0.0, depth, false);
  return out;
}

Word word_inverse(const Word& w) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
  return out;
}

Word word_concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

GroupElement word_eval(const Word& w, const std::vector<GroupElement>& gens) {
  const int n = gens[0].n();
  GroupElement out = GroupElement::identity(n, gens[0].field());
  for (int s : w) {
    const GroupElement& g = gens[std::abs(s) - 1];
    out = s > 0 ? out * g : out * g.inverse();
  }
  return out;
}

ThetaWords theta_words(const AssembledRep& rep) {
  if (rep.graph.vertices.size() != 2 || rep.std_generators.size() != 4)
    throw std::invalid_argument("theta_words: theta-graph representation required");
  ThetaWords tw;
  // Generators (x1, y1, x2, y2) = (b a, loop(e2), loop(e1), b) at the root.
  // Root boundaries: a1 = y2^{-1} x1, a2 = y2, a3 = x1^{-1}.
  tw.base[0][0] = {-4, 1};
  tw.base[0][1] = {4};
  tw.base[0][2] = {-1};
  // Child (v1): a1 shared across the tree edge; the non-tree edges conjugate
  // the root boundaries by the loops.
  tw.base[1][0] = {-4, 1};
  tw.base[1][1] = {3, 4, -3};
  tw.base[1][2] = {2, -1, -2};

  // Deck words per tree node: crossing the tree edge keeps the deck word,
  // crossing non-tree edge k multiplies by loop_k^{-1} from the + side and
  // loop_k from the - side.
  auto edge_index = [&](int h) {
    int hm = rep.graph.mate(h);
    for (size_t e = 0; e < rep.graph.edges.size(); ++e)
      if ((rep.graph.edges[e].first == h && rep.graph.edges[e].second == hm) ||
          (rep.graph.edges[e].first == hm && rep.graph.edges[e].second == h))
        return int(e);
    return -1;
  };
  auto delta_word = [&](int halfedge_on_source, int source_side) -> Word {
    int e = edge_index(halfedge_on_source);
    if (e == 0) return {};          // tree edge
    int gen = (e == 1) ? 3 : 2;     // loop(e1) = x2 = gen 3, loop(e2) = y1 = gen 2
    return source_side > 0 ? Word{-gen} : Word{gen};
  };
  tw.node_deck.assign(rep.nodes.size(), {});
  for (size_t k = 1; k < rep.nodes.size(); ++k) {
    const auto& nd = rep.nodes[k];
    int parent_vertex = rep.nodes[nd.parent].graph_vertex;
    int side = rep.graph.vertices[parent_vertex].side;
    tw.node_deck[k] =
        word_concat(tw.node_deck[nd.parent], delta_word(nd.parent_halfedge, side));
  }
  return tw;
}

Word ThetaWords::boundary(const AssembledRep& rep, int node, int marking) const {
  int v = rep.nodes[node].graph_vertex;
  const Word& g = node_deck[node];
  return word_concat(word_concat(g, base[v][marking]), word_inverse(g));
}

std::vector<MarkedHexagon> hexagon_tiling(const RPerfectSurfaceRep& surf, const TauContext& ctx2,
                                          int depth) {
  if (!(surf.R > 1)) throw std::invalid_argument("hexagon_tiling: R > 1 required");
  std::vector<MarkedHexagon> out;
  const GroupMetric& metric = ctx2.metric();
  for (size_t k = 0; k < surf.rep.nodes.size(); ++k) {
    const auto& nd = surf.rep.nodes[k];
    if (nd.depth > depth) continue;
    GeometricData q = nd.lift;
    for (int i = 0; i < 3; ++i) {
      MarkedHexagon h;
      h.node = int(k);
      h.marking = i;
      h.a = q.A;
      h.b = q.B;
      h.c = q.C;
      h.frame_h = q.g;
      h.frame_hp = q.gp;
      h.realized_residual =
          realized_by(q.A.mat(), q.g.mat(), q.gp.mat(), q.sign, surf.R, ctx2, metric);
      out.push_back(h);
      q = sym(q, ctx2);
    }
  }
  return out;
}

namespace {

// Fixed points of a hyperbolic 2x2 on the boundary R u {inf}.
std::pair<double, double> axis_endpoints(const Mat& g) {  // (repelling, attracting)
  double a = (double)g(0, 0).real(), b = (double)g(0, 1).real();
  double c = (double)g(1, 0).real(), d = (double)g(1, 1).real();
  if (std::fabs(c) < 1e-14) {
    // fixed points: inf and b/(d-a)
    double other = std::fabs(d - a) < 1e-14 ? p1_infinity() : b / (d - a);
    bool inf_attracting = std::fabs(a) > std::fabs(d);
    return inf_attracting ? std::make_pair(other, p1_infinity())
                          : std::make_pair(p1_infinity(), other);
  }
  double tr = a + d;
  double disc = std::sqrt(std::max(0.0, tr * tr - 4.0));
  double l1 = (tr + disc) / 2.0, l2 = (tr - disc) / 2.0;  // eigenvalues
  double x1 = (l1 - d) / c, x2 = (l2 - d) / c;            // fixed points
  return std::fabs(l1) > std::fabs(l2) ? std::make_pair(x2, x1) : std::make_pair(x1, x2);
}

}  // namespace

std::array<double, 2> perpendicular_feet_on_axis(const Mat& a, const Mat& b, const Mat& c) {
  auto [ar, aa] = axis_endpoints(a);
  // Moebius map sending (ar, aa) to (0, inf): z -> (z - ar) / (z - aa),
  // adjusted when an endpoint is infinite.
  auto send = [&](double z) -> double {
    if (std::isinf(ar)) {
      // (inf,aa)->(0,inf): z -> 1/(z-aa)... choose z -> -1/(z-aa) for orientation
      if (std::isinf(z)) return 0.0;
      return 1.0 / (z - aa);
    }
    if (std::isinf(aa)) {
      if (std::isinf(z)) return p1_infinity();
      return z - ar;
    }
    if (std::isinf(z)) return 1.0;
    return (z - ar) / (z - aa) * 1.0;
  };
  auto foot = [&](const Mat& g) {
    auto [r, t] = axis_endpoints(g);
    double p = send(r), q = send(t);
    double prod = p * q;
    if (!(prod > 0))
      throw std::domain_error("perpendicular_feet_on_axis: axes cross or share an endpoint");
    return 0.5 * std::log(prod);
  };
  return {foot(b), foot(c)};
}

double hexagon_overlap_on_axis(const RPerfectSurfaceRep& surf, const TauContext& ctx2) {
  // Shared boundary of the root and its first tree child; both pants project
  // hexagon sides onto the common axis.
  const auto& root = surf.rep.nodes[0];
  int child = -1;
  for (size_t k = 1; k < surf.rep.nodes.size(); ++k)
    if (surf.rep.nodes[k].parent == 0) {
      child = int(k);
      break;
    }
  if (child < 0) throw std::runtime_error("hexagon_overlap_on_axis: no tree child");
  const auto& nd = surf.rep.nodes[child];
  int i = surf.rep.graph.index_in_vertex(nd.parent_halfedge);
  GeometricData qv = root.lift;
  for (int k = 0; k < i; ++k) qv = sym(qv, ctx2);
  int j = surf.rep.graph.index_in_vertex(surf.rep.graph.mate(nd.parent_halfedge));
  GeometricData qw = nd.lift;
  for (int k = 0; k < j; ++k) qw = sym(qw, ctx2);

  auto fv = perpendicular_feet_on_axis(qv.A.mat(), qv.B.mat(), qv.C.mat());
  auto fw = perpendicular_feet_on_axis(qw.A.mat(), qw.B.mat(), qw.C.mat());
  const double period = 2.0 * surf.R;
  // Hexagon sides tile the axis with period 2R; sides have length R.  The
  // overlap of one v-side with the nearest w-side, maximized over the two
  // side choices and integer period shifts.
  auto segments = [&](const std::array<double, 2>& f) {
    double s0 = std::min(f[0], f[1]);
    return std::array<double, 2>{s0, s0 + surf.R};  // representative side [s0, s0+R]
  };
  auto sv = segments(fv), sw = segments(fw);
  double best = 0;
  for (int k = -3; k <= 3; ++k) {
    double lo = std::max(sv[0], sw[0] + k * period - surf.R);
    double hi = std::min(sv[1], sw[0] + k * period);
    best = std::max(best, hi - lo);
    lo = std::max(sv[0], sw[0] + k * period);
    hi = std::min(sv[1], sw[0] + k * period + surf.R);
    best = std::max(best, hi - lo);
  }
  return best;
}

double p1_covering_radius(std::vector<double> points) {
  std::vector<double> ang;
  for (double x : points) ang.push_back(std::isinf(x) ? M_PI_2 : std::atan(x));
  std::sort(ang.begin(), ang.end());
  double worst = (ang.front() + M_PI) - ang.back();  // wrap gap (period pi)
  for (size_t i = 1; i < ang.size(); ++i) worst = std::max(worst, ang[i] - ang[i - 1]);
  return worst / 2.0;
}

AccessibleSample accessible_points(const RPerfectSurfaceRep& surf, const TauContext& ctx2,
                                   int depth, int budget) {
  AccessibleSample out;
  // Non-backtracking walks over (tree node, marking): the axis of the marked
  // boundary bounds a hexagon with the axes of the two other boundaries of
  // either adjacent pants lift.
  struct State {
    int node;
    int marking;
    int steps;
  };
  std::vector<State> frontier;
  for (int m = 0; m < 3; ++m) frontier.push_back({0, m, 0});
  std::vector<State> next;
  std::mt19937_64 rng(424242);
  for (int d = 0; d < depth; ++d) {
    next.clear();
    for (const auto& st : frontier) {
      // stay in the same pants: two other markings
      for (int m = 0; m < 3; ++m)
        if (m != st.marking) next.push_back({st.node, m, st.steps + 1});
      // cross into the adjacent pants through the marked boundary: either a
      // tree child across this half-edge, or the parent when we came in
      // through it
      int v = surf.rep.nodes[st.node].graph_vertex;
      int h = surf.rep.graph.vertices[v].cyclic[st.marking];
      const auto& self = surf.rep.nodes[st.node];
      if (self.parent >= 0 && surf.rep.graph.mate(self.parent_halfedge) == h) {
        int jm = surf.rep.graph.index_in_vertex(self.parent_halfedge);
        for (int m = 0; m < 3; ++m)
          if (m != jm) next.push_back({self.parent, m, st.steps + 1});
      }
      for (size_t k = 0; k < surf.rep.nodes.size(); ++k) {
        const auto& nd = surf.rep.nodes[k];
        if (nd.parent == st.node && nd.parent_halfedge == h) {
          int jm = surf.rep.graph.index_in_vertex(surf.rep.graph.mate(h));
          for (int m = 0; m < 3; ++m)
            if (m != jm) next.push_back({int(k), m, st.steps + 1});
        }
      }
    }
    if (next.empty()) break;
    if (int(next.size()) > budget) {
      std::shuffle(next.begin(), next.end(), rng);  // unbiased level subsample
      next.resize(budget);
    }
    frontier = std::move(next);
  }
  for (const auto& st : frontier) {
    GeometricData q = surf.rep.nodes[st.node].lift;
    for (int k = 0; k < st.marking; ++k) q = sym(q, ctx2);
    auto [rp, at] = axis_endpoints(unembed2(q.A.mat()));
    (void)rp;
    out.points.push_back(at);
    out.source.emplace_back(st.node, st.marking);
  }
  // Pull back by the root frame h_H = g of the root hexagon.
  Mat hi = unembed2(surf.rep.nodes[0].lift.g.mat()).inverse();
  std::vector<double> pulled;
  for (double x : out.points) pulled.push_back(moebius_p1(hi, x));
  out.covering_radius = p1_covering_radius(pulled);
  return out;
}

}  // namespace pantograph
