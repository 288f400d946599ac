#include "pantograph/assembly.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

namespace pantograph {

int RibbonGraph::vertex_of_halfedge(int h) const {
  for (const auto& v : vertices)
    for (int k = 0; k < 3; ++k)
      if (v.cyclic[k] == h) return v.id;
  throw std::invalid_argument("RibbonGraph: unknown half-edge");
}

int RibbonGraph::index_in_vertex(int h) const {
  for (const auto& v : vertices)
    for (int k = 0; k < 3; ++k)
      if (v.cyclic[k] == h) return k;
  throw std::invalid_argument("RibbonGraph: unknown half-edge");
}

int RibbonGraph::mate(int h) const {
  for (const auto& e : edges) {
    if (e.first == h) return e.second;
    if (e.second == h) return e.first;
  }
  throw std::invalid_argument("RibbonGraph: unpaired half-edge");
}

bool RibbonGraph::trivalent() const {
  std::set<int> seen;
  for (const auto& v : vertices)
    for (int h : v.cyclic)
      if (!seen.insert(h).second) return false;
  size_t used = 0;
  for (const auto& e : edges) {
    if (!seen.count(e.first) || !seen.count(e.second)) return false;
    used += 2;
  }
  return used == seen.size();
}

bool RibbonGraph::bipartite() const {
  for (const auto& e : edges) {
    int a = vertex_of_halfedge(e.first), b = vertex_of_halfedge(e.second);
    if (vertices[a].side == vertices[b].side) return false;
  }
  return true;
}

bool RibbonGraph::connected() const {
  if (vertices.empty()) return false;
  std::vector<bool> vis(vertices.size(), false);
  std::queue<int> q;
  q.push(0);
  vis[0] = true;
  size_t count = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int h : vertices[v].cyclic) {
      int w = vertex_of_halfedge(mate(h));
      if (!vis[w]) {
        vis[w] = true;
        ++count;
        q.push(w);
      }
    }
  }
  return count == vertices.size();
}

int RibbonGraph::diameter() const {
  int best = 0;
  for (size_t s = 0; s < vertices.size(); ++s) {
    std::vector<int> dist(vertices.size(), -1);
    std::queue<int> q;
    q.push(int(s));
    dist[s] = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int h : vertices[v].cyclic) {
        int w = vertex_of_halfedge(mate(h));
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
      }
    }
    for (int d : dist) best = std::max(best, d);
  }
  return best;
}

RibbonGraph RibbonGraph::theta() {
  RibbonGraph g;
  g.vertices = {{0, +1, {0, 1, 2}}, {1, -1, {3, 4, 5}}};
  g.edges = {{0, 3}, {1, 4}, {2, 5}};
  return g;
}

bool MatchingInstance::sym_valid() const {
  auto check = [](const std::vector<int>& p) {
    for (size_t i = 0; i < p.size(); ++i) {
      if (p[i] == int(i)) return false;  // fixed point
      if (p[p[p[i]]] != int(i)) return false;
    }
    return true;
  };
  if (!sym_plus.empty() && !check(sym_plus)) return false;
  if (!sym_minus.empty() && !check(sym_minus)) return false;
  return true;
}

HallResult hall_matching(const MatchingInstance& inst) {
  if (inst.nplus != inst.nminus)
    throw std::invalid_argument("hall_matching: side cardinalities differ");
  const int n = inst.nplus, m = inst.nminus;
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : inst.admissible) adj[a].push_back(b);

  // Hopcroft-Karp.
  std::vector<int> mu(n, -1), mv(m, -1), dist(n);
  const int INF = 1 << 29;
  auto bfs = [&]() {
    std::queue<int> q;
    for (int u = 0; u < n; ++u) {
      dist[u] = (mu[u] < 0) ? 0 : INF;
      if (mu[u] < 0) q.push(u);
    }
    bool found = false;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u]) {
        int w = mv[v];
        if (w < 0)
          found = true;
        else if (dist[w] == INF) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  };
  std::function<bool(int)> dfs = [&](int u) {
    for (int v : adj[u]) {
      int w = mv[v];
      if (w < 0 || (dist[w] == dist[u] + 1 && dfs(w))) {
        mu[u] = v;
        mv[v] = u;
        return true;
      }
    }
    dist[u] = INF;
    return false;
  };
  int matched = 0;
  while (bfs())
    for (int u = 0; u < n; ++u)
      if (mu[u] < 0 && dfs(u)) ++matched;

  HallResult out;
  if (matched == n) {
    out.matched = true;
    out.match = mu;
    return out;
  }
  // Deficiency certificate: left vertices reachable by alternating paths
  // from an unmatched left vertex form a Hall violator.
  std::vector<bool> visL(n, false), visR(m, false);
  std::queue<int> q;
  for (int u = 0; u < n; ++u)
    if (mu[u] < 0) {
      visL[u] = true;
      q.push(u);
    }
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (visR[v]) continue;
      visR[v] = true;
      int w = mv[v];
      if (w >= 0 && !visL[w]) {
        visL[w] = true;
        q.push(w);
      }
    }
  }
  for (int u = 0; u < n; ++u)
    if (visL[u]) out.violating_set.push_back(u);
  return out;
}

bool hall_matching_bruteforce(const MatchingInstance& inst) {
  const int n = inst.nplus;
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : inst.admissible) adj[a].push_back(b);
  std::vector<int> mv(inst.nminus, -1);
  std::function<bool(int)> place = [&](int u) {
    if (u == n) return true;
    for (int v : adj[u]) {
      if (mv[v] >= 0) continue;
      mv[v] = u;
      if (place(u + 1)) return true;
      mv[v] = -1;
    }
    return false;
  };
  return place(0);
}

namespace {

LinearRow make_row(int nvars, const std::vector<std::pair<int, Rat>>& terms, int rel, Rat b) {
  LinearRow r;
  r.a.assign(nvars, Rat(0));
  for (auto& [j, c] : terms) r.a[j] = r.a[j] + c;
  r.rel = rel;
  r.b = std::move(b);
  return r;
}

}  // namespace

IntegerGluingResult integer_gluing_solution(const MatchingInstance& inst) {
  if (!inst.sym_valid()) throw std::invalid_argument("integer_gluing_solution: invalid sym");
  const int p = inst.nplus, m = inst.nminus;
  if (p > 16) throw std::invalid_argument("integer_gluing_solution: F+ too large for exact Hall separation");
  const int nv = p + m;
  std::vector<std::vector<int>> nbr(p);
  for (auto [a, b] : inst.admissible) nbr[a].push_back(b);

  IntegerGluingResult out;
  LinearSystem& sys = out.system;
  sys.nvars = nv;
  // sym invariance
  for (int i = 0; i < p; ++i)
    sys.rows.push_back(make_row(nv, {{i, Rat(1)}, {inst.sym_plus[i], Rat(-1)}}, 0, Rat(0)));
  for (int j = 0; j < m; ++j)
    sys.rows.push_back(
        make_row(nv, {{p + j, Rat(1)}, {p + inst.sym_minus[j], Rat(-1)}}, 0, Rat(0)));
  // equal side masses and normalization (nonzero solution)
  {
    std::vector<std::pair<int, Rat>> t;
    for (int i = 0; i < p; ++i) t.emplace_back(i, Rat(1));
    for (int j = 0; j < m; ++j) t.emplace_back(p + j, Rat(-1));
    sys.rows.push_back(make_row(nv, t, 0, Rat(0)));
    std::vector<std::pair<int, Rat>> norm;
    for (int i = 0; i < p; ++i) norm.emplace_back(i, Rat(1));
    sys.rows.push_back(make_row(nv, norm, 0, Rat(1)));
  }

  auto hall_row = [&](unsigned long mask) {
    std::vector<std::pair<int, Rat>> t;
    std::vector<bool> inN(m, false);
    for (int i = 0; i < p; ++i)
      if (mask & (1ul << i)) {
        t.emplace_back(i, Rat(-1));
        for (int v : nbr[i]) inN[v] = true;
      }
    for (int j = 0; j < m; ++j)
      if (inN[j]) t.emplace_back(p + j, Rat(1));
    return make_row(nv, t, +1, Rat(0));  // sum_{N(A)} mu- - sum_A mu+ >= 0
  };

  // Lazy constraint loop: solve, search all subsets for a violated Hall row.
  for (int i = 0; i < p; ++i) sys.rows.push_back(hall_row(1ul << i));
  sys.rows.push_back(hall_row((1ul << p) - 1));
  for (int round = 0; round < 4096; ++round) {
    SimplexResult r = solve_feasibility(sys);
    if (!r.feasible) {
      out.feasible = false;
      out.farkas = r.farkas_y;
      return out;
    }
    // exact separation over all subsets
    bool violated = false;
    for (unsigned long mask = 1; mask + 1 < (1ul << p) && !violated; ++mask) {
      Rat lhs(0);
      std::vector<bool> inN(m, false);
      for (int i = 0; i < p; ++i)
        if (mask & (1ul << i)) {
          lhs = lhs - r.x[i];
          for (int v : nbr[i]) inN[v] = true;
        }
      for (int j = 0; j < m; ++j)
        if (inN[j]) lhs = lhs + r.x[p + j];
      if (lhs.sign() < 0) {
        sys.rows.push_back(hall_row(mask));
        violated = true;
      }
    }
    if (!violated) {
      out.feasible = true;
      out.x_rational = r.x;
      // scale to integers by the lcm of denominators
      BigInt lcm(1);
      for (const Rat& v : r.x) {
        BigInt g = BigInt::gcd(lcm, v.den());
        lcm = lcm / g * v.den();
      }
      for (int i = 0; i < p; ++i)
        out.mu_plus.push_back((r.x[i].num() * (lcm / r.x[i].den())).to_longlong());
      for (int j = 0; j < m; ++j)
        out.mu_minus.push_back((r.x[p + j].num() * (lcm / r.x[p + j].den())).to_longlong());
      return out;
    }
  }
  throw std::runtime_error("integer_gluing_solution: separation loop did not converge");
}

bool verify_integer_gluing(const MatchingInstance& inst, const std::vector<long long>& mu_plus,
                           const std::vector<long long>& mu_minus) {
  const int p = inst.nplus, m = inst.nminus;
  long long sp = 0, sm = 0;
  bool nonzero = false;
  for (int i = 0; i < p; ++i) {
    if (mu_plus[i] < 0) return false;
    if (mu_plus[i] != mu_plus[inst.sym_plus[i]]) return false;
    sp += mu_plus[i];
    nonzero |= mu_plus[i] > 0;
  }
  for (int j = 0; j < m; ++j) {
    if (mu_minus[j] < 0) return false;
    if (mu_minus[j] != mu_minus[inst.sym_minus[j]]) return false;
    sm += mu_minus[j];
  }
  if (sp != sm || !nonzero) return false;
  std::vector<std::vector<int>> nbr(p);
  for (auto [a, b] : inst.admissible) nbr[a].push_back(b);
  for (unsigned long mask = 1; mask < (1ul << p); ++mask) {
    long long lhs = 0;
    std::vector<bool> inN(m, false);
    for (int i = 0; i < p; ++i)
      if (mask & (1ul << i)) {
        lhs -= mu_plus[i];
        for (int v : nbr[i]) inN[v] = true;
      }
    for (int j = 0; j < m; ++j)
      if (inN[j]) lhs += mu_minus[j];
    if (lhs < 0) return false;
  }
  return true;
}

BuiltGraph build_ribbon_graph(const MatchingInstance& inst, const std::vector<int>& matching) {
  if (!inst.sym_valid()) throw std::invalid_argument("build_ribbon_graph: invalid sym");
  for (int i = 0; i < inst.nplus; ++i) {
    bool ok = false;
    for (auto [a, b] : inst.admissible)
      if (a == i && b == matching[i]) ok = true;
    if (!ok) throw std::invalid_argument("build_ribbon_graph: matching not inside admissible set");
  }
  BuiltGraph out;
  out.plus_orbit_of.assign(inst.nplus, -1);
  out.minus_orbit_of.assign(inst.nminus, -1);
  int vid = 0;
  auto orbits = [&](const std::vector<int>& symm, std::vector<int>& orbit_of, int side) {
    for (int i = 0; i < int(orbit_of.size()); ++i) {
      if (orbit_of[i] >= 0) continue;
      RibbonGraph::Vertex v;
      v.id = vid;
      v.side = side;
      int a = i, b = symm[i], c = symm[symm[i]];
      // half-edge ids: plus elements keep their index, minus offset by nplus
      int off = side > 0 ? 0 : inst.nplus;
      v.cyclic = {a + off, b + off, c + off};
      orbit_of[a] = orbit_of[b] = orbit_of[c] = vid;
      out.graph.vertices.push_back(v);
      ++vid;
    }
  };
  orbits(inst.sym_plus, out.plus_orbit_of, +1);
  orbits(inst.sym_minus, out.minus_orbit_of, -1);
  for (int i = 0; i < inst.nplus; ++i)
    out.graph.edges.emplace_back(i, inst.nplus + matching[i]);
  return out;
}

double boundary_translation_length(const GroupElement& g) {
  CartanVector lam = jordan_projection(g);
  return 2.0 * lam.v.front() / double(g.n() - 1);
}

AssembledRep assemble_representation(const RibbonGraph& graph,
                                     const std::vector<GeometricData>& labels,
                                     const TauContext& ctx, double eps_prime, int depth,
                                     bool ambiguity_probe, const GroupElement* root_override) {
  if (!graph.trivalent() || !graph.bipartite() || !graph.connected())
    throw std::invalid_argument("assemble_representation: graph must be trivalent bipartite connected");
  if (labels.size() != graph.vertices.size())
    throw std::invalid_argument("assemble_representation: one label per vertex required");
  for (size_t v = 0; v < labels.size(); ++v)
    if (labels[v].sign != graph.vertices[v].side)
      throw std::invalid_argument("assemble_representation: label sign does not match vertex side");
  if (depth < 0) depth = graph.diameter() + 2;

  AssembledRep rep;
  rep.n = ctx.n();
  rep.R = labels[0].R;
  rep.eps_prime = eps_prime;
  rep.graph = graph;

  // eps' = 0 requests the canonical construction; the gate below only has
  // to absorb depth-compounded floating-point drift.
  const double accept = eps_prime > 0 ? eps_prime : 1e-7;

  // All gluing data is computed once per (vertex, marking) at base scale and
  // transported by left-equivariance; deep lifts are exponentially large and
  // would otherwise drown the foot computations.
  struct EdgeGlue {
    GeometricData child_base;  // pinned child data glued to labels[v] at marking i
    GroupElement x0;           // child_base = labels[w].left_translated(x0) + pinning
    double defect = 0;
  };
  std::map<std::pair<int, int>, EdgeGlue> glue_cache;
  auto glue_base = [&](int vertex, int i_marking) -> const EdgeGlue& {
    auto key = std::make_pair(vertex, i_marking);
    auto it = glue_cache.find(key);
    if (it != glue_cache.end()) return it->second;
    int h = graph.vertices[vertex].cyclic[i_marking];
    int hm = graph.mate(h);
    int w = graph.vertex_of_halfedge(hm);
    int j = graph.index_in_vertex(hm);
    GeometricData p = labels[vertex];
    for (int k = 0; k < i_marking; ++k) p = sym(p, ctx);
    GeometricData c0 = labels[w];
    for (int k = 0; k < j; ++k) c0 = sym(c0, ctx);
    EdgeGlue eg{labels[w], canonical_gluing_translation(p, c0, ctx), 0.0};
    GeometricData child_exposed = c0.left_translated(eg.x0);
    child_exposed.A = p.A;
    child_exposed.C = (child_exposed.B * child_exposed.A).inverse();
    const GeometricData& plus = (p.sign > 0) ? p : child_exposed;
    const GeometricData& minus = (p.sign > 0) ? child_exposed : p;
    GluingReport g = well_glued(plus, minus, std::max(accept, 1e-30), ctx);
    if (!g.structural_ok)
      throw std::runtime_error("assemble_representation: gluing failure (" + g.error + ")");
    if (!(g.defect < accept))
      throw std::runtime_error("assemble_representation: no compatible representative (defect " +
                               std::to_string(g.defect) + ")");
    if (ambiguity_probe) {
      GroupElement shift = child_exposed.A;
      GeometricData alt = child_exposed.left_translated(shift);
      alt.A = child_exposed.A;
      alt.B = shift * child_exposed.B * shift.inverse();
      alt.C = (alt.B * alt.A).inverse();
      const GeometricData& plus2 = (p.sign > 0) ? p : alt;
      const GeometricData& minus2 = (p.sign > 0) ? alt : p;
      GluingReport g2 = well_glued(plus2, minus2, accept, ctx);
      if (g2.accepted)
        throw std::runtime_error("assemble_representation: ambiguous compatible representatives");
    }
    eg.defect = g.defect;
    // un-rotated child with the boundary drift absorbed
    eg.child_base = labels[w].left_translated(eg.x0);
    eg.child_base.C = (eg.child_base.B * eg.child_base.A).inverse();
    return glue_cache.emplace(key, std::move(eg)).first->second;
  };

  // Child lift across (vertex, marking) from a node with translation t:
  // lift = child_base.left_translated(t), translation = t * x0.
  auto glue_child_at = [&](const AssembledRep::TreeNode& node, int i_marking) {
    const EdgeGlue& eg = glue_base(node.graph_vertex, i_marking);
    GeometricData child = eg.child_base.left_translated(node.translation);
    GroupElement x(node.translation.mat() * eg.x0.mat(), eg.x0.field());
    return std::make_tuple(child, x, eg.defect);
  };

  // Root.
  AssembledRep::TreeNode root;
  root.graph_vertex = 0;
  root.depth = 0;
  root.lift = labels[0];
  root.translation = GroupElement::identity(ctx.n(), ctx.field());
  if (root_override) {
    root.translation = *root_override;
    root.lift = labels[0].left_translated(*root_override);
  }
  rep.nodes.push_back(root);

  // First pass: spanning tree over the base graph (BFS by vertex id).
  std::vector<int> base_node_of(graph.vertices.size(), -1);
  base_node_of[0] = 0;
  std::vector<bool> edge_in_tree(graph.edges.size(), false);
  std::queue<int> bq;
  bq.push(0);
  while (!bq.empty()) {
    int node_idx = bq.front();
    bq.pop();
    int v = rep.nodes[node_idx].graph_vertex;
    for (int i = 0; i < 3; ++i) {
      int h = graph.vertices[v].cyclic[i];
      int hm = graph.mate(h);
      int w = graph.vertex_of_halfedge(hm);
      if (base_node_of[w] >= 0) continue;
      int j = graph.index_in_vertex(hm);
      auto [child, x, defect] = glue_child_at(rep.nodes[node_idx], i);
      rep.max_gluing_defect = std::max(rep.max_gluing_defect, defect);
      AssembledRep::TreeNode tn;
      tn.graph_vertex = w;
      tn.depth = rep.nodes[node_idx].depth + 1;
      tn.parent = node_idx;
      tn.parent_halfedge = h;
      tn.lift = child;
      tn.translation = x;
      base_node_of[w] = int(rep.nodes.size());
      for (size_t e = 0; e < graph.edges.size(); ++e)
        if ((graph.edges[e].first == h && graph.edges[e].second == hm) ||
            (graph.edges[e].first == hm && graph.edges[e].second == h))
          edge_in_tree[e] = true;
      rep.nodes.push_back(tn);
      bq.push(base_node_of[w]);
    }
  }

  // Non-tree edges: holonomies and closure residuals.
  for (size_t e = 0; e < graph.edges.size(); ++e) {
    if (edge_in_tree[e]) continue;
    int h = graph.edges[e].first, hm = graph.edges[e].second;
    int v = graph.vertex_of_halfedge(h), w = graph.vertex_of_halfedge(hm);
    int i = graph.index_in_vertex(h), j = graph.index_in_vertex(hm);
    const auto& nv = rep.nodes[base_node_of[v]];
    const auto& nw = rep.nodes[base_node_of[w]];
    auto [child, x, defect] = glue_child_at(nv, i);
    rep.max_gluing_defect = std::max(rep.max_gluing_defect, defect);
    // new lift of w equals holonomy * existing lift
    GroupElement hol(x.mat() * nw.translation.mat().inverse(), x.field());
    rep.non_tree_edges.push_back(int(e));
    rep.edge_holonomy.push_back(hol);
    // closure: exposed boundary on the v side equals hol-conjugate of the
    // exposed boundary on the w side
    GeometricData pv = nv.lift;
    for (int k = 0; k < i; ++k) pv = sym(pv, ctx);
    GeometricData pw = nw.lift;
    for (int k = 0; k < j; ++k) pw = sym(pw, ctx);
    double scale = std::max(1.0, (double)pv.A.mat().norm());
    rep.edge_consistency.push_back(psl_distance(pv.A, pw.A.conjugate_by(hol)) / scale);
  }

  // Deeper tree levels (beyond the spanning tree) for hexagon enumeration.
  size_t head = 0;
  while (head < rep.nodes.size()) {
    AssembledRep::TreeNode cur = rep.nodes[head];
    if (cur.depth >= depth) {
      ++head;
      continue;
    }
    int v = cur.graph_vertex;
    for (int i = 0; i < 3; ++i) {
      int h = graph.vertices[v].cyclic[i];
      // don't re-cross the edge we came from
      if (cur.parent >= 0) {
        int came_from = graph.mate(cur.parent_halfedge);
        if (h == came_from) continue;
      }
      int hm = graph.mate(h);
      int w = graph.vertex_of_halfedge(hm);
      int j = graph.index_in_vertex(hm);
      // already created during the spanning-tree pass?
      bool exists = false;
      for (const auto& nd : rep.nodes)
        if (nd.parent == int(head) && nd.parent_halfedge == h) exists = true;
      if (exists) continue;
      auto [child, x, defect] = glue_child_at(cur, i);
      rep.max_gluing_defect = std::max(rep.max_gluing_defect, defect);
      AssembledRep::TreeNode tn;
      tn.graph_vertex = w;
      tn.depth = cur.depth + 1;
      tn.parent = int(head);
      tn.parent_halfedge = h;
      tn.lift = child;
      tn.translation = x;
      rep.nodes.push_back(tn);
    }
    ++head;
  }

  // Boundary lengths per graph edge (from the root-side exposure).
  for (size_t e = 0; e < graph.edges.size(); ++e) {
    int h = graph.edges[e].first;
    int v = graph.vertex_of_halfedge(h);
    int i = graph.index_in_vertex(h);
    GeometricData pv = rep.nodes[base_node_of[v]].lift;
    for (int k = 0; k < i; ++k) pv = sym(pv, ctx);
    rep.boundary_lengths.push_back(boundary_translation_length(pv.A));
  }

  // Standard generators and relation for the theta graph:
  // x1 = B_root A_root, y1 = hol(edge 2), x2 = hol(edge 1), y2 = B_root.
  if (graph.vertices.size() == 2 && graph.edges.size() == 3 && rep.edge_holonomy.size() == 2) {
    GroupElement a1 = rep.nodes[0].lift.A, a2 = rep.nodes[0].lift.B;
    // Deck transformations of the two loops (tree edge out, non-tree edge
    // back) are the inverses of the stored crossing holonomies.
    GroupElement f1 = rep.edge_holonomy[0].inverse(), f2 = rep.edge_holonomy[1].inverse();
    rep.std_generators = {a2 * a1, f2, f1, a2};
    rep.std_generator_words = {"b*a", "loop(e2)", "loop(e1)", "b"};
    auto comm = [](const GroupElement& x, const GroupElement& y) {
      GroupElement xy = x * y;
      GroupElement yx = y * x;
      return GroupElement(xy.mat() * yx.mat().inverse(), x.field());
    };
    GroupElement w = comm(rep.std_generators[0], rep.std_generators[1]) *
                     comm(rep.std_generators[2], rep.std_generators[3]);
    rep.relation_residual =
        psl_distance(w, GroupElement::identity(ctx.n(), ctx.field()));
  } else {
    // General graphs: the closure residuals are the defining relations.
    double worst = 0;
    for (double r : rep.edge_consistency) worst = std::max(worst, r);
    rep.relation_residual = worst;
  }
  return rep;
}

DedupResult dedup_by_conjugacy(const std::vector<std::array<GroupElement, 3>>& triples,
                               const std::vector<Mat>& conjugator_ball, double tol) {
  DedupResult out;
  const int n = int(triples.size());
  out.class_of.assign(n, -1);
  std::vector<CartanVector> jp;
  for (const auto& t : triples) jp.push_back(jordan_projection(t[0]));
  for (int i = 0; i < n; ++i) {
    if (out.class_of[i] >= 0) continue;
    out.class_of[i] = out.classes;
    for (int j = i + 1; j < n; ++j) {
      if (out.class_of[j] >= 0) continue;
      if (jp[i].distance(jp[j]) > 1e-6) continue;  // conjugation invariant
      for (const auto& g : conjugator_ball) {
        GroupElement ge(g, triples[i][0].field());
        bool all = true;
        for (int k = 0; k < 3 && all; ++k) {
          double scale = std::max(1.0, (double)triples[j][k].mat().norm());
          all = psl_distance(triples[i][k].conjugate_by(ge), triples[j][k]) < tol * scale;
        }
        if (all) {
          out.class_of[j] = out.classes;
          break;
        }
      }
    }
    ++out.classes;
  }
  return out;
}

}  // namespace pantograph
