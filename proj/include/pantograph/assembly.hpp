#pragma once

#include "pantograph/pants.hpp"
#include "pantograph/simplex.hpp"

#include <map>
#include <optional>

namespace pantograph {

// Trivalent bipartite ribbon graph: vertices carry a cyclic order on their
// three half-edges; edges pair half-edges of opposite sides.
struct RibbonGraph {
  struct Vertex {
    int id = 0;
    int side = +1;  // +1 or -1
    std::array<int, 3> cyclic{};
  };
  std::vector<Vertex> vertices;
  std::vector<std::pair<int, int>> edges;

  int vertex_of_halfedge(int h) const;
  int index_in_vertex(int h) const;         // 0,1,2 within the cyclic order
  int mate(int h) const;                    // paired half-edge
  bool trivalent() const;
  bool bipartite() const;
  bool connected() const;
  int genus() const { return int(vertices.size()) / 2 + 1; }
  int diameter() const;

  static RibbonGraph theta();  // 2 vertices, 3 edges: the genus-2 graph
};

// Bipartite matching instance with order-3 free sym actions on both sides.
struct MatchingInstance {
  int nplus = 0, nminus = 0;
  std::vector<std::pair<int, int>> admissible;
  std::vector<int> sym_plus, sym_minus;  // permutations (may be empty for pure matching)

  bool sym_valid() const;
};

struct HallResult {
  bool matched = false;
  std::vector<int> match;          // for each E+ element, its E- partner
  std::vector<int> violating_set;  // Hall deficiency certificate on failure
};

// Hopcroft-Karp matching; on failure returns a set A with |N(A)| < |A|.
HallResult hall_matching(const MatchingInstance& inst);
// Exhaustive backtracking oracle for small instances.
bool hall_matching_bruteforce(const MatchingInstance& inst);

// Integer solution of the gluing system: mu >= 0 on F+ u F-, sym-invariant,
// equal side masses, Hall inequalities over every subset of F+, nonzero.
struct IntegerGluingResult {
  bool feasible = false;
  std::vector<long long> mu_plus, mu_minus;
  std::vector<Rat> x_rational;
  std::vector<Rat> farkas;  // certificate rows aligned with `system`
  LinearSystem system;      // the (lazily grown) system actually solved
};
IntegerGluingResult integer_gluing_solution(const MatchingInstance& inst);
// Exact verification of an integer solution against the full system.
bool verify_integer_gluing(const MatchingInstance& inst, const std::vector<long long>& mu_plus,
                           const std::vector<long long>& mu_minus);

// Ribbon graph from a matched instance: vertices are sym-orbits, edges follow
// the matching, cyclic orders from sym.
struct BuiltGraph {
  RibbonGraph graph;
  std::vector<int> plus_orbit_of;   // E+ element -> vertex id
  std::vector<int> minus_orbit_of;  // E- element -> vertex id
};
BuiltGraph build_ribbon_graph(const MatchingInstance& inst, const std::vector<int>& matching);

// Assembled closed-surface representation from per-vertex geometric data.
struct AssembledRep {
  int n = 2;
  double R = 0;
  double eps_prime = 0;
  RibbonGraph graph;

  struct TreeNode {
    int graph_vertex = 0;
    int depth = 0;
    int parent = -1;           // tree node index
    int parent_halfedge = -1;  // half-edge on the parent graph vertex
    GeometricData lift;
    GroupElement translation;  // lift = translation * base_label(vertex)
  };
  std::vector<TreeNode> nodes;                 // universal-cover tree (BFS order)
  std::vector<GroupElement> edge_holonomy;     // per non-tree edge of the base graph
  std::vector<int> non_tree_edges;             // edge indices
  std::vector<double> edge_consistency;        // closure residuals per non-tree edge

  // Standard generators (theta graph): x1, y1, x2, y2 with
  // [x1,y1][x2,y2] = 1; empty otherwise.
  std::vector<GroupElement> std_generators;
  std::vector<std::string> std_generator_words;
  double relation_residual = 0.0;
  std::vector<double> boundary_lengths;  // per graph edge

  double max_gluing_defect = 0.0;
};

// Breadth-first lift over the universal-cover tree; labels are the base
// geometric data per graph vertex (sign must match the vertex side).  The
// gluer is well_glued; eps_prime = 0 requests the canonical exact gluing
// (accepted when the defect is at numerical zero).
AssembledRep assemble_representation(const RibbonGraph& graph,
                                     const std::vector<GeometricData>& labels,
                                     const TauContext& ctx, double eps_prime, int depth = -1,
                                     bool ambiguity_probe = false,
                                     const GroupElement* root_override = nullptr);

// Conjugacy classes of pants triples under a word-ball of lattice elements.
struct DedupResult {
  std::vector<int> class_of;
  int classes = 0;
  std::vector<bool> merged_with_certificate;
};
DedupResult dedup_by_conjugacy(const std::vector<std::array<GroupElement, 3>>& triples,
                               const std::vector<Mat>& conjugator_ball, double tol);

// Translation length of a boundary holonomy read off the Jordan projection:
// lambda = (l/2)(n-1, n-3, ...), so l = 2 lambda_1 / (n-1).
double boundary_translation_length(const GroupElement& g);

namespace exactpath {

// Extended-precision (double-word) closed-form construction of the theta
// graph demo.  Boundary holonomies in PSL(n,C) have condition e^{2(n-1)R};
// the surface-relation tolerance sits below what single-word storage of such
// matrices can express, so the demo generators are carried as double-word
// matrices (entry = value + correction).
struct ThetaDemo {
  int n = 2;
  double R = 0;
  // x1, y1, x2, y2 (tau-images) with [x1,y1][x2,y2] = 1; each entry stored as
  // a (hi, lo) pair of long doubles.
  std::vector<std::vector<std::pair<long double, long double>>> gens_dd;  // row-major
  std::vector<GroupElement> gens;  // single-word views of the same matrices

  // Relation residual of the double-word data, evaluated in double-word
  // arithmetic.
  double relation_residual() const;
};

ThetaDemo theta_demo(const TauContext& ctx, double R);

// Single-word views only (convenience).
std::vector<GroupElement> theta_generators(const TauContext& ctx, double R);

// Relation residual of single-word matrices, word evaluated in double-word
// arithmetic (measures the storage floor of the given data).
double theta_relation_residual(const std::vector<GroupElement>& gens);

}  // namespace exactpath

}  // namespace pantograph
