#pragma once

#include "pantograph/assembly.hpp"

namespace pantograph {

// Closed R-perfect surface representation: every boundary length 2R, every
// twist parameter 1, built over a trivalent bipartite ribbon graph.
struct RPerfectSurfaceRep {
  double R = 0;
  AssembledRep rep;  // n = 2
};

RPerfectSurfaceRep r_perfect_surface(const RibbonGraph& graph, double R, int depth = -1);

// Word in the standard generators (x1, y1, x2, y2): signed 1-based indices.
using Word = std::vector<int>;
Word word_inverse(const Word& w);
Word word_concat(const Word& a, const Word& b);
GroupElement word_eval(const Word& w, const std::vector<GroupElement>& gens);

// Boundary-curve words of the theta-graph demo: for each tree node of the
// assembled representation and each cyclic marking, the corresponding
// surface-group element as a word in the standard generators.
struct ThetaWords {
  std::vector<Word> node_deck;                 // per tree node
  std::array<std::array<Word, 3>, 2> base;     // [graph vertex][marking]

  Word boundary(const AssembledRep& rep, int node, int marking) const;
};
ThetaWords theta_words(const AssembledRep& rep);

// Marked hexagon of the induced right-angled tiling: one of the two ideal
// triangles of a pants lift, with its cyclic marking.
struct MarkedHexagon {
  int node = 0;
  int marking = 0;
  GroupElement a, b, c;   // boundary words of the marked pants
  GroupElement frame_h, frame_hp;
  double realized_residual = 0;
};

std::vector<MarkedHexagon> hexagon_tiling(const RPerfectSurfaceRep& surf, const TauContext& ctx2,
                                          int depth);

// tau_2 is conjugation by diag(1,-1); this undoes it so Moebius read-offs
// on P^1(R) refer to the genuine PSL(2,R) element.
Mat unembed2(const Mat& m);

// Signed positions (axis-length parameter) of the feet of the common
// perpendiculars from the axes of b and c onto the axis of a.
std::array<double, 2> perpendicular_feet_on_axis(const Mat& a, const Mat& b, const Mat& c);

// Overlap length of the hexagon sides induced on the shared boundary axis by
// the two adjacent pants; R-1 for an R-perfect twist-1 gluing.
double hexagon_overlap_on_axis(const RPerfectSurfaceRep& surf, const TauContext& ctx2);

// Accessible-point sample: endpoints (attracting fixed points in P^1(R)) of
// non-backtracking acceptable sequences of boundary axes to the given depth.
struct AccessibleSample {
  std::vector<double> points;                  // P^1(R) values
  std::vector<std::pair<int, int>> source;     // (tree node, marking)
  double covering_radius = 0;                  // after pull-back by the root frame
};
AccessibleSample accessible_points(const RPerfectSurfaceRep& surf, const TauContext& ctx2,
                                   int depth, int budget = 4096);

double p1_covering_radius(std::vector<double> points);

}  // namespace pantograph
