#pragma once

#include "pantograph/surface.hpp"

#include <functional>

namespace pantograph {

// Sampled boundary map: attracting fixed points in P^1(R) of the reference
// R-perfect representation paired with attracting flags of the target
// representation on the same boundary words.
struct SampledBoundaryMap {
  std::vector<double> points;      // x in P^1(R)
  std::vector<Flag> flags;         // xi(x)
  std::vector<Word> words;         // provenance
  int excluded_nonproximal = 0;
};

SampledBoundaryMap boundary_map(const std::vector<GroupElement>& target_gens,
                                const RPerfectSurfaceRep& reference, const TauContext& ctx,
                                int depth, int max_samples = 128);

struct SullivanReport {
  double delta_hat = 0;
  bool budget_limited = false;
  std::vector<double> per_triple;       // sup-defect per grid triple
  double holder_exponent = 0;           // fitted alpha from sample pairs
  double holder_constant = 0;
};

// Sampled Sullivan verification: for each grid triple h, an initial aligner
// from three flags followed by local descent on the sup-defect over the
// sample set; delta_hat is the max over the grid (an upper-bound semantics
// certificate at sample resolution).
SullivanReport sullivan_check(const SampledBoundaryMap& xi, const TauContext& ctx,
                              int triple_grid = 64, int aligner_budget = 200, unsigned seed = 7);

struct SchottkyCertificate {
  bool certified = false;
  double transversality_margin = 0;
  double worst_contraction = 0;   // max sampled Lipschitz factor (< 1 required)
  double worst_inclusion = 0;     // max distance of an image point to the attracting center
  std::string failure;
};

// Finite Schottky/Anosov-style certificate: pairwise transversality of the
// fixed flags with quantified margin, and每 sampled uniform contraction of the
// complement of the repelling neighborhood into the attracting one.
SchottkyCertificate schottky_certificate(const std::vector<GroupElement>& generators,
                                         const TauContext& ctx, double neighborhood_radius = 0.0,
                                         int net_size = 500, unsigned seed = 11);

// Quasi-symmetry constant over harmonic quadruples: for [w:x:y:z] = -1,
// k_hat = max of |[xi w : xi x : xi y : xi z]| and its reciprocal.
struct CrossRatioReport {
  double k_hat = 1.0;
  int degenerate_skipped = 0;
};
CrossRatioReport cross_ratio_qs_check(const std::function<cplx(double)>& xi, int quadruples,
                                      unsigned seed);

}  // namespace pantograph
