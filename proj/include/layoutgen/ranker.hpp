#pragma once

#include <span>
#include <vector>

#include "layoutgen/error.hpp"
#include "layoutgen/geometry.hpp"

namespace layoutgen {

struct RankWeights {
  double align = 0.2;
  double overlap = 0.2;
  double iou = 0.6;

  /// Throws InvalidInput if any weight is negative/non-finite or all are zero.
  void validate() const;
};

struct Candidate {
  Layout layout;
  int source_index = 0;  // position among the sampled completions
};

struct RankedCandidate {
  Layout layout;
  double align = 0.0;
  double overlap = 0.0;
  double miou = 0.0;
  double q = 0.0;
  int source_index = 0;
};

/// q = w.align * align + w.overlap * overlap + w.iou * (1 - miou)
double quality_score(double align, double overlap, double miou, const RankWeights& w);

/// Scores every non-empty candidate against the references and sorts
/// ascending by q (ties: lower source_index first). Throws
/// NoValidCandidate when nothing is left to rank and InvalidInput when the
/// reference set is empty.
std::vector<RankedCandidate> rank_candidates(std::span<const Candidate> candidates,
                                             std::span<const Layout> references,
                                             const RankWeights& weights);

/// Convenience overload: source_index is the position in `candidates`.
std::vector<RankedCandidate> rank_candidates(std::span<const Layout> candidates,
                                             std::span<const Layout> references,
                                             const RankWeights& weights);

}  // namespace layoutgen
