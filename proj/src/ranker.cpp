#include "layoutgen/ranker.hpp"

#include <algorithm>
#include <cmath>

#include "layoutgen/error.hpp"
#include "layoutgen/metrics.hpp"

namespace layoutgen {

void RankWeights::validate() const {
  for (double w : {align, overlap, iou}) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorKind::InvalidInput, "rank weights must be finite and non-negative");
    }
  }
  if (align == 0.0 && overlap == 0.0 && iou == 0.0) {
    throw Error(ErrorKind::InvalidInput, "rank weights must not all be zero");
  }
}

double quality_score(double align, double overlap, double miou, const RankWeights& w) {
  return w.align * align + w.overlap * overlap + w.iou * (1.0 - miou);
}

std::vector<RankedCandidate> rank_candidates(std::span<const Candidate> candidates,
                                             std::span<const Layout> references,
                                             const RankWeights& weights) {
  weights.validate();
  if (references.empty()) {
    throw Error(ErrorKind::InvalidInput, "ranking needs at least one reference layout");
  }
  std::vector<RankedCandidate> ranked;
  ranked.reserve(candidates.size());
  for (const auto& c : candidates) {
    if (c.layout.empty()) continue;
    RankedCandidate r;
    r.layout = c.layout;
    r.source_index = c.source_index;
    r.align = alignment_score(c.layout);
    r.overlap = overlap_score(c.layout);
    r.miou = max_iou(c.layout, references);
    r.q = quality_score(r.align, r.overlap, r.miou, weights);
    ranked.push_back(std::move(r));
  }
  if (ranked.empty()) {
    throw Error(ErrorKind::NoValidCandidate, "no valid candidate to rank");
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedCandidate& a, const RankedCandidate& b) {
                     if (a.q != b.q) return a.q < b.q;
                     return a.source_index < b.source_index;
                   });
  return ranked;
}

std::vector<RankedCandidate> rank_candidates(std::span<const Layout> candidates,
                                             std::span<const Layout> references,
                                             const RankWeights& weights) {
  std::vector<Candidate> indexed;
  indexed.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    indexed.push_back({candidates[i], static_cast<int>(i)});
  }
  return rank_candidates(std::span<const Candidate>(indexed), references, weights);
}

}  // namespace layoutgen
