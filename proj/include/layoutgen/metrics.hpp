#pragma once

#include <optional>
#include <span>
#include <vector>

#include "layoutgen/constraint.hpp"
#include "layoutgen/geometry.hpp"

namespace layoutgen {

struct MetricReport {
  double align = 0.0;
  double overlap = 0.0;
  double miou = 0.0;
  std::optional<double> violation_rate;
  std::optional<double> docsim;
};

/// (100/N) * sum_i -log(1 - d_i), d_i = smallest normalized distance between
/// like anchors (left/center/right on x, top/center/bottom on y) of element i
/// and any other element. 0 for fewer than two elements.
double alignment_score(const Layout& y);

/// Mean over ordered pairs (i, j), i != j, of |b_i ∩ b_j| / |b_i|, skipping
/// zero-area i. 0 for fewer than two elements.
double overlap_score(const Layout& y);

/// Type-respecting best matching by box IoU, normalized by max(|a|, |b|).
double layout_pair_iou(const Layout& a, const Layout& b);

/// Max of layout_pair_iou over references. Throws InvalidInput when empty.
double max_iou(const Layout& y, std::span<const Layout> references);

struct ViolationReport {
  double rate = 0.0;
  int violations = 0;
  int total = 0;
  // Text-to-layout breakdown: type counts and position/size relations.
  std::optional<double> type_rate;
  std::optional<double> pos_size_rate;
};

/// Fraction of atomic constraints the layout violates; nullopt for tasks
/// without a defined rate (completion, refinement) and for text inputs that
/// carry no type annotations.
std::optional<ViolationReport> violation_rate(TaskKind task, const ConstraintSpec& c,
                                              const Layout& y, double tau = 0.1);

/// Matched-pair similarity weighted by size, position and shape agreement,
/// normalized so docsim(y, y) == 1 and symmetric in its arguments.
double docsim(const Layout& a, const Layout& b);

}  // namespace layoutgen
