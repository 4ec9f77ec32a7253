#include "layoutgen/metrics.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "layoutgen/error.hpp"
#include "layoutgen/matching.hpp"

namespace layoutgen {

double alignment_score(const Layout& y) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  const double cw = y.canvas.width;
  const double ch = y.canvas.height;

  // Rows: left, center-x, right, top, center-y, bottom (normalized).
  Eigen::Matrix<double, 6, Eigen::Dynamic> anchors(6, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const BoundingBox& b = y.elements[i].box;
    anchors.col(static_cast<Eigen::Index>(i)) << b.left / cw, b.center_x() / cw,
        b.right() / cw, b.top / ch, b.center_y() / ch, b.bottom() / ch;
  }

  double sum = 0.0;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    double d = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j) {
      if (i == j) continue;
      d = std::min(d, (anchors.col(i) - anchors.col(j)).cwiseAbs().minCoeff());
    }
    d = std::min(d, 1.0 - 1e-12);
    sum += -std::log1p(-d);
  }
  return 100.0 * sum / static_cast<double>(n);
}

double overlap_score(const Layout& y) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto area = y.elements[i].box.area();
    if (area <= 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      sum += static_cast<double>(intersection_area(y.elements[i].box, y.elements[j].box)) /
             static_cast<double>(area);
      ++pairs;
    }
  }
  return pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);
}

namespace {

std::map<std::string, std::vector<const Element*>> group_by_type(const Layout& y) {
  std::map<std::string, std::vector<const Element*>> groups;
  for (const auto& e : y.elements) groups[e.type_label].push_back(&e);
  return groups;
}

/// Sum of matched weights over shared labels, per-label canonical matching.
template <typename WeightFn>
double typed_matching_sum(const Layout& a, const Layout& b, WeightFn&& weight) {
  const auto ga = group_by_type(a);
  const auto gb = group_by_type(b);
  double total = 0.0;
  for (const auto& [label, as] : ga) {
    auto it = gb.find(label);
    if (it == gb.end()) continue;
    const auto& bs = it->second;
    Eigen::MatrixXd w(static_cast<Eigen::Index>(as.size()),
                      static_cast<Eigen::Index>(bs.size()));
    for (std::size_t u = 0; u < as.size(); ++u) {
      for (std::size_t v = 0; v < bs.size(); ++v) {
        w(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) =
            weight(*as[u], *bs[v]);
      }
    }
    total += hungarian_max_matching(w).total;
  }
  return total;
}

}  // namespace

double layout_pair_iou(const Layout& a, const Layout& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const double sum = typed_matching_sum(a, b, [](const Element& x, const Element& y) {
    return box_iou(x.box, y.box);
  });
  return sum / static_cast<double>(std::max(a.size(), b.size()));
}

double max_iou(const Layout& y, std::span<const Layout> references) {
  if (references.empty()) {
    throw Error(ErrorKind::InvalidInput, "max_iou needs at least one reference");
  }
  double best = 0.0;
  for (const auto& ref : references) best = std::max(best, layout_pair_iou(y, ref));
  return best;
}

namespace {

struct TypeCount {
  int violations = 0;
  int total = 0;
};

/// Required type instances versus the layout's label multiset. Missing
/// instances and surplus elements each count as one violated constraint.
TypeCount type_count_violations(const std::vector<std::string>& required,
                                const Layout& y) {
  std::map<std::string, int> need;
  for (const auto& t : required) ++need[t];
  std::map<std::string, int> have;
  for (const auto& e : y.elements) ++have[e.type_label];
  TypeCount out;
  out.total = static_cast<int>(required.size());
  for (const auto& [label, n] : need) {
    out.violations += std::max(0, n - have[label]);
  }
  for (const auto& [label, n] : have) {
    const int surplus = std::max(0, n - (need.count(label) ? need.at(label) : 0));
    out.violations += surplus;
    out.total += surplus;
  }
  return out;
}

/// Map constraint positions onto layout elements: the k-th occurrence of a
/// label in the type list is the k-th element with that label in the layout.
std::vector<const Element*> bind_positions(const std::vector<std::string>& types,
                                           const Layout& y) {
  std::map<std::string, std::vector<const Element*>> by_label;
  for (const auto& e : y.elements) by_label[e.type_label].push_back(&e);
  std::map<std::string, std::size_t> seen;
  std::vector<const Element*> out;
  out.reserve(types.size());
  for (const auto& t : types) {
    const std::size_t k = seen[t]++;
    auto it = by_label.find(t);
    out.push_back(it != by_label.end() && k < it->second.size() ? it->second[k]
                                                                 : nullptr);
  }
  return out;
}

TypeCount relation_violations(const std::vector<std::string>& types,
                              const std::vector<Relation>& relations,
                              const Layout& y, double tau) {
  const auto bound = bind_positions(types, y);
  auto lookup = [&](const ElementRef& ref) -> const Element* {
    if (ref.index < 0 || ref.index >= static_cast<int>(bound.size())) return nullptr;
    return bound[static_cast<std::size_t>(ref.index)];
  };
  TypeCount out;
  for (const auto& r : relations) {
    ++out.total;
    const Element* subject = lookup(r.subject);
    const Element* object = r.object ? lookup(*r.object) : nullptr;
    if (subject == nullptr || (r.object && object == nullptr)) {
      ++out.violations;
      continue;
    }
    if (!relation_holds(r.predicate, subject->box, object ? &object->box : nullptr,
                        y.canvas, tau)) {
      ++out.violations;
    }
  }
  return out;
}

/// Greedy same-type pairing: each required (type, w, h) in order claims the
/// unused element of that type with the smallest |dw| + |dh|.
TypeCount size_violations(const std::vector<SizedType>& items, const Layout& y) {
  std::vector<char> used(y.size(), 0);
  TypeCount out;
  out.total = static_cast<int>(items.size());
  for (const auto& item : items) {
    int best = -1;
    int best_cost = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < y.size(); ++i) {
      const Element& e = y.elements[i];
      if (used[i] || e.type_label != item.type_label) continue;
      const int cost = std::abs(e.box.width - item.width) + std::abs(e.box.height - item.height);
      if (cost < best_cost) {
        best_cost = cost;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) {
      ++out.violations;
      continue;
    }
    used[static_cast<std::size_t>(best)] = 1;
    if (best_cost != 0) ++out.violations;
  }
  for (char u : used) {
    if (!u) {
      ++out.violations;
      ++out.total;
    }
  }
  return out;
}

double ratio(const TypeCount& c) {
  return c.total == 0 ? 0.0 : static_cast<double>(c.violations) / c.total;
}

ViolationReport make_report(const TypeCount& c) {
  return {ratio(c), c.violations, c.total, std::nullopt, std::nullopt};
}

}  // namespace

std::optional<ViolationReport> violation_rate(TaskKind task, const ConstraintSpec& c,
                                              const Layout& y, double tau) {
  require_matches(task, c);
  switch (task) {
    case TaskKind::Completion:
    case TaskKind::Refinement:
      return std::nullopt;
    case TaskKind::GenT:
      return make_report(type_count_violations(std::get<TypeConstraint>(c).types, y));
    case TaskKind::ContentAware:
      return make_report(type_count_violations(std::get<ContentConstraint>(c).types, y));
    case TaskKind::GenTS:
      return make_report(size_violations(std::get<TypeSizeConstraint>(c).items, y));
    case TaskKind::GenR: {
      const auto& rc = std::get<RelationConstraint>(c);
      const TypeCount types = type_count_violations(rc.types, y);
      const TypeCount rel = relation_violations(rc.types, rc.relations, y, tau);
      return make_report({types.violations + rel.violations, types.total + rel.total});
    }
    case TaskKind::TextToLayout: {
      const auto& tc = std::get<TextConstraint>(c);
      if (tc.types.empty() && tc.relations.empty()) return std::nullopt;
      const TypeCount types = type_count_violations(tc.types, y);
      const TypeCount rel = relation_violations(tc.types, tc.relations, y, tau);
      ViolationReport report =
          make_report({types.violations + rel.violations, types.total + rel.total});
      report.type_rate = ratio(types);
      if (rel.total > 0) report.pos_size_rate = ratio(rel);
      return report;
    }
  }
  return std::nullopt;
}

namespace {

double docsim_raw(const Layout& a, const Layout& b) {
  const double cw = a.canvas.width;
  const double ch = a.canvas.height;
  const double sum = typed_matching_sum(a, b, [&](const Element& x, const Element& y) {
    const Eigen::Vector2d cx(x.box.center_x() / cw, x.box.center_y() / ch);
    const Eigen::Vector2d cy(y.box.center_x() / cw, y.box.center_y() / ch);
    const Eigen::Vector2d sx(x.box.width / cw, x.box.height / ch);
    const Eigen::Vector2d sy(y.box.width / cw, y.box.height / ch);
    const double area_x = sx.prod();
    const double area_y = sy.prod();
    const double delta_c = (cx - cy).norm();
    const double delta_s = (sx - sy).norm();
    return std::sqrt(std::min(area_x, area_y)) * std::exp2(-delta_c - 2.0 * delta_s);
  });
  return sum / static_cast<double>(std::max(a.size(), b.size()));
}

}  // namespace

double docsim(const Layout& a, const Layout& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const double self = std::sqrt(docsim_raw(a, a) * docsim_raw(b, b));
  if (!(self > 0.0)) return a == b ? 1.0 : 0.0;
  return std::clamp(docsim_raw(a, b) / self, 0.0, 1.0);
}

}  // namespace layoutgen
