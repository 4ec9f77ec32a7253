#include "layoutgen/constraint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "layoutgen/error.hpp"
#include "layoutgen/prng.hpp"

namespace layoutgen {

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string_view task_key(TaskKind task) {
  switch (task) {
    case TaskKind::GenT: return "gen-t";
    case TaskKind::GenTS: return "gen-ts";
    case TaskKind::GenR: return "gen-r";
    case TaskKind::Completion: return "completion";
    case TaskKind::Refinement: return "refinement";
    case TaskKind::ContentAware: return "content-aware";
    case TaskKind::TextToLayout: return "text-to-layout";
  }
  return "";
}

std::vector<TaskKind> all_tasks() {
  return {TaskKind::GenT,       TaskKind::GenTS,        TaskKind::GenR,
          TaskKind::Completion, TaskKind::Refinement,   TaskKind::ContentAware,
          TaskKind::TextToLayout};
}

TaskKind parse_task(std::string_view key) {
  for (TaskKind t : all_tasks()) {
    if (task_key(t) == key) return t;
  }
  throw Error(ErrorKind::InvalidInput, "unknown task: " + std::string(key));
}

std::string_view predicate_name(Predicate p) {
  switch (p) {
    case Predicate::Top: return "top";
    case Predicate::Bottom: return "bottom";
    case Predicate::Left: return "left";
    case Predicate::Right: return "right";
    case Predicate::Larger: return "larger";
    case Predicate::Smaller: return "smaller";
    case Predicate::Equal: return "equal";
  }
  return "";
}

Predicate parse_predicate(std::string_view name) {
  for (Predicate p : {Predicate::Top, Predicate::Bottom, Predicate::Left,
                      Predicate::Right, Predicate::Larger, Predicate::Smaller,
                      Predicate::Equal}) {
    if (predicate_name(p) == name) return p;
  }
  throw Error(ErrorKind::InvalidInput,
              "unknown relation predicate: " + std::string(name));
}

bool is_size_predicate(Predicate p) {
  return p == Predicate::Larger || p == Predicate::Smaller ||
         p == Predicate::Equal;
}

bool relation_holds(Predicate predicate, const BoundingBox& a,
                    const BoundingBox* b, const CanvasSpec& canvas,
                    double tau) {
  if (b == nullptr) {
    switch (predicate) {
      case Predicate::Top: return a.center_y() < canvas.height / 3.0;
      case Predicate::Bottom: return a.center_y() > 2.0 * canvas.height / 3.0;
      case Predicate::Left: return a.center_x() < canvas.width / 3.0;
      case Predicate::Right: return a.center_x() > 2.0 * canvas.width / 3.0;
      default: return false;
    }
  }
  const double area_a = static_cast<double>(a.area());
  const double area_b = static_cast<double>(b->area());
  switch (predicate) {
    case Predicate::Top: return a.bottom() <= b->top;
    case Predicate::Bottom: return a.top >= b->bottom();
    case Predicate::Left: return a.right() <= b->left;
    case Predicate::Right: return a.left >= b->right();
    case Predicate::Larger: return area_a >= area_b * (1.0 + tau);
    case Predicate::Smaller: return area_a * (1.0 + tau) <= area_b;
    case Predicate::Equal:
      return std::abs(area_a - area_b) <= tau * std::max(area_a, area_b);
  }
  return false;
}

namespace {

template <typename T, typename Variant>
struct AltIndex;

template <typename T, typename... Ts>
struct AltIndex<T, std::variant<Ts...>> {
  static constexpr std::size_t value = [] {
    constexpr bool matches[] = {std::is_same_v<T, Ts>...};
    for (std::size_t i = 0; i < sizeof...(Ts); ++i) {
      if (matches[i]) return i;
    }
    return std::variant_npos;
  }();
};

template <typename T>
constexpr std::size_t alt_index() {
  return AltIndex<T, ConstraintSpec>::value;
}

std::size_t expected_alternative(TaskKind task) {
  switch (task) {
    case TaskKind::GenT: return alt_index<TypeConstraint>();
    case TaskKind::GenTS: return alt_index<TypeSizeConstraint>();
    case TaskKind::GenR: return alt_index<RelationConstraint>();
    case TaskKind::Completion: return alt_index<PartialLayout>();
    case TaskKind::Refinement: return alt_index<NoisyLayout>();
    case TaskKind::ContentAware: return alt_index<ContentConstraint>();
    case TaskKind::TextToLayout: return alt_index<TextConstraint>();
  }
  return std::variant_npos;
}

std::vector<std::string> labels_of(const std::vector<Element>& elements) {
  std::vector<std::string> out;
  out.reserve(elements.size());
  for (const auto& e : elements) out.push_back(e.type_label);
  return out;
}

}  // namespace

bool constraint_matches(TaskKind task, const ConstraintSpec& c) {
  return c.index() == expected_alternative(task);
}

void require_matches(TaskKind task, const ConstraintSpec& c) {
  if (!constraint_matches(task, c)) {
    throw Error(ErrorKind::InvalidInput,
                "constraint kind does not match task " +
                    std::string(task_key(task)));
  }
}

void validate_relations(const std::vector<std::string>& types,
                        const std::vector<Relation>& relations) {
  auto check = [&](const ElementRef& ref) {
    if (ref.index < 0 || ref.index >= static_cast<int>(types.size()) ||
        types[ref.index] != ref.type_label) {
      throw Error(ErrorKind::InvalidInput,
                  "relation references invalid element " + ref.type_label +
                      " " + std::to_string(ref.index));
    }
  };
  for (const auto& r : relations) {
    check(r.subject);
    if (r.object) {
      check(*r.object);
    } else if (is_size_predicate(r.predicate)) {
      throw Error(ErrorKind::InvalidInput,
                  "size relation cannot target the canvas");
    }
  }
}

std::vector<std::string> constraint_types(const ConstraintSpec& c) {
  struct Visitor {
    std::vector<std::string> operator()(const TypeConstraint& x) const {
      return x.types;
    }
    std::vector<std::string> operator()(const TypeSizeConstraint& x) const {
      std::vector<std::string> out;
      for (const auto& i : x.items) out.push_back(i.type_label);
      return out;
    }
    std::vector<std::string> operator()(const RelationConstraint& x) const {
      return x.types;
    }
    std::vector<std::string> operator()(const PartialLayout& x) const {
      return labels_of(x.elements);
    }
    std::vector<std::string> operator()(const NoisyLayout& x) const {
      return labels_of(x.elements);
    }
    std::vector<std::string> operator()(const ContentConstraint& x) const {
      return x.types;
    }
    std::vector<std::string> operator()(const TextConstraint& x) const {
      return x.types;
    }
  };
  return std::visit(Visitor{}, c);
}

std::vector<Element> sorted_by_type(const std::vector<Element>& elements) {
  std::vector<Element> out = elements;
  std::stable_sort(out.begin(), out.end(), [](const Element& a, const Element& b) {
    return a.type_label < b.type_label;
  });
  return out;
}

TypeConstraint derive_type_constraint(const Layout& y) {
  return {labels_of(sorted_by_type(y.elements))};
}

TypeSizeConstraint derive_type_size_constraint(const Layout& y) {
  TypeSizeConstraint out;
  for (const auto& e : sorted_by_type(y.elements)) {
    out.items.push_back({e.type_label, e.box.width, e.box.height});
  }
  return out;
}

RelationConstraint derive_relation_constraint(const Layout& y,
                                              double size_tolerance) {
  const auto sorted = sorted_by_type(y.elements);
  RelationConstraint out{labels_of(sorted), {}};
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const ElementRef self{sorted[i].type_label, static_cast<int>(i)};
    const BoundingBox& box = sorted[i].box;
    for (Predicate p : {Predicate::Top, Predicate::Bottom}) {
      if (relation_holds(p, box, nullptr, y.canvas, size_tolerance)) {
        out.relations.push_back({self, p, std::nullopt});
      }
    }
    if (i == 0) continue;
    const ElementRef prev{sorted[i - 1].type_label, static_cast<int>(i - 1)};
    const BoundingBox& prev_box = sorted[i - 1].box;
    for (Predicate p : {Predicate::Larger, Predicate::Smaller, Predicate::Equal}) {
      if (relation_holds(p, box, &prev_box, y.canvas, size_tolerance)) {
        out.relations.push_back({self, p, prev});
        break;
      }
    }
    for (Predicate p : {Predicate::Top, Predicate::Bottom}) {
      if (relation_holds(p, box, &prev_box, y.canvas, size_tolerance)) {
        out.relations.push_back({self, p, prev});
        break;
      }
    }
  }
  return out;
}

PartialLayout derive_partial_layout(const Layout& y, std::size_t keep) {
  PartialLayout out;
  for (std::size_t i = 0; i < std::min(keep, y.elements.size()); ++i) {
    out.elements.push_back(y.elements[i]);
  }
  return out;
}

NoisyLayout derive_noisy_layout(const Layout& y, std::uint64_t seed,
                                int max_shift) {
  SplitMix64 rng(seed);
  NoisyLayout out;
  for (const auto& e : sorted_by_type(y.elements)) {
    Element noisy = e;
    noisy.box.left += rng.uniform_int(-max_shift, max_shift);
    noisy.box.top += rng.uniform_int(-max_shift, max_shift);
    noisy.box.width += rng.uniform_int(-max_shift, max_shift);
    noisy.box.height += rng.uniform_int(-max_shift, max_shift);
    clamp_to_canvas(noisy.box, y.canvas);
    out.elements.push_back(noisy);
  }
  return out;
}

ContentConstraint derive_content_constraint(const Layout& y,
                                            const BoundingBox& saliency) {
  return {saliency, labels_of(sorted_by_type(y.elements))};
}

ConstraintSpec derive_constraint(TaskKind task, const Layout& y,
                                 std::uint64_t seed) {
  switch (task) {
    case TaskKind::GenT: return derive_type_constraint(y);
    case TaskKind::GenTS: return derive_type_size_constraint(y);
    case TaskKind::GenR: return derive_relation_constraint(y);
    case TaskKind::Completion: return derive_partial_layout(y);
    case TaskKind::Refinement: return derive_noisy_layout(y, seed);
    case TaskKind::ContentAware:
      throw Error(ErrorKind::InvalidInput,
                  "content-aware constraints need a saliency box");
    case TaskKind::TextToLayout:
      throw Error(ErrorKind::InvalidInput,
                  "text-to-layout constraints need the input text");
  }
  throw Error(ErrorKind::InvalidInput, "unknown task");
}

}  // namespace layoutgen
