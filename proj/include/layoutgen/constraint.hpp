#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "layoutgen/geometry.hpp"

namespace layoutgen {

enum class TaskKind {
  GenT,
  GenTS,
  GenR,
  Completion,
  Refinement,
  ContentAware,
  TextToLayout,
};

std::string_view task_key(TaskKind task);  // "gen-t", "gen-ts", ...
TaskKind parse_task(std::string_view key);
std::vector<TaskKind> all_tasks();

enum class Predicate { Top, Bottom, Left, Right, Larger, Smaller, Equal };

std::string_view predicate_name(Predicate p);
Predicate parse_predicate(std::string_view name);
bool is_size_predicate(Predicate p);

/// (type label, position in the constraint's type list)
struct ElementRef {
  std::string type_label;
  int index = 0;

  friend bool operator==(const ElementRef&, const ElementRef&) = default;
};

struct Relation {
  ElementRef subject;
  Predicate predicate = Predicate::Top;
  std::optional<ElementRef> object;  // nullopt means the canvas

  bool targets_canvas() const { return !object.has_value(); }

  friend bool operator==(const Relation&, const Relation&) = default;
};

struct SizedType {
  std::string type_label;
  int width = 0;
  int height = 0;

  friend bool operator==(const SizedType&, const SizedType&) = default;
};

struct TypeConstraint {
  std::vector<std::string> types;
  friend bool operator==(const TypeConstraint&, const TypeConstraint&) = default;
};

struct TypeSizeConstraint {
  std::vector<SizedType> items;
  friend bool operator==(const TypeSizeConstraint&,
                         const TypeSizeConstraint&) = default;
};

struct RelationConstraint {
  std::vector<std::string> types;
  std::vector<Relation> relations;
  friend bool operator==(const RelationConstraint&,
                         const RelationConstraint&) = default;
};

struct PartialLayout {
  std::vector<Element> elements;
  friend bool operator==(const PartialLayout&, const PartialLayout&) = default;
};

struct NoisyLayout {
  std::vector<Element> elements;
  friend bool operator==(const NoisyLayout&, const NoisyLayout&) = default;
};

struct ContentConstraint {
  BoundingBox box;  // rectified saliency box
  std::vector<std::string> types;
  friend bool operator==(const ContentConstraint&,
                         const ContentConstraint&) = default;
};

/// Free-text input. `types` and `relations` are optional evaluation
/// annotations; they never enter the prompt.
struct TextConstraint {
  std::string text;
  std::vector<std::string> types;
  std::vector<Relation> relations;
  friend bool operator==(const TextConstraint&, const TextConstraint&) = default;
};

using ConstraintSpec =
    std::variant<TypeConstraint, TypeSizeConstraint, RelationConstraint,
                 PartialLayout, NoisyLayout, ContentConstraint, TextConstraint>;

/// Geometric predicate check. `object` == nullptr means the canvas.
///   canvas top/bottom: center_y in the upper/lower third (left/right on x)
///   a top b: bottom(a) <= top(b)   a bottom b: top(a) >= bottom(b)
///   a larger b: area(a) >= area(b)*(1+tau)   smaller is the mirror image
///   equal: |area(a) - area(b)| <= tau*max(area(a), area(b))
bool relation_holds(Predicate predicate, const BoundingBox& subject,
                    const BoundingBox* object, const CanvasSpec& canvas,
                    double tau = 0.1);

/// True when the alternative held by `c` is the one `task` expects.
bool constraint_matches(TaskKind task, const ConstraintSpec& c);

/// Throws InvalidInput on mismatch.
void require_matches(TaskKind task, const ConstraintSpec& c);

/// Checks relation indices against the type list.
void validate_relations(const std::vector<std::string>& types,
                        const std::vector<Relation>& relations);

/// Type labels named by a constraint, in constraint order.
std::vector<std::string> constraint_types(const ConstraintSpec& c);

// Constraint derivation from a ground-truth layout (corpus ingestion and
// fixtures). Type lists are stably sorted by label.
std::vector<Element> sorted_by_type(const std::vector<Element>& elements);
TypeConstraint derive_type_constraint(const Layout& y);
TypeSizeConstraint derive_type_size_constraint(const Layout& y);
/// Relations that hold in `y` by construction: canvas position for elements in
/// the outer thirds and a size relation between consecutive elements.
RelationConstraint derive_relation_constraint(const Layout& y,
                                              double size_tolerance = 0.1);
PartialLayout derive_partial_layout(const Layout& y, std::size_t keep = 1);
NoisyLayout derive_noisy_layout(const Layout& y, std::uint64_t seed,
                                int max_shift = 2);
ContentConstraint derive_content_constraint(const Layout& y,
                                            const BoundingBox& saliency);

ConstraintSpec derive_constraint(TaskKind task, const Layout& y,
                                 std::uint64_t seed = 0);

}  // namespace layoutgen
