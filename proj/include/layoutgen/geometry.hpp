#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "layoutgen/error.hpp"

namespace layoutgen {

struct CanvasSpec {
  int width = 0;
  int height = 0;

  friend bool operator==(const CanvasSpec&, const CanvasSpec&) = default;
};

/// Integer pixel box: (left, top) corner plus extent.
struct BoundingBox {
  int left = 0;
  int top = 0;
  int width = 0;
  int height = 0;

  int right() const { return left + width; }
  int bottom() const { return top + height; }
  std::int64_t area() const {
    return static_cast<std::int64_t>(width) * static_cast<std::int64_t>(height);
  }
  double center_x() const { return left + width / 2.0; }
  double center_y() const { return top + height / 2.0; }

  bool within(const CanvasSpec& canvas) const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Element {
  std::string type_label;
  BoundingBox box;

  friend bool operator==(const Element&, const Element&) = default;
};

/// Ordered element list on a canvas. Order is significant.
struct Layout {
  CanvasSpec canvas;
  std::vector<Element> elements;

  std::size_t size() const { return elements.size(); }
  bool empty() const { return elements.empty(); }

  friend bool operator==(const Layout&, const Layout&) = default;
};

struct DomainConfig {
  std::string key;   // preset key, e.g. "rico"
  std::string name;  // prompt-facing name, e.g. "android layout"
  CanvasSpec canvas;
  std::vector<std::string> type_vocabulary;

  std::size_t type_count() const { return type_vocabulary.size(); }
  bool has_type(const std::string& label) const;
};

/// Named presets: rico, publaynet, posterlayout, webui.
DomainConfig domain_preset(const std::string& key);
std::vector<std::string> domain_preset_keys();

/// Lowercase, trim, collapse internal whitespace runs to one space.
std::string normalize_type_label(const std::string& label);

// Real-valued source geometry, before discretization.
struct RawElement {
  std::string type_label;
  double left = 0.0;
  double top = 0.0;
  double width = 0.0;
  double height = 0.0;
};

struct RawLayout {
  double source_width = 0.0;
  double source_height = 0.0;
  std::vector<RawElement> elements;
};

/// Round half away from zero.
int round_half_away(double v);

/// Scale each axis by target/source, round to nearest, clamp into the canvas.
Layout discretize_layout(const RawLayout& raw, const CanvasSpec& target);

/// Clamp a box into the canvas: origin first, then extent. Returns true when
/// anything changed.
bool clamp_to_canvas(BoundingBox& box, const CanvasSpec& canvas);

std::int64_t intersection_area(const BoundingBox& a, const BoundingBox& b);

/// |a ∩ b| / |a ∪ b|; 0 when the union is empty.
double box_iou(const BoundingBox& a, const BoundingBox& b);

}  // namespace layoutgen
