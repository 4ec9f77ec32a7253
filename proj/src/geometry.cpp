#include "layoutgen/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "layoutgen/error.hpp"

namespace layoutgen {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::InvalidState: return "invalid-state";
    case ErrorKind::EmptyCandidate: return "empty-candidate";
    case ErrorKind::NoValidCandidate: return "no-valid-candidate";
    case ErrorKind::AbsentMetric: return "absent-metric";
    case ErrorKind::ProviderFailure: return "provider-failure";
    case ErrorKind::DataError: return "data-error";
  }
  return "unknown";
}

bool BoundingBox::within(const CanvasSpec& canvas) const {
  return width >= 0 && height >= 0 && left >= 0 && top >= 0 &&
         right() <= canvas.width && bottom() <= canvas.height;
}

bool DomainConfig::has_type(const std::string& label) const {
  return std::find(type_vocabulary.begin(), type_vocabulary.end(), label) !=
         type_vocabulary.end();
}

DomainConfig domain_preset(const std::string& key) {
  if (key == "rico") {
    return {"rico",
            "android layout",
            {90, 160},
            {"text", "image", "icon", "list item", "text button", "toolbar",
             "web view", "input", "card", "advertisement", "background image",
             "drawer", "radio button", "checkbox", "multi-tab",
             "pager indicator", "modal", "on/off switch", "slider", "map view",
             "button bar", "video", "bottom navigation", "number stepper",
             "date picker"}};
  }
  if (key == "publaynet") {
    return {"publaynet", "document layout", {120, 160},
            {"text", "title", "list", "table", "figure"}};
  }
  if (key == "posterlayout") {
    return {"posterlayout", "poster layout", {102, 150},
            {"logo", "text", "underlay"}};
  }
  if (key == "webui") {
    return {"webui",
            "web layout",
            {120, 120},
            {"text", "link", "button", "title", "description", "image",
             "background", "logo", "icon", "input"}};
  }
  throw Error(ErrorKind::InvalidInput, "unknown domain preset: " + key);
}

std::vector<std::string> domain_preset_keys() {
  return {"rico", "publaynet", "posterlayout", "webui"};
}

std::string normalize_type_label(const std::string& label) {
  std::string out;
  out.reserve(label.size());
  bool pending_space = false;
  for (unsigned char ch : label) {
    if (std::isspace(ch)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(ch)));
  }
  return out;
}

int round_half_away(double v) { return static_cast<int>(std::lround(v)); }

bool clamp_to_canvas(BoundingBox& box, const CanvasSpec& canvas) {
  const BoundingBox before = box;
  box.left = std::clamp(box.left, 0, canvas.width);
  box.top = std::clamp(box.top, 0, canvas.height);
  box.width = std::clamp(box.width, 0, canvas.width - box.left);
  box.height = std::clamp(box.height, 0, canvas.height - box.top);
  return !(box == before);
}

Layout discretize_layout(const RawLayout& raw, const CanvasSpec& target) {
  if (!(raw.source_width > 0.0) || !(raw.source_height > 0.0)) {
    throw Error(ErrorKind::InvalidInput,
                "source canvas must have positive dimensions");
  }
  if (target.width <= 0 || target.height <= 0) {
    throw Error(ErrorKind::InvalidInput,
                "target canvas must have positive dimensions");
  }
  const double sx = target.width / raw.source_width;
  const double sy = target.height / raw.source_height;

  Layout out{target, {}};
  out.elements.reserve(raw.elements.size());
  for (const auto& e : raw.elements) {
    BoundingBox box{round_half_away(e.left * sx), round_half_away(e.top * sy),
                    round_half_away(e.width * sx),
                    round_half_away(e.height * sy)};
    clamp_to_canvas(box, target);
    out.elements.push_back({e.type_label, box});
  }
  return out;
}

std::int64_t intersection_area(const BoundingBox& a, const BoundingBox& b) {
  const std::int64_t ox =
      std::max(0, std::min(a.right(), b.right()) - std::max(a.left, b.left));
  const std::int64_t oy =
      std::max(0, std::min(a.bottom(), b.bottom()) - std::max(a.top, b.top));
  return ox * oy;
}

double box_iou(const BoundingBox& a, const BoundingBox& b) {
  const std::int64_t inter = intersection_area(a, b);
  const std::int64_t uni = a.area() + b.area() - inter;
  if (uni <= 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace layoutgen
