#include "layoutgen/serde.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>

#include "layoutgen/error.hpp"

namespace layoutgen {

namespace {

template <typename Range, typename Fn>
std::string join(const Range& items, Fn&& fmt, std::string_view sep = " | ") {
  std::string out;
  bool first = true;
  for (const auto& item : items) {
    if (!first) out += sep;
    out += fmt(item);
    first = false;
  }
  return out;
}

std::string labelled(std::string_view label, const std::string& body) {
  std::string out(label);
  out += ":";
  if (!body.empty()) {
    out += ' ';
    out += body;
  }
  return out;
}

std::string element_tuple(const Element& e) {
  return e.type_label + " " + std::to_string(e.box.left) + " " +
         std::to_string(e.box.top) + " " + std::to_string(e.box.width) + " " +
         std::to_string(e.box.height);
}

std::string type_line(const std::vector<std::string>& types) {
  return labelled("Element Type Constraint",
                  join(types, [](const std::string& s) { return s; }));
}

std::string ref_text(const ElementRef& r) {
  return r.type_label + " " + std::to_string(r.index);
}

std::string relation_text(const Relation& r) {
  std::string out = ref_text(r.subject);
  out += ' ';
  out += predicate_name(r.predicate);
  out += ' ';
  out += r.object ? ref_text(*r.object) : std::string("canvas");
  return out;
}

}  // namespace

std::string_view task_description(TaskKind task) {
  switch (task) {
    case TaskKind::GenT: return "generation conditioned on given element types";
    case TaskKind::GenTS:
      return "generation conditioned on given element types and sizes";
    case TaskKind::GenR:
      return "generation conditioned on given element relationships";
    case TaskKind::Completion: return "layout completion";
    case TaskKind::Refinement: return "layout refinement";
    case TaskKind::ContentAware: return "content-aware layout generation";
    case TaskKind::TextToLayout: return "text-to-layout";
  }
  return "";
}

std::string serialize_constraint(TaskKind task, const ConstraintSpec& c) {
  require_matches(task, c);
  switch (task) {
    case TaskKind::GenT:
      return type_line(std::get<TypeConstraint>(c).types);
    case TaskKind::GenTS:
      return labelled("Element Type and Size Constraint",
                      join(std::get<TypeSizeConstraint>(c).items,
                           [](const SizedType& s) {
                             return s.type_label + " " +
                                    std::to_string(s.width) + " " +
                                    std::to_string(s.height);
                           }));
    case TaskKind::GenR: {
      const auto& r = std::get<RelationConstraint>(c);
      return type_line(r.types) + "\n" +
             labelled("Element Relationship Constraint",
                      join(r.relations, relation_text));
    }
    case TaskKind::Completion:
      return labelled("Partial Layout",
                      join(std::get<PartialLayout>(c).elements, element_tuple));
    case TaskKind::Refinement:
      return labelled("Noise Layout",
                      join(std::get<NoisyLayout>(c).elements, element_tuple));
    case TaskKind::ContentAware: {
      const auto& cc = std::get<ContentConstraint>(c);
      return "Content Constraint: left " + std::to_string(cc.box.left) +
             "px, top " + std::to_string(cc.box.top) + "px, width " +
             std::to_string(cc.box.width) + "px, height " +
             std::to_string(cc.box.height) + "px\n" + type_line(cc.types);
    }
    case TaskKind::TextToLayout:
      return "Text: " + std::get<TextConstraint>(c).text;
  }
  throw Error(ErrorKind::InvalidInput, "unknown task");
}

std::string serialize_element_html(const Element& e) {
  return "<div class=\"" + e.type_label + "\" style=\"left:" +
         std::to_string(e.box.left) + "px; top:" + std::to_string(e.box.top) +
         "px; width:" + std::to_string(e.box.width) +
         "px; height:" + std::to_string(e.box.height) + "px\"></div>";
}

std::string serialize_layout_html(const Layout& y) {
  std::string out = "<html>\n<body>\n";
  for (const auto& e : y.elements) {
    out += serialize_element_html(e);
    out += '\n';
  }
  out += "</body>\n</html>";
  return out;
}

std::string serialize_preamble(TaskKind task, const DomainConfig& domain) {
  std::string out = "Please generate a layout based on the given information.\n";
  out += "Task Description: ";
  out += task_description(task);
  out += "\nLayout Domain: " + domain.name;
  out += "\nCanvas Size: canvas width is " +
         std::to_string(domain.canvas.width) + "px, canvas height is " +
         std::to_string(domain.canvas.height) + "px";
  return out;
}

// --- parsing -------------------------------------------------------------

namespace {

bool iequals_prefix(std::string_view text, std::size_t pos, std::string_view word) {
  if (pos + word.size() > text.size()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[pos + i])) != word[i]) {
      return false;
    }
  }
  return true;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

/// Attribute map of the text between `<div` and `>`.
std::map<std::string, std::string> scan_attributes(std::string_view tag) {
  std::map<std::string, std::string> attrs;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < tag.size() && std::isspace(static_cast<unsigned char>(tag[i]))) ++i;
  };
  while (i < tag.size()) {
    skip_ws();
    const std::size_t name_start = i;
    while (i < tag.size() && !std::isspace(static_cast<unsigned char>(tag[i])) &&
           tag[i] != '=' && tag[i] != '/') {
      ++i;
    }
    if (i == name_start) {
      ++i;
      continue;
    }
    std::string name = lower(tag.substr(name_start, i - name_start));
    skip_ws();
    std::string value;
    if (i < tag.size() && tag[i] == '=') {
      ++i;
      skip_ws();
      if (i < tag.size() && (tag[i] == '"' || tag[i] == '\'')) {
        const char quote = tag[i++];
        const std::size_t end = tag.find(quote, i);
        const std::size_t stop = end == std::string_view::npos ? tag.size() : end;
        value = std::string(tag.substr(i, stop - i));
        i = stop == tag.size() ? stop : stop + 1;
      } else {
        const std::size_t start = i;
        while (i < tag.size() && !std::isspace(static_cast<unsigned char>(tag[i]))) ++i;
        value = std::string(tag.substr(start, i - start));
      }
    }
    attrs.emplace(std::move(name), std::move(value));
  }
  return attrs;
}

/// "12px", " 12 ", "-3.5px" -> number; nullopt otherwise.
std::optional<double> parse_length(std::string_view raw) {
  std::string_view v = trim(raw);
  if (v.size() >= 2 && lower(v.substr(v.size() - 2)) == "px") {
    v = trim(v.substr(0, v.size() - 2));
  }
  if (v.empty()) return std::nullopt;
  double out = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || !std::isfinite(out)) return std::nullopt;
  if (std::abs(out) > 1e6) return std::nullopt;
  return out;
}

}  // namespace

ParseResult parse_layout_html(std::string_view text, const DomainConfig& domain) {
  ParseResult result;
  result.layout.canvas = domain.canvas;
  int div_number = 0;
  std::size_t pos = 0;
  while ((pos = text.find('<', pos)) != std::string_view::npos) {
    if (!iequals_prefix(text, pos + 1, "div")) {
      ++pos;
      continue;
    }
    const std::size_t after = pos + 4;
    if (after < text.size() && !std::isspace(static_cast<unsigned char>(text[after])) &&
        text[after] != '>' && text[after] != '/') {
      pos = after;
      continue;
    }
    ++div_number;
    const std::size_t close = text.find('>', after);
    const std::size_t end = close == std::string_view::npos ? text.size() : close;
    const auto attrs = scan_attributes(text.substr(after, end - after));
    pos = end;
    const std::string where = "div " + std::to_string(div_number);

    auto cls = attrs.find("class");
    auto style = attrs.find("style");
    if (cls == attrs.end() || style == attrs.end()) {
      result.warnings.push_back(where + ": missing class or style, skipped");
      continue;
    }
    const std::string label = normalize_type_label(cls->second);
    if (label.empty() ||
        (!domain.type_vocabulary.empty() && !domain.has_type(label))) {
      result.warnings.push_back(where + ": unknown type '" + cls->second +
                                "', skipped");
      continue;
    }

    std::map<std::string, double> values;
    bool malformed = false;
    std::string_view decls = style->second;
    while (!decls.empty()) {
      const std::size_t semi = decls.find(';');
      std::string_view decl = decls.substr(0, semi);
      decls = semi == std::string_view::npos ? std::string_view{} : decls.substr(semi + 1);
      if (trim(decl).empty()) continue;
      const std::size_t colon = decl.find(':');
      if (colon == std::string_view::npos) {
        malformed = true;
        break;
      }
      const std::string key = lower(trim(decl.substr(0, colon)));
      if (key != "left" && key != "top" && key != "width" && key != "height") {
        continue;
      }
      const auto number = parse_length(decl.substr(colon + 1));
      if (!number) {
        malformed = true;
        break;
      }
      values[key] = *number;
    }
    if (malformed || values.size() != 4) {
      result.warnings.push_back(where + ": malformed style, skipped");
      continue;
    }

    bool fractional = false;
    auto to_px = [&](const char* key) {
      const double v = values[key];
      if (v != std::floor(v)) fractional = true;
      return round_half_away(v);
    };
    BoundingBox box{to_px("left"), to_px("top"), to_px("width"), to_px("height")};
    if (fractional) {
      result.warnings.push_back(where + ": fractional coordinates rounded");
    }
    if (clamp_to_canvas(box, domain.canvas)) {
      result.warnings.push_back(where + ": clamped into canvas");
    }
    result.layout.elements.push_back({label, box});
  }

  if (result.layout.elements.empty()) {
    std::string msg = "no usable elements in candidate";
    if (!result.warnings.empty()) msg += " (" + result.warnings.front() + ")";
    throw Error(ErrorKind::EmptyCandidate, msg);
  }
  return result;
}

}  // namespace layoutgen
