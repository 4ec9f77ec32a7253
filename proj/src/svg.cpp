#include "layoutgen/svg.hpp"

#include <array>

namespace layoutgen {

namespace {

constexpr std::array<const char*, 12> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939"};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

StyleMap default_style(const DomainConfig& domain) {
  StyleMap style;
  for (std::size_t i = 0; i < domain.type_vocabulary.size(); ++i) {
    style[domain.type_vocabulary[i]] = kPalette[i % kPalette.size()];
  }
  if (domain.key == "posterlayout") {
    style["logo"] = "#e41a1c";
    style["text"] = "#4daf4a";
    style["underlay"] = "#ffd700";
  }
  return style;
}

std::string render_svg(const Layout& y, const DomainConfig& domain, const StyleMap& style,
                       int scale) {
  StyleMap colors = default_style(domain);
  for (const auto& [k, v] : style) colors[k] = v;

  const std::string w = std::to_string(y.canvas.width);
  const std::string h = std::to_string(y.canvas.height);
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(y.canvas.width * scale) + "\" height=\"" +
         std::to_string(y.canvas.height * scale) + "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h +
         "\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"0.5\"/>\n";
  for (const auto& e : y.elements) {
    auto it = colors.find(e.type_label);
    const std::string color = it != colors.end() ? it->second : "#999999";
    const std::string label = xml_escape(e.type_label);
    out += "<g class=\"" + label + "\">";
    out += "<rect x=\"" + std::to_string(e.box.left) + "\" y=\"" + std::to_string(e.box.top) +
           "\" width=\"" + std::to_string(e.box.width) + "\" height=\"" +
           std::to_string(e.box.height) + "\" fill=\"" + color +
           "\" fill-opacity=\"0.4\" stroke=\"" + color + "\" stroke-width=\"0.5\"/>";
    out += "<text x=\"" + std::to_string(e.box.left + 1) + "\" y=\"" +
           std::to_string(e.box.top + 3) + "\" font-size=\"3\" font-family=\"sans-serif\">" +
           label + "</text>";
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace layoutgen
