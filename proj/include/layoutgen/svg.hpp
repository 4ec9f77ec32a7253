#pragma once

#include <map>
#include <string>

#include "layoutgen/geometry.hpp"

namespace layoutgen {

/// type label -> CSS color
using StyleMap = std::map<std::string, std::string>;

/// Colors for the domain vocabulary: poster types use red/green/yellow,
/// everything else cycles through a fixed palette by vocabulary position.
StyleMap default_style(const DomainConfig& domain);

/// One translucent labelled rect per element inside a canvas-sized viewBox.
/// `scale` only affects the outer width/height attributes.
std::string render_svg(const Layout& y, const DomainConfig& domain,
                       const StyleMap& style = {}, int scale = 4);

}  // namespace layoutgen
