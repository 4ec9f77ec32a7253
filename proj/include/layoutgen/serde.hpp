#pragma once

#include <string>
#include <vector>

#include "layoutgen/constraint.hpp"
#include "layoutgen/geometry.hpp"

namespace layoutgen {

/// Prompt-facing task description, e.g. "layout refinement".
std::string_view task_description(TaskKind task);

/// Constraint text as it appears in the prompt. Multi-part constraints
/// (relations, content) span two lines joined by '\n'; no trailing newline.
std::string serialize_constraint(TaskKind task, const ConstraintSpec& c);

/// `<html>`/`<body>` scaffold with one div line per element, no trailing
/// newline after `</html>`.
std::string serialize_layout_html(const Layout& y);

/// Single element line without the scaffold.
std::string serialize_element_html(const Element& e);

/// Four-line preamble, no trailing newline.
std::string serialize_preamble(TaskKind task, const DomainConfig& domain);

struct ParseResult {
  Layout layout;
  std::vector<std::string> warnings;
};

/// Tolerant extraction from untrusted model output. Scans every `<div ...>`
/// tag, reads `class` and the four style lengths in any order, normalizes
/// labels, clamps boxes into the domain canvas. Elements that cannot be used
/// are skipped with a warning. Throws Error(EmptyCandidate) when nothing
/// survives; never throws anything else.
ParseResult parse_layout_html(std::string_view text, const DomainConfig& domain);

}  // namespace layoutgen
