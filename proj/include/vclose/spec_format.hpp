#pragma once

// Group spec files:
//
//   vclose-spec v1
//   # comment
//   factors = [DInf, DInf, Zed, ZedMod(3)]
//   b = "b1*b2"
//   a = "a1^3*a2^5"
//
// Statements are separated by newlines or ';'.

#include <string>

#include "vclose/ambient.hpp"

namespace vclose {

inline constexpr const char* kSpecHeader = "vclose-spec v1";

/// Throws ParseError with a line number. Word syntax is checked; group
/// hypotheses are not (see validate_spec).
GroupSpec parse_spec(const std::string& text);
GroupSpec read_spec_file(const std::string& path);

/// Canonical text, parseable by parse_spec.
std::string format_spec(const GroupSpec& spec);

}  // namespace vclose
