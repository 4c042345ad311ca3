#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "dsplit/schemes.hpp"

namespace dsplit {

using SchemeFileContents = std::variant<SplittingScheme, LowStorageScheme, ButcherTableau>;

// Scheme files are JSON documents:
//
//   {"kind": "splitting" | "williamson" | "vdh" | "butcher",
//    "name": "...",
//    "a": [[re, im], ...], "b": [[re, im], ...],
//    "p": 4, "q": 6, "symmetric": true}
//
// williamson: a = A_i (A_1 = 0), b = B_i, p = order.
// vdh:        a = subdiagonal a_{i+1,i} (s-1 entries), b = weights, p = order.
// butcher:    "A" = rows of [re, im] pairs, b, optional "b_hat" and "c".
// A bare number is accepted wherever a [re, im] pair is expected.

/// Throws ParseError on malformed input and InvariantViolation when the
/// decoded coefficients fail their structural checks.
SchemeFileContents parse_scheme_json(std::string_view text);
SchemeFileContents load_scheme_file(const std::filesystem::path& path);

std::string to_json(const SplittingScheme& scheme);
std::string to_json(const LowStorageScheme& scheme);
std::string to_json(const ButcherTableau& tableau);

}  // namespace dsplit
