#pragma once

#include <string>

#include "sflab/typing.hpp"

namespace sflab {

// {"rule", "ctx": {x: type}, "term", "type", "inst"?, "children": [...]}
// with rule one of id, arr_i, arr_e, all_i, all_e.
std::string derivation_to_json(const Derivation& d, int indent = -1);
// Also accepts an object carrying the tree under "derivation". Throws Syntax
// on malformed input.
Derivation derivation_from_json(const std::string& text);

Rule parse_rule(const std::string& name);

}  // namespace sflab
