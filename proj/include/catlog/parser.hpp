#pragma once

#include <string>

#include "catlog/syntax.hpp"

namespace catlog {

// Parses the theory DSL. Free variables (undeclared single lowercase letters)
// get their sorts inferred from use; inference must be unambiguous.
Theory parse_theory(const std::string& text);

} // namespace catlog
