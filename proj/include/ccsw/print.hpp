// print.hpp -- precedence-aware pretty printer; output reparses to the same AST.

#pragma once

#include <string>

#include "ccsw/term.hpp"

namespace ccsw {

// Minimal-parentheses rendering. Restriction and relabeling bind tightest,
// then prefix, then `|`, then `+`. Keyed prefixes print as `a[1].P`.
std::string pretty(const Process& p);
inline std::string pretty(const ProcessPtr& p) { return pretty(*p); }

std::string pretty(const std::vector<Renaming>& renames);

}  // namespace ccsw
