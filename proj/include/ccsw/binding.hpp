// binding.hpp -- free names, capture-avoiding substitution, alpha-canonical forms.

#pragma once

#include <set>
#include <string>

#include "ccsw/term.hpp"

namespace ccsw {

// Free names of `p`. Restriction removes its bound name, relabeling maps
// names through the substitution, other operators union their children.
// A Const node contributes the least-fixpoint free names of its definition
// when `defs` is given, nothing otherwise.
std::set<Name> free_names(const Process& p, const Defs* defs = nullptr);

// Every name that occurs anywhere in the term itself: labels, restriction
// binders, both sides of relabelings. Does not look into definitions.
std::set<Name> all_names(const Process& p);

// sigma applied to a label; tau is fixed, conames map through their name.
Label apply_to_label(const Label& l, const std::vector<Renaming>& sigma);

// Simultaneous substitution of free names. Bound names are freshened
// (smallest x0, x1, ... not occurring in the term or sigma) when a
// substituted name would otherwise be captured. Constants are opaque: a
// substitution that touches a constant's free names is kept as a residual
// relabeling operator around the Const node.
ProcessPtr apply_relabeling(const Process& p, const std::vector<Renaming>& sigma,
                            const Defs* defs = nullptr);

// Renames restriction-bound names to the deterministic scheme x0, x1, ...
// indexed by binder occurrence in pre-order. Idempotent; preserves free
// names; two terms are alpha-equivalent iff their canon forms are equal.
// A binder whose body mentions the bound name inside a constant cannot be
// renamed (the occurrences are not in the term) and is left untouched;
// without `defs` any binder over a constant-containing body is kept rigid.
ProcessPtr alpha_canon(const Process& p, const Defs* defs = nullptr);

// pretty(alpha_canon(p)) -- the string used as an alpha-class key.
std::string alpha_key(const Process& p, const Defs* defs = nullptr);

// True iff a binder of `bound` over `body` cannot be renamed because the
// name occurs free inside a constant in `body` (conservatively, because
// `body` contains any constant when `defs` is null).
bool binder_rigid(const Process& body, const Name& bound, const Defs* defs);

}  // namespace ccsw
