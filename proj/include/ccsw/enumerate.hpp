// enumerate.hpp -- exhaustive generation of small process terms.

#pragma once

#include <vector>

#include "ccsw/term.hpp"

namespace ccsw {

struct EnumFeatures {
  bool restriction = false;
  bool relabeling = false;
  bool constants = false;
};

// All ASTs with at most `max_size` non-Nil nodes over the given names and
// enabled features, duplicate-free, in a fixed deterministic order (by size,
// then by construction). Par and Sum children are non-Nil; prefix,
// restriction and relabeling bodies may be Nil. Relabelings range over the
// identity-free maps between distinct given names. `max_size < 1` yields
// nothing; otherwise Nil is included.
std::vector<ProcessPtr> enumerate_terms(int max_size, const std::vector<Name>& names,
                                        const EnumFeatures& features, const Defs& defs = {});

// The relabeling lists the enumerator draws from, exposed for tests.
std::vector<std::vector<Renaming>> enumeration_relabelings(const std::vector<Name>& names);

}  // namespace ccsw
