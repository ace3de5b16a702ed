// lts.hpp -- explored transition graphs, JSON and DOT export.

#pragma once

#include <string>
#include <vector>

#include "ccsw/congruence.hpp"
#include "ccsw/term.hpp"

namespace ccsw {

struct LtsEdge {
  std::string src, label, rule, dst;
  auto operator<=>(const LtsEdge&) const = default;
};

struct Lts {
  std::string root;
  std::vector<std::string> states;  // sorted
  std::vector<LtsEdge> edges;       // sorted
  bool truncated = false;
};

enum class Semantics { Sys, Spec };

// Breadth-first closure of the chosen transition function. States are
// alpha-canonical forms under Sys and congruence-canonical forms under
// Spec. Truncation (max_states reached, or an unfolding branch out of
// budget) is flagged, not an error.
Lts explore(const ProcessPtr& p, const Defs& defs, Semantics semantics, int unfold_budget,
            int max_states, bool keep_rel = true);

// {"root": str, "states": [...], "edges": [{src,label,rule,dst}], "truncated": bool}
std::string lts_json(const Lts& l);

// DOT digraph with `label/rule` edge labels.
std::string lts_dot(const Lts& l);

}  // namespace ccsw
