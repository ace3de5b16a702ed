// transition.hpp -- labeled transitions with recorded derivation trees.

#pragma once

#include <string>
#include <vector>

#include "ccsw/term.hpp"

namespace ccsw {

enum class Rule { Act, Sum, Com1, Com2, Syn, Res, Rel, Rec, Con };

const char* rule_name(Rule r);

// One derivation step: `source --label--> target` concluded by `rule` from
// `premises`. Premise arity per rule: act 0; com1/com2/sum/rec/res/rel/con 1;
// syn 2.
struct Transition {
  ProcessPtr source;
  Label label;
  ProcessPtr target;
  Rule rule;
  std::vector<Transition> premises;
};

// Deterministic serialization of the whole derivation tree; equal strings
// iff structurally equal derivations.
std::string derivation_fingerprint(const Transition& t);

struct StepResult {
  std::vector<Transition> transitions;  // sorted by fingerprint, duplicates removed
  bool budget_hit = false;              // an unfolding branch ran out of budget
};

// Validates the derivation tree as an instance of the named rules with
// matching premises and conclusion. A `con` node checks its endpoints
// against the structural congruence at `equiv_budget` unfoldings.
bool check_derivation(const Transition& t, const Defs& defs, int equiv_budget = 2);

// All transitions of Fig. 1's LTS (act, sum, com1, com2, syn, res, rel,
// rec), with rec unfolding a constant at most `unfold_budget` times along
// any derivation branch. Requires a key-free term.
StepResult sys_transitions(const ProcessPtr& p, const Defs& defs, int unfold_budget);

}  // namespace ccsw
