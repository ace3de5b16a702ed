// congruence.hpp -- structural congruence: axioms, canonical forms, the
// brute-force closure oracle, and the SPEC transition relation built on it.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ccsw/term.hpp"
#include "ccsw/transition.hpp"

namespace ccsw {

enum class Axiom {
  ParComm,
  ParAssoc,
  ParUnit,
  SumComm,
  SumAssoc,
  SumUnit,
  ScopeExt,
  ResSwap,
  RecUnfold,
  Alpha,
};

const char* axiom_name(Axiom a);

// Whether axioms apply in every context or only at the root. Def. 1 leaves
// this open ("sometimes closed under context"); All is the default.
enum class ContextMode { All, Top };

// One replayable rewrite: `axiom` applied at the subterm addressed by
// `path` (slash-separated child indices), whole-term snapshots either side.
struct TraceStep {
  Axiom axiom;
  std::string path;
  std::string before, after;
};

struct CanonicalForm {
  ProcessPtr proc;            // full canonical term
  std::vector<Name> prenex;   // root restriction block, outermost first
  std::string key;            // pretty(proc); equal keys decide equivalence
};

// Deterministic canonical representative: constants unfolded up to
// `unfold_budget` per branch, parallel and sum flattened to multisets
// sorted by the pretty-printed form of their canonicalized children, units
// removed, restrictions extruded outward where the side condition allows
// (alpha-renaming makes it always allowed for binders not pinned by a
// constant), restriction blocks ordered canonically, bound names assigned
// by alpha_canon. Idempotent on constant-free terms; sound in general:
// equal keys imply structural congruence.
CanonicalForm canonicalize(const ProcessPtr& p, const Defs& defs, int unfold_budget);

// Decision procedure for Def. 1 equivalence at the given unfolding budget.
// In ContextMode::Top it falls back to a bounded root-rewriting search
// (canonical forms are inherently context-closed).
bool equiv(const ProcessPtr& p, const ProcessPtr& q, const Defs& defs, int unfold_budget,
           ContextMode mode = ContextMode::All);

enum class BruteVerdict { True, False, Exhausted };

// Independent oracle: breadth-first closure of single-axiom rewrites, with
// alpha-equivalence as the state identity. `step_budget` counts expanded
// states. On True with `trace` non-null, the axiom path P -> Q is stored.
BruteVerdict brute_equiv(const ProcessPtr& p, const ProcessPtr& q, const Defs& defs,
                         int step_budget, ContextMode mode = ContextMode::All,
                         std::vector<TraceStep>* trace = nullptr);

// Single-axiom rewrites of `p` (axioms both ways, every position in All
// mode). Results are alpha-canonical representatives.
std::vector<std::pair<ProcessPtr, TraceStep>> congruence_neighbors(const ProcessPtr& p,
                                                                   const Defs& defs,
                                                                   ContextMode mode);

// All distinct terms reachable by at most `depth` axiom applications,
// including `p` itself, each with its rewrite trace from `p`.
std::vector<std::pair<ProcessPtr, std::vector<TraceStep>>> congruence_witnesses(
    const ProcessPtr& p, const Defs& defs, int depth, ContextMode mode = ContextMode::All);

// Memo shared across spec_transitions calls within one experiment. Entries
// are keyed by canonical form, so a memo must not be reused across different
// unfolding budgets or keep_rel settings.
struct SpecMemo {
  std::map<std::string, std::vector<Transition>> steps;
  std::set<std::string> in_flight;  // cycle guard for unguarded recursion
};

// SPEC transitions: the rule set {act, sum, com2, syn, res} plus rel when
// `keep_rel`, closed under the congruence via the con. rule. Sources are
// taken up to equivalence, targets reported canonically; every returned
// derivation is rooted at one con. wrapping. Requires a key-free term.
StepResult spec_transitions(const ProcessPtr& p, const Defs& defs, int unfold_budget,
                            bool keep_rel, SpecMemo* memo = nullptr);

// Best-effort replayable equivalence witness (bounded search); nullopt if
// the budget is exhausted before Q is reached.
std::optional<std::vector<TraceStep>> equiv_witness(const ProcessPtr& p, const ProcessPtr& q,
                                                    const Defs& defs, int step_budget = 20000);

}  // namespace ccsw
