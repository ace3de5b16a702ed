// rccs.hpp -- reversible CCS with per-thread memory stacks, in two variants:
// memory distribution as an equivalence (eager normalization) or fused into
// the step function.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccsw/bisim.hpp"
#include "ccsw/term.hpp"

namespace ccsw {

// One memory entry. Fork marks the point where a thread split in two; Act
// records a fired prefix: a fresh event id (shared by both partners of a
// synchronization), the label, the discarded sum branches, and the slot the
// fired prefix occupied so that undoing restores the sum exactly.
struct Event {
  enum class Kind { Fork, Act };
  Kind kind = Kind::Fork;
  int id = 0;
  Label label;
  ProcessPtr alternatives;
  int slot = 0;

  static Event fork() { return Event{}; }
  static Event act(int id, Label l, ProcessPtr alts, int slot) {
    return Event{Kind::Act, id, std::move(l), std::move(alts), slot};
  }
};

bool event_equal(const Event& a, const Event& b);

// Stack of events; back() is the most recent entry.
using Memory = std::vector<Event>;

struct RProcess;
using RProcessPtr = std::shared_ptr<const RProcess>;

struct RProcess {
  enum class Kind { Thread, Par, Res };
  Kind kind = Kind::Thread;
  Memory mem;        // Thread
  ProcessPtr code;   // Thread
  RProcessPtr left, right;  // Par; Res uses left as its body
  Name bound;        // Res
};

RProcessPtr make_thread(Memory mem, ProcessPtr code);
RProcessPtr make_rpar(RProcessPtr l, RProcessPtr r);
RProcessPtr make_rres(RProcessPtr body, Name bound);
bool requal(const RProcess& a, const RProcess& b);

// <e1;e2;...> |> P with the top event first; Fork prints as Y. Debug
// output only, not parsed back.
std::string rprint(const RProcess& r);
inline std::string rprint(const RProcessPtr& r) { return rprint(*r); }

enum class RVariant { Congruence, Rule };

// A memoryless thread holding the whole term.
RProcessPtr lift(const ProcessPtr& p);

// The memory-distribution rule applied left-to-right exhaustively: no
// thread's code has a parallel composition at its top afterwards.
RProcessPtr distribute(const RProcessPtr& r);

// Engine normal form: distribution, plus top-of-code restrictions lifted to
// process level and top-of-code constants unfolded (at most `unfold_budget`
// per thread position).
RProcessPtr rnormalize(const RProcessPtr& r, const Defs& defs, int unfold_budget);

// Deterministic state key: normalized per variant, thread codes
// alpha-canonicalized.
std::string rkey(const RProcessPtr& r, const Defs& defs, int unfold_budget, RVariant variant);

struct RTransition {
  int id = 0;
  Label label;
  RProcessPtr target;
};

// Forward steps. Fresh ids continue from the largest id in the state, so
// results depend only on the state. In the Congruence variant the input is
// expected normalized (a thread whose code starts with | is blocked) and
// targets are normalized; in the Rule variant distribution, restriction
// lifting and unfolding happen inside the step and materialize in targets.
std::vector<RTransition> fwd_transitions(const RProcessPtr& r, const Defs& defs,
                                         RVariant variant, int unfold_budget);

// Exact inverses: only a top-of-stack Act can be undone; a synchronization
// id is undone jointly by both holders (one backward tau step); undoing
// below a fork first merges the forked threads back (their memories must
// agree up to the fork).
std::vector<RTransition> bwd_transitions(const RProcessPtr& r, RVariant variant);

// Memory coherence: across every parallel composition, the two leaf
// memories share a common bottom segment topped by a Fork, and every event
// id occurs in at most two leaves (exactly two only for complementary
// labels).
bool coherent(const RProcess& r);

struct LoopFailure {
  std::string root;
  std::vector<std::string> trace;
  std::string detail;
};

struct LoopReport {
  long long trials = 0;
  long long steps = 0;
  std::vector<LoopFailure> failures;
};

// Seeded random forward walks; after every step, asserts the step is
// undoable with the same (id, label) and that undoing restores the
// normalized, alpha-canonical prior state. Also checks coherence after
// every move.
LoopReport loop_check(const ProcessPtr& p, const Defs& defs, int depth, int trials,
                      std::uint64_t seed, int unfold_budget = 2);

struct VariantOutcome {
  enum class Kind { Bisimilar, Distinguished, Truncated };
  Kind kind = Kind::Bisimilar;
  BisimResult detail;
};

// Builds the forward-and-backward LTS of lift(p) under both variants (edge
// labels fwd:l / bwd:l, ids erased) and decides strong bisimilarity.
VariantOutcome compare_variants(const ProcessPtr& p, const Defs& defs, int max_states,
                                int unfold_budget);

// The forward+backward LTS of one variant, for export and experiments.
Lts rccs_lts(const ProcessPtr& p, const Defs& defs, RVariant variant, int max_states,
             int unfold_budget);

}  // namespace ccsw
