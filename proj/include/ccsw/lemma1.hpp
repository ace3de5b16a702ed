// lemma1.hpp -- executable conservativity check: SYS transitions matched by
// SPEC transitions across congruence witnesses.

#pragma once

#include <string>
#include <vector>

#include "ccsw/congruence.hpp"
#include "ccsw/enumerate.hpp"
#include "ccsw/term.hpp"

namespace ccsw {

struct Lemma1Violation {
  std::string p, q, alpha, p_prime;
  std::vector<std::string> spec_candidates;  // "label -> target" of every SPEC move of q
  std::vector<TraceStep> witness_trace;      // axiom replay p -> q
  bool converse = false;                     // found while checking SPEC -> SYS instead
};

struct Lemma1Report {
  std::vector<Lemma1Violation> violations;
  long long terms = 0;          // enumerated roots
  long long pairs = 0;          // (P, witness Q) pairs examined
  long long transitions = 0;    // SYS transitions matched
  bool converse_checked = false;
  int max_size = 0;
  int witness_depth = 0;
  bool keep_rel = true;
};

struct Lemma1Options {
  int max_size = 4;
  EnumFeatures features;
  int unfold_budget = 2;
  bool keep_rel = false;  // the paper's SPEC removes rel.
  int witness_depth = 3;
  bool check_converse = false;
  // Deterministic subsampling: keep every stride-th enumerated root.
  int root_stride = 1;
};

// For every enumerated P, every Q reachable from P by at most witness_depth
// axiom steps, and every SYS transition P --alpha--> P': require some SPEC
// transition Q --alpha--> Q' with P' congruent to Q'. With check_converse,
// also requires every SPEC move of P to be matched by SYS from P up to the
// congruence (reported separately; the paper does not state this direction).
Lemma1Report check_lemma1(const std::vector<Name>& names, const Defs& defs,
                          const Lemma1Options& opts);

// JSON-lines rendering: one object per violation, then a summary object.
std::string lemma1_jsonl(const Lemma1Report& r);

}  // namespace ccsw
