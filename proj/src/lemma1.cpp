#include "ccsw/lemma1.hpp"

#include <json.hpp>

#include "ccsw/binding.hpp"
#include "ccsw/print.hpp"
#include "ccsw/transition.hpp"

namespace ccsw {

namespace {

bool has_const(const Process& p) {
  if (p.op == Op::Const) return true;
  for (const auto& k : p.kids)
    if (has_const(*k)) return true;
  return false;
}

// Keys a term can take at any unfolding depth up to the budget.
std::set<std::string> key_set(const ProcessPtr& p, const Defs& defs, int budget) {
  std::set<std::string> keys;
  if (!has_const(*p)) {
    keys.insert(canonicalize(p, defs, 0).key);
    return keys;
  }
  for (int i = 0; i <= budget; ++i) keys.insert(canonicalize(p, defs, i).key);
  return keys;
}

}  // namespace

Lemma1Report check_lemma1(const std::vector<Name>& names, const Defs& defs,
                          const Lemma1Options& opts) {
  Lemma1Report rep;
  rep.max_size = opts.max_size;
  rep.witness_depth = opts.witness_depth;
  rep.keep_rel = opts.keep_rel;
  rep.converse_checked = opts.check_converse;

  SpecMemo memo;
  auto roots = enumerate_terms(opts.max_size, names, opts.features, defs);
  long long idx = -1;
  for (const auto& p : roots) {
    ++idx;
    if (opts.root_stride > 1 && idx % opts.root_stride != 0) continue;
    ++rep.terms;

    StepResult sys = sys_transitions(p, defs, opts.unfold_budget);
    std::vector<std::set<std::string>> sys_target_keys;
    sys_target_keys.reserve(sys.transitions.size());
    for (const auto& t : sys.transitions)
      sys_target_keys.push_back(key_set(t.target, defs, opts.unfold_budget));

    auto witnesses = congruence_witnesses(p, defs, opts.witness_depth, ContextMode::All);
    for (const auto& [q, trace] : witnesses) {
      ++rep.pairs;
      StepResult spec = spec_transitions(q, defs, opts.unfold_budget, opts.keep_rel, &memo);
      for (size_t i = 0; i < sys.transitions.size(); ++i) {
        const Transition& t = sys.transitions[i];
        ++rep.transitions;
        bool matched = false;
        for (const auto& s : spec.transitions) {
          if (s.label != t.label) continue;
          if (sys_target_keys[i].count(pretty(*s.target)) ||
              equiv(t.target, s.target, defs, opts.unfold_budget)) {
            matched = true;
            break;
          }
        }
        if (!matched) {
          Lemma1Violation v;
          v.p = pretty(*p);
          v.q = pretty(*q);
          v.alpha = t.label.str();
          v.p_prime = pretty(*t.target);
          for (const auto& s : spec.transitions)
            v.spec_candidates.push_back(s.label.str() + " -> " + pretty(*s.target));
          v.witness_trace = trace;
          rep.violations.push_back(std::move(v));
        }
      }
    }

    if (opts.check_converse) {
      StepResult spec = spec_transitions(p, defs, opts.unfold_budget, opts.keep_rel, &memo);
      for (const auto& s : spec.transitions) {
        bool matched = false;
        for (size_t i = 0; i < sys.transitions.size(); ++i) {
          if (sys.transitions[i].label != s.label) continue;
          if (sys_target_keys[i].count(pretty(*s.target)) ||
              equiv(sys.transitions[i].target, s.target, defs, opts.unfold_budget)) {
            matched = true;
            break;
          }
        }
        if (!matched) {
          Lemma1Violation v;
          v.p = pretty(*p);
          v.q = pretty(*p);
          v.alpha = s.label.str();
          v.p_prime = pretty(*s.target);
          for (size_t i = 0; i < sys.transitions.size(); ++i)
            v.spec_candidates.push_back(sys.transitions[i].label.str() + " -> " +
                                        pretty(*sys.transitions[i].target));
          v.converse = true;
          rep.violations.push_back(std::move(v));
        }
      }
    }
  }
  return rep;
}

std::string lemma1_jsonl(const Lemma1Report& r) {
  std::string out;
  for (const auto& v : r.violations) {
    nlohmann::json j;
    j["p"] = v.p;
    j["q"] = v.q;
    j["alpha"] = v.alpha;
    j["p_prime"] = v.p_prime;
    j["spec_candidates"] = v.spec_candidates;
    j["witness_trace"] = nlohmann::json::array();
    for (const auto& s : v.witness_trace)
      j["witness_trace"].push_back({{"axiom", axiom_name(s.axiom)},
                                    {"path", s.path},
                                    {"before", s.before},
                                    {"after", s.after}});
    j["converse"] = v.converse;
    out += j.dump();
    out += '\n';
  }
  nlohmann::json summary;
  summary["summary"] = {{"terms", r.terms},
                        {"pairs", r.pairs},
                        {"transitions", r.transitions},
                        {"violations", static_cast<long long>(r.violations.size())},
                        {"max_size", r.max_size},
                        {"witness_depth", r.witness_depth},
                        {"keep_rel", r.keep_rel},
                        {"converse_checked", r.converse_checked}};
  out += summary.dump();
  out += '\n';
  return out;
}

}  // namespace ccsw
