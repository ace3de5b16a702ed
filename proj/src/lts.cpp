#include "ccsw/lts.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include <json.hpp>

#include "ccsw/binding.hpp"
#include "ccsw/print.hpp"

namespace ccsw {

Lts explore(const ProcessPtr& p, const Defs& defs, Semantics semantics, int unfold_budget,
            int max_states, bool keep_rel) {
  if (max_states < 1) throw std::invalid_argument("max_states must be at least 1");

  SpecMemo memo;
  auto canon = [&](const ProcessPtr& t) -> std::pair<std::string, ProcessPtr> {
    if (semantics == Semantics::Sys) {
      ProcessPtr rep = alpha_canon(*t, &defs);
      return {pretty(*rep), rep};
    }
    CanonicalForm cf = canonicalize(t, defs, unfold_budget);
    return {cf.key, cf.proc};
  };

  Lts out;
  std::set<std::string> seen;
  std::set<LtsEdge> edges;
  std::deque<std::pair<std::string, ProcessPtr>> queue;

  auto [root_key, root_rep] = canon(p);
  out.root = root_key;
  seen.insert(root_key);
  queue.emplace_back(root_key, root_rep);

  while (!queue.empty()) {
    auto [key, state] = queue.front();
    queue.pop_front();
    StepResult steps = semantics == Semantics::Sys
                           ? sys_transitions(state, defs, unfold_budget)
                           : spec_transitions(state, defs, unfold_budget, keep_rel, &memo);
    if (steps.budget_hit) out.truncated = true;
    for (const auto& t : steps.transitions) {
      auto [dst_key, dst_rep] = canon(t.target);
      Rule rule = t.rule;
      if (rule == Rule::Con && !t.premises.empty()) rule = t.premises[0].rule;
      edges.insert(LtsEdge{key, t.label.str(), rule_name(rule), dst_key});
      if (seen.count(dst_key)) continue;
      if (static_cast<int>(seen.size()) >= max_states) {
        out.truncated = true;
        continue;
      }
      seen.insert(dst_key);
      queue.emplace_back(dst_key, dst_rep);
    }
  }

  out.states.assign(seen.begin(), seen.end());
  // Drop edges into states that were cut off by the budget.
  for (const auto& e : edges)
    if (seen.count(e.dst)) out.edges.push_back(e);
  return out;
}

std::string lts_json(const Lts& l) {
  nlohmann::json j;
  j["root"] = l.root;
  j["states"] = l.states;
  j["edges"] = nlohmann::json::array();
  for (const auto& e : l.edges)
    j["edges"].push_back({{"src", e.src}, {"label", e.label}, {"rule", e.rule}, {"dst", e.dst}});
  j["truncated"] = l.truncated;
  return j.dump();
}

std::string lts_dot(const Lts& l) {
  std::map<std::string, size_t> id;
  for (size_t i = 0; i < l.states.size(); ++i) id[l.states[i]] = i;
  std::string out = "digraph lts {\n";
  auto quote = [](const std::string& s) {
    std::string q;
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q;
  };
  for (const auto& s : l.states) {
    out += "  n" + std::to_string(id[s]) + " [label=\"" + quote(s) + "\"";
    if (s == l.root) out += ", shape=doublecircle";
    out += "]\n";
  }
  for (const auto& e : l.edges)
    out += "  n" + std::to_string(id[e.src]) + " -> n" + std::to_string(id[e.dst]) +
           " [label=\"" + quote(e.label + "/" + e.rule) + "\"]\n";
  out += "}\n";
  return out;
}

}  // namespace ccsw
