#include "ccsw/bisim.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ccsw {

BisimResult bisim(const Lts& a, const Lts& b) {
  if (a.truncated || b.truncated)
    throw std::invalid_argument("bisim requires untruncated transition systems");

  // Disjoint union; same-named states from the two systems stay distinct.
  std::vector<std::string> states;
  std::map<std::string, size_t> index;
  auto add = [&](char tag, const std::string& s) {
    std::string key = std::string(1, tag) + ":" + s;
    if (!index.count(key)) {
      index[key] = states.size();
      states.push_back(key);
    }
    return index[key];
  };
  for (const auto& s : a.states) add('a', s);
  for (const auto& s : b.states) add('b', s);

  std::vector<std::vector<std::pair<std::string, size_t>>> succ(states.size());
  for (const auto& e : a.edges) succ[add('a', e.src)].emplace_back(e.label, add('a', e.dst));
  for (const auto& e : b.edges) succ[add('b', e.src)].emplace_back(e.label, add('b', e.dst));

  const size_t ra = add('a', a.root), rb = add('b', b.root);

  std::vector<size_t> block(states.size(), 0);
  using Sig = std::set<std::pair<std::string, size_t>>;
  auto signature = [&](size_t s) {
    Sig sig;
    for (const auto& [l, d] : succ[s]) sig.insert({l, block[d]});
    return sig;
  };

  BisimResult res;
  for (;;) {
    std::map<std::pair<size_t, Sig>, size_t> next_ids;
    std::vector<size_t> next(states.size());
    std::vector<Sig> sigs(states.size());
    for (size_t s = 0; s < states.size(); ++s) {
      sigs[s] = signature(s);
      auto key = std::make_pair(block[s], sigs[s]);
      auto it = next_ids.find(key);
      if (it == next_ids.end()) it = next_ids.emplace(key, next_ids.size()).first;
      next[s] = it->second;
    }
    const bool roots_were_together = block[ra] == block[rb];
    const bool stable = next_ids.size() ==
                        std::set<size_t>(block.begin(), block.end()).size();
    if (roots_were_together && next[ra] != next[rb]) {
      // First separation: name a move one root has and the other cannot match.
      res.left_state = a.root;
      res.right_state = b.root;
      Sig diff;
      std::set_symmetric_difference(sigs[ra].begin(), sigs[ra].end(), sigs[rb].begin(),
                                    sigs[rb].end(), std::inserter(diff, diff.begin()));
      if (!diff.empty()) res.label = diff.begin()->first;
      res.bisimilar = false;
      return res;
    }
    block = std::move(next);
    if (stable) break;
  }

  res.bisimilar = block[ra] == block[rb];
  if (!res.bisimilar) {
    res.left_state = a.root;
    res.right_state = b.root;
  }
  return res;
}

}  // namespace ccsw
