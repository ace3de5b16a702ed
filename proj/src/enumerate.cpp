#include "ccsw/enumerate.hpp"

#include <functional>

namespace ccsw {

std::vector<std::vector<Renaming>> enumeration_relabelings(const std::vector<Name>& names) {
  // Non-empty subsets of the names as sources, every identity-free target
  // assignment, sources in sorted order.
  std::vector<Name> sorted = names;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::vector<Renaming>> out;
  const size_t n = sorted.size();
  for (size_t mask = 1; mask < (size_t{1} << n); ++mask) {
    std::vector<Name> lhs;
    for (size_t i = 0; i < n; ++i)
      if (mask & (size_t{1} << i)) lhs.push_back(sorted[i]);
    std::vector<std::vector<Renaming>> partial{{}};
    for (const auto& from : lhs) {
      std::vector<std::vector<Renaming>> next;
      for (const auto& base : partial)
        for (const auto& to : sorted) {
          if (to == from) continue;
          auto ext = base;
          ext.push_back(Renaming{from, to});
          next.push_back(std::move(ext));
        }
      partial = std::move(next);
    }
    for (auto& sigma : partial)
      if (!sigma.empty()) out.push_back(std::move(sigma));
  }
  return out;
}

std::vector<ProcessPtr> enumerate_terms(int max_size, const std::vector<Name>& names,
                                        const EnumFeatures& features, const Defs& defs) {
  std::vector<ProcessPtr> result;
  if (max_size < 1 || names.empty()) return result;

  std::vector<Name> sorted = names;
  std::sort(sorted.begin(), sorted.end());

  std::vector<Label> labels;
  for (const auto& n : sorted) {
    labels.push_back(Label::act(n));
    labels.push_back(Label::coact(n));
  }
  const auto sigmas = features.relabeling ? enumeration_relabelings(sorted)
                                          : std::vector<std::vector<Renaming>>{};

  // by_size[s] = all terms of exactly s non-Nil nodes.
  std::vector<std::vector<ProcessPtr>> by_size(max_size + 1);
  by_size[0] = {make_nil()};

  // Compositions of `total` into `parts` summands, each >= 1.
  std::function<void(int, int, std::vector<int>&, const std::function<void()>&)> comps =
      [&](int total, int parts, std::vector<int>& acc, const std::function<void()>& emit) {
        if (parts == 1) {
          acc.push_back(total);
          emit();
          acc.pop_back();
          return;
        }
        for (int first = 1; first + (parts - 1) <= total; ++first) {
          acc.push_back(first);
          comps(total - first, parts - 1, acc, emit);
          acc.pop_back();
        }
      };

  for (int s = 1; s <= max_size; ++s) {
    auto& out = by_size[s];
    for (const auto& l : labels)
      for (const auto& body : by_size[s - 1]) out.push_back(make_prefix(l, body));
    if (features.restriction)
      for (const auto& n : sorted)
        for (const auto& body : by_size[s - 1]) out.push_back(make_res(body, n));
    if (features.relabeling)
      for (const auto& sigma : sigmas)
        for (const auto& body : by_size[s - 1]) out.push_back(make_rel(body, sigma));
    for (int left = 1; left <= s - 2; ++left)
      for (const auto& lp : by_size[left])
        for (const auto& rp : by_size[s - 1 - left]) out.push_back(make_par(lp, rp));
    for (int arity = 2; arity <= s - 1; ++arity) {
      std::vector<int> acc;
      comps(s - 1, arity, acc, [&]() {
        // Multiply out the choice of a child per slot.
        std::vector<size_t> idx(acc.size(), 0);
        for (;;) {
          std::vector<ProcessPtr> kids;
          kids.reserve(acc.size());
          for (size_t i = 0; i < acc.size(); ++i) kids.push_back(by_size[acc[i]][idx[i]]);
          out.push_back(make_sum(std::move(kids)));
          size_t i = acc.size();
          while (i > 0) {
            --i;
            if (++idx[i] < by_size[acc[i]].size()) break;
            idx[i] = 0;
            if (i == 0) return;
          }
        }
      });
    }
    if (features.constants && s == 1)
      for (const auto& [id, body] : defs.map) out.push_back(make_const(id));
  }

  result.push_back(make_nil());
  for (int s = 1; s <= max_size; ++s)
    result.insert(result.end(), by_size[s].begin(), by_size[s].end());
  return result;
}

}  // namespace ccsw
