// bisim.hpp -- strong bisimilarity by partition refinement.

#pragma once

#include "ccsw/lts.hpp"

namespace ccsw {

struct BisimResult {
  bool bisimilar = false;
  // On distinction: the root pair and a label one side can take into the
  // distinguishing class and the other cannot match.
  std::string left_state, right_state, label;
};

// Decides strong bisimilarity of the two rooted graphs over label equality
// (rule annotations ignored). Throws std::invalid_argument on a truncated
// input.
BisimResult bisim(const Lts& a, const Lts& b);

}  // namespace ccsw
