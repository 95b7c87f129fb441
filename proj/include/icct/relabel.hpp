#pragma once

#include <optional>
#include <string>
#include <vector>

#include "icct/sampler.hpp"

namespace icct {

struct RelabelResult {
  PosteriorChain chain;
  // permutations[s][c] is the new index of sample s's culture c.
  std::vector<std::vector<int>> permutations;
};

// Undoes label switching. Each sample's occupied cultures are greedily
// matched to reference slots by squared distance between truth vectors;
// unoccupied cultures fill the remaining slots in index order. The reference
// starts as the first retained sample and is exponentially smoothed toward
// each relabelled sample (weight `smoothing`). Sticks are rebuilt from the
// permuted weights, so each sample's likelihood is unchanged.
RelabelResult relabel_with_permutations(const PosteriorChain& chain, double smoothing = 0.1);

PosteriorChain relabel(const PosteriorChain& chain);

// Applies a permutation (old index -> new index) to one state.
ModelState permute_cultures(const ModelState& state, const std::vector<int>& permutation);

struct ModalAssignment {
  std::vector<int> labels;
  std::size_t window = 0;
  std::optional<std::string> warning;
};

// Most frequent culture per respondent over the last `window` samples. Ties
// go to the lower culture index. A chain shorter than the window uses all
// samples and sets a warning. Throws ValidationError on an empty chain.
ModalAssignment modal_assignment(const PosteriorChain& chain, std::size_t window = 100);

}  // namespace icct
