#include "icct/relabel.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "icct/errors.hpp"
#include "icct/stick_breaking.hpp"

namespace icct {

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

std::vector<int> match(const ModelState& state, const std::vector<std::vector<double>>& reference) {
  const std::size_t J = state.cultures.size();
  const auto counts = state.counts();
  std::vector<int> permutation(J, -1);
  std::vector<bool> slot_taken(J, false);
  std::vector<bool> pending(J, false);
  std::size_t remaining = 0;
  for (std::size_t c = 0; c < J; ++c) {
    pending[c] = counts[c] > 0;
    remaining += pending[c];
  }
  std::vector<double> cost(J * J);
  for (std::size_t c = 0; c < J; ++c) {
    if (!pending[c]) continue;
    for (std::size_t s = 0; s < J; ++s) cost[c * J + s] = squared_distance(state.cultures[c].truths, reference[s]);
  }
  for (; remaining > 0; --remaining) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_c = 0, best_s = 0;
    for (std::size_t c = 0; c < J; ++c) {
      if (!pending[c]) continue;
      for (std::size_t s = 0; s < J; ++s) {
        if (slot_taken[s]) continue;
        if (cost[c * J + s] < best) {
          best = cost[c * J + s];
          best_c = c;
          best_s = s;
        }
      }
    }
    permutation[best_c] = static_cast<int>(best_s);
    pending[best_c] = false;
    slot_taken[best_s] = true;
  }
  std::size_t next = 0;
  for (std::size_t c = 0; c < J; ++c) {
    if (permutation[c] >= 0) continue;
    while (slot_taken[next]) ++next;
    permutation[c] = static_cast<int>(next);
    slot_taken[next] = true;
  }
  return permutation;
}

}  // namespace

ModelState permute_cultures(const ModelState& state, const std::vector<int>& permutation) {
  const std::size_t J = state.cultures.size();
  ModelState out = state;
  std::vector<double> weights(J);
  for (std::size_t c = 0; c < J; ++c) {
    const auto to = static_cast<std::size_t>(permutation[c]);
    out.cultures[to] = state.cultures[c];
    weights[to] = state.mixture.weights[c];
  }
  for (auto& z : out.mixture.assignments) z = permutation[static_cast<std::size_t>(z)];
  out.mixture.sticks = sticks_from_weights(weights);
  out.mixture.weights = stick_breaking(out.mixture.sticks);
  return out;
}

RelabelResult relabel_with_permutations(const PosteriorChain& chain, double smoothing) {
  RelabelResult result;
  result.chain = chain;
  if (chain.samples.empty()) return result;
  const std::size_t J = chain.samples.front().cultures.size();
  std::vector<std::vector<double>> reference(J);
  for (std::size_t c = 0; c < J; ++c) reference[c] = chain.samples.front().cultures[c].truths;

  std::vector<int> identity(J);
  for (std::size_t c = 0; c < J; ++c) identity[c] = static_cast<int>(c);

  for (std::size_t s = 0; s < chain.samples.size(); ++s) {
    const auto& sample = chain.samples[s];
    const auto permutation = s == 0 ? identity : match(sample, reference);
    result.chain.samples[s] = permutation == identity ? sample : permute_cultures(sample, permutation);
    result.permutations.push_back(permutation);
    const auto& relabelled = result.chain.samples[s];
    const auto counts = relabelled.counts();
    for (std::size_t c = 0; c < J; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t k = 0; k < reference[c].size(); ++k) {
        reference[c][k] = (1.0 - smoothing) * reference[c][k] + smoothing * relabelled.cultures[c].truths[k];
      }
    }
  }
  return result;
}

PosteriorChain relabel(const PosteriorChain& chain) { return relabel_with_permutations(chain).chain; }

ModalAssignment modal_assignment(const PosteriorChain& chain, std::size_t window) {
  if (chain.samples.empty()) throw ValidationError("modal_assignment: empty chain");
  if (window == 0) throw ValidationError("modal_assignment: window must be positive");
  ModalAssignment out;
  const std::size_t S = chain.samples.size();
  if (window > S) {
    out.warning = "chain has " + std::to_string(S) + " retained samples, fewer than the window of " +
                  std::to_string(window) + "; using all samples";
    window = S;
  }
  out.window = window;
  const std::size_t N = chain.samples.front().mixture.assignments.size();
  const std::size_t J = chain.samples.front().cultures.size();
  out.labels.resize(N);
  std::vector<std::size_t> tally(J);
  for (std::size_t i = 0; i < N; ++i) {
    std::fill(tally.begin(), tally.end(), 0);
    for (std::size_t s = S - window; s < S; ++s) ++tally[static_cast<std::size_t>(chain.samples[s].mixture.assignments[i])];
    std::size_t best = 0;
    for (std::size_t c = 1; c < J; ++c) {
      if (tally[c] > tally[best]) best = c;
    }
    out.labels[i] = static_cast<int>(best);
  }
  return out;
}

}  // namespace icct
