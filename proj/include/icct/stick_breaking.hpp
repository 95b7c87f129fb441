#pragma once

#include <span>
#include <vector>

namespace icct {

// pi_j = v_j * prod_{l<j} (1 - v_l). Requires every v_j in (0, 1] and the
// last stick equal to 1, so the weights sum to one with the truncation
// absorbing the tail. Throws std::domain_error otherwise.
std::vector<double> stick_breaking(std::span<const double> sticks);

// Inverse transform: sticks whose stick_breaking reproduces `weights` up to
// rounding. A stick whose remaining mass is exhausted is set to 1.
std::vector<double> sticks_from_weights(std::span<const double> weights);

}  // namespace icct
