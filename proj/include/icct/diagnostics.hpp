#pragma once

#include <span>

namespace icct {

// Split-chain potential scale reduction of a single trace (first half versus
// second half). NaN for fewer than 4 values.
double split_rhat(std::span<const double> trace);

// Effective sample size from autocorrelations truncated by Geyer's initial
// monotone positive sequence.
double effective_sample_size(std::span<const double> trace);

// Standard error of the mean of an autocorrelated trace via batch means.
double batch_means_standard_error(std::span<const double> trace, std::size_t batches = 50);

}  // namespace icct
