#include "icct/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace icct {

namespace {

double mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

}  // namespace

double split_rhat(std::span<const double> trace) {
  if (trace.size() < 4) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t half = trace.size() / 2;
  const auto a = trace.subspan(0, half);
  const auto b = trace.subspan(trace.size() - half, half);
  const double n = static_cast<double>(half);
  const double w = 0.5 * (variance(a) + variance(b));
  const double ma = mean(a);
  const double mb = mean(b);
  const double m = 0.5 * (ma + mb);
  const double between = n * ((ma - m) * (ma - m) + (mb - m) * (mb - m));
  if (w <= 0.0) return between <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  const double pooled = (n - 1.0) / n * w + between / n;
  return std::sqrt(pooled / w);
}

double effective_sample_size(std::span<const double> trace) {
  const std::size_t n = trace.size();
  if (n < 4) return static_cast<double>(n);
  const double m = mean(trace);
  std::vector<double> centred(n);
  for (std::size_t i = 0; i < n; ++i) centred[i] = trace[i] - m;
  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += centred[i] * centred[i + lag];
    return s / static_cast<double>(n);
  };
  const double c0 = autocov(0);
  if (c0 <= 0.0) return static_cast<double>(n);
  double sum = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t lag = 0; lag + 1 < n; lag += 2) {
    double pair = (autocov(lag) + autocov(lag + 1)) / c0;
    if (pair <= 0.0) break;
    pair = std::min(pair, previous);
    previous = pair;
    sum += pair;
  }
  const double tau = std::max(2.0 * sum - 1.0, 1.0 / std::log10(static_cast<double>(n)));
  return static_cast<double>(n) / tau;
}

double batch_means_standard_error(std::span<const double> trace, std::size_t batches) {
  const std::size_t size = trace.size() / batches;
  if (size == 0) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) means[b] = mean(trace.subspan(b * size, size));
  return std::sqrt(variance(means) / static_cast<double>(batches));
}

}  // namespace icct
