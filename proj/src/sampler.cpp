#include "icct/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "icct/diagnostics.hpp"
#include "icct/errors.hpp"
#include "icct/links.hpp"
#include "icct/stick_breaking.hpp"

namespace icct {

namespace {

constexpr double kHalfLogTwoPi = 0.91893853320467274178;
constexpr double kTargetAcceptance = 0.44;
constexpr double kMinProposalSd = 1e-5;
constexpr double kMaxProposalSd = 20.0;

double normal_log_kernel(double x, double sd) { return -0.5 * (x / sd) * (x / sd); }

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void centre(std::vector<double>& v) {
  const double m = mean_of(v);
  for (auto& x : v) x -= m;
}

std::vector<std::size_t> occupancy(std::span<const int> assignments, std::size_t truncation) {
  std::vector<std::size_t> n(truncation, 0);
  for (int z : assignments) ++n[static_cast<std::size_t>(z)];
  return n;
}

// Transformed responses (X - a) / b of respondent i; the cell log density
// becomes const_i - 0.5 log(lambda) - 0.5 E (yhat - T)^2 / lambda.
struct RespondentView {
  double competence;
  double constant;  // -0.5 log(2 pi) - log b + 0.5 log E
};

RespondentView view_of(const RespondentParams& r) {
  return {std::exp(r.log_competence), -kHalfLogTwoPi - r.log_scale_bias + 0.5 * r.log_competence};
}

void fill_yhat(const LogitData& data, const RespondentParams& r, std::size_t i, std::vector<double>& out) {
  const double inv_b = std::exp(-r.log_scale_bias);
  out.resize(data.items());
  for (auto k : data.observed_items(i)) out[k] = (data.x(i, k) - r.shift_bias) * inv_b;
}

double culture_log_likelihood(const LogitData& data, std::size_t i, const RespondentParams& r,
                              const CultureParams& c) {
  const double inv_b = std::exp(-r.log_scale_bias);
  const double competence = std::exp(r.log_competence);
  const auto obs = data.observed_items(i);
  double quad = 0.0;
  double log_lambda = 0.0;
  for (auto k : obs) {
    const double d = (data.x(i, k) - r.shift_bias) * inv_b - c.truths[k];
    const double l = c.log_difficulties[k];
    quad += d * d * std::exp(-l);
    log_lambda += l;
  }
  const double n = static_cast<double>(obs.size());
  return n * (-kHalfLogTwoPi - r.log_scale_bias + 0.5 * r.log_competence) - 0.5 * log_lambda -
         0.5 * competence * quad;
}

// Log-likelihood of respondent i's cells under culture c, keeping only the
// terms that depend on the respondent parameters.
double respondent_kernel(const LogitData& data, std::size_t i, double log_competence, double shift,
                         double log_scale, const CultureParams& c) {
  const double b = std::exp(log_scale);
  const double competence = std::exp(log_competence);
  const auto obs = data.observed_items(i);
  double quad = 0.0;
  for (auto k : obs) {
    const double d = data.x(i, k) - shift - b * c.truths[k];
    quad += d * d * std::exp(-c.log_difficulties[k]);
  }
  const double n = static_cast<double>(obs.size());
  return n * (0.5 * log_competence - log_scale) - 0.5 * competence * quad / (b * b);
}

bool accept(double log_ratio, Rng& rng) {
  if (std::isnan(log_ratio)) throw NumericalError("non-finite Metropolis acceptance ratio");
  if (log_ratio >= 0.0) return true;
  return std::log(rng.uniform()) < log_ratio;
}

}  // namespace

LogitData::LogitData(const ResponseMatrix& data)
    : respondents_(data.respondents()), items_(data.items()), x_(data.values().size(), 0.0), observed_(respondents_) {
  for (std::size_t i = 0; i < respondents_; ++i) {
    for (std::size_t k = 0; k < items_; ++k) {
      if (!data.observed(i, k)) continue;
      x_[i * items_ + k] = logit(data.value(i, k));
      observed_[i].push_back(static_cast<std::uint32_t>(k));
    }
  }
}

double log_likelihood(const LogitData& data, const ModelState& state) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.respondents(); ++i) {
    const auto z = static_cast<std::size_t>(state.mixture.assignments[i]);
    total += culture_log_likelihood(data, i, state.respondents[i], state.cultures[z]);
  }
  return total;
}

ProposalState::ProposalState(std::size_t respondents, std::size_t cultures, std::size_t items,
                             const ProposalSds& sds)
    : log_difficulty_sd(cultures * items, sds.log_difficulty),
      log_competence_sd(respondents, sds.log_competence),
      shift_sd(respondents, sds.shift),
      log_scale_sd(respondents, sds.log_scale) {}

void ProposalState::record(Counter& counter, double& sd, bool accepted) {
  ++counter.proposed;
  counter.accepted += accepted;
  if (!adapting) return;
  const double target = accepted ? 1.0 : 0.0;
  sd = std::clamp(sd * std::exp(step * (target - kTargetAcceptance)), kMinProposalSd, kMaxProposalSd);
}

void ProposalState::reset_counters() {
  log_difficulty = {};
  log_competence = {};
  shift = {};
  log_scale = {};
}

std::vector<int> update_assignments(const LogitData& data, const ModelState& state, Rng& rng) {
  const std::size_t J = state.cultures.size();
  const std::size_t N = data.respondents();
  std::vector<double> log_weight(J);
  for (std::size_t j = 0; j < J; ++j) {
    const double w = state.mixture.weights[j];
    log_weight[j] = w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity();
  }
  // exp(-log lambda) per culture and item, computed once per pass.
  std::vector<double> precision_scale(J * data.items());
  for (std::size_t j = 0; j < J; ++j) {
    for (std::size_t k = 0; k < data.items(); ++k) {
      precision_scale[j * data.items() + k] = std::exp(-state.cultures[j].log_difficulties[k]);
    }
  }
  std::vector<int> out(N);
  std::vector<double> yhat;
  std::vector<double> logp(J);
  for (std::size_t i = 0; i < N; ++i) {
    const auto& r = state.respondents[i];
    const RespondentView v = view_of(r);
    fill_yhat(data, r, i, yhat);
    const auto obs = data.observed_items(i);
    const double base = static_cast<double>(obs.size()) * v.constant;
    for (std::size_t j = 0; j < J; ++j) {
      if (!std::isfinite(log_weight[j])) {
        logp[j] = log_weight[j];
        continue;
      }
      const auto& c = state.cultures[j];
      const double* scale = &precision_scale[j * data.items()];
      double quad = 0.0;
      double log_lambda = 0.0;
      for (auto k : obs) {
        const double d = yhat[k] - c.truths[k];
        quad += d * d * scale[k];
        log_lambda += c.log_difficulties[k];
      }
      logp[j] = log_weight[j] + base - 0.5 * log_lambda - 0.5 * v.competence * quad;
    }
    out[i] = static_cast<int>(rng.categorical_log(logp));
  }
  return out;
}

StickDraw draw_sticks(std::span<const int> assignments, std::size_t truncation, double concentration, Rng& rng) {
  const auto n = occupancy(assignments, truncation);
  StickDraw draw{std::vector<double>(truncation, 1.0), 0.0};
  std::size_t tail = assignments.size();
  const double upper = std::nextafter(1.0, 0.0);
  for (std::size_t j = 0; j + 1 < truncation; ++j) {
    tail -= n[j];
    // Beta as a gamma ratio so log(1 - v) stays exact when v rounds to 1.
    const double x = rng.gamma(1.0 + static_cast<double>(n[j]), 1.0);
    const double y = rng.gamma(concentration + static_cast<double>(tail), 1.0);
    const double v = x + y > 0.0 ? x / (x + y) : 1.0 / (1.0 + concentration + static_cast<double>(tail));
    // Keeps every later weight strictly positive.
    draw.sticks[j] = std::clamp(v, std::numeric_limits<double>::min(), upper);
    draw.log_remaining += y > 0.0 && x + y > 0.0 ? std::log(y) - std::log(x + y) : std::log1p(-draw.sticks[j]);
  }
  return draw;
}

std::vector<double> update_sticks(std::span<const int> assignments, std::size_t truncation,
                                  double concentration, Rng& rng) {
  return draw_sticks(assignments, truncation, concentration, rng).sticks;
}

double sample_concentration(double log_remaining, std::size_t truncation, const ConcentrationPrior& prior,
                            Rng& rng) {
  if (prior.is_fixed()) return prior.fixed_value;
  const double shape = prior.hyperprior->shape + static_cast<double>(truncation) - 1.0;
  const double rate = prior.hyperprior->rate - log_remaining;
  const double alpha = rng.gamma(shape, rate);
  return std::max(alpha, std::numeric_limits<double>::min());
}

double sample_concentration_given_sticks(std::span<const double> sticks, const ConcentrationPrior& prior,
                                         Rng& rng) {
  double log_remaining = 0.0;
  for (std::size_t j = 0; j + 1 < sticks.size(); ++j) log_remaining += std::log1p(-sticks[j]);
  return sample_concentration(log_remaining, sticks.size(), prior, rng);
}

double update_concentration(std::span<const int> assignments, std::size_t truncation, double current,
                            const ConcentrationPrior& prior, Rng& rng) {
  if (prior.is_fixed()) return prior.fixed_value;
  const auto aux = draw_sticks(assignments, truncation, current, rng);
  return sample_concentration(aux.log_remaining, truncation, prior, rng);
}

void update_truths(const LogitData& data, ModelState& state, const Priors& priors, Rng& rng) {
  const std::size_t J = state.cultures.size();
  const std::size_t K = data.items();
  // Sufficient statistics per (culture, item): sum of E_i and of E_i * yhat_ik.
  std::vector<double> weight(J * K, 0.0);
  std::vector<double> weighted(J * K, 0.0);
  std::vector<double> yhat;
  for (std::size_t i = 0; i < data.respondents(); ++i) {
    const auto& r = state.respondents[i];
    const auto c = static_cast<std::size_t>(state.mixture.assignments[i]);
    const double competence = std::exp(r.log_competence);
    fill_yhat(data, r, i, yhat);
    for (auto k : data.observed_items(i)) {
      weight[c * K + k] += competence;
      weighted[c * K + k] += competence * yhat[k];
    }
  }
  const double prior_precision = 1.0 / (priors.truth_sd * priors.truth_sd);
  for (std::size_t c = 0; c < J; ++c) {
    auto& culture = state.cultures[c];
    for (std::size_t k = 0; k < K; ++k) {
      const double inv_lambda = std::exp(-culture.log_difficulties[k]);
      const double precision = prior_precision + weight[c * K + k] * inv_lambda;
      const double mean = weighted[c * K + k] * inv_lambda / precision;
      culture.truths[k] = rng.normal(mean, 1.0 / std::sqrt(precision));
    }
  }
}

void update_difficulties(const LogitData& data, ModelState& state, const Priors& priors,
                         ProposalState& proposals, Rng& rng) {
  const std::size_t J = state.cultures.size();
  const std::size_t K = data.items();
  // Per (culture, item): observation count and sum of E_i (yhat - T)^2.
  std::vector<double> count(J * K, 0.0);
  std::vector<double> squares(J * K, 0.0);
  std::vector<double> yhat;
  for (std::size_t i = 0; i < data.respondents(); ++i) {
    const auto& r = state.respondents[i];
    const auto c = static_cast<std::size_t>(state.mixture.assignments[i]);
    const double competence = std::exp(r.log_competence);
    fill_yhat(data, r, i, yhat);
    const auto& truths = state.cultures[c].truths;
    for (auto k : data.observed_items(i)) {
      const double d = yhat[k] - truths[k];
      count[c * K + k] += 1.0;
      squares[c * K + k] += competence * d * d;
    }
  }
  const auto n = occupancy(state.mixture.assignments, J);
  const double sd = priors.log_difficulty_sd;
  auto item_log_density = [&](std::size_t c, std::size_t k, double l) {
    return -0.5 * count[c * K + k] * l - 0.5 * squares[c * K + k] * std::exp(-l) + normal_log_kernel(l, sd);
  };
  for (std::size_t c = 0; c < J; ++c) {
    auto& logs = state.cultures[c].log_difficulties;
    if (n[c] == 0) {
      for (auto& l : logs) l = rng.normal(0.0, sd);
      centre(logs);
      continue;
    }
    for (std::size_t k = 0; k < K; ++k) {
      std::size_t partner = rng.uniform_index(K - 1);
      if (partner >= k) ++partner;
      double& step_sd = proposals.log_difficulty_sd[c * K + k];
      const double delta = rng.normal(0.0, step_sd);
      const double up = logs[k] + delta;
      const double down = logs[partner] - delta;
      const double log_ratio = item_log_density(c, k, up) + item_log_density(c, partner, down) -
                               item_log_density(c, k, logs[k]) - item_log_density(c, partner, logs[partner]);
      const bool ok = accept(log_ratio, rng);
      if (ok) {
        logs[k] = up;
        logs[partner] = down;
      }
      proposals.record(proposals.log_difficulty, step_sd, ok);
    }
  }
  recenter_difficulties(state);
}

void update_culture_params(const LogitData& data, ModelState& state, CultureBlock block,
                           const Priors& priors, ProposalState& proposals, Rng& rng) {
  if (block == CultureBlock::truths) {
    update_truths(data, state, priors, rng);
  } else {
    update_difficulties(data, state, priors, proposals, rng);
  }
}

void recenter_difficulties(ModelState& state) {
  std::vector<double> shift(state.cultures.size(), 0.0);
  for (std::size_t c = 0; c < state.cultures.size(); ++c) {
    auto& logs = state.cultures[c].log_difficulties;
    shift[c] = mean_of(logs);
    for (auto& l : logs) l -= shift[c];
  }
  for (std::size_t i = 0; i < state.respondents.size(); ++i) {
    state.respondents[i].log_competence -= shift[static_cast<std::size_t>(state.mixture.assignments[i])];
  }
}

void update_respondent_params(const LogitData& data, ModelState& state, const Priors& priors,
                              ProposalState& proposals, Rng& rng, bool joint) {
  for (std::size_t i = 0; i < data.respondents(); ++i) {
    auto& r = state.respondents[i];
    if (data.observed_items(i).empty()) {
      r.log_competence = rng.normal(0.0, priors.log_competence_sd);
      r.shift_bias = rng.normal(0.0, priors.shift_sd);
      r.log_scale_bias = rng.normal(0.0, priors.log_scale_sd);
      continue;
    }
    const auto& culture = state.cultures[static_cast<std::size_t>(state.mixture.assignments[i])];
    auto log_post = [&](double le, double a, double lb) {
      return respondent_kernel(data, i, le, a, lb, culture) + normal_log_kernel(le, priors.log_competence_sd) +
             normal_log_kernel(a, priors.shift_sd) + normal_log_kernel(lb, priors.log_scale_sd);
    };
    double current = log_post(r.log_competence, r.shift_bias, r.log_scale_bias);
    if (joint) {
      const double le = r.log_competence + rng.normal(0.0, proposals.log_competence_sd[i]);
      const double a = r.shift_bias + rng.normal(0.0, proposals.shift_sd[i]);
      const double lb = r.log_scale_bias + rng.normal(0.0, proposals.log_scale_sd[i]);
      const bool ok = accept(log_post(le, a, lb) - current, rng);
      if (ok) r = RespondentParams{le, a, lb};
      // One joint decision adapts all three scales together.
      proposals.record(proposals.log_competence, proposals.log_competence_sd[i], ok);
      proposals.record(proposals.shift, proposals.shift_sd[i], ok);
      proposals.record(proposals.log_scale, proposals.log_scale_sd[i], ok);
      continue;
    }
    {
      const double le = r.log_competence + rng.normal(0.0, proposals.log_competence_sd[i]);
      const double proposed = log_post(le, r.shift_bias, r.log_scale_bias);
      const bool ok = accept(proposed - current, rng);
      if (ok) {
        r.log_competence = le;
        current = proposed;
      }
      proposals.record(proposals.log_competence, proposals.log_competence_sd[i], ok);
    }
    {
      const double a = r.shift_bias + rng.normal(0.0, proposals.shift_sd[i]);
      const double proposed = log_post(r.log_competence, a, r.log_scale_bias);
      const bool ok = accept(proposed - current, rng);
      if (ok) {
        r.shift_bias = a;
        current = proposed;
      }
      proposals.record(proposals.shift, proposals.shift_sd[i], ok);
    }
    {
      const double lb = r.log_scale_bias + rng.normal(0.0, proposals.log_scale_sd[i]);
      const double proposed = log_post(r.log_competence, r.shift_bias, lb);
      const bool ok = accept(proposed - current, rng);
      if (ok) r.log_scale_bias = lb;
      proposals.record(proposals.log_scale, proposals.log_scale_sd[i], ok);
    }
  }
}

namespace {

// k-means on logit-scale response profiles, distances over co-observed items
// rescaled to the full item count. Seeds are chosen k-means++ style.
std::vector<int> kmeans_assignments(const LogitData& data, std::size_t clusters, int iterations, Rng& rng,
                                    std::vector<std::vector<double>>& centres) {
  const std::size_t N = data.respondents();
  const std::size_t K = data.items();
  std::vector<double> item_mean(K, 0.0), item_n(K, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    for (auto k : data.observed_items(i)) {
      item_mean[k] += data.x(i, k);
      item_n[k] += 1.0;
    }
  }
  for (std::size_t k = 0; k < K; ++k) item_mean[k] /= std::max(item_n[k], 1.0);

  auto distance = [&](std::size_t i, const std::vector<double>& centre) {
    const auto obs = data.observed_items(i);
    double d2 = 0.0;
    for (auto k : obs) {
      const double d = data.x(i, k) - centre[k];
      d2 += d * d;
    }
    return d2 * static_cast<double>(K) / static_cast<double>(obs.size());
  };
  auto profile = [&](std::size_t i) {
    std::vector<double> p = item_mean;
    for (auto k : data.observed_items(i)) p[k] = data.x(i, k);
    return p;
  };

  centres.clear();
  centres.push_back(profile(rng.uniform_index(N)));
  std::vector<double> nearest(N, std::numeric_limits<double>::infinity());
  while (centres.size() < clusters) {
    double total = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      nearest[i] = std::min(nearest[i], distance(i, centres.back()));
      total += nearest[i];
    }
    if (!(total > 0.0)) break;
    centres.push_back(profile(rng.categorical(nearest)));
  }

  std::vector<int> z(N, 0);
  for (int it = 0; it <= iterations; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < N; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < centres.size(); ++c) {
        const double d = distance(i, centres[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      changed |= z[i] != static_cast<int>(best);
      z[i] = static_cast<int>(best);
    }
    if (it == iterations || (!changed && it > 0)) break;
    for (std::size_t c = 0; c < centres.size(); ++c) {
      std::vector<double> sum(K, 0.0), n(K, 0.0);
      for (std::size_t i = 0; i < N; ++i) {
        if (z[i] != static_cast<int>(c)) continue;
        for (auto k : data.observed_items(i)) {
          sum[k] += data.x(i, k);
          n[k] += 1.0;
        }
      }
      for (std::size_t k = 0; k < K; ++k) centres[c][k] = n[k] > 0.0 ? sum[k] / n[k] : item_mean[k];
    }
  }

  // Drop empty clusters and order the rest by size, largest first.
  std::vector<std::size_t> size(centres.size(), 0);
  for (int c : z) ++size[static_cast<std::size_t>(c)];
  std::vector<std::size_t> order(centres.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return size[a] > size[b]; });
  std::vector<int> rank(centres.size(), -1);
  std::vector<std::vector<double>> kept;
  for (auto c : order) {
    if (size[c] == 0) continue;
    rank[c] = static_cast<int>(kept.size());
    kept.push_back(centres[c]);
  }
  for (auto& c : z) c = rank[static_cast<std::size_t>(c)];
  centres = std::move(kept);
  return z;
}

}  // namespace

ModelState initial_state(const LogitData& data, const StudyConfig& config, Rng& rng) {
  const std::size_t N = data.respondents();
  const std::size_t K = data.items();
  const auto J = static_cast<std::size_t>(config.truncation);
  ModelState state;
  state.cultures.assign(J, CultureParams{std::vector<double>(K, 0.0), std::vector<double>(K, 0.0)});
  state.respondents.assign(N, RespondentParams{});
  const auto& prior = config.priors.concentration;
  state.mixture.concentration =
      prior.is_fixed() ? prior.fixed_value : prior.hyperprior->shape / prior.hyperprior->rate;
  state.mixture.assignments.assign(N, 0);

  if (config.initialization.strategy == InitStrategy::kmeans) {
    const std::size_t clusters =
        std::min({static_cast<std::size_t>(config.initialization.clusters), J, N});
    std::vector<std::vector<double>> centres;
    state.mixture.assignments = kmeans_assignments(data, clusters, config.initialization.lloyd_iterations, rng, centres);
    for (std::size_t c = 0; c < centres.size(); ++c) state.cultures[c].truths = centres[c];
  }

  // Sticks at their conditional means given the starting assignments.
  const auto n = occupancy(state.mixture.assignments, J);
  std::vector<double> sticks(J, 1.0);
  std::size_t tail = N;
  for (std::size_t j = 0; j + 1 < J; ++j) {
    tail -= n[j];
    const double a = 1.0 + static_cast<double>(n[j]);
    sticks[j] = a / (a + state.mixture.concentration + static_cast<double>(tail));
  }
  state.mixture.sticks = sticks;
  state.mixture.weights = stick_breaking(sticks);
  return state;
}

ModelState draw_prior_state(std::size_t respondents, std::size_t items, std::size_t truncation,
                            const Priors& priors, Rng& rng) {
  ModelState state;
  const auto& prior = priors.concentration;
  state.mixture.concentration =
      prior.is_fixed() ? prior.fixed_value : rng.gamma(prior.hyperprior->shape, prior.hyperprior->rate);
  std::vector<double> sticks(truncation, 1.0);
  for (std::size_t j = 0; j + 1 < truncation; ++j) {
    sticks[j] = std::clamp(rng.beta(1.0, state.mixture.concentration), std::numeric_limits<double>::min(),
                           std::nextafter(1.0, 0.0));
  }
  state.mixture.sticks = sticks;
  state.mixture.weights = stick_breaking(sticks);
  state.mixture.assignments.resize(respondents);
  for (auto& z : state.mixture.assignments) z = static_cast<int>(rng.categorical(state.mixture.weights));
  state.cultures.resize(truncation);
  for (auto& c : state.cultures) {
    c.truths.resize(items);
    c.log_difficulties.resize(items);
    for (auto& t : c.truths) t = rng.normal(0.0, priors.truth_sd);
    for (auto& l : c.log_difficulties) l = rng.normal(0.0, priors.log_difficulty_sd);
    centre(c.log_difficulties);
  }
  state.respondents.resize(respondents);
  for (auto& r : state.respondents) {
    r.log_competence = rng.normal(0.0, priors.log_competence_sd);
    r.shift_bias = rng.normal(0.0, priors.shift_sd);
    r.log_scale_bias = rng.normal(0.0, priors.log_scale_sd);
  }
  return state;
}

ResponseMatrix draw_responses(const ModelState& state, Rng& rng) {
  const std::size_t N = state.respondents.size();
  const std::size_t K = state.items();
  const double lo = std::numeric_limits<double>::min();
  const double hi = std::nextafter(1.0, 0.0);
  std::vector<double> values(N * K);
  for (std::size_t i = 0; i < N; ++i) {
    const auto& r = state.respondents[i];
    const auto& c = state.cultures[static_cast<std::size_t>(state.mixture.assignments[i])];
    const double b = r.scale_bias();
    for (std::size_t k = 0; k < K; ++k) {
      const double latent = rng.normal(c.truths[k], std::sqrt(std::exp(c.log_difficulties[k]) / r.competence()));
      values[i * K + k] = std::clamp(inverse_logit(b * latent + r.shift_bias), lo, hi);
    }
  }
  return ResponseMatrix(N, K, std::move(values), std::vector<bool>(N * K, true));
}

void sweep(const LogitData& data, ModelState& state, const StudyConfig& config, ProposalState& proposals,
           Rng& rng) {
  const auto J = state.cultures.size();
  state.mixture.assignments = update_assignments(data, state, rng);
  auto sticks = draw_sticks(state.mixture.assignments, J, state.mixture.concentration, rng);
  state.mixture.sticks = std::move(sticks.sticks);
  state.mixture.weights = stick_breaking(state.mixture.sticks);
  state.mixture.concentration = sample_concentration(sticks.log_remaining, J, config.priors.concentration, rng);
  update_culture_params(data, state, CultureBlock::truths, config.priors, proposals, rng);
  update_culture_params(data, state, CultureBlock::difficulties, config.priors, proposals, rng);
  update_respondent_params(data, state, config.priors, proposals, rng, config.joint_respondent_proposal);
}

FitResult fit(const ResponseMatrix& data, const StudyConfig& config) {
  validate(config);
  const LogitData logits(data);
  Rng rng(config.seed);
  ModelState state = initial_state(logits, config, rng);
  ProposalState proposals(data.respondents(), state.cultures.size(), data.items(), config.proposal_sds);

  FitResult result;
  auto& chain = result.chain;
  auto& report = result.report;
  chain.config = config;
  chain.seed = config.seed;
  chain.respondent_ids = data.respondent_ids();
  chain.item_ids = data.item_ids();
  chain.samples.reserve(static_cast<std::size_t>(config.retained_samples()));

  bool saturated = false;
  for (int t = 0; t < config.iterations; ++t) {
    const bool burning = t < config.burn_in;
    proposals.adapting = config.adapt && burning;
    proposals.step = std::pow(static_cast<double>(t) + 1.0, -0.6);
    if (t == config.burn_in) proposals.reset_counters();
    double ll = 0.0;
    try {
      sweep(logits, state, config, proposals, rng);
      ll = log_likelihood(logits, state);
    } catch (const std::exception& e) {
      throw NumericalError("sweep " + std::to_string(t) + ": " + e.what());
    }
    if (!std::isfinite(ll)) {
      throw NumericalError("sweep " + std::to_string(t) + ": log-likelihood is not finite");
    }
    if (burning || (t - config.burn_in + 1) % config.thin != 0) continue;
    chain.samples.push_back(state);
    chain.log_likelihood_trace.push_back(ll);
    const auto occupied = static_cast<int>(state.occupied());
    report.occupied_culture_count_trace.push_back(occupied);
    saturated |= occupied == config.truncation;
  }

  report.acceptance_rates = {proposals.log_competence.rate(), proposals.shift.rate(), proposals.log_scale.rate(),
                             proposals.log_difficulty.rate()};
  report.rhat_loglik = split_rhat(chain.log_likelihood_trace);
  report.ess_loglik = effective_sample_size(chain.log_likelihood_trace);
  if (saturated) {
    report.warnings.push_back("a retained sample occupies all " + std::to_string(config.truncation) +
                              " truncated components; increase truncation");
  }
  return result;
}

}  // namespace icct
