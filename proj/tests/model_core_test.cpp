#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "icct/errors.hpp"
#include "icct/likelihood.hpp"
#include "icct/links.hpp"
#include "icct/simulate.hpp"
#include "support.hpp"

using namespace icct;
using doctest::Approx;

namespace {

// Normal log pdf in terms of the standardised residual and the sd, not the
// library's (yhat, E, lambda) form.
double normal_logpdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd * std::sqrt(2.0 * std::numbers::pi));
}

double brute_force_loglik(const ResponseMatrix& d, const ModelState& s) {
  double total = 0.0;
  for (std::size_t i = 0; i < d.respondents(); ++i) {
    for (std::size_t k = 0; k < d.items(); ++k) {
      if (!d.observed(i, k)) continue;
      const auto& c = s.cultures[s.mixture.assignments[i]];
      const auto& r = s.respondents[i];
      const double b = std::exp(r.log_scale_bias);
      const double x = std::log(d.value(i, k) / (1.0 - d.value(i, k)));
      const double sd = b * std::sqrt(std::exp(c.log_difficulties[k]) / std::exp(r.log_competence));
      total += normal_logpdf(x, b * c.truths[k] + r.shift_bias, sd);
    }
  }
  return total;
}

}  // namespace

TEST_CASE("logit examples and domain") {
  CHECK(logit(0.5) == 0.0);
  CHECK(logit(0.125) == Approx(std::log(1.0 / 7.0)).epsilon(1e-14));
  CHECK(logit(0.875) == Approx(1.945910149055313).epsilon(1e-14));
  CHECK(logit(1.0 - 0.3) == Approx(-logit(0.3)).epsilon(1e-14));
  CHECK_THROWS_AS(logit(0.0), std::domain_error);
  CHECK_THROWS_AS(logit(1.0), std::domain_error);
  CHECK_THROWS_AS(logit(-0.1), std::domain_error);
  CHECK_THROWS_AS(logit(std::nan("")), std::domain_error);
}

TEST_CASE("inverse logit round trip and monotonicity") {
  double prev = -std::numeric_limits<double>::infinity();
  for (int n = 1; n < 2000; ++n) {
    const double x = n / 2000.0;
    CHECK(std::abs(inverse_logit(logit(x)) - x) <= 1e-12);
    CHECK(logit(x) > prev);
    prev = logit(x);
  }
  CHECK(inverse_logit(800.0) == 1.0);
  CHECK(inverse_logit(-800.0) >= 0.0);
}

TEST_CASE("cell density examples") {
  const RespondentParams unit{0.0, 0.0, 0.0};
  CHECK(cell_log_density(0.5, 0.0, 1.0, unit) == Approx(-0.5 * std::log(2 * std::numbers::pi)).epsilon(1e-14));
  CHECK(cell_log_density(0.5, 0.0, 1.0, {std::log(4.0), 0.0, 0.0}) ==
        Approx(-0.5 * std::log(2 * std::numbers::pi * 0.25)).epsilon(1e-14));
  // lambda = E = 2 gives unit sd.
  const double x = inverse_logit(1.5);
  CHECK(cell_log_density(x, 1.5, 2.0, {std::log(2.0), 0.0, 0.0}) == Approx(normal_logpdf(1.5, 1.5, 1.0)).epsilon(1e-12));
}

TEST_CASE("cell density with biases matches the shifted and scaled normal") {
  Rng rng(17);
  for (int n = 0; n < 200; ++n) {
    const RespondentParams r{rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 0.5)};
    const double T = rng.normal(0, 2), lambda = std::exp(rng.normal(0, 1));
    const double xv = 0.01 + 0.98 * rng.uniform();
    const double b = std::exp(r.log_scale_bias);
    const double expect = normal_logpdf(logit(xv), b * T + r.shift_bias, b * std::sqrt(lambda / std::exp(r.log_competence)));
    CHECK(cell_log_density(xv, T, lambda, r) == Approx(expect).epsilon(1e-11));
  }
}

TEST_CASE("log likelihood: empty, additive, oracle") {
  Rng rng(3);
  const auto data = test::random_data(5, 4, rng, 0.3);
  auto state = test::random_state(5, 4, 3, rng);
  CHECK(log_likelihood(data.without_observations(), state) == 0.0);

  // One respondent with two observed cells.
  const ResponseMatrix two(2, 2, {0.3, 0.6, 0.5, 0.5}, {true, true, true, false});
  auto s2 = test::random_state(2, 2, 1, rng);
  const auto& c = s2.cultures[0];
  const double first = cell_log_density(0.3, c.truths[0], std::exp(c.log_difficulties[0]), s2.respondents[0]) +
                       cell_log_density(0.6, c.truths[1], std::exp(c.log_difficulties[1]), s2.respondents[0]);
  CHECK(respondent_log_likelihood(two, s2, 0, 0) == Approx(first).epsilon(1e-14));

  for (int n = 0; n < 100; ++n) {
    const auto d = test::random_data(5, 4, rng, 0.25);
    const auto s = test::random_state(5, 4, 3, rng);
    CHECK(std::abs(log_likelihood(d, s) - brute_force_loglik(d, s)) <= 1e-9);
  }

  auto bad = test::random_state(5, 3, 2, rng);
  CHECK_THROWS_AS(log_likelihood(data, bad), ValidationError);
}

TEST_CASE("log likelihood is invariant to respondent order") {
  Rng rng(8);
  const auto d = test::random_data(6, 5, rng, 0.2);
  const auto s = test::random_state(6, 5, 3, rng);
  const std::vector<std::size_t> order{3, 0, 5, 1, 4, 2};
  std::vector<double> values;
  std::vector<bool> mask;
  ModelState p = s;
  p.respondents.clear();
  p.mixture.assignments.clear();
  for (auto i : order) {
    for (std::size_t k = 0; k < 5; ++k) {
      values.push_back(d.value(i, k));
      mask.push_back(d.observed(i, k));
    }
    p.respondents.push_back(s.respondents[i]);
    p.mixture.assignments.push_back(s.mixture.assignments[i]);
  }
  const ResponseMatrix pd(6, 5, values, mask);
  CHECK(log_likelihood(pd, p) == Approx(log_likelihood(d, s)).epsilon(1e-12));
}

TEST_CASE("scale direction b*g, T/g, E*g^2 leaves cell densities unchanged") {
  Rng rng(21);
  for (int n = 0; n < 100; ++n) {
    const double g = std::exp(rng.normal(0, 0.7));
    const RespondentParams r{rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 0.5)};
    const RespondentParams scaled{r.log_competence + 2 * std::log(g), r.shift_bias, r.log_scale_bias + std::log(g)};
    const double T = rng.normal(0, 2), lambda = std::exp(rng.normal(0, 1)), x = 0.05 + 0.9 * rng.uniform();
    CHECK(cell_log_density(x, T / g, lambda, scaled) == Approx(cell_log_density(x, T, lambda, r)).epsilon(1e-11));
  }
}

TEST_CASE("response matrix invariants") {
  CHECK_THROWS_AS(ResponseMatrix(1, 2, {0.5, 0.5}, {true, true}), ValidationError);
  CHECK_THROWS_AS(ResponseMatrix(2, 2, {0.5, 1.0, 0.5, 0.5}, {true, true, true, true}), ValidationError);
  CHECK_THROWS_AS(ResponseMatrix(2, 2, {0.5, 0.5, 0.5, 0.5}, {true, true, false, false}), ValidationError);
  CHECK_THROWS_AS(ResponseMatrix(2, 2, {0.5, 0.5, 0.5, 0.5}, {true, false, true, false}), ValidationError);
  // Masked entries may hold anything.
  const ResponseMatrix ok(2, 2, {0.5, 7.0, 0.5, 0.5}, {true, false, true, true});
  CHECK(ok.observed_count() == 3);
  CHECK(ok.respondent_ids() == std::vector<std::string>{"r1", "r2"});
}

TEST_CASE("simulate: deterministic, full mask, noise-free limit") {
  auto cfg = benchmark_config(Benchmark::one_culture, 4);
  const auto a = simulate(cfg);
  const auto b = simulate(cfg);
  CHECK(a.data == b.data);
  CHECK(a.truth.assignments == b.truth.assignments);
  CHECK(a.data.observed_count() == cfg.respondents * cfg.items);

  cfg.respondent_hyperparams = {std::log(1e6), 0.0, 0.0, 0.0, 0.0, 0.0};
  const auto sharp = simulate(cfg);
  const auto& T = sharp.truth.cultures[0].truths;
  for (std::size_t i = 0; i < cfg.respondents; ++i)
    for (std::size_t k = 0; k < cfg.items; ++k) CHECK(std::abs(sharp.data.value(i, k) - inverse_logit(T[k])) < 0.01);

  cfg.missing_rate = 0.3;
  const auto holes = simulate(cfg);
  const double frac = 1.0 - static_cast<double>(holes.data.observed_count()) / (cfg.respondents * cfg.items);
  CHECK(frac == Approx(0.3).epsilon(0.15));

  cfg.missing_rate = 1.0;
  CHECK_THROWS_AS(simulate(cfg), ValidationError);
  cfg.missing_rate = 0.99;
  cfg.max_mask_attempts = 3;
  CHECK_THROWS_AS(simulate(cfg), ValidationError);
  cfg.missing_rate = 0.0;
  cfg.weights = {0.5};
  CHECK_THROWS_AS(simulate(cfg), ValidationError);
}

TEST_CASE("simulate: per-culture item means follow the law of large numbers") {
  const auto cfg = benchmark_config(Benchmark::three_cultures, 12);
  const auto sim = simulate(cfg);
  const auto& t = sim.truth;
  std::size_t inside = 0, total = 0;
  for (std::size_t c = 0; c < t.cultures.size(); ++c) {
    for (std::size_t k = 0; k < cfg.items; ++k) {
      // Conditional on respondent parameters, X_ik ~ N(b_i T + a_i, b_i^2 lambda / E_i).
      double sum = 0, expect = 0, var = 0;
      std::size_t n = 0;
      const double lambda = std::exp(t.cultures[c].log_difficulties[k]);
      for (std::size_t i = 0; i < cfg.respondents; ++i) {
        if (t.assignments[i] != static_cast<int>(c)) continue;
        const auto& r = t.respondents[i];
        const double b = std::exp(r.log_scale_bias);
        sum += logit(sim.data.value(i, k));
        expect += b * t.cultures[c].truths[k] + r.shift_bias;
        var += b * b * lambda / std::exp(r.log_competence);
        ++n;
      }
      REQUIRE(n > 10);
      ++total;
      if (std::abs(sum - expect) / n <= 3.0 * std::sqrt(var) / n) ++inside;
    }
  }
  CHECK(static_cast<double>(inside) / total >= 0.95);
}

TEST_CASE("simulate: mean cell negative log-likelihood approaches the normal entropy") {
  auto cfg = benchmark_config(Benchmark::three_cultures, 2);
  REQUIRE(cfg.respondents * cfg.items >= 8000);
  const auto sim = simulate(cfg);
  ModelState s;
  s.cultures = sim.truth.cultures;
  s.respondents = sim.truth.respondents;
  s.mixture.assignments = sim.truth.assignments;
  double entropy = 0.0;
  for (std::size_t i = 0; i < cfg.respondents; ++i) {
    const auto& r = s.respondents[i];
    for (std::size_t k = 0; k < cfg.items; ++k) {
      const double lambda = std::exp(s.cultures[s.mixture.assignments[i]].log_difficulties[k]);
      const double sd = std::exp(r.log_scale_bias) * std::sqrt(lambda / std::exp(r.log_competence));
      entropy += 0.5 * std::log(2 * std::numbers::pi * std::numbers::e * sd * sd);
    }
  }
  double nll = 0.0;
  for (std::size_t i = 0; i < cfg.respondents; ++i)
    nll -= respondent_log_likelihood(sim.data, s, i, s.mixture.assignments[i]);
  const double cells = static_cast<double>(cfg.respondents * cfg.items);
  CHECK(nll / cells == Approx(entropy / cells).epsilon(0.05));
}

TEST_CASE("random cultures respect separation and centring") {
  const auto cultures = random_cultures(3, 40, 2.0, 0.3, 6.0, 99);
  for (const auto& c : cultures) {
    double m = 0;
    for (double l : c.log_difficulties) m += l;
    CHECK(std::abs(m) < 1e-12);
  }
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b) {
      double d = 0;
      for (std::size_t k = 0; k < 40; ++k) d += std::pow(cultures[a].truths[k] - cultures[b].truths[k], 2);
      CHECK(std::sqrt(d) >= 6.0);
    }
}
