#include "icct/io/json_io.hpp"

#include <cmath>
#include <set>

#include "icct/errors.hpp"
#include "icct/io/csv.hpp"
#include "icct/stick_breaking.hpp"

namespace icct::io {

namespace {

// Reads fields of one JSON object, rejecting keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError(path_ + ": expected an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    known_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ValidationError(path_ + "." + key + ": wrong type");
    }
  }

  const Json* child(const char* key) {
    known_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  bool has(const char* key) const { return j_.contains(key); }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!known_.count(key)) throw ValidationError(path_ + ": unknown key \"" + key + "\"");
    }
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> known_;
};

template <typename T>
T required(const Json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) throw ValidationError(path + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(path + "." + key + ": wrong type");
  }
}

ConcentrationPrior concentration_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  ConcentrationPrior prior;
  if (r.has("fixed") && r.has("gamma")) throw ValidationError(path + ": give either \"fixed\" or \"gamma\"");
  if (const Json* g = r.child("gamma")) {
    ObjectReader gr(*g, path + ".gamma");
    GammaPrior gamma;
    gr.read("shape", gamma.shape);
    gr.read("rate", gamma.rate);
    gr.finish();
    prior = ConcentrationPrior::gamma(gamma.shape, gamma.rate);
  }
  if (r.has("fixed")) {
    double fixed = 1.0;
    r.read("fixed", fixed);
    prior = ConcentrationPrior::fixed(fixed);
  }
  r.finish();
  return prior;
}

CultureParams culture_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  CultureParams c;
  r.read("truths", c.truths);
  r.read("log_difficulties", c.log_difficulties);
  r.finish();
  if (c.log_difficulties.empty()) c.log_difficulties.assign(c.truths.size(), 0.0);
  return c;
}

Json culture_to_json(const CultureParams& c) {
  return Json{{"truths", c.truths}, {"log_difficulties", c.log_difficulties}};
}

}  // namespace

StudyConfig study_config_from_json(const Json& j) {
  StudyConfig c;
  ObjectReader r(j, "config");
  r.read("truncation", c.truncation);
  r.read("iterations", c.iterations);
  r.read("burn_in", c.burn_in);
  r.read("thin", c.thin);
  r.read("seed", c.seed);
  r.read("adapt", c.adapt);
  r.read("joint_respondent_proposal", c.joint_respondent_proposal);
  r.read("ordinal_levels", c.ordinal_levels);
  if (const Json* p = r.child("priors")) {
    ObjectReader pr(*p, "config.priors");
    pr.read("truth_sd", c.priors.truth_sd);
    pr.read("log_competence_sd", c.priors.log_competence_sd);
    pr.read("log_difficulty_sd", c.priors.log_difficulty_sd);
    pr.read("shift_sd", c.priors.shift_sd);
    pr.read("log_scale_sd", c.priors.log_scale_sd);
    if (const Json* a = pr.child("concentration")) {
      c.priors.concentration = concentration_from_json(*a, "config.priors.concentration");
    }
    pr.finish();
  }
  if (const Json* p = r.child("proposal_sds")) {
    ObjectReader pr(*p, "config.proposal_sds");
    pr.read("log_competence", c.proposal_sds.log_competence);
    pr.read("shift", c.proposal_sds.shift);
    pr.read("log_scale", c.proposal_sds.log_scale);
    pr.read("log_difficulty", c.proposal_sds.log_difficulty);
    pr.finish();
  }
  if (const Json* p = r.child("rescaling")) {
    ObjectReader pr(*p, "config.rescaling");
    std::string rule = "midpoint";
    pr.read("rule", rule);
    pr.read("epsilon", c.rescaling.epsilon);
    pr.finish();
    if (rule == "midpoint") {
      c.rescaling.rule = RescaleRule::midpoint;
    } else if (rule == "affine") {
      c.rescaling.rule = RescaleRule::affine;
    } else {
      throw ValidationError("config.rescaling.rule: expected \"midpoint\" or \"affine\"");
    }
  }
  std::string scale = "ordinal";
  r.read("input_scale", scale);
  if (scale == "ordinal") {
    c.input_scale = InputScale::ordinal;
  } else if (scale == "unit") {
    c.input_scale = InputScale::unit;
  } else {
    throw ValidationError("config.input_scale: expected \"ordinal\" or \"unit\"");
  }
  if (const Json* p = r.child("initialization")) {
    ObjectReader pr(*p, "config.initialization");
    std::string strategy = "kmeans";
    pr.read("strategy", strategy);
    pr.read("clusters", c.initialization.clusters);
    pr.read("lloyd_iterations", c.initialization.lloyd_iterations);
    pr.finish();
    if (strategy == "kmeans") {
      c.initialization.strategy = InitStrategy::kmeans;
    } else if (strategy == "single") {
      c.initialization.strategy = InitStrategy::single;
    } else {
      throw ValidationError("config.initialization.strategy: expected \"kmeans\" or \"single\"");
    }
  }
  r.finish();
  validate(c);
  return c;
}

Json to_json(const StudyConfig& c) {
  Json concentration;
  if (c.priors.concentration.is_fixed()) {
    concentration = Json{{"fixed", c.priors.concentration.fixed_value}};
  } else {
    concentration = Json{{"gamma",
                          {{"shape", c.priors.concentration.hyperprior->shape},
                           {"rate", c.priors.concentration.hyperprior->rate}}}};
  }
  Json rescaling{{"rule", c.rescaling.rule == RescaleRule::midpoint ? "midpoint" : "affine"}};
  if (c.rescaling.rule == RescaleRule::affine) rescaling["epsilon"] = c.rescaling.epsilon;
  return Json{
      {"truncation", c.truncation},
      {"iterations", c.iterations},
      {"burn_in", c.burn_in},
      {"thin", c.thin},
      {"seed", c.seed},
      {"priors",
       {{"truth_sd", c.priors.truth_sd},
        {"log_competence_sd", c.priors.log_competence_sd},
        {"log_difficulty_sd", c.priors.log_difficulty_sd},
        {"shift_sd", c.priors.shift_sd},
        {"log_scale_sd", c.priors.log_scale_sd},
        {"concentration", concentration}}},
      {"proposal_sds",
       {{"log_competence", c.proposal_sds.log_competence},
        {"shift", c.proposal_sds.shift},
        {"log_scale", c.proposal_sds.log_scale},
        {"log_difficulty", c.proposal_sds.log_difficulty}}},
      {"adapt", c.adapt},
      {"joint_respondent_proposal", c.joint_respondent_proposal},
      {"ordinal_levels", c.ordinal_levels},
      {"rescaling", rescaling},
      {"input_scale", c.input_scale == InputScale::ordinal ? "ordinal" : "unit"},
      {"initialization",
       {{"strategy", c.initialization.strategy == InitStrategy::kmeans ? "kmeans" : "single"},
        {"clusters", c.initialization.clusters},
        {"lloyd_iterations", c.initialization.lloyd_iterations}}},
  };
}

SimRequest sim_request_from_json(const Json& j) {
  SimRequest req;
  ObjectReader r(j, "simulation");
  std::string benchmark;
  r.read("benchmark", benchmark);
  std::uint64_t seed = 0;
  r.read("seed", seed);
  if (!benchmark.empty()) {
    if (benchmark == "one_culture") {
      req.config = benchmark_config(Benchmark::one_culture, seed);
    } else if (benchmark == "three_cultures") {
      req.config = benchmark_config(Benchmark::three_cultures, seed);
    } else {
      throw ValidationError("simulation.benchmark: expected \"one_culture\" or \"three_cultures\"");
    }
  }
  auto& c = req.config;
  c.seed = seed;
  r.read("respondents", c.respondents);
  r.read("items", c.items);
  r.read("missing_rate", c.missing_rate);
  r.read("weights", c.weights);
  r.read("max_mask_attempts", c.max_mask_attempts);
  r.read("ordinal_levels", req.ordinal_levels);
  if (const Json* h = r.child("respondent_hyperparams")) {
    ObjectReader hr(*h, "simulation.respondent_hyperparams");
    auto& p = c.respondent_hyperparams;
    hr.read("log_competence_mean", p.log_competence_mean);
    hr.read("log_competence_sd", p.log_competence_sd);
    hr.read("shift_mean", p.shift_mean);
    hr.read("shift_sd", p.shift_sd);
    hr.read("log_scale_mean", p.log_scale_mean);
    hr.read("log_scale_sd", p.log_scale_sd);
    hr.finish();
  }
  const Json* explicit_cultures = r.child("cultures");
  const Json* generator = r.child("random_cultures");
  if (explicit_cultures && generator) {
    throw ValidationError("simulation: give either \"cultures\" or \"random_cultures\"");
  }
  if (explicit_cultures) {
    if (!explicit_cultures->is_array()) throw ValidationError("simulation.cultures: expected an array");
    c.cultures.clear();
    for (std::size_t i = 0; i < explicit_cultures->size(); ++i) {
      c.cultures.push_back(culture_from_json((*explicit_cultures)[i], "simulation.cultures[" + std::to_string(i) + "]"));
    }
  }
  if (generator) {
    ObjectReader gr(*generator, "simulation.random_cultures");
    std::size_t count = 1;
    double truth_sd = 1.5, log_difficulty_sd = 0.3, min_separation = 0.0;
    std::uint64_t culture_seed = seed ^ 0x5eedc0ffeeULL;
    gr.read("count", count);
    gr.read("truth_sd", truth_sd);
    gr.read("log_difficulty_sd", log_difficulty_sd);
    gr.read("min_separation", min_separation);
    gr.read("seed", culture_seed);
    gr.finish();
    c.cultures = random_cultures(count, c.items, truth_sd, log_difficulty_sd, min_separation, culture_seed);
    if (c.weights.empty()) c.weights.assign(count, 1.0 / static_cast<double>(count));
  }
  r.finish();
  if (c.cultures.empty()) throw ValidationError("simulation: no cultures given");
  if (req.ordinal_levels < 0 || req.ordinal_levels == 1) {
    throw ValidationError("simulation.ordinal_levels: expected 0 (unit scale) or >= 2");
  }
  return req;
}

Json to_json(const GroundTruth& truth) {
  Json cultures = Json::array();
  for (const auto& c : truth.cultures) cultures.push_back(culture_to_json(c));
  Json respondents = Json::array();
  for (const auto& r : truth.respondents) {
    respondents.push_back(Json{{"log_competence", r.log_competence},
                               {"shift_bias", r.shift_bias},
                               {"log_scale_bias", r.log_scale_bias}});
  }
  std::vector<int> labels(truth.assignments);
  for (auto& z : labels) ++z;
  return Json{{"weights", truth.weights},
              {"cultures", cultures},
              {"assignments", labels},
              {"respondents", respondents}};
}

Json to_json(const FitReport& report) {
  return Json{{"occupied_culture_count_trace", report.occupied_culture_count_trace},
              {"acceptance_rates",
               {{"log_competence", report.acceptance_rates.log_competence},
                {"shift", report.acceptance_rates.shift},
                {"log_scale", report.acceptance_rates.log_scale},
                {"log_difficulty", report.acceptance_rates.log_difficulty}}},
              {"rhat_loglik", report.rhat_loglik},
              {"ess_loglik", report.ess_loglik},
              {"warnings", report.warnings}};
}

Json chain_to_json(const PosteriorChain& chain) {
  Json samples = Json::array();
  for (const auto& s : chain.samples) {
    Json truths = Json::array(), logs = Json::array();
    for (const auto& c : s.cultures) {
      truths.push_back(c.truths);
      logs.push_back(c.log_difficulties);
    }
    std::vector<double> le, a, lb;
    for (const auto& r : s.respondents) {
      le.push_back(r.log_competence);
      a.push_back(r.shift_bias);
      lb.push_back(r.log_scale_bias);
    }
    std::vector<int> labels(s.mixture.assignments);
    for (auto& z : labels) ++z;
    samples.push_back(Json{{"concentration", s.mixture.concentration},
                           {"sticks", s.mixture.sticks},
                           {"weights", s.mixture.weights},
                           {"assignments", labels},
                           {"truths", truths},
                           {"log_difficulties", logs},
                           {"log_competence", le},
                           {"shift_bias", a},
                           {"log_scale_bias", lb}});
  }
  return Json{{"format", kChainFormat},
              {"version", kChainVersion},
              {"seed", chain.seed},
              {"config", to_json(chain.config)},
              {"respondent_ids", chain.respondent_ids},
              {"item_ids", chain.item_ids},
              {"log_likelihood_trace", chain.log_likelihood_trace},
              {"samples", samples}};
}

PosteriorChain chain_from_json(const Json& j) {
  if (!j.is_object() || j.value("format", "") != kChainFormat) {
    throw ValidationError("chain file: missing \"format\": \"icct-chain\"");
  }
  const int version = required<int>(j, "version", "chain");
  if (version != kChainVersion) {
    throw ValidationError("chain file: unsupported version " + std::to_string(version));
  }
  PosteriorChain chain;
  chain.seed = required<std::uint64_t>(j, "seed", "chain");
  if (!j.contains("config")) throw ValidationError("chain: missing \"config\"");
  chain.config = study_config_from_json(j.at("config"));
  chain.respondent_ids = required<std::vector<std::string>>(j, "respondent_ids", "chain");
  chain.item_ids = required<std::vector<std::string>>(j, "item_ids", "chain");
  chain.log_likelihood_trace = required<std::vector<double>>(j, "log_likelihood_trace", "chain");
  if (!j.contains("samples") || !j.at("samples").is_array()) throw ValidationError("chain: missing \"samples\"");
  const auto& samples = j.at("samples");
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto path = "chain.samples[" + std::to_string(s) + "]";
    const auto& js = samples[s];
    ModelState state;
    state.mixture.concentration = required<double>(js, "concentration", path);
    state.mixture.sticks = required<std::vector<double>>(js, "sticks", path);
    state.mixture.weights = required<std::vector<double>>(js, "weights", path);
    state.mixture.assignments = required<std::vector<int>>(js, "assignments", path);
    for (auto& z : state.mixture.assignments) --z;
    const auto truths = required<std::vector<std::vector<double>>>(js, "truths", path);
    const auto logs = required<std::vector<std::vector<double>>>(js, "log_difficulties", path);
    if (truths.size() != logs.size()) throw ValidationError(path + ": truths and log_difficulties differ in length");
    for (std::size_t c = 0; c < truths.size(); ++c) state.cultures.push_back({truths[c], logs[c]});
    const auto le = required<std::vector<double>>(js, "log_competence", path);
    const auto a = required<std::vector<double>>(js, "shift_bias", path);
    const auto lb = required<std::vector<double>>(js, "log_scale_bias", path);
    if (le.size() != a.size() || a.size() != lb.size()) throw ValidationError(path + ": respondent arrays differ in length");
    for (std::size_t i = 0; i < le.size(); ++i) state.respondents.push_back({le[i], a[i], lb[i]});
    check_state(state, chain.item_ids.size());
    if (state.respondents.size() != chain.respondent_ids.size()) {
      throw ValidationError(path + ": respondent count differs from respondent_ids");
    }
    chain.samples.push_back(std::move(state));
  }
  if (chain.log_likelihood_trace.size() != chain.samples.size()) {
    throw ValidationError("chain: log_likelihood_trace length differs from sample count");
  }
  return chain;
}

namespace {

void emit(const Json& j, std::string& out, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out.push_back('\n');
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out.push_back('{');
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out.push_back(',');
        first = false;
        newline(depth + 1);
        out += Json(key).dump();
        out += indent < 0 ? ":" : ": ";
        emit(value, out, indent, depth + 1);
      }
      newline(depth);
      out.push_back('}');
      return;
    }
    case Json::value_t::array: {
      out.push_back('[');
      bool first = true;
      for (const auto& value : j) {
        if (!first) out.push_back(',');
        first = false;
        emit(value, out, -1, depth + 1);
      }
      out.push_back(']');
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_number(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump(const Json& j, bool pretty) {
  std::string out;
  emit(j, out, pretty ? 1 : -1, 0);
  out.push_back('\n');
  return out;
}

Json parse_json_file(const std::filesystem::path& path) {
  const auto text = read_text(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": invalid JSON: " + e.what());
  }
}

void write_chain(const PosteriorChain& chain, const std::filesystem::path& path) {
  write_text_atomic(path, dump(chain_to_json(chain), false));
}

PosteriorChain read_chain(const std::filesystem::path& path) { return chain_from_json(parse_json_file(path)); }

}  // namespace icct::io
