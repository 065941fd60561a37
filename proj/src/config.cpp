#include "ccga/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace ccga {

Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& error) {
    throw ConfigError(std::string("malformed JSON: ") + error.what());
  }
}

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str());
}

namespace {

/// Typed accessors that remember which keys were read, so leftovers can be
/// reported as unknown.
class Reader {
 public:
  Reader(const Json& doc, std::string context) : doc_(doc), context_(std::move(context)) {
    if (!doc_.is_object()) throw ConfigError(context_ + ": expected a JSON object");
  }

  bool has(const std::string& key) {
    known_.insert(key);
    return doc_.contains(key) && !doc_.at(key).is_null();
  }

  const Json& raw(const std::string& key) {
    known_.insert(key);
    return doc_.at(key);
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    return as<T>(key, doc_.at(key));
  }

  template <typename T>
  T require(const std::string& key) {
    if (!has(key)) throw ConfigError(context_ + ": missing required key '" + key + "'");
    return as<T>(key, doc_.at(key));
  }

  template <typename T>
  std::vector<T> list(const std::string& key, std::vector<T> fallback) {
    if (!has(key)) return fallback;
    const Json& value = doc_.at(key);
    if (!value.is_array()) return {as<T>(key, value)};
    std::vector<T> out;
    for (const auto& item : value) out.push_back(as<T>(key, item));
    return out;
  }

  void finish() const {
    for (const auto& [key, value] : doc_.items()) {
      if (!known_.count(key)) throw ConfigError(context_ + ": unknown key '" + key + "'");
    }
  }

  const std::string& context() const { return context_; }

 private:
  template <typename T>
  T as(const std::string& key, const Json& value) const {
    const auto fail = [&](const char* expected) {
      return ConfigError(context_ + ": key '" + key + "' must be " + expected);
    };
    if constexpr (std::is_same_v<T, bool>) {
      if (!value.is_boolean()) throw fail("a boolean");
      return value.get<bool>();
    } else if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) {
      if (!value.is_number_unsigned()) throw fail("a non-negative integer");
      return value.get<T>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!value.is_number_integer()) throw fail("an integer");
      return value.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!value.is_number()) throw fail("a number");
      return value.get<T>();
    } else {
      if (!value.is_string()) throw fail("a string");
      return value.get<std::string>();
    }
  }

  const Json& doc_;
  std::string context_;
  std::set<std::string> known_;
};

Rational parse_rational(const Json& value) {
  try {
    if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
    if (value.is_number()) {
      // Exact binary value of the double; rejected later unless it lands on the grid.
      return Rational(value.get<double>());
    }
    if (value.is_string()) {
      const auto text = value.get<std::string>();
      const auto slash = text.find('/');
      if (slash == std::string::npos) return Rational(BigInt(text));
      return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("eta must be a number or a \"p/q\" string");
}

std::vector<ThresholdSpec> read_thresholds(Reader& reader) {
  std::vector<ThresholdSpec> thresholds;
  if (reader.has("lemma_alpha")) thresholds = lemma_threshold_set(reader.get<double>("lemma_alpha", 0.5));
  if (reader.has("thresholds")) {
    const Json& list = reader.raw("thresholds");
    if (!list.is_array()) throw ConfigError(reader.context() + ": thresholds must be a list");
    for (const auto& item : list) {
      Reader t(item, reader.context() + ".thresholds");
      ThresholdSpec spec;
      spec.kind = parse_threshold_kind(t.require<std::string>("kind"));
      spec.alpha = t.require<double>("alpha");
      spec.name = t.get<std::string>("name", std::string(to_string(spec.kind)));
      t.finish();
      thresholds.push_back(spec);
    }
  }
  for (const auto& t : thresholds) {
    if (!(t.alpha >= 0 && t.alpha <= 1)) throw ConfigError("threshold alpha must lie in [0, 1]");
  }
  return thresholds;
}

Count default_multiplier(ObjectiveKind kind, Index dimensions, Index categories) {
  return kind == ObjectiveKind::KVal ? default_eta_kval(dimensions, categories)
                                     : default_eta_com(dimensions, categories);
}

Json optional_json(const std::optional<std::int64_t>& value) {
  return value ? Json(*value) : Json(nullptr);
}

}  // namespace

Resolution parse_resolution(const Json& doc, Index categories, std::optional<Count> fallback_m) {
  const int given = doc.contains("m") + doc.contains("eta_inverse") + doc.contains("eta");
  if (given > 1) throw ConfigError("give at most one of m, eta_inverse, eta");
  if (doc.contains("m")) {
    if (!doc.at("m").is_number_integer() || doc.at("m").get<Count>() < 1) {
      throw ConfigError("m must be a positive integer");
    }
    return Resolution(categories, doc.at("m").get<Count>());
  }
  if (doc.contains("eta_inverse")) {
    if (!doc.at("eta_inverse").is_number_integer()) throw ConfigError("eta_inverse must be an integer");
    return Resolution::from_eta(Rational(1, doc.at("eta_inverse").get<std::int64_t>()), categories);
  }
  if (doc.contains("eta")) return Resolution::from_eta(parse_rational(doc.at("eta")), categories);
  if (!fallback_m) throw ConfigError("no learning rate given (m, eta_inverse or eta)");
  return Resolution(categories, *fallback_m);
}

WeightMatrix parse_weights(const Json& doc) {
  const Json& rows = doc.is_object() ? doc.at("weights") : doc;
  if (!rows.is_array() || rows.empty() || !rows.front().is_array()) {
    throw ConfigError("weights must be a non-empty list of rows");
  }
  const auto width = rows.front().size();
  WeightMatrix weights(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t d = 0; d < rows.size(); ++d) {
    if (!rows[d].is_array() || rows[d].size() != width) {
      throw ConfigError("weight rows must all have K entries");
    }
    for (std::size_t k = 0; k < width; ++k) {
      const Json& w = rows[d][k];
      BigInt value;
      if (w.is_number_unsigned()) {
        value = w.get<std::uint64_t>();
      } else if (w.is_string()) {
        try {
          value = BigInt(w.get<std::string>());
        } catch (const std::exception&) {
          throw ConfigError("weight strings must be decimal integers");
        }
      } else {
        throw ConfigError("weights must be non-negative integers");
      }
      weights(static_cast<Index>(d), static_cast<Index>(k)) = value;
    }
  }
  return weights;
}

WeightMatrix load_weights_file(const std::filesystem::path& path) {
  return parse_weights(load_json_file(path));
}

RunConfig parse_run_config(const Json& doc, const std::filesystem::path& base_dir) {
  Reader r(doc, "run config");
  RunConfig config;
  const auto kind = parse_objective_kind(r.get<std::string>("objective", "com"));
  Index dimensions = r.get<std::int64_t>("D", 16);
  Index categories = r.get<std::int64_t>("K", 2);

  if (kind == ObjectiveKind::Custom) {
    WeightMatrix weights;
    if (r.has("weights")) {
      weights = parse_weights(r.raw("weights"));
    } else if (r.has("weights_file")) {
      std::filesystem::path path = r.get<std::string>("weights_file", "");
      if (path.is_relative()) path = base_dir / path;
      weights = load_weights_file(path);
    } else {
      throw ConfigError("custom objectives need weights or weights_file");
    }
    dimensions = weights.rows();
    categories = weights.cols();
    config.objective = LinearCategoricalObjective::custom(std::move(weights));
  } else {
    r.has("weights");
    r.has("weights_file");
    config.objective = kind == ObjectiveKind::KVal
                           ? LinearCategoricalObjective::kval(dimensions, categories)
                           : LinearCategoricalObjective::com(dimensions, categories);
  }

  r.has("m");
  r.has("eta_inverse");
  r.has("eta");
  std::optional<Count> fallback;
  if (kind != ObjectiveKind::Custom) fallback = default_multiplier(kind, dimensions, categories);
  config.resolution = parse_resolution(doc, categories, fallback);

  if (r.has("max_iterations")) {
    config.max_iterations = r.get<std::int64_t>("max_iterations", 1);
    r.has("budget_multiplier");
  } else if (kind == ObjectiveKind::Custom) {
    throw ConfigError("custom objectives need max_iterations (there is no bound to scale)");
  } else {
    const double multiplier =
        r.get<double>("budget_multiplier", kind == ObjectiveKind::KVal ? 10.0 : 20.0);
    const double bound =
        sweep_bound(kind, dimensions, categories, config.resolution.multiplier());
    config.max_iterations = static_cast<std::int64_t>(std::ceil(multiplier * bound));
  }
  config.seed = r.get<std::uint64_t>("seed", 0);
  config.continue_after_hit = r.get<bool>("continue_after_hit", false);
  config.thresholds = read_thresholds(r);
  config.track_events = r.get<bool>("track_events", true);
  config.trace_stride = r.get<std::int64_t>("trace_stride", 0);
  if (config.trace_stride < 0) throw ConfigError("trace_stride must be non-negative");
  if (r.has("initial_counts")) {
    const Json& rows = r.raw("initial_counts");
    if (!rows.is_array() || static_cast<Index>(rows.size()) != dimensions) {
      throw ConfigError("initial_counts must have D rows");
    }
    CountMatrix counts(dimensions, categories);
    for (Index d = 0; d < dimensions; ++d) {
      const Json& row = rows[static_cast<std::size_t>(d)];
      if (!row.is_array() || static_cast<Index>(row.size()) != categories) {
        throw ConfigError("initial_counts rows must have K entries");
      }
      for (Index k = 0; k < categories; ++k) {
        if (!row[static_cast<std::size_t>(k)].is_number_integer()) {
          throw ConfigError("initial_counts entries must be integers");
        }
        counts(d, k) = row[static_cast<std::size_t>(k)].get<Count>();
      }
    }
    config.initial_params_override = GridParams(config.resolution, std::move(counts));
  }
  r.finish();
  config.validate();
  return config;
}

SweepSpec parse_sweep_spec(const Json& doc) {
  Reader r(doc, "sweep config");
  const std::string preset = r.get<std::string>("preset", r.get<std::string>("objective", "com"));
  SweepSpec spec = default_sweep(parse_objective_kind(preset));
  if (r.has("objective")) spec.objective = parse_objective_kind(r.get<std::string>("objective", preset));
  spec.dimensions = r.list<Index>("D", spec.dimensions);
  spec.categories = r.list<Index>("K", spec.categories);
  if (r.has("eta_rule")) spec.eta_rule = parse_eta_rule(r.get<std::string>("eta_rule", ""));
  if (r.has("m")) {
    spec.explicit_m = r.get<std::int64_t>("m", 0);
    if (!r.has("eta_rule")) spec.eta_rule = EtaRule::Explicit;
  }
  spec.trials = r.get<std::int64_t>("trials", spec.trials);
  spec.budget_multiplier = r.get<double>("budget_multiplier", spec.budget_multiplier);
  spec.master_seed = r.require<std::uint64_t>("seed");
  if (r.has("thresholds") || r.has("lemma_alpha")) spec.thresholds = read_thresholds(r);
  spec.track_events = r.get<bool>("track_events", spec.track_events);
  spec.jobs = static_cast<int>(r.get<std::int64_t>("jobs", spec.jobs));
  if (spec.jobs < 1) throw ConfigError("jobs must be at least 1");
  r.finish();
  spec.validate();
  return spec;
}

DriftCheckSpec parse_drift_check_spec(const Json& doc) {
  Reader r(doc, "drift-check config");
  DriftCheckSpec spec;
  spec.states = static_cast<int>(r.get<std::int64_t>("states", spec.states));
  spec.max_dimensions = r.get<std::int64_t>("max_dimensions", spec.max_dimensions);
  spec.max_categories = r.get<std::int64_t>("max_categories", spec.max_categories);
  spec.max_multiplier = r.get<std::int64_t>("max_multiplier", spec.max_multiplier);
  spec.delta_dimensions = r.list<Index>("delta_dimensions", spec.delta_dimensions);
  spec.delta_categories = r.get<std::int64_t>("delta_categories", spec.delta_categories);
  spec.delta_states = static_cast<int>(r.get<std::int64_t>("delta_states", spec.delta_states));
  spec.delta_samples = r.get<std::int64_t>("delta_samples", spec.delta_samples);
  spec.seed = r.get<std::uint64_t>("seed", spec.seed);
  r.finish();
  if (spec.states < 1 || spec.max_dimensions < 1 || spec.max_categories < 2 ||
      spec.max_multiplier < 1 || spec.delta_categories < 2 || spec.delta_states < 0 ||
      spec.delta_samples < 1) {
    throw ConfigError("drift-check config: sizes must be positive (K >= 2)");
  }
  return spec;
}

DriftScenario parse_scenario(const Json& doc) {
  Reader r(doc, "scenario");
  DriftScenario s;
  s.name = r.get<std::string>("name", "scenario");
  s.theorem = static_cast<int>(r.require<std::int64_t>("theorem"));
  s.kind = parse_scenario_kind(r.require<std::string>("kind"));
  s.target = r.get<double>("m", s.target);
  s.step = r.get<double>("c", s.step);
  s.drift = r.get<double>("eps", s.drift);
  s.self_loop_prob = r.get<double>("self_loop_prob", s.self_loop_prob);
  s.event_break_prob = r.get<double>("event_break_prob", s.event_break_prob);
  s.horizon = r.get<std::int64_t>("n", s.horizon);
  s.trials = r.get<std::int64_t>("trials", s.trials);
  s.seed = r.get<std::uint64_t>("seed", s.seed);
  s.x0 = r.get<double>("x0", s.x0);
  s.x_min = r.get<double>("x_min", s.x_min);
  s.x_max = r.get<double>("x_max", s.x_max);
  s.r = r.get<double>("r", s.r);
  s.jump_share = r.get<double>("jump_share", s.jump_share);
  r.finish();
  return s;
}

TheoremCheckSpec parse_theorem_check_spec(const Json& doc) {
  Reader r(doc, "theorem-check config");
  TheoremCheckSpec spec;
  if (r.get<bool>("presets", true)) spec.scenarios = default_presets();
  if (r.has("scenarios")) {
    const Json& list = r.raw("scenarios");
    if (!list.is_array()) throw ConfigError("scenarios must be a list");
    for (const auto& item : list) spec.scenarios.push_back(parse_scenario(item));
  }
  if (r.has("trials")) {
    const auto trials = r.get<std::int64_t>("trials", 1);
    for (auto& s : spec.scenarios) s.trials = trials;
  }
  spec.seed = r.get<std::uint64_t>("seed", 0);
  spec.jobs = static_cast<int>(r.get<std::int64_t>("jobs", 1));
  if (spec.jobs < 1) throw ConfigError("jobs must be at least 1");
  r.finish();
  return spec;
}

Json to_json(const RunConfig& config) {
  Json doc;
  doc["objective"] = to_string(config.objective.kind());
  doc["D"] = config.objective.dimensions();
  doc["K"] = config.objective.categories();
  doc["m"] = config.resolution.multiplier();
  doc["eta_inverse"] = config.resolution.grid_size();
  doc["max_iterations"] = config.max_iterations;
  doc["seed"] = config.seed;
  doc["continue_after_hit"] = config.continue_after_hit;
  doc["track_events"] = config.track_events;
  doc["trace_stride"] = config.trace_stride;
  Json thresholds = Json::array();
  for (const auto& t : config.thresholds) {
    thresholds.push_back({{"name", t.name}, {"kind", to_string(t.kind)}, {"alpha", t.alpha}});
  }
  doc["thresholds"] = thresholds;
  return doc;
}

Json to_json(const RunResult& result) {
  Json doc;
  doc["hit"] = result.hit;
  doc["t_hit"] = optional_json(result.t_hit);
  doc["iterations_executed"] = result.iterations_executed;
  doc["K"] = result.resolution.categories();
  doc["m"] = result.resolution.multiplier();
  doc["eta_inverse"] = result.resolution.grid_size();
  Json crossings = Json::object();
  for (const auto& [name, t] : result.threshold_crossings) crossings[name] = optional_json(t);
  doc["threshold_crossings"] = crossings;
  doc["low_marginal_event"] = optional_json(result.low_marginal_event);
  doc["ratio_event"] = optional_json(result.ratio_event);
  doc["optimal_sum_decrease"] = optional_json(result.optimal_sum_decrease);
  Json optimal = Json::array();
  for (Index d = 0; d < result.final_params.dimensions(); ++d) {
    optimal.push_back(result.final_params.count(d, 0));
  }
  doc["final_optimal_counts"] = optimal;
  return doc;
}

Json to_json(const SweepSpec& spec) {
  Json doc;
  doc["objective"] = to_string(spec.objective);
  doc["D"] = spec.dimensions;
  doc["K"] = spec.categories;
  doc["eta_rule"] = to_string(spec.eta_rule);
  if (spec.eta_rule == EtaRule::Explicit) doc["m"] = spec.explicit_m;
  doc["trials"] = spec.trials;
  doc["budget_multiplier"] = spec.budget_multiplier;
  doc["seed"] = spec.master_seed;
  Json thresholds = Json::array();
  for (const auto& t : spec.thresholds) {
    thresholds.push_back({{"name", t.name}, {"kind", to_string(t.kind)}, {"alpha", t.alpha}});
  }
  doc["thresholds"] = thresholds;
  doc["track_events"] = spec.track_events;
  doc["jobs"] = spec.jobs;
  return doc;
}

Json to_json(const DriftScenario& s) {
  Json doc;
  doc["name"] = s.name;
  doc["theorem"] = s.theorem;
  doc["kind"] = to_string(s.kind);
  doc["m"] = s.target;
  doc["c"] = s.step;
  doc["eps"] = s.drift;
  doc["self_loop_prob"] = s.self_loop_prob;
  doc["event_break_prob"] = s.event_break_prob;
  doc["n"] = s.horizon;
  doc["trials"] = s.trials;
  doc["seed"] = s.seed;
  doc["x0"] = s.x0;
  doc["x_min"] = s.x_min;
  doc["x_max"] = s.x_max;
  doc["r"] = s.r;
  doc["jump_share"] = s.jump_share;
  return doc;
}

Json to_json(const BoundReport& report) {
  Json doc;
  doc["scenario"] = report.scenario;
  doc["theorem"] = report.theorem;
  doc["empirical"] = report.empirical;
  doc["stderr"] = report.stderr_;
  doc["bound"] = report.bound;
  doc["naive_bound"] = report.naive_bound;
  doc["holds"] = report.holds;
  doc["trials"] = report.trials;
  doc["n"] = report.horizon;
  return doc;
}

std::filesystem::path default_output_dir() {
  if (const char* dir = std::getenv("CCGA_OUTPUT_DIR"); dir && *dir) return dir;
  return ".";
}

}  // namespace ccga
