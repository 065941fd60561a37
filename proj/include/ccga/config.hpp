#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ccga/checks.hpp"
#include "ccga/engine.hpp"
#include "ccga/errors.hpp"
#include "ccga/experiments.hpp"
#include "ccga/theorylab.hpp"

namespace ccga {

using Json = nlohmann::ordered_json;

/// Schema or parse failure in a configuration document.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

Json load_json_file(const std::filesystem::path& path);
Json parse_json_text(std::string_view text);

/// Learning rate from exactly one of "m", "eta_inverse" or "eta" (a number
/// or a "p/q" string). Absent keys fall back to `fallback_m`.
Resolution parse_resolution(const Json& doc, Index categories, std::optional<Count> fallback_m);

/// {"weights": [[w00, w01, ...], ...]}; entries are non-negative integers or
/// decimal strings for values beyond 64 bits.
WeightMatrix parse_weights(const Json& doc);
WeightMatrix load_weights_file(const std::filesystem::path& path);

/// Keys: objective, D, K, m | eta_inverse | eta, weights | weights_file,
/// max_iterations, budget_multiplier, seed, continue_after_hit, thresholds,
/// lemma_alpha, track_events, trace_stride, initial_counts.
RunConfig parse_run_config(const Json& doc, const std::filesystem::path& base_dir = {});

/// Keys: preset, objective, D, K, eta_rule, m, trials, budget_multiplier,
/// seed (required), thresholds, lemma_alpha, track_events, jobs.
SweepSpec parse_sweep_spec(const Json& doc);

/// Keys: states, max_dimensions, max_categories, max_multiplier,
/// delta_dimensions, delta_categories, delta_states, delta_samples, seed.
DriftCheckSpec parse_drift_check_spec(const Json& doc);

/// Keys: name, theorem, kind, m, c, eps, self_loop_prob, event_break_prob, n,
/// trials, seed, x0, x_min, x_max, r, jump_share.
DriftScenario parse_scenario(const Json& doc);

struct TheoremCheckSpec {
  std::vector<DriftScenario> scenarios;
  std::uint64_t seed = 0;
  int jobs = 1;
};
/// Keys: presets (default true), scenarios, trials, seed, jobs.
TheoremCheckSpec parse_theorem_check_spec(const Json& doc);

Json to_json(const RunConfig& config);
Json to_json(const RunResult& result);
Json to_json(const SweepSpec& spec);
Json to_json(const DriftScenario& scenario);
Json to_json(const BoundReport& report);

/// CCGA_OUTPUT_DIR when set, otherwise the current directory.
std::filesystem::path default_output_dir();

}  // namespace ccga
