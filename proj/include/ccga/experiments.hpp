#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ccga/engine.hpp"
#include "ccga/objectives.hpp"

namespace ccga {

/// m = ceil(sqrt(D) ln(DK)), i.e. 1/eta = m K.
std::int64_t default_eta_com(Index dimensions, Index categories);
/// m = ceil(D K ln K ln(DK)).
std::int64_t default_eta_kval(Index dimensions, Index categories);

/// Runtime bound shapes with unit constants: sqrt(D) ln(DK) / eta and D ln K / eta.
double bound_com(Index dimensions, Index categories, double eta);
double bound_kval(Index dimensions, Index categories, double eta);

/// The constants that the theorems attach to the bound shapes. Values that
/// depend on a free exponent c2 are given as expressions.
struct BoundConstant {
  std::string bound;  ///< "com-upper", "com-lower", "kval-upper", "kval-lower"
  std::string symbol;
  std::string value;
  std::string role;
};
const std::vector<BoundConstant>& theorem_constants();

enum class EtaRule { ComDefault, KvalDefault, Explicit };
std::string_view to_string(EtaRule rule);
EtaRule parse_eta_rule(std::string_view name);

struct SweepSpec {
  ObjectiveKind objective = ObjectiveKind::Com;
  std::vector<Index> dimensions{64};
  std::vector<Index> categories{2, 4, 8, 16};
  EtaRule eta_rule = EtaRule::ComDefault;
  std::int64_t explicit_m = 0;  ///< used when eta_rule == Explicit
  std::int64_t trials = 100;
  double budget_multiplier = 20;
  std::uint64_t master_seed = 0;
  std::vector<ThresholdSpec> thresholds;
  bool track_events = true;
  int jobs = 1;

  void validate() const;
};

/// The scaled reproduction grids: COM at D = 64, K in {2,4,8,16} with budget
/// 20x, and KVal at D = 16, K in {2,4,8} with budget 10x. The COM preset
/// carries the four product/sum thresholds at alpha = 1/2.
SweepSpec default_sweep(ObjectiveKind objective);

std::int64_t resolve_multiplier(const SweepSpec& spec, Index dimensions, Index categories);
double sweep_bound(ObjectiveKind objective, Index dimensions, Index categories, std::int64_t m);

/// Per-trial seed: mix of (master, D, K, trial).
std::uint64_t trial_seed(std::uint64_t master, Index dimensions, Index categories,
                         std::int64_t trial);

struct TrialRecord {
  std::int64_t trial = 0;
  Index dimensions = 0;
  Index categories = 0;
  std::int64_t m = 0;
  std::uint64_t seed = 0;
  std::int64_t budget = 0;
  bool hit = false;
  std::optional<std::int64_t> t_hit;
  std::int64_t iterations = 0;
  std::optional<std::int64_t> low_marginal_event;
  std::optional<std::int64_t> ratio_event;
  std::optional<std::int64_t> optimal_sum_decrease;
  std::map<std::string, std::optional<std::int64_t>> crossings;
  std::string error;

  /// t_hit for hits, the executed iteration count for censored trials.
  std::int64_t runtime() const { return t_hit.value_or(iterations); }
};

struct CellStats {
  Index dimensions = 0;
  Index categories = 0;
  std::int64_t m = 0;
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  double success_rate = 0;
  double min = 0;
  double q25 = 0;
  double median = 0;
  double q75 = 0;
  double max = 0;
  double mean = 0;
  double bound = 0;
  double median_bound_ratio = 0;
  double low_marginal_frequency = 0;
  double ratio_event_frequency = 0;
  std::string error;
};

struct SweepResult {
  std::vector<CellStats> cells;
  std::vector<TrialRecord> trials;  ///< ordered by cell, then trial index
};

/// Linear interpolation between order statistics (the common "type 7" rule).
double quantile(std::vector<double> values, double p);

/// Aggregates the records of one cell. Permutation invariant.
CellStats summarize_cell(const std::vector<TrialRecord>& records, double bound);

SweepResult run_sweep(const SweepSpec& spec);

enum class SweepAxis { K, D };
SweepAxis parse_sweep_axis(std::string_view name);

struct SlopeFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};

/// Least squares of y on x with an intercept. Throws PreconditionError for
/// fewer than 3 points or no spread in x.
SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// log(median runtime) against log(bound) over cells that differ along `axis`.
SlopeFit slope_regression(const std::vector<CellStats>& cells, SweepAxis axis);

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& trials,
                      const std::vector<ThresholdSpec>& thresholds);
void write_cells_csv(std::ostream& out, const std::vector<CellStats>& cells);
/// Columns D, K, bound, median.
void write_overlay_csv(std::ostream& out, const std::vector<CellStats>& cells);

}  // namespace ccga
