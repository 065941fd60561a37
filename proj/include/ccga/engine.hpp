#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ccga/model.hpp"
#include "ccga/objectives.hpp"

namespace ccga {

/// Threshold conditions on the optimal-category marginals, evaluated on
/// theta^(t) before the samples of iteration t are drawn.
enum class ThresholdKind {
  ProductAtLeastAlpha,       ///< prod_d theta(d,0) >= alpha
  SumAtLeastDMinusOnePlusAlpha,  ///< sum_d theta(d,0) >= D - 1 + alpha
  ProductAtLeastAlphaPowD,   ///< prod_d theta(d,0) >= alpha^D
  SumAtLeastAlphaD,          ///< sum_d theta(d,0) >= alpha D
};

std::string_view to_string(ThresholdKind kind);
ThresholdKind parse_threshold_kind(std::string_view name);

struct ThresholdSpec {
  std::string name;
  ThresholdKind kind;
  double alpha;
};

/// The four thresholds that pair up into the product/sum orderings, all at
/// the same alpha: "product", "sum" (first pair), "product_pow", "sum_scaled".
std::vector<ThresholdSpec> lemma_threshold_set(double alpha);

struct UpdateEvent {
  std::int64_t t;
  const GridParams& before;
  const GridParams& after;
  const OneHotSolution& winner;
  const OneHotSolution& loser;
};

/// Per-iteration hook. `before_sampling` sees theta^(t); `after_update` sees
/// both theta^(t) and theta^(t+1).
class Observer {
 public:
  virtual ~Observer() = default;
  virtual void before_sampling(std::int64_t /*t*/, const GridParams& /*theta*/) {}
  virtual void after_update(const UpdateEvent& /*event*/) {}
};

/// Records the first iteration at which a threshold condition holds.
class ThresholdObserver final : public Observer {
 public:
  ThresholdObserver(const GridParams& shape, ThresholdSpec spec);

  void before_sampling(std::int64_t t, const GridParams& theta) override;

  const ThresholdSpec& spec() const { return spec_; }
  std::optional<std::int64_t> first_crossing() const { return first_crossing_; }
  /// Exact evaluation of the condition (no floating point in the decision).
  bool holds(const GridParams& theta) const;

 private:
  ThresholdSpec spec_;
  Count sum_threshold_ = 0;       // minimal integer count sum satisfying a sum condition
  double log_product_target_ = 0;  // log of the product target in count units
  Rational product_target_;       // exact product target in count units
  std::vector<double> log_count_;  // log(n) lookup for n in [0, mK]
  std::optional<std::int64_t> first_crossing_;
};

struct TraceSample {
  std::int64_t t;
  CountVector optimal_counts;  ///< counts(., 0) at theta^(t)
};

struct RunResult {
  bool hit = false;
  std::optional<std::int64_t> t_hit;
  std::int64_t iterations_executed = 0;
  Resolution resolution{2, 1};
  std::map<std::string, std::optional<std::int64_t>> threshold_crossings;
  /// First t with min_d theta(d,0) <= 1/(2K).
  std::optional<std::int64_t> low_marginal_event;
  /// First t with 2 theta(d,0) < theta(d,k) for some d and k >= 1.
  std::optional<std::int64_t> ratio_event;
  /// First t at which sum_d theta(d,0) decreased from theta^(t) to theta^(t+1).
  std::optional<std::int64_t> optimal_sum_decrease;
  std::vector<TraceSample> trace;
  GridParams final_params{Resolution{2, 1}, CountMatrix::Constant(1, 2, 1)};
};

struct RunConfig {
  LinearCategoricalObjective objective = LinearCategoricalObjective::com(1, 2);
  Resolution resolution{2, 1};
  std::int64_t max_iterations = 1;
  std::uint64_t seed = 0;
  std::optional<GridParams> initial_params_override;
  /// Keep iterating after the first hit (until the budget is spent or every
  /// row is degenerate).
  bool continue_after_hit = false;
  std::vector<ThresholdSpec> thresholds;
  bool track_events = true;
  /// Record a TraceSample every `trace_stride` iterations; 0 disables.
  std::int64_t trace_stride = 0;

  void validate() const;
};

/// One ccGA trial. Per iteration t:
///   1. draw x, x' independently from P_theta
///   2. if either is the optimum and no hit is recorded yet, t_hit = t
///   3. winner/loser by f, ties go to (x, x')
///   4. theta += eta (winner - loser)
///   5. notify observers
class TrialRunner {
 public:
  explicit TrialRunner(RunConfig config);

  ThresholdObserver& attach_threshold_observer(std::string name, ThresholdKind kind, double alpha);
  /// Borrowed; must outlive run().
  void attach(Observer& observer);

  RunResult run();

 private:
  RunConfig config_;
  GridParams initial_;
  std::vector<std::unique_ptr<ThresholdObserver>> thresholds_;
  std::vector<Observer*> external_;
};

RunResult run_trial(const RunConfig& config);

}  // namespace ccga
