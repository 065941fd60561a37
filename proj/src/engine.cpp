#include "ccga/engine.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ccga {

std::string_view to_string(ThresholdKind kind) {
  switch (kind) {
    case ThresholdKind::ProductAtLeastAlpha: return "product";
    case ThresholdKind::SumAtLeastDMinusOnePlusAlpha: return "sum";
    case ThresholdKind::ProductAtLeastAlphaPowD: return "product_pow";
    case ThresholdKind::SumAtLeastAlphaD: return "sum_scaled";
  }
  return "unknown";
}

ThresholdKind parse_threshold_kind(std::string_view name) {
  if (name == "product") return ThresholdKind::ProductAtLeastAlpha;
  if (name == "sum") return ThresholdKind::SumAtLeastDMinusOnePlusAlpha;
  if (name == "product_pow") return ThresholdKind::ProductAtLeastAlphaPowD;
  if (name == "sum_scaled") return ThresholdKind::SumAtLeastAlphaD;
  throw InvalidInput("unknown threshold kind '" + std::string(name) +
                     "' (expected product, sum, product_pow or sum_scaled)");
}

std::vector<ThresholdSpec> lemma_threshold_set(double alpha) {
  return {{"product", ThresholdKind::ProductAtLeastAlpha, alpha},
          {"sum", ThresholdKind::SumAtLeastDMinusOnePlusAlpha, alpha},
          {"product_pow", ThresholdKind::ProductAtLeastAlphaPowD, alpha},
          {"sum_scaled", ThresholdKind::SumAtLeastAlphaD, alpha}};
}

ThresholdObserver::ThresholdObserver(const GridParams& shape, ThresholdSpec spec)
    : spec_(std::move(spec)) {
  if (!(spec_.alpha >= 0.0 && spec_.alpha <= 1.0)) {
    throw InvalidInput("threshold alpha must lie in [0, 1]");
  }
  const Index dims = shape.dimensions();
  const Count total = shape.resolution().grid_size();
  const Rational alpha(spec_.alpha);  // exact binary value of the double
  switch (spec_.kind) {
    case ThresholdKind::SumAtLeastDMinusOnePlusAlpha:
    case ThresholdKind::SumAtLeastAlphaD: {
      const Rational target = spec_.kind == ThresholdKind::SumAtLeastAlphaD
                                  ? alpha * dims * total
                                  : (Rational(dims - 1) + alpha) * total;
      BigInt ceiling = boost::multiprecision::numerator(target) /
                       boost::multiprecision::denominator(target);
      if (ceiling * boost::multiprecision::denominator(target) <
          boost::multiprecision::numerator(target)) {
        ++ceiling;
      }
      sum_threshold_ = ceiling.convert_to<Count>();
      break;
    }
    case ThresholdKind::ProductAtLeastAlpha:
    case ThresholdKind::ProductAtLeastAlphaPowD: {
      const BigInt scale = boost::multiprecision::pow(BigInt(total), static_cast<unsigned>(dims));
      const Rational alpha_part = spec_.kind == ThresholdKind::ProductAtLeastAlpha
                                      ? alpha
                                      : Rational(boost::multiprecision::pow(boost::multiprecision::numerator(alpha),
                                                                                static_cast<unsigned>(dims)),
                                                     boost::multiprecision::pow(boost::multiprecision::denominator(alpha),
                                                                                static_cast<unsigned>(dims)));
      product_target_ = alpha_part * Rational(scale);
      const double log_alpha = std::log(spec_.alpha);
      log_product_target_ = (spec_.kind == ThresholdKind::ProductAtLeastAlpha ? log_alpha
                                                                               : dims * log_alpha) +
                            static_cast<double>(dims) * std::log(static_cast<double>(total));
      log_count_.resize(static_cast<std::size_t>(total) + 1);
      log_count_[0] = -std::numeric_limits<double>::infinity();
      for (Count n = 1; n <= total; ++n) {
        log_count_[static_cast<std::size_t>(n)] = std::log(static_cast<double>(n));
      }
      break;
    }
  }
}

bool ThresholdObserver::holds(const GridParams& theta) const {
  const auto column = theta.counts().col(0);
  switch (spec_.kind) {
    case ThresholdKind::SumAtLeastDMinusOnePlusAlpha:
    case ThresholdKind::SumAtLeastAlphaD:
      return column.sum() >= sum_threshold_;
    case ThresholdKind::ProductAtLeastAlpha:
    case ThresholdKind::ProductAtLeastAlphaPowD: {
      if (product_target_ == 0) return true;
      double log_product = 0.0;
      for (Index d = 0; d < column.size(); ++d) {
        log_product += log_count_[static_cast<std::size_t>(column(d))];
      }
      if (std::isinf(log_product)) return false;
      const double margin = 1e-9 * std::max(1.0, std::abs(log_product_target_));
      if (log_product > log_product_target_ + margin) return true;
      if (log_product < log_product_target_ - margin) return false;
      BigInt product = 1;
      for (Index d = 0; d < column.size(); ++d) product *= column(d);
      return Rational(product) >= product_target_;
    }
  }
  return false;
}

void ThresholdObserver::before_sampling(std::int64_t t, const GridParams& theta) {
  if (!first_crossing_ && holds(theta)) first_crossing_ = t;
}

void RunConfig::validate() const {
  if (max_iterations < 1) throw InvalidInput("max_iterations must be at least 1");
  if (resolution.categories() != objective.categories()) {
    throw InvalidInput("resolution K does not match the objective's K");
  }
  if (initial_params_override) {
    if (initial_params_override->dimensions() != objective.dimensions() ||
        !(initial_params_override->resolution() == resolution)) {
      throw InvalidInput("initial_params_override does not match D, K and m");
    }
  }
  for (const auto& threshold : thresholds) {
    if (!(threshold.alpha >= 0.0 && threshold.alpha <= 1.0)) {
      throw InvalidInput("threshold '" + threshold.name + "' alpha must lie in [0, 1]");
    }
  }
  if (trace_stride < 0) throw InvalidInput("trace_stride must be non-negative");
}

TrialRunner::TrialRunner(RunConfig config)
    : config_(std::move(config)),
      initial_(config_.initial_params_override
                   ? *config_.initial_params_override
                   : init_params(config_.objective.dimensions(), config_.resolution)) {
  config_.validate();
  for (const auto& spec : config_.thresholds) {
    attach_threshold_observer(spec.name, spec.kind, spec.alpha);
  }
}

ThresholdObserver& TrialRunner::attach_threshold_observer(std::string name, ThresholdKind kind,
                                                          double alpha) {
  thresholds_.push_back(
      std::make_unique<ThresholdObserver>(initial_, ThresholdSpec{std::move(name), kind, alpha}));
  return *thresholds_.back();
}

void TrialRunner::attach(Observer& observer) { external_.push_back(&observer); }

namespace {

bool low_marginal(const GridParams& theta, Index d) {
  // theta(d,0) <= 1/(2K)  <=>  2 n <= m
  return 2 * theta.count(d, 0) <= theta.resolution().multiplier();
}

bool ratio_violated(const GridParams& theta, Index d) {
  const Count doubled = 2 * theta.count(d, 0);
  for (Index k = 1; k < theta.categories(); ++k) {
    if (doubled < theta.count(d, k)) return true;
  }
  return false;
}

}  // namespace

RunResult TrialRunner::run() {
  const auto& objective = config_.objective;
  const Index dims = objective.dimensions();
  RandomStream stream(config_.seed);

  RunResult result;
  result.resolution = config_.resolution;

  GridParams current = initial_;
  GridParams next = initial_;
  OneHotSolution x(dims);
  OneHotSolution x_prime(dims);

  Index degenerate_rows = 0;
  for (Index d = 0; d < dims; ++d) {
    degenerate_rows += current.row_degenerate(d);
    if (config_.track_events) {
      if (!result.low_marginal_event && low_marginal(current, d)) result.low_marginal_event = 0;
      if (!result.ratio_event && ratio_violated(current, d)) result.ratio_event = 0;
    }
  }

  auto record_trace = [&](std::int64_t t) {
    if (config_.trace_stride > 0 && (result.trace.empty() || result.trace.back().t != t)) {
      result.trace.push_back({t, current.counts().col(0)});
    }
  };

  // `state_t` indexes the parameter currently held in `current`.
  std::int64_t state_t = 0;
  std::int64_t executed = 0;
  for (std::int64_t t = 0; t < config_.max_iterations; ++t) {
    state_t = t;
    for (auto& threshold : thresholds_) threshold->before_sampling(t, current);
    for (auto* observer : external_) observer->before_sampling(t, current);
    if (config_.trace_stride > 0 && t % config_.trace_stride == 0) record_trace(t);

    // Nothing can move any more; further samples are all identical.
    if (degenerate_rows == dims && (result.hit || !current.concentrated_on_optimum())) break;
    executed = t + 1;

    sample_into(current, stream, x);
    sample_into(current, stream, x_prime);

    if (!result.hit && (objective.is_optimum(x) || objective.is_optimum(x_prime))) {
      result.hit = true;
      result.t_hit = t;
      if (!config_.continue_after_hit) break;
    }

    const bool x_wins = objective.compare(x, x_prime) >= 0;
    const OneHotSolution& winner = x_wins ? x : x_prime;
    const OneHotSolution& loser = x_wins ? x_prime : x;

    next = current;
    apply_update_in_place(next, winner, loser);

    Index optimal_delta = 0;
    for (Index d = 0; d < dims; ++d) {
      if (winner[d] == loser[d]) continue;
      optimal_delta += (winner[d] == 0) - (loser[d] == 0);
      degenerate_rows += next.row_degenerate(d);
      if (config_.track_events) {
        if (!result.low_marginal_event && low_marginal(next, d)) result.low_marginal_event = t + 1;
        if (!result.ratio_event && ratio_violated(next, d)) result.ratio_event = t + 1;
      }
    }
    if (config_.track_events && optimal_delta < 0 && !result.optimal_sum_decrease) {
      result.optimal_sum_decrease = t;
    }

    if (!external_.empty()) {
      const UpdateEvent event{t, current, next, winner, loser};
      for (auto* observer : external_) observer->after_update(event);
    }
    std::swap(current, next);
    state_t = t + 1;
  }

  result.iterations_executed = executed;
  record_trace(state_t);
  for (const auto& threshold : thresholds_) {
    result.threshold_crossings[threshold->spec().name] = threshold->first_crossing();
  }
  result.final_params = std::move(current);
  return result;
}

RunResult run_trial(const RunConfig& config) { return TrialRunner(config).run(); }

}  // namespace ccga
