#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ccga/random_stream.hpp"

namespace ccga {

/// Synthetic processes whose drift hypotheses hold by construction.
///
/// AdditiveUp / AdditiveDown: steps of +-c with conditional drift +eps / -eps.
/// LazyWalk: stays put with probability self_loop_prob, otherwise moves +-c
///   with drift -eps given a move, i.e. E[dX | F] = -eps Pr(move | F).
/// MultiplicativeDecay: jumps to 0 with probability q = jump_share * eps,
///   otherwise shrinks by (1 - g) with q + (1 - q) g = eps, and values that
///   fall below x_min snap to 0. Hence E[dX | F] <= -eps X.
///
/// While the conditioning event holds, the process follows the rule above.
/// The event fails independently with probability event_break_prob per step
/// and never recovers; afterwards the process moves adversarially (toward
/// the target for the upper-tail theorems, away from it otherwise).
enum class ScenarioKind { AdditiveUp, AdditiveDown, MultiplicativeDecay, LazyWalk };

std::string_view to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(std::string_view name);

struct DriftScenario {
  std::string name;
  int theorem = 1;  ///< which tail bound (1-4) this scenario exercises
  ScenarioKind kind = ScenarioKind::AdditiveUp;
  double target = 1;  ///< m
  double step = 1;    ///< c
  double drift = 0;   ///< eps
  double self_loop_prob = 0;
  double event_break_prob = 0;
  std::int64_t horizon = 1;  ///< n (derived for the multiplicative bound)
  std::int64_t trials = 100'000;
  std::uint64_t seed = 0;
  double x0 = 0;
  double x_min = 1;
  double x_max = 1;
  double r = 1;
  double jump_share = 0;
};

struct BoundReport {
  std::string scenario;
  int theorem = 0;
  double empirical = 0;
  double stderr_ = 0;
  double bound = 0;
  /// LazyWalk only: the skip-unaware bound with eps replaced by eps * Pr(move).
  double naive_bound = 0;
  bool holds = false;
  std::int64_t trials = 0;
  std::int64_t horizon = 0;
};

/// Horizon used by the multiplicative bound: ceil((r + ln(x0 / x_min)) / eps).
std::int64_t multiplicative_horizon(const DriftScenario& scenario);

/// Pr(event has failed by step n - 1) = 1 - (1 - p)^(n - 1).
double event_failure_probability(double break_prob, std::int64_t horizon);

/// Closed-form tail bound for the given theorem. Throws PreconditionError
/// naming the violated hypothesis.
///   1: Pr(T <  n) <= exp(-m^2 / (8 c^2 n)) + Pr(fail)       needs n <= m / (2 eps)
///   2: Pr(T >= n) <= exp(-n eps^2 / (8 c^2)) + Pr(fail)     needs n >= 2 m / eps
///   3: Pr(T > (r + ln(x0/x_min)) / eps) <= exp(-r) + Pr(fail)
///   4: Pr(T <= n) <= (2 m n / eps) exp(-m eps / (4 c^2))    needs eps < m/2, c < m
double theorem_bound(int theorem, const DriftScenario& scenario);

/// Skip-unaware variant of bound 4 with eps scaled by (1 - self_loop_prob).
double naive_skip_bound(const DriftScenario& scenario);

/// Runs `scenario.trials` independent paths (stream derived per trial from
/// `stream.seed()`) and compares the empirical tail against theorem_bound.
/// holds = empirical <= bound + 3 stderr.
BoundReport simulate_tail(const DriftScenario& scenario, const RandomStream& stream, int jobs = 1);

/// The shipped preset list: every theorem, plus conditional variants.
std::vector<DriftScenario> default_presets();

/// Report CSV: theorem, scenario params, empirical, stderr, bound, holds.
void write_bound_reports_csv(std::ostream& out, const std::vector<DriftScenario>& scenarios,
                             const std::vector<BoundReport>& reports);

}  // namespace ccga
