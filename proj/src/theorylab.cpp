#include "ccga/theorylab.hpp"

#include <cmath>
#include <string>

#include "ccga/csv.hpp"
#include "ccga/errors.hpp"
#include "ccga/parallel.hpp"

namespace ccga {

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::AdditiveUp: return "additive-up";
    case ScenarioKind::AdditiveDown: return "additive-down";
    case ScenarioKind::MultiplicativeDecay: return "multiplicative-decay";
    case ScenarioKind::LazyWalk: return "lazy-walk";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
  if (name == "additive-up") return ScenarioKind::AdditiveUp;
  if (name == "additive-down") return ScenarioKind::AdditiveDown;
  if (name == "multiplicative-decay") return ScenarioKind::MultiplicativeDecay;
  if (name == "lazy-walk") return ScenarioKind::LazyWalk;
  throw InvalidInput("unknown scenario kind '" + std::string(name) + "'");
}

std::int64_t multiplicative_horizon(const DriftScenario& s) {
  return static_cast<std::int64_t>(std::ceil((s.r + std::log(s.x0 / s.x_min)) / s.drift));
}

double event_failure_probability(double break_prob, std::int64_t horizon) {
  if (horizon <= 1 || break_prob <= 0) return 0.0;
  return -std::expm1(static_cast<double>(horizon - 1) * std::log1p(-break_prob));
}

namespace {

void require(bool condition, const std::string& rule) {
  if (!condition) throw PreconditionError("hypothesis violated: " + rule);
}

void validate_hypotheses(int theorem, const DriftScenario& s) {
  require(s.event_break_prob >= 0 && s.event_break_prob <= 1, "0 <= event_break_prob <= 1");
  switch (theorem) {
    case 1:
      require(s.x0 <= 0, "X0 <= 0");
      require(s.target > 0, "m > 0");
      require(s.step > 0, "c > 0");
      require(s.drift >= 0 && s.drift <= s.step, "0 <= eps <= c");
      require(s.horizon >= 1, "n >= 1");
      require(s.drift == 0 || static_cast<double>(s.horizon) <= s.target / (2 * s.drift),
              "n <= m / (2 eps)");
      break;
    case 2:
      require(s.x0 >= 0, "X0 >= 0");
      require(s.target > 0, "m > 0");
      require(s.step > 0, "c > 0");
      require(s.drift > 0 && s.drift <= s.step, "0 < eps <= c");
      require(static_cast<double>(s.horizon) >= 2 * s.target / s.drift, "n >= 2 m / eps");
      break;
    case 3:
      require(s.x_min > 0 && s.x_min < s.x_max, "0 < x_min < x_max");
      require(s.x0 >= s.x_min && s.x0 <= s.x_max, "x_min <= X0 <= x_max");
      require(s.drift > 0 && s.drift <= 1, "0 < eps <= 1");
      require(s.r >= 0, "r >= 0");
      break;
    case 4:
      require(s.x0 <= 0, "X0 <= 0");
      require(s.drift > 0 && s.drift < s.target / 2, "0 < eps < m / 2");
      require(s.step > 0 && s.step < s.target, "0 < c < m");
      require(s.horizon >= 0, "n >= 0");
      require(s.event_break_prob == 0, "the skipping-process bound is unconditional");
      break;
    default:
      throw InvalidInput("theorem id must be 1, 2, 3 or 4");
  }
}

}  // namespace

double theorem_bound(int theorem, const DriftScenario& s) {
  validate_hypotheses(theorem, s);
  const double n = static_cast<double>(s.horizon);
  switch (theorem) {
    case 1:
      return std::exp(-s.target * s.target / (8 * s.step * s.step * n)) +
             event_failure_probability(s.event_break_prob, s.horizon);
    case 2:
      return std::exp(-n * s.drift * s.drift / (8 * s.step * s.step)) +
             event_failure_probability(s.event_break_prob, s.horizon);
    case 3:
      return std::exp(-s.r) +
             event_failure_probability(s.event_break_prob, multiplicative_horizon(s));
    case 4:
      return 2 * s.target * n / s.drift * std::exp(-s.target * s.drift / (4 * s.step * s.step));
  }
  return 1.0;
}

double naive_skip_bound(const DriftScenario& s) {
  DriftScenario naive = s;
  naive.drift = s.drift * (1 - s.self_loop_prob);
  naive.self_loop_prob = 0;
  return theorem_bound(4, naive);
}

namespace {

void validate_process(const DriftScenario& s) {
  if (s.trials < 1) throw InvalidInput("trials must be at least 1");
  switch (s.kind) {
    case ScenarioKind::AdditiveUp:
    case ScenarioKind::AdditiveDown:
    case ScenarioKind::LazyWalk:
      if (!(s.step > 0 && s.drift >= 0 && s.drift <= s.step)) {
        throw InvalidInput("walk scenarios need 0 <= eps <= c");
      }
      if (!(s.self_loop_prob >= 0 && s.self_loop_prob < 1)) {
        throw InvalidInput("self_loop_prob must lie in [0, 1)");
      }
      break;
    case ScenarioKind::MultiplicativeDecay:
      if (!(s.jump_share >= 0 && s.jump_share <= 1)) {
        throw InvalidInput("jump_share must lie in [0, 1]");
      }
      break;
  }
  const bool multiplicative = s.kind == ScenarioKind::MultiplicativeDecay;
  if (multiplicative != (s.theorem == 3)) {
    throw InvalidInput("the multiplicative bound pairs with the multiplicative-decay process only");
  }
  if (s.theorem == 2 && s.kind != ScenarioKind::AdditiveUp) {
    throw InvalidInput("the upper-tail additive bound needs drift >= eps (additive-up)");
  }
  if (s.theorem == 4 && s.kind == ScenarioKind::AdditiveUp) {
    throw InvalidInput("the skipping bound needs drift <= -eps Pr(move) (lazy-walk or additive-down)");
  }
}

// One step of the process while the conditioning event holds.
double honest_step(const DriftScenario& s, double x, RandomStream& stream) {
  switch (s.kind) {
    case ScenarioKind::AdditiveUp:
    case ScenarioKind::AdditiveDown:
    case ScenarioKind::LazyWalk: {
      if (s.kind == ScenarioKind::LazyWalk && stream.bernoulli(s.self_loop_prob)) return x;
      const double signed_drift = s.kind == ScenarioKind::AdditiveUp ? s.drift : -s.drift;
      const double up_prob = 0.5 * (1 + signed_drift / s.step);
      return stream.bernoulli(up_prob) ? x + s.step : x - s.step;
    }
    case ScenarioKind::MultiplicativeDecay: {
      const double jump = s.jump_share * s.drift;
      if (stream.bernoulli(jump)) return 0.0;
      const double shrink = jump < 1 ? (s.drift - jump) / (1 - jump) : 0.0;
      const double next = x * (1 - shrink);
      return next < s.x_min ? 0.0 : next;
    }
  }
  return x;
}

// Whether one path lands in the tail event measured for its theorem.
bool simulate_path(const DriftScenario& s, std::int64_t steps, RandomStream& stream) {
  double x = s.x0;
  bool event_holds = true;
  auto advance = [&](std::int64_t t) {
    if (t >= 1 && event_holds && s.event_break_prob > 0 && stream.bernoulli(s.event_break_prob)) {
      event_holds = false;
    }
    if (event_holds) {
      x = honest_step(s, x, stream);
    } else if (s.theorem == 1) {
      x += s.step;
    } else if (s.theorem == 2) {
      x -= s.step;
    }
  };
  switch (s.theorem) {
    case 1:  // T < n: some X^t >= m with t <= n - 1
      for (std::int64_t t = 0;; ++t) {
        if (x >= s.target) return true;
        if (t == steps - 1) return false;
        advance(t);
      }
    case 2:  // T >= n: no X^t >= m with t <= n - 1
      for (std::int64_t t = 0;; ++t) {
        if (x >= s.target) return false;
        if (t == steps - 1) return true;
        advance(t);
      }
    case 3:  // T > N: X^floor(N) != 0
      for (std::int64_t t = 0; t < steps && x != 0.0; ++t) advance(t);
      return x != 0.0;
    case 4:  // T <= n: some X^t >= m with 1 <= t <= n
      for (std::int64_t t = 0; t < steps; ++t) {
        advance(t);
        if (x >= s.target) return true;
      }
      return false;
  }
  return false;
}

}  // namespace

BoundReport simulate_tail(const DriftScenario& scenario, const RandomStream& stream, int jobs) {
  validate_process(scenario);
  BoundReport report;
  report.scenario = scenario.name;
  report.theorem = scenario.theorem;
  report.bound = theorem_bound(scenario.theorem, scenario);
  report.naive_bound = scenario.kind == ScenarioKind::LazyWalk && scenario.theorem == 4
                           ? naive_skip_bound(scenario)
                           : report.bound;
  report.trials = scenario.trials;

  std::int64_t steps = scenario.horizon;
  report.horizon = scenario.horizon;
  if (scenario.theorem == 3) {
    steps = static_cast<std::int64_t>(
        std::floor((scenario.r + std::log(scenario.x0 / scenario.x_min)) / scenario.drift));
    report.horizon = multiplicative_horizon(scenario);
  }

  std::vector<std::uint8_t> in_tail(static_cast<std::size_t>(scenario.trials), 0);
  parallel_for(scenario.trials, jobs, [&](std::int64_t trial) {
    RandomStream path_stream = stream.derive(static_cast<std::uint64_t>(trial));
    in_tail[static_cast<std::size_t>(trial)] = simulate_path(scenario, steps, path_stream);
  });
  std::int64_t hits = 0;
  for (auto flag : in_tail) hits += flag;

  const auto n = static_cast<double>(scenario.trials);
  report.empirical = static_cast<double>(hits) / n;
  report.stderr_ = std::sqrt(report.empirical * (1 - report.empirical) / n);
  report.holds = report.empirical <= report.bound + 3 * report.stderr_;
  return report;
}

std::vector<DriftScenario> default_presets() {
  std::vector<DriftScenario> presets;
  auto add = [&](DriftScenario s) {
    s.seed = 1000 + presets.size();
    presets.push_back(std::move(s));
  };

  DriftScenario upper_tail;
  upper_tail.theorem = 1;
  upper_tail.kind = ScenarioKind::AdditiveUp;
  upper_tail.target = 20;
  upper_tail.step = 1;
  upper_tail.drift = 0.1;
  upper_tail.horizon = 100;

  DriftScenario s = upper_tail;
  s.name = "thm1-additive";
  add(s);

  s = upper_tail;
  s.name = "thm1-zero-drift";
  s.drift = 0;
  s.target = 30;
  add(s);

  s = upper_tail;
  s.name = "thm1-conditional";
  s.event_break_prob = 0.002;
  add(s);

  // The same upward walk read through both additive bounds.
  DriftScenario duality;
  duality.kind = ScenarioKind::AdditiveUp;
  duality.target = 10;
  duality.step = 1;
  duality.drift = 0.5;

  s = duality;
  s.name = "thm1-duality";
  s.theorem = 1;
  s.horizon = 10;
  add(s);

  s = duality;
  s.name = "thm2-duality";
  s.theorem = 2;
  s.horizon = 60;
  add(s);

  s = duality;
  s.name = "thm2-conditional";
  s.theorem = 2;
  s.horizon = 60;
  s.event_break_prob = 0.002;
  add(s);

  DriftScenario decay;
  decay.theorem = 3;
  decay.kind = ScenarioKind::MultiplicativeDecay;
  decay.drift = 0.05;
  decay.x0 = 1;
  decay.x_min = 0.01;
  decay.x_max = 1;
  decay.r = 1;
  decay.jump_share = 0.5;

  s = decay;
  s.name = "thm3-random";
  add(s);

  s = decay;
  s.name = "thm3-deterministic";
  s.jump_share = 0;
  add(s);

  s = decay;
  s.name = "thm3-conditional";
  s.event_break_prob = 0.001;
  add(s);

  DriftScenario skipping;
  skipping.theorem = 4;
  skipping.kind = ScenarioKind::LazyWalk;
  skipping.target = 60;
  skipping.step = 1;
  skipping.drift = 0.9;
  skipping.horizon = 1000;

  s = skipping;
  s.name = "thm4-lazy";
  s.self_loop_prob = 0.9;
  add(s);

  s = skipping;
  s.name = "thm4-eager";
  s.self_loop_prob = 0;
  add(s);

  for (auto& preset : presets) preset.horizon = preset.theorem == 3 ? multiplicative_horizon(preset) : preset.horizon;
  return presets;
}

void write_bound_reports_csv(std::ostream& out, const std::vector<DriftScenario>& scenarios,
                             const std::vector<BoundReport>& reports) {
  CsvWriter csv(out);
  csv.row("theorem", "scenario", "kind", "m", "c", "eps", "self_loop_prob", "event_break_prob",
          "n", "trials", "x0", "x_min", "x_max", "r", "empirical", "stderr", "bound",
          "naive_bound", "holds");
  for (std::size_t i = 0; i < reports.size() && i < scenarios.size(); ++i) {
    const auto& s = scenarios[i];
    const auto& r = reports[i];
    csv.row(r.theorem, s.name, to_string(s.kind), s.target, s.step, s.drift, s.self_loop_prob,
            s.event_break_prob, r.horizon, r.trials, s.x0, s.x_min, s.x_max, s.r, r.empirical,
            r.stderr_, r.bound, r.naive_bound, r.holds);
  }
}

}  // namespace ccga
