#include "ccga/experiments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "ccga/csv.hpp"
#include "ccga/errors.hpp"
#include "ccga/parallel.hpp"
#include "ccga/random_stream.hpp"

namespace ccga {

namespace {

void check_shape(Index dimensions, Index categories) {
  if (dimensions < 1) throw InvalidInput("D must be at least 1");
  if (categories < 2) throw InvalidInput("K must be at least 2");
}

std::int64_t ceil_positive(double value) {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(value)));
}

}  // namespace

std::int64_t default_eta_com(Index dimensions, Index categories) {
  check_shape(dimensions, categories);
  const auto d = static_cast<double>(dimensions);
  const auto k = static_cast<double>(categories);
  return ceil_positive(std::sqrt(d) * std::log(d * k));
}

std::int64_t default_eta_kval(Index dimensions, Index categories) {
  check_shape(dimensions, categories);
  const auto d = static_cast<double>(dimensions);
  const auto k = static_cast<double>(categories);
  return ceil_positive(d * k * std::log(k) * std::log(d * k));
}

double bound_com(Index dimensions, Index categories, double eta) {
  check_shape(dimensions, categories);
  const auto d = static_cast<double>(dimensions);
  return std::sqrt(d) * std::log(d * static_cast<double>(categories)) / eta;
}

double bound_kval(Index dimensions, Index categories, double eta) {
  check_shape(dimensions, categories);
  return static_cast<double>(dimensions) * std::log(static_cast<double>(categories)) / eta;
}

const std::vector<BoundConstant>& theorem_constants() {
  static const std::vector<BoundConstant> constants = {
      {"com-upper", "c1", "32 (7/2 + 2 c2)", "1/eta >= c1 sqrt(D) K ln(DK)"},
      {"com-upper", "c2", "free, > 0", "1/eta <= (DK)^c2"},
      {"com-upper", "c3", "4 (c2 + 3)", "Pr(T <= c3 sqrt(D) ln(DK) / eta)"},
      {"com-upper", "c4", "1/2", "failure probability (DK)^-c4"},
      {"com-lower", "c1", "< 96 sqrt(2)", "1/eta >= c1 sqrt(D) ln D"},
      {"com-lower", "c5",
       "min{c1 / 1152, (e (1 - 6 c3 c4) / (12 (c2 + 1)))^(c2 + 1) / (2 (c4 + 1))}",
       "Pr(T >= c5 (sqrt(D) + ln K) / eta)"},
      {"kval-upper", "c1", "512", "1/eta >= c1 D K^2 ln K ln(DK)"},
      {"kval-upper", "c2", "32", "Pr(T <= c2 D ln K / eta)"},
      {"kval-upper", "c3", "1/2", "failure probability (DK)^-c3"},
      {"kval-lower", "c1", "32/3", "1/eta >= c1 D K^2 ln K ln(DK)"},
      {"kval-lower", "c3", "1/12", "Pr(T >= c3 D ln K / eta)"},
      {"kval-lower", "c4", "1/2", "failure probability (DK)^-c4"},
  };
  return constants;
}

std::string_view to_string(EtaRule rule) {
  switch (rule) {
    case EtaRule::ComDefault: return "com-default";
    case EtaRule::KvalDefault: return "kval-default";
    case EtaRule::Explicit: return "explicit";
  }
  return "unknown";
}

EtaRule parse_eta_rule(std::string_view name) {
  if (name == "com-default") return EtaRule::ComDefault;
  if (name == "kval-default") return EtaRule::KvalDefault;
  if (name == "explicit") return EtaRule::Explicit;
  throw InvalidInput("unknown eta rule '" + std::string(name) + "'");
}

void SweepSpec::validate() const {
  if (objective == ObjectiveKind::Custom) {
    throw InvalidInput("sweeps need a bound overlay, so the objective must be com or kval");
  }
  if (dimensions.empty() || categories.empty()) {
    throw InvalidInput("a sweep needs at least one D and one K");
  }
  for (auto d : dimensions) check_shape(d, 2);
  for (auto k : categories) check_shape(1, k);
  if (trials < 1) throw InvalidInput("trials must be at least 1");
  if (!(budget_multiplier >= 1)) throw InvalidInput("budget multiplier must be at least 1");
  if (eta_rule == EtaRule::Explicit && explicit_m < 1) {
    throw InvalidInput("explicit eta needs m = 1/(eta K) >= 1");
  }
  for (const auto& threshold : thresholds) {
    if (!(threshold.alpha >= 0 && threshold.alpha <= 1)) {
      throw InvalidInput("threshold alpha must lie in [0, 1]");
    }
  }
}

SweepSpec default_sweep(ObjectiveKind objective) {
  SweepSpec spec;
  spec.objective = objective;
  if (objective == ObjectiveKind::KVal) {
    spec.dimensions = {16};
    spec.categories = {2, 4, 8};
    spec.eta_rule = EtaRule::KvalDefault;
    spec.budget_multiplier = 10;
  } else {
    spec.dimensions = {64};
    spec.categories = {2, 4, 8, 16};
    spec.eta_rule = EtaRule::ComDefault;
    spec.budget_multiplier = 20;
    spec.thresholds = lemma_threshold_set(0.5);
  }
  return spec;
}

std::int64_t resolve_multiplier(const SweepSpec& spec, Index dimensions, Index categories) {
  switch (spec.eta_rule) {
    case EtaRule::ComDefault: return default_eta_com(dimensions, categories);
    case EtaRule::KvalDefault: return default_eta_kval(dimensions, categories);
    case EtaRule::Explicit: return spec.explicit_m;
  }
  return 1;
}

double sweep_bound(ObjectiveKind objective, Index dimensions, Index categories, std::int64_t m) {
  const double eta = 1.0 / static_cast<double>(m * categories);
  switch (objective) {
    case ObjectiveKind::Com: return bound_com(dimensions, categories, eta);
    case ObjectiveKind::KVal: return bound_kval(dimensions, categories, eta);
    case ObjectiveKind::Custom: break;
  }
  throw InvalidInput("custom objectives carry no runtime bound");
}

std::uint64_t trial_seed(std::uint64_t master, Index dimensions, Index categories,
                         std::int64_t trial) {
  return mix_seed({master, static_cast<std::uint64_t>(dimensions),
                   static_cast<std::uint64_t>(categories), static_cast<std::uint64_t>(trial)});
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw InvalidInput("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

CellStats summarize_cell(const std::vector<TrialRecord>& records, double bound) {
  CellStats cell;
  cell.bound = bound;
  if (records.empty()) return cell;
  cell.dimensions = records.front().dimensions;
  cell.categories = records.front().categories;
  cell.m = records.front().m;
  cell.trials = static_cast<std::int64_t>(records.size());

  std::vector<double> runtimes;
  std::int64_t low_marginal = 0;
  std::int64_t ratio = 0;
  for (const auto& record : records) {
    if (!record.error.empty()) {
      if (cell.error.empty()) cell.error = record.error;
      continue;
    }
    cell.successes += record.hit;
    low_marginal += record.low_marginal_event.has_value();
    ratio += record.ratio_event.has_value();
    runtimes.push_back(static_cast<double>(record.runtime()));
  }
  const auto n = static_cast<double>(cell.trials);
  cell.success_rate = static_cast<double>(cell.successes) / n;
  cell.low_marginal_frequency = static_cast<double>(low_marginal) / n;
  cell.ratio_event_frequency = static_cast<double>(ratio) / n;
  if (runtimes.empty()) return cell;
  std::sort(runtimes.begin(), runtimes.end());
  cell.min = runtimes.front();
  cell.q25 = quantile(runtimes, 0.25);
  cell.median = quantile(runtimes, 0.5);
  cell.q75 = quantile(runtimes, 0.75);
  cell.max = runtimes.back();
  cell.mean = std::accumulate(runtimes.begin(), runtimes.end(), 0.0) /
              static_cast<double>(runtimes.size());
  cell.median_bound_ratio = cell.median / bound;
  return cell;
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();

  struct Cell {
    Index dimensions;
    Index categories;
    std::int64_t m;
    double bound;
    std::int64_t budget;
  };
  std::vector<Cell> cells;
  for (auto d : spec.dimensions) {
    for (auto k : spec.categories) {
      const auto m = resolve_multiplier(spec, d, k);
      const double bound = sweep_bound(spec.objective, d, k, m);
      cells.push_back({d, k, m, bound, ceil_positive(spec.budget_multiplier * bound)});
    }
  }

  SweepResult result;
  result.trials.resize(cells.size() * static_cast<std::size_t>(spec.trials));
  parallel_for(static_cast<std::int64_t>(result.trials.size()), spec.jobs, [&](std::int64_t job) {
    const auto& cell = cells[static_cast<std::size_t>(job / spec.trials)];
    TrialRecord& record = result.trials[static_cast<std::size_t>(job)];
    record.trial = job % spec.trials;
    record.dimensions = cell.dimensions;
    record.categories = cell.categories;
    record.m = cell.m;
    record.seed = trial_seed(spec.master_seed, cell.dimensions, cell.categories, record.trial);
    record.budget = cell.budget;
    for (const auto& threshold : spec.thresholds) record.crossings[threshold.name];
    try {
      RunConfig config;
      config.objective = spec.objective == ObjectiveKind::KVal
                             ? LinearCategoricalObjective::kval(cell.dimensions, cell.categories)
                             : LinearCategoricalObjective::com(cell.dimensions, cell.categories);
      config.resolution = Resolution(cell.categories, cell.m);
      config.max_iterations = cell.budget;
      config.seed = record.seed;
      config.thresholds = spec.thresholds;
      config.track_events = spec.track_events;
      const RunResult run = run_trial(config);
      record.hit = run.hit;
      record.t_hit = run.t_hit;
      record.iterations = run.iterations_executed;
      record.low_marginal_event = run.low_marginal_event;
      record.ratio_event = run.ratio_event;
      record.optimal_sum_decrease = run.optimal_sum_decrease;
      for (const auto& [name, crossing] : run.threshold_crossings) record.crossings[name] = crossing;
    } catch (const std::exception& error) {
      record.error = error.what();
    }
  });

  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto first = result.trials.begin() + static_cast<std::ptrdiff_t>(c * spec.trials);
    std::vector<TrialRecord> records(first, first + spec.trials);
    result.cells.push_back(summarize_cell(records, cells[c].bound));
  }
  return result;
}

SweepAxis parse_sweep_axis(std::string_view name) {
  if (name == "K" || name == "k") return SweepAxis::K;
  if (name == "D" || name == "d") return SweepAxis::D;
  throw InvalidInput("axis must be K or D");
}

SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidInput("fit_line needs paired samples");
  if (x.size() < 3) throw PreconditionError("slope regression needs at least 3 points");
  const auto n = static_cast<Eigen::Index>(x.size());
  const Eigen::Map<const Eigen::VectorXd> xs(x.data(), n);
  const Eigen::Map<const Eigen::VectorXd> ys(y.data(), n);
  const double spread = (xs.array() - xs.mean()).square().sum();
  if (!(spread > 1e-12 * std::max(1.0, xs.squaredNorm()))) {
    throw PreconditionError("slope regression needs spread in the bound values");
  }
  Eigen::MatrixXd design(n, 2);
  design.col(0) = xs;
  design.col(1).setOnes();
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(ys);
  SlopeFit fit;
  fit.slope = coef(0);
  fit.intercept = coef(1);
  const double total = (ys.array() - ys.mean()).square().sum();
  const double residual = (ys - design * coef).squaredNorm();
  fit.r_squared = total > 0 ? 1 - residual / total : 1.0;
  return fit;
}

SlopeFit slope_regression(const std::vector<CellStats>& cells, SweepAxis axis) {
  std::vector<double> x;
  std::vector<double> y;
  std::set<Index> axis_values;
  for (const auto& cell : cells) {
    if (!cell.error.empty() || !(cell.median > 0) || !(cell.bound > 0)) continue;
    axis_values.insert(axis == SweepAxis::K ? cell.categories : cell.dimensions);
    x.push_back(std::log(cell.bound));
    y.push_back(std::log(cell.median));
  }
  if (axis_values.size() < 3) {
    throw PreconditionError("slope regression needs at least 3 cells varying along the axis");
  }
  return fit_line(x, y);
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& trials,
                      const std::vector<ThresholdSpec>& thresholds) {
  CsvWriter csv(out);
  std::vector<std::string> header = {"trial", "D", "K", "m", "seed", "budget", "hit", "t_hit",
                                     "iterations", "low_marginal_event", "ratio_event",
                                     "optimal_sum_decrease"};
  for (const auto& threshold : thresholds) header.push_back("cross_" + threshold.name);
  header.push_back("error");
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_escape(header[i]);
  out << '\n';
  for (const auto& r : trials) {
    out << r.trial << ',' << r.dimensions << ',' << r.categories << ',' << r.m << ',' << r.seed
        << ',' << r.budget << ',' << (r.hit ? 1 : 0) << ',';
    if (r.t_hit) out << *r.t_hit;
    out << ',' << r.iterations << ',';
    if (r.low_marginal_event) out << *r.low_marginal_event;
    out << ',';
    if (r.ratio_event) out << *r.ratio_event;
    out << ',';
    if (r.optimal_sum_decrease) out << *r.optimal_sum_decrease;
    for (const auto& threshold : thresholds) {
      out << ',';
      const auto it = r.crossings.find(threshold.name);
      if (it != r.crossings.end() && it->second) out << *it->second;
    }
    out << ',' << csv_escape(r.error) << '\n';
  }
}

void write_cells_csv(std::ostream& out, const std::vector<CellStats>& cells) {
  CsvWriter csv(out);
  csv.row("D", "K", "m", "eta_inv", "trials", "successes", "success_rate", "min", "q25", "median",
          "q75", "max", "mean", "bound", "median_bound_ratio", "low_marginal_frequency",
          "ratio_event_frequency", "error");
  for (const auto& c : cells) {
    csv.row(c.dimensions, c.categories, c.m, c.m * c.categories, c.trials, c.successes,
            c.success_rate, c.min, c.q25, c.median, c.q75, c.max, c.mean, c.bound,
            c.median_bound_ratio, c.low_marginal_frequency, c.ratio_event_frequency, c.error);
  }
}

void write_overlay_csv(std::ostream& out, const std::vector<CellStats>& cells) {
  CsvWriter csv(out);
  csv.row("D", "K", "bound", "median");
  for (const auto& c : cells) csv.row(c.dimensions, c.categories, c.bound, c.median);
}

}  // namespace ccga
