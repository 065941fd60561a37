#include "ccga/checks.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ccga/csv.hpp"
#include "ccga/drift.hpp"
#include "ccga/objectives.hpp"

namespace ccga {

GridParams random_grid_params(Index dimensions, const Resolution& resolution,
                              RandomStream& stream) {
  const Index categories = resolution.categories();
  const Count total = resolution.grid_size();
  CountMatrix counts(dimensions, categories);
  std::vector<Count> bars;
  for (Index d = 0; d < dimensions; ++d) {
    // K - 1 distinct bar positions among total + K - 1 slots.
    bars.clear();
    while (static_cast<Index>(bars.size()) < categories - 1) {
      const auto slot = static_cast<Count>(stream.uniform_below(static_cast<std::uint64_t>(total + categories - 1)));
      if (std::find(bars.begin(), bars.end(), slot) == bars.end()) bars.push_back(slot);
    }
    std::sort(bars.begin(), bars.end());
    Count previous = -1;
    for (Index k = 0; k < categories - 1; ++k) {
      counts(d, k) = bars[static_cast<std::size_t>(k)] - previous - 1;
      previous = bars[static_cast<std::size_t>(k)];
    }
    counts(d, categories - 1) = total + categories - 2 - previous;
  }
  return GridParams(resolution, std::move(counts));
}

namespace {

std::string describe(const GridParams& params) {
  std::ostringstream out;
  out << "m=" << params.resolution().multiplier() << " counts=";
  for (Index d = 0; d < params.dimensions(); ++d) {
    out << (d ? "|" : "");
    for (Index k = 0; k < params.categories(); ++k) out << (k ? " " : "") << params.count(d, k);
  }
  return out.str();
}

struct StateDraw {
  GridParams params;
  std::string detail;
};

StateDraw draw_state(RandomStream& stream, Index min_d, Index max_d, Index min_k, Index max_k,
                     Count max_m) {
  const auto d = min_d + static_cast<Index>(stream.uniform_below(static_cast<std::uint64_t>(max_d - min_d + 1)));
  const auto k = min_k + static_cast<Index>(stream.uniform_below(static_cast<std::uint64_t>(max_k - min_k + 1)));
  const auto m = 1 + static_cast<Count>(stream.uniform_below(static_cast<std::uint64_t>(max_m)));
  GridParams params = random_grid_params(d, Resolution(k, m), stream);
  std::string detail = describe(params);
  return {std::move(params), std::move(detail)};
}

}  // namespace

std::vector<CheckRow> run_drift_checks(const DriftCheckSpec& spec) {
  std::vector<CheckRow> rows;
  RandomStream root(spec.seed);

  RandomStream closed_form_stream = root.derive(1);
  for (int s = 0; s < spec.states; ++s) {
    auto [params, detail] = draw_state(closed_form_stream, 1, spec.max_dimensions, 2,
                                       spec.max_categories, spec.max_multiplier);
    const auto objective = LinearCategoricalObjective::kval(params.dimensions(), params.categories());
    const auto table = brute_force_drift(params, objective);
    CheckRow worst{"kval-closed-form", detail, 0, 0, true};
    double worst_gap = -1;
    for (Index d = 0; d < params.dimensions(); ++d) {
      const double exact = to_double(table.drift(d, 0));
      const double closed = kval_closed_form_drift<double>(params, d);
      const double gap = std::abs(exact - closed);
      if (gap > worst_gap) {
        worst_gap = gap;
        worst.lhs = exact;
        worst.rhs = closed;
      }
    }
    worst.passed = worst_gap <= kExactTolerance;
    rows.push_back(worst);

    bool balanced = true;
    for (Index d = 0; d < params.dimensions(); ++d) {
      Rational sum = 0;
      for (Index k = 0; k < params.categories(); ++k) sum += table.drift(d, k);
      balanced = balanced && sum == 0;
    }
    rows.push_back({"zero-sum", detail, 0, 0, balanced});
  }

  RandomStream com_stream = root.derive(2);
  for (int s = 0; s < spec.states; ++s) {
    auto [params, detail] = draw_state(com_stream, 2, std::max<Index>(2, spec.max_dimensions), 2,
                                       spec.max_categories, spec.max_multiplier);
    CheckRow worst{"com-drift-bound", detail, 0, 0, true};
    double worst_slack = INFINITY;
    for (Index d = 0; d < params.dimensions(); ++d) {
      const BoundCheck check = com_drift_bound_check(params, d);
      const double slack = check.lhs - check.rhs;
      if (slack < worst_slack) {
        worst_slack = slack;
        worst.lhs = check.lhs;
        worst.rhs = check.rhs;
      }
      worst.passed = worst.passed && check.holds;
    }
    rows.push_back(worst);
  }

  RandomStream ratio_stream = root.derive(3);
  for (int s = 0; s < spec.states;) {
    auto [params, detail] = draw_state(ratio_stream, 1, spec.max_dimensions, 3, 3,
                                       spec.max_multiplier);
    CheckRow worst{"kval-ratio-bound", detail, 0, 0, true};
    double worst_slack = INFINITY;
    int checked = 0;
    for (Index d = 0; d < params.dimensions(); ++d) {
      for (Index k = 1; k < params.categories(); ++k) {
        if (2 * params.count(d, 0) < params.count(d, k)) continue;
        const BoundCheck check = kval_ratio_drift_check(params, d, k);
        ++checked;
        const double slack = check.lhs - check.rhs;
        if (slack < worst_slack) {
          worst_slack = slack;
          worst.lhs = check.lhs;
          worst.rhs = check.rhs;
        }
        worst.passed = worst.passed && check.holds && check.lhs >= -kExactTolerance;
      }
    }
    if (checked == 0) continue;
    rows.push_back(worst);
    ++s;
  }

  RandomStream delta_stream = root.derive(4);
  for (Index dims : spec.delta_dimensions) {
    for (int s = 0; s < spec.delta_states; ++s) {
      const GridParams params =
          random_grid_params(dims, Resolution(spec.delta_categories, 10), delta_stream);
      RandomStream sample_stream = delta_stream.derive(static_cast<std::uint64_t>(s));
      const DeltaStatistics stats = delta_statistics(params, spec.delta_samples, sample_stream);
      const std::string detail = "D=" + std::to_string(dims) + " state=" + std::to_string(s);
      const double p_floor = 1.0 / (4.0 * std::sqrt(static_cast<double>(dims)));
      rows.push_back({"delta-p-zero", detail, stats.p_zero_hat, p_floor,
                      stats.p_zero_hat >= p_floor - 3 * stats.p_zero_stderr});
      const double mean_ceiling = std::sqrt(static_cast<double>(dims) / 2);
      rows.push_back({"delta-mean-abs", detail, stats.mean_abs_hat, mean_ceiling,
                      stats.mean_abs_hat <= mean_ceiling + 3 * stats.mean_abs_stderr});
    }
  }
  return rows;
}

std::vector<CheckSummary> summarize_checks(const std::vector<CheckRow>& rows) {
  std::vector<CheckSummary> summaries;
  std::map<std::string, std::size_t> index;
  for (const auto& row : rows) {
    auto [it, inserted] = index.try_emplace(row.check, summaries.size());
    if (inserted) summaries.push_back({row.check, 0, 0, {}});
    CheckSummary& summary = summaries[it->second];
    ++summary.rows;
    if (!row.passed) {
      if (summary.failures == 0) summary.first_failure = row.detail;
      ++summary.failures;
    }
  }
  return summaries;
}

void write_check_rows_csv(std::ostream& out, const std::vector<CheckRow>& rows) {
  CsvWriter csv(out);
  csv.row("check", "detail", "lhs", "rhs", "passed");
  for (const auto& row : rows) csv.row(row.check, row.detail, row.lhs, row.rhs, row.passed);
}

}  // namespace ccga
