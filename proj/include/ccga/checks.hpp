#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "ccga/model.hpp"
#include "ccga/random_stream.hpp"

namespace ccga {

/// Each row of theta is a uniformly random composition of m K into K
/// non-negative parts (stars and bars), so boundary states appear often.
GridParams random_grid_params(Index dimensions, const Resolution& resolution,
                              RandomStream& stream);

struct CheckRow {
  std::string check;
  std::string detail;
  double lhs = 0;
  double rhs = 0;
  bool passed = false;
};

struct DriftCheckSpec {
  int states = 100;                ///< random states per enumeration check
  Index max_dimensions = 3;
  Index max_categories = 3;
  Count max_multiplier = 5;
  std::vector<Index> delta_dimensions{4, 16, 64};
  Index delta_categories = 3;
  int delta_states = 20;
  std::int64_t delta_samples = 100'000;
  std::uint64_t seed = 0;
};

/// Closed form vs enumeration, zero-sum rows, the COM and KVal drift bounds,
/// and the delta statistics. One row per sampled state and check.
std::vector<CheckRow> run_drift_checks(const DriftCheckSpec& spec);

struct CheckSummary {
  std::string check;
  int rows = 0;
  int failures = 0;
  std::string first_failure;
};
std::vector<CheckSummary> summarize_checks(const std::vector<CheckRow>& rows);

void write_check_rows_csv(std::ostream& out, const std::vector<CheckRow>& rows);

}  // namespace ccga
