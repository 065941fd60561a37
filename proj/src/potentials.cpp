#include "ccga/potentials.hpp"

#include <cmath>

namespace ccga {
namespace {

void check_dimension(const GridParams& params, Index d) {
  if (d < 0 || d >= params.dimensions()) throw InvalidInput("dimension index out of range");
}

}  // namespace

double onemax_potential(Count optimal_count, const Resolution& resolution) {
  const Count total = resolution.grid_size();
  if (optimal_count < 1) return to_double(Rational(total - 1));
  return to_double(Rational(total - optimal_count, optimal_count));
}

double onemax_potential(const GridParams& params, Index d) {
  check_dimension(params, d);
  return onemax_potential(params.count(d, 0), params.resolution());
}

double kval_potential(const CountVector& optimal_counts, const Resolution& resolution) {
  const auto m = static_cast<double>(resolution.multiplier());
  double value = 0.0;
  for (Index d = 0; d < optimal_counts.size(); ++d) {
    value += std::log(static_cast<double>(std::max<Count>(optimal_counts(d), 1)) / m);
  }
  return value;
}

double kval_potential(const GridParams& params) {
  return kval_potential(params.counts().col(0), params.resolution());
}

double onemax_legacy(Count optimal_count, const Resolution& resolution) {
  return to_double(Rational(resolution.grid_size() - optimal_count, resolution.grid_size()));
}

double onemax_legacy(const GridParams& params, Index d) {
  check_dimension(params, d);
  return onemax_legacy(params.count(d, 0), params.resolution());
}

double kval_legacy(const CountVector& optimal_counts, const Resolution& resolution) {
  const Count total = resolution.grid_size();
  const Count missing = total * optimal_counts.size() - optimal_counts.sum();
  return -to_double(Rational(missing, total));
}

double kval_legacy(const GridParams& params) {
  return kval_legacy(params.counts().col(0), params.resolution());
}

}  // namespace ccga
