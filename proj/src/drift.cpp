#include "ccga/drift.hpp"

#include <cmath>
#include <limits>

#include "ccga/csv.hpp"

namespace ccga {

std::uint64_t outcome_pair_count(Index dimensions, Index categories) {
  std::uint64_t pairs = 1;
  const auto k = static_cast<std::uint64_t>(categories);
  for (Index i = 0; i < 2 * dimensions; ++i) {
    if (pairs > std::numeric_limits<std::uint64_t>::max() / k) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    pairs *= k;
  }
  return pairs;
}

namespace {

void check_objective_shape(const GridParams& params, const LinearCategoricalObjective& objective) {
  if (objective.dimensions() != params.dimensions() ||
      objective.categories() != params.categories()) {
    throw InvalidInput("objective shape does not match the parameter shape");
  }
}

// Advances `x` to the next solution in lexicographic order; false after the last.
bool next_solution(OneHotSolution& x, Index categories) {
  for (Index d = x.dimensions() - 1; d >= 0; --d) {
    if (x[d] + 1 < categories) {
      ++x[d];
      return true;
    }
    x[d] = 0;
  }
  return false;
}

template <typename Scalar>
Scalar collision_product(const GridParams& params, Index d) {
  Scalar product(1);
  for (Index j = 0; j < d; ++j) {
    Scalar collision(0);
    for (Index k = 0; k < params.categories(); ++k) {
      const Scalar theta = params.theta<Scalar>(j, k);
      collision += theta * theta;
    }
    product *= collision;
  }
  return product;
}

void check_entry(const GridParams& params, Index d) {
  if (d < 0 || d >= params.dimensions()) throw InvalidInput("dimension index out of range");
}

}  // namespace

DriftTable<Rational> brute_force_drift(const GridParams& params,
                                       const LinearCategoricalObjective& objective,
                                       std::uint64_t pair_cap) {
  check_objective_shape(params, objective);
  const Index dims = params.dimensions();
  const Index cats = params.categories();
  if (outcome_pair_count(dims, cats) > pair_cap) {
    throw EnumerationCapExceeded("K^(2D) outcome pairs exceed the enumeration cap");
  }

  // Probability numerators (in units of (mK)^-D) and exact values per solution.
  std::vector<OneHotSolution> solutions;
  std::vector<BigInt> weights;
  std::vector<BigInt> values;
  OneHotSolution x(dims);
  do {
    BigInt weight = 1;
    for (Index d = 0; d < dims; ++d) weight *= params.count(d, x[d]);
    solutions.push_back(x);
    weights.push_back(std::move(weight));
    values.push_back(objective.evaluate_exact(x));
  } while (next_solution(x, cats));

  ScalarMatrix<BigInt> drift_numerator = ScalarMatrix<BigInt>::Constant(dims, cats, BigInt(0));
  ScalarMatrix<BigInt> move_numerator = ScalarMatrix<BigInt>::Constant(dims, cats, BigInt(0));
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    if (weights[i] == 0) continue;
    for (std::size_t j = 0; j < solutions.size(); ++j) {
      if (weights[j] == 0) continue;
      const BigInt weight = weights[i] * weights[j];
      const bool first_wins = values[i] >= values[j];
      const OneHotSolution& winner = first_wins ? solutions[i] : solutions[j];
      const OneHotSolution& loser = first_wins ? solutions[j] : solutions[i];
      for (Index d = 0; d < dims; ++d) {
        if (winner[d] == loser[d]) continue;
        drift_numerator(d, winner[d]) += weight;
        drift_numerator(d, loser[d]) -= weight;
        move_numerator(d, winner[d]) += weight;
        move_numerator(d, loser[d]) += weight;
      }
    }
  }

  const BigInt total = params.resolution().grid_size();
  const BigInt pair_denominator = boost::multiprecision::pow(total, static_cast<unsigned>(2 * dims));
  const BigInt drift_denominator = pair_denominator * total;  // times eta
  DriftTable<Rational> table;
  table.drift = drift_numerator.unaryExpr(
      [&](const BigInt& n) { return Rational(n, drift_denominator); });
  table.move_probability = move_numerator.unaryExpr(
      [&](const BigInt& n) { return Rational(n, pair_denominator); });
  return table;
}

MonteCarloDrift monte_carlo_drift(const GridParams& params,
                                  const LinearCategoricalObjective& objective,
                                  std::int64_t samples, RandomStream& stream) {
  check_objective_shape(params, objective);
  if (samples < 2) throw InvalidInput("Monte Carlo drift needs at least two samples");
  const Index dims = params.dimensions();
  const Index cats = params.categories();
  Eigen::MatrixXd change_sum = Eigen::MatrixXd::Zero(dims, cats);
  Eigen::MatrixXd move_sum = Eigen::MatrixXd::Zero(dims, cats);
  OneHotSolution x(dims);
  OneHotSolution x_prime(dims);
  for (std::int64_t i = 0; i < samples; ++i) {
    sample_into(params, stream, x);
    sample_into(params, stream, x_prime);
    const bool x_wins = objective.compare(x, x_prime) >= 0;
    const OneHotSolution& winner = x_wins ? x : x_prime;
    const OneHotSolution& loser = x_wins ? x_prime : x;
    for (Index d = 0; d < dims; ++d) {
      if (winner[d] == loser[d]) continue;
      change_sum(d, winner[d]) += 1.0;
      change_sum(d, loser[d]) -= 1.0;
      move_sum(d, winner[d]) += 1.0;
      move_sum(d, loser[d]) += 1.0;
    }
  }
  const auto n = static_cast<double>(samples);
  const double eta = params.resolution().eta();
  MonteCarloDrift result;
  result.samples = samples;
  const Eigen::MatrixXd mean_change = change_sum / n;
  const Eigen::MatrixXd move_rate = move_sum / n;
  result.table.drift = eta * mean_change;
  result.table.move_probability = move_rate;
  // Per-sample change is in {-1, 0, 1}, so E[change^2] is the move rate.
  const Eigen::MatrixXd change_variance =
      (move_rate.array() - mean_change.array().square()).max(0.0) * n / (n - 1);
  result.drift_stderr = eta * (change_variance.array() / n).sqrt();
  result.move_stderr = (move_rate.array() * (1.0 - move_rate.array()) / n).sqrt();
  return result;
}

template <typename Scalar>
Scalar kval_closed_form_drift(const GridParams& params, Index d) {
  check_entry(params, d);
  const Scalar theta = params.theta<Scalar>(d, 0);
  const Scalar eta = params.resolution().eta<Scalar>();
  return Scalar(2) * eta * theta * (Scalar(1) - theta) * collision_product<Scalar>(params, d);
}

template double kval_closed_form_drift<double>(const GridParams&, Index);
template Rational kval_closed_form_drift<Rational>(const GridParams&, Index);

namespace {

// Drift of theta(d, .) from enumeration when affordable, Monte Carlo otherwise.
struct OracleDrift {
  DriftTable<double> table;
  Eigen::MatrixXd drift_stderr;
  Eigen::MatrixXd move_stderr;
  std::optional<DriftTable<Rational>> exact;
  std::string method;
};

OracleDrift oracle_drift(const GridParams& params, const LinearCategoricalObjective& objective,
                         const DriftOracleOptions& options) {
  OracleDrift result;
  if (outcome_pair_count(params.dimensions(), params.categories()) <= options.pair_cap) {
    result.exact = brute_force_drift(params, objective, options.pair_cap);
    result.table = result.exact->cast<double>();
    result.drift_stderr = Eigen::MatrixXd::Zero(params.dimensions(), params.categories());
    result.move_stderr = result.drift_stderr;
    result.method = "enumeration";
  } else {
    RandomStream stream(options.seed);
    auto mc = monte_carlo_drift(params, objective, options.monte_carlo_samples, stream);
    result.table = std::move(mc.table);
    result.drift_stderr = std::move(mc.drift_stderr);
    result.move_stderr = std::move(mc.move_stderr);
    result.method = "monte_carlo";
  }
  return result;
}

}  // namespace

BoundCheck com_drift_bound_check(const GridParams& params, Index d,
                                 const DriftOracleOptions& options) {
  check_entry(params, d);
  const Index dims = params.dimensions();
  if (dims < 2) throw PreconditionError("the COM drift lower bound needs D >= 2");
  const auto objective = LinearCategoricalObjective::com(dims, params.categories());
  const auto oracle = oracle_drift(params, objective, options);

  BoundCheck check;
  check.method = oracle.method;
  const double scale = 1.0 / (4.0 * std::sqrt(static_cast<double>(dims - 1)));
  if (oracle.exact) {
    check.lhs = to_double(oracle.exact->drift(d, 0));
    check.rhs = to_double(params.resolution().eta<Rational>() * oracle.exact->move_probability(d, 0)) *
                scale;
    check.tolerance = kExactTolerance;
  } else {
    const double eta = params.resolution().eta();
    check.lhs = oracle.table.drift(d, 0);
    check.rhs = eta * oracle.table.move_probability(d, 0) * scale;
    check.tolerance =
        kMonteCarloSigmas * (oracle.drift_stderr(d, 0) + eta * scale * oracle.move_stderr(d, 0));
  }
  check.holds = check.lhs >= check.rhs - check.tolerance;
  return check;
}

BoundCheck kval_ratio_drift_check(const GridParams& params, Index d, Index k,
                                  const DriftOracleOptions& options) {
  check_entry(params, d);
  if (k < 1 || k >= params.categories()) {
    throw PreconditionError("the ratio drift bound needs a non-optimal category k");
  }
  const auto objective = LinearCategoricalObjective::kval(params.dimensions(), params.categories());
  const auto oracle = oracle_drift(params, objective, options);

  const Rational theta_opt = params.theta<Rational>(d, 0);
  const Rational theta_k = params.theta<Rational>(d, k);
  const Rational ratio_gap = 2 * theta_opt - theta_k;
  const Rational rhs = 2 * params.resolution().eta<Rational>() *
                       (ratio_gap * (1 - theta_opt - theta_k) + 3 * theta_opt * theta_k) *
                       collision_product<Rational>(params, d);

  BoundCheck check;
  check.method = oracle.method;
  check.rhs = to_double(rhs);
  if (oracle.exact) {
    check.lhs = to_double(2 * oracle.exact->drift(d, 0) - oracle.exact->drift(d, k));
    check.tolerance = kExactTolerance;
  } else {
    check.lhs = 2 * oracle.table.drift(d, 0) - oracle.table.drift(d, k);
    check.tolerance =
        kMonteCarloSigmas * (2 * oracle.drift_stderr(d, 0) + oracle.drift_stderr(d, k));
  }
  check.holds = check.lhs >= check.rhs - check.tolerance;
  return check;
}

DeltaStatistics delta_statistics(const GridParams& params, std::int64_t samples,
                                 RandomStream& stream) {
  if (samples < 1) throw InvalidInput("delta statistics need at least one sample");
  const Index dims = params.dimensions();
  OneHotSolution x(dims);
  OneHotSolution x_prime(dims);
  std::int64_t zeros = 0;
  double abs_sum = 0;
  double abs_square_sum = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    sample_into(params, stream, x);
    sample_into(params, stream, x_prime);
    std::int64_t delta = 0;
    for (Index d = 0; d < dims; ++d) delta += (x[d] == 0) - (x_prime[d] == 0);
    const auto magnitude = static_cast<double>(delta < 0 ? -delta : delta);
    zeros += (delta == 0);
    abs_sum += magnitude;
    abs_square_sum += magnitude * magnitude;
  }
  const auto n = static_cast<double>(samples);
  DeltaStatistics stats;
  stats.samples = samples;
  stats.p_zero_hat = static_cast<double>(zeros) / n;
  stats.mean_abs_hat = abs_sum / n;
  stats.p_zero_stderr = std::sqrt(stats.p_zero_hat * (1 - stats.p_zero_hat) / n);
  if (samples > 1) {
    const double variance =
        std::max(0.0, (abs_square_sum - n * stats.mean_abs_hat * stats.mean_abs_hat) / (n - 1));
    stats.mean_abs_stderr = std::sqrt(variance / n);
  }
  return stats;
}

void write_drift_csv(std::ostream& out, const DriftTable<double>& table, const std::string& method) {
  CsvWriter csv(out);
  csv.row("d", "k", "drift", "move_prob", "method");
  for (Index d = 0; d < table.drift.rows(); ++d) {
    for (Index k = 0; k < table.drift.cols(); ++k) {
      csv.row(d, k, table.drift(d, k), table.move_probability(d, k), method);
    }
  }
}

}  // namespace ccga
