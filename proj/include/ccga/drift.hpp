#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include <Eigen/Core>

#include "ccga/exact.hpp"
#include "ccga/model.hpp"
#include "ccga/objectives.hpp"

namespace ccga {

template <typename Scalar>
using ScalarMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// One-step drift of every parameter entry:
///   drift(d, k)           = E[theta'(d,k) - theta(d,k) | theta]
///   move_probability(d,k) = Pr(theta'(d,k) != theta(d,k) | theta)
template <typename Scalar>
struct DriftTable {
  ScalarMatrix<Scalar> drift;
  ScalarMatrix<Scalar> move_probability;

  template <typename Other>
  DriftTable<Other> cast() const {
    auto convert = [](const Scalar& v) { return static_cast<Other>(to_double(v)); };
    return {drift.unaryExpr(convert), move_probability.unaryExpr(convert)};
  }
};

struct MonteCarloDrift {
  DriftTable<double> table;
  Eigen::MatrixXd drift_stderr;
  Eigen::MatrixXd move_stderr;
  std::int64_t samples = 0;
};

inline constexpr std::uint64_t kDefaultPairCap = 1'000'000;

/// Number of ordered sample pairs K^(2D), saturating at UINT64_MAX.
std::uint64_t outcome_pair_count(Index dimensions, Index categories);

/// Exact drift by enumerating every ordered pair (x, x') with probability
/// P(x) P(x'), using the selection rule with ties resolved to (x, x').
/// Throws EnumerationCapExceeded when K^(2D) > pair_cap.
DriftTable<Rational> brute_force_drift(const GridParams& params,
                                       const LinearCategoricalObjective& objective,
                                       std::uint64_t pair_cap = kDefaultPairCap);

MonteCarloDrift monte_carlo_drift(const GridParams& params,
                                  const LinearCategoricalObjective& objective,
                                  std::int64_t samples, RandomStream& stream);

/// KVal drift of theta(d,0):
///   2 eta theta(d,0) (1 - theta(d,0)) prod_{j<d} sum_k theta(j,k)^2
template <typename Scalar = double>
Scalar kval_closed_form_drift(const GridParams& params, Index d);

struct BoundCheck {
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
  std::string method;  ///< "enumeration" or "monte_carlo"
  double tolerance = 0;
};

struct DriftOracleOptions {
  std::uint64_t pair_cap = kDefaultPairCap;
  std::int64_t monte_carlo_samples = 1'000'000;
  std::uint64_t seed = 0;
};

/// Exact-vs-exact comparisons allow only the final real conversion error.
inline constexpr double kExactTolerance = 1e-12;
/// Monte Carlo comparisons allow this many standard errors.
inline constexpr double kMonteCarloSigmas = 5.0;

/// COM: drift(d,0) >= eta Pr(theta(d,0) moves) / (4 sqrt(D - 1)). Needs D >= 2.
BoundCheck com_drift_bound_check(const GridParams& params, Index d,
                                 const DriftOracleOptions& options = {});

/// KVal, with X = 2 theta(d,0) - theta(d,k), k >= 1:
///   E[dX] >= 2 eta (X (1 - theta(d,0) - theta(d,k)) + 3 theta(d,0) theta(d,k))
///            * prod_{j<d} sum_k theta(j,k)^2
BoundCheck kval_ratio_drift_check(const GridParams& params, Index d, Index k,
                                  const DriftOracleOptions& options = {});

struct DeltaStatistics {
  double p_zero_hat = 0;
  double mean_abs_hat = 0;
  double p_zero_stderr = 0;
  double mean_abs_stderr = 0;
  std::int64_t samples = 0;
};

/// Empirical law of delta = sum_d ([x_d = 0] - [x'_d = 0]) over independent pairs.
DeltaStatistics delta_statistics(const GridParams& params, std::int64_t samples,
                                 RandomStream& stream);

/// CSV rows: d, k, drift, move_prob, method.
void write_drift_csv(std::ostream& out, const DriftTable<double>& table, const std::string& method);

}  // namespace ccga
