#pragma once

#include <compare>
#include <string_view>

#include "ccga/exact.hpp"
#include "ccga/model.hpp"

namespace ccga {

enum class ObjectiveKind { Com, KVal, Custom };

std::string_view to_string(ObjectiveKind kind);
ObjectiveKind parse_objective_kind(std::string_view name);

using WeightMatrix = Eigen::Matrix<BigInt, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// f(x) = sum_d w(d, x_d) with exact non-negative integer weights.
///
/// COM:  w(d, k) = [k == 0]
/// KVal: w(d, k) = (K - 1 - k) K^(D - 1 - d)   (zero-based d, k)
///
/// KVal weights are produced on demand; comparisons never form them.
class LinearCategoricalObjective {
 public:
  static LinearCategoricalObjective com(Index dimensions, Index categories);
  static LinearCategoricalObjective kval(Index dimensions, Index categories);
  /// Arbitrary weight table. No runtime claims attach to these.
  static LinearCategoricalObjective custom(WeightMatrix weights);

  ObjectiveKind kind() const { return kind_; }
  Index dimensions() const { return dimensions_; }
  Index categories() const { return categories_; }

  BigInt weight(Index d, Index k) const;

  BigInt evaluate_exact(const OneHotSolution& x) const;

  /// Ordering of f(x) against f(other).
  std::strong_ordering compare(const OneHotSolution& x, const OneHotSolution& other) const;

  /// The all-zero category vector (every dimension at the optimal category).
  OneHotSolution optimum() const { return OneHotSolution(dimensions_); }
  bool is_optimum(const OneHotSolution& x) const;

  void check_shape(const OneHotSolution& x) const;

 private:
  LinearCategoricalObjective(ObjectiveKind kind, Index dimensions, Index categories)
      : kind_(kind), dimensions_(dimensions), categories_(categories) {}

  ObjectiveKind kind_;
  Index dimensions_;
  Index categories_;
  WeightMatrix weights_;  // Custom only
};

}  // namespace ccga
