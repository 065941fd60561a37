#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ccga/errors.hpp"
#include "ccga/exact.hpp"
#include "ccga/random_stream.hpp"

namespace ccga {

using Index = Eigen::Index;
using Count = std::int64_t;
using CountMatrix = Eigen::Matrix<Count, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CountVector = Eigen::Matrix<Count, Eigen::Dynamic, 1>;

/// Learning-rate grid: eta = 1 / (m K), so that (eta K)^-1 = m is a natural number.
class Resolution {
 public:
  Resolution(Index categories, Count multiplier);

  /// Builds the resolution for an explicit learning rate; rejects eta unless
  /// (eta K)^-1 is a natural number.
  static Resolution from_eta(const Rational& eta, Index categories);

  Index categories() const { return categories_; }
  Count multiplier() const { return multiplier_; }
  /// Number of eta steps in [0, 1], i.e. m K = 1 / eta.
  Count grid_size() const { return multiplier_ * static_cast<Count>(categories_); }

  template <typename Scalar = double>
  Scalar eta() const {
    return ratio<Scalar>(1, grid_size());
  }

  friend bool operator==(const Resolution&, const Resolution&) = default;

 private:
  Index categories_;
  Count multiplier_;
};

/// A categorical sample: one category index per dimension. Indices are
/// zero-based; category 0 is the optimal category.
class OneHotSolution {
 public:
  OneHotSolution() = default;
  explicit OneHotSolution(Index dimensions) : categories_(static_cast<std::size_t>(dimensions), 0) {}
  explicit OneHotSolution(std::vector<std::int32_t> categories);

  Index dimensions() const { return static_cast<Index>(categories_.size()); }
  std::int32_t operator[](Index d) const { return categories_[static_cast<std::size_t>(d)]; }
  std::int32_t& operator[](Index d) { return categories_[static_cast<std::size_t>(d)]; }
  std::span<const std::int32_t> categories() const { return categories_; }

  friend bool operator==(const OneHotSolution&, const OneHotSolution&) = default;

 private:
  std::vector<std::int32_t> categories_;
};

/// The distribution parameter theta stored as integer multiples of eta:
/// theta(d, k) = counts(d, k) / (m K). Each row sums to m K exactly.
class GridParams {
 public:
  /// Validates shape, range and row sums.
  GridParams(Resolution resolution, CountMatrix counts);

  Index dimensions() const { return counts_.rows(); }
  Index categories() const { return counts_.cols(); }
  const Resolution& resolution() const { return resolution_; }
  const CountMatrix& counts() const { return counts_; }
  Count count(Index d, Index k) const { return counts_(d, k); }

  template <typename Scalar = double>
  Scalar theta(Index d, Index k) const {
    return ratio<Scalar>(counts_(d, k), resolution_.grid_size());
  }

  /// Row d puts all mass on one category, so it can never change again.
  bool row_degenerate(Index d) const;
  /// Every entry is the optimal category with probability one.
  bool concentrated_on_optimum() const;

  friend bool operator==(const GridParams&, const GridParams&) = default;

 private:
  friend void apply_update_in_place(GridParams&, const OneHotSolution&, const OneHotSolution&);

  Resolution resolution_;
  CountMatrix counts_;
};

/// theta(d, k) = 1/K everywhere.
GridParams init_params(Index dimensions, const Resolution& resolution);

/// Draws one solution. Each dimension uses one uniform integer in [0, m K)
/// resolved against cumulative counts, so category k has probability exactly
/// counts(d, k) / (m K).
OneHotSolution sample(const GridParams& params, RandomStream& stream);
void sample_into(const GridParams& params, RandomStream& stream, OneHotSolution& out);

/// theta + eta (winner - loser). Throws InvalidInput on shape mismatch and
/// InvariantViolation if a count would leave [0, m K].
GridParams apply_update(const GridParams& params, const OneHotSolution& winner,
                        const OneHotSolution& loser);
void apply_update_in_place(GridParams& params, const OneHotSolution& winner,
                           const OneHotSolution& loser);

/// Product, sum and minimum of theta(d, 0) over d. Computed exactly on counts
/// and converted to Scalar at the end.
template <typename Scalar = double>
Scalar optimal_product(const GridParams& params);
template <typename Scalar = double>
Scalar optimal_sum(const GridParams& params);
template <typename Scalar = double>
Scalar min_optimal(const GridParams& params);

/// Checks that `x` is a valid solution for `params`' shape.
void check_solution_shape(const GridParams& params, const OneHotSolution& x);

}  // namespace ccga
