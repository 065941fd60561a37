#include "ccga/model.hpp"

#include <algorithm>
#include <string>

namespace ccga {

Resolution::Resolution(Index categories, Count multiplier)
    : categories_(categories), multiplier_(multiplier) {
  if (categories < 2) throw InvalidInput("category count K must be at least 2");
  if (multiplier < 1) throw InvalidInput("grid multiplier m must be at least 1");
}

Resolution Resolution::from_eta(const Rational& eta, Index categories) {
  if (categories < 2) throw InvalidInput("category count K must be at least 2");
  if (eta <= 0) throw InvalidInput("learning rate must be positive");
  const Rational inverse = 1 / (eta * categories);
  if (boost::multiprecision::denominator(inverse) != 1) {
    throw InvalidInput("(eta K)^-1 must be a natural number");
  }
  return Resolution(categories, boost::multiprecision::numerator(inverse).convert_to<Count>());
}

OneHotSolution::OneHotSolution(std::vector<std::int32_t> categories)
    : categories_(std::move(categories)) {
  for (auto k : categories_) {
    if (k < 0) throw InvalidInput("category index must be non-negative");
  }
}

GridParams::GridParams(Resolution resolution, CountMatrix counts)
    : resolution_(resolution), counts_(std::move(counts)) {
  if (counts_.rows() < 1) throw InvalidInput("dimension count D must be at least 1");
  if (counts_.cols() != resolution_.categories()) {
    throw InvalidInput("count table has " + std::to_string(counts_.cols()) +
                       " columns, expected K = " + std::to_string(resolution_.categories()));
  }
  const Count total = resolution_.grid_size();
  if ((counts_.array() < 0).any() || (counts_.array() > total).any()) {
    throw InvalidInput("every count must lie in [0, m K]");
  }
  for (Index d = 0; d < counts_.rows(); ++d) {
    if (counts_.row(d).sum() != total) {
      throw InvalidInput("row " + std::to_string(d) + " does not sum to m K");
    }
  }
}

bool GridParams::row_degenerate(Index d) const {
  return counts_.row(d).maxCoeff() == resolution_.grid_size();
}

bool GridParams::concentrated_on_optimum() const {
  return (counts_.col(0).array() == resolution_.grid_size()).all();
}

GridParams init_params(Index dimensions, const Resolution& resolution) {
  if (dimensions < 1) throw InvalidInput("dimension count D must be at least 1");
  return GridParams(resolution, CountMatrix::Constant(dimensions, resolution.categories(),
                                                      resolution.multiplier()));
}

void check_solution_shape(const GridParams& params, const OneHotSolution& x) {
  if (x.dimensions() != params.dimensions()) {
    throw InvalidInput("solution has " + std::to_string(x.dimensions()) +
                       " dimensions, expected " + std::to_string(params.dimensions()));
  }
  for (auto k : x.categories()) {
    if (k < 0 || k >= params.categories()) throw InvalidInput("category index out of range");
  }
}

void sample_into(const GridParams& params, RandomStream& stream, OneHotSolution& out) {
  const Index dims = params.dimensions();
  const Index cats = params.categories();
  const auto total = static_cast<std::uint64_t>(params.resolution().grid_size());
  if (out.dimensions() != dims) out = OneHotSolution(dims);
  const CountMatrix& counts = params.counts();
  for (Index d = 0; d < dims; ++d) {
    auto draw = static_cast<Count>(stream.uniform_below(total));
    Index k = 0;
    for (; k + 1 < cats; ++k) {
      draw -= counts(d, k);
      if (draw < 0) break;
    }
    out[d] = static_cast<std::int32_t>(k);
  }
}

OneHotSolution sample(const GridParams& params, RandomStream& stream) {
  OneHotSolution out(params.dimensions());
  sample_into(params, stream, out);
  return out;
}

void apply_update_in_place(GridParams& params, const OneHotSolution& winner,
                           const OneHotSolution& loser) {
  check_solution_shape(params, winner);
  check_solution_shape(params, loser);
  const Count total = params.resolution().grid_size();
  for (Index d = 0; d < params.dimensions(); ++d) {
    const Index up = winner[d];
    const Index down = loser[d];
    if (up == down) continue;
    Count& raised = params.counts_(d, up);
    Count& lowered = params.counts_(d, down);
    if (raised >= total || lowered <= 0) {
      throw InvariantViolation("update would move theta(" + std::to_string(d) +
                               ", .) off the grid");
    }
    ++raised;
    --lowered;
  }
}

GridParams apply_update(const GridParams& params, const OneHotSolution& winner,
                        const OneHotSolution& loser) {
  GridParams next = params;
  apply_update_in_place(next, winner, loser);
  return next;
}

template <typename Scalar>
Scalar optimal_product(const GridParams& params) {
  BigInt numerator = 1;
  BigInt denominator = 1;
  const BigInt total = params.resolution().grid_size();
  for (Index d = 0; d < params.dimensions(); ++d) {
    numerator *= params.count(d, 0);
    denominator *= total;
  }
  const Rational exact(numerator, denominator);
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return exact;
  } else {
    return static_cast<Scalar>(to_double(exact));
  }
}

template <typename Scalar>
Scalar optimal_sum(const GridParams& params) {
  return ratio<Scalar>(params.counts().col(0).sum(), params.resolution().grid_size());
}

template <typename Scalar>
Scalar min_optimal(const GridParams& params) {
  return ratio<Scalar>(params.counts().col(0).minCoeff(), params.resolution().grid_size());
}

template double optimal_product<double>(const GridParams&);
template Rational optimal_product<Rational>(const GridParams&);
template double optimal_sum<double>(const GridParams&);
template Rational optimal_sum<Rational>(const GridParams&);
template double min_optimal<double>(const GridParams&);
template Rational min_optimal<Rational>(const GridParams&);

}  // namespace ccga
