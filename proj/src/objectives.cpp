#include "ccga/objectives.hpp"

#include <string>

namespace ccga {
namespace {

void check_problem_shape(Index dimensions, Index categories) {
  if (dimensions < 1) throw InvalidInput("dimension count D must be at least 1");
  if (categories < 2) throw InvalidInput("category count K must be at least 2");
}

}  // namespace

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::Com: return "com";
    case ObjectiveKind::KVal: return "kval";
    case ObjectiveKind::Custom: return "custom";
  }
  return "unknown";
}

ObjectiveKind parse_objective_kind(std::string_view name) {
  if (name == "com") return ObjectiveKind::Com;
  if (name == "kval") return ObjectiveKind::KVal;
  if (name == "custom") return ObjectiveKind::Custom;
  throw InvalidInput("unknown objective '" + std::string(name) + "' (expected com, kval or custom)");
}

LinearCategoricalObjective LinearCategoricalObjective::com(Index dimensions, Index categories) {
  check_problem_shape(dimensions, categories);
  return LinearCategoricalObjective(ObjectiveKind::Com, dimensions, categories);
}

LinearCategoricalObjective LinearCategoricalObjective::kval(Index dimensions, Index categories) {
  check_problem_shape(dimensions, categories);
  return LinearCategoricalObjective(ObjectiveKind::KVal, dimensions, categories);
}

LinearCategoricalObjective LinearCategoricalObjective::custom(WeightMatrix weights) {
  check_problem_shape(weights.rows(), weights.cols());
  for (Index d = 0; d < weights.rows(); ++d) {
    for (Index k = 0; k < weights.cols(); ++k) {
      if (weights(d, k) < 0) throw InvalidInput("custom weights must be non-negative");
    }
  }
  LinearCategoricalObjective objective(ObjectiveKind::Custom, weights.rows(), weights.cols());
  objective.weights_ = std::move(weights);
  return objective;
}

BigInt LinearCategoricalObjective::weight(Index d, Index k) const {
  if (d < 0 || d >= dimensions_ || k < 0 || k >= categories_) {
    throw InvalidInput("weight index out of range");
  }
  switch (kind_) {
    case ObjectiveKind::Com:
      return k == 0 ? 1 : 0;
    case ObjectiveKind::KVal:
      return BigInt(categories_ - 1 - k) *
             boost::multiprecision::pow(BigInt(categories_),
                                        static_cast<unsigned>(dimensions_ - 1 - d));
    case ObjectiveKind::Custom:
      return weights_(d, k);
  }
  return 0;
}

void LinearCategoricalObjective::check_shape(const OneHotSolution& x) const {
  if (x.dimensions() != dimensions_) {
    throw InvalidInput("solution has " + std::to_string(x.dimensions()) +
                       " dimensions, objective expects " + std::to_string(dimensions_));
  }
  for (auto k : x.categories()) {
    if (k < 0 || k >= categories_) throw InvalidInput("category index out of range");
  }
}

BigInt LinearCategoricalObjective::evaluate_exact(const OneHotSolution& x) const {
  check_shape(x);
  BigInt value = 0;
  switch (kind_) {
    case ObjectiveKind::Com:
      for (auto k : x.categories()) value += (k == 0);
      break;
    case ObjectiveKind::KVal:
      // Horner over base-K digits (K - 1 - k), most significant first.
      for (auto k : x.categories()) value = value * categories_ + (categories_ - 1 - k);
      break;
    case ObjectiveKind::Custom:
      for (Index d = 0; d < dimensions_; ++d) value += weights_(d, x[d]);
      break;
  }
  return value;
}

std::strong_ordering LinearCategoricalObjective::compare(const OneHotSolution& x,
                                                         const OneHotSolution& other) const {
  check_shape(x);
  check_shape(other);
  switch (kind_) {
    case ObjectiveKind::Com: {
      Index ones = 0;
      Index other_ones = 0;
      for (Index d = 0; d < dimensions_; ++d) {
        ones += (x[d] == 0);
        other_ones += (other[d] == 0);
      }
      return ones <=> other_ones;
    }
    case ObjectiveKind::KVal:
      // The first differing dimension decides: any lower-order difference is
      // worth strictly less than one unit of K^(D-1-d).
      for (Index d = 0; d < dimensions_; ++d) {
        if (x[d] != other[d]) return other[d] <=> x[d];
      }
      return std::strong_ordering::equal;
    case ObjectiveKind::Custom: {
      const BigInt a = evaluate_exact(x);
      const BigInt b = evaluate_exact(other);
      if (a < b) return std::strong_ordering::less;
      if (a > b) return std::strong_ordering::greater;
      return std::strong_ordering::equal;
    }
  }
  return std::strong_ordering::equal;
}

bool LinearCategoricalObjective::is_optimum(const OneHotSolution& x) const {
  check_shape(x);
  for (auto k : x.categories()) {
    if (k != 0) return false;
  }
  return true;
}

}  // namespace ccga
