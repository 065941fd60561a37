#pragma once

// Reference implementations used as independent oracles by the unit tests.
// They follow the textbook definitions directly and share no code with the
// library beyond its value types.

#include <cstdint>
#include <vector>

#include "ccga/exact.hpp"
#include "ccga/model.hpp"
#include "ccga/objectives.hpp"

namespace oracle {

using ccga::BigInt;
using ccga::Index;
using ccga::Rational;

inline BigInt power(std::int64_t base, Index exponent) {
  BigInt out = 1;
  for (Index i = 0; i < exponent; ++i) out *= base;
  return out;
}

/// f(x) = sum_d w(d, x_d) straight from the weight definitions.
inline BigInt value(ccga::ObjectiveKind kind, Index D, Index K, const std::vector<int>& x) {
  BigInt total = 0;
  for (Index d = 0; d < D; ++d) {
    const int k = x[static_cast<std::size_t>(d)];
    if (kind == ccga::ObjectiveKind::Com) {
      total += (k == 0) ? 1 : 0;
    } else {
      total += BigInt(K - 1 - k) * power(K, D - 1 - d);
    }
  }
  return total;
}

inline ccga::GridParams params(Index K, ccga::Count m,
                               const std::vector<std::vector<ccga::Count>>& rows) {
  ccga::CountMatrix counts(static_cast<Index>(rows.size()), K);
  for (std::size_t d = 0; d < rows.size(); ++d) {
    for (Index k = 0; k < K; ++k) counts(static_cast<Index>(d), k) = rows[d][static_cast<std::size_t>(k)];
  }
  return ccga::GridParams(ccga::Resolution(K, m), counts);
}

/// Every solution of shape (D, K) in lexicographic order.
inline std::vector<std::vector<int>> all_solutions(Index D, Index K) {
  std::vector<std::vector<int>> out;
  std::vector<int> x(static_cast<std::size_t>(D), 0);
  while (true) {
    out.push_back(x);
    Index d = D - 1;
    while (d >= 0 && x[static_cast<std::size_t>(d)] == K - 1) x[static_cast<std::size_t>(d--)] = 0;
    if (d < 0) break;
    ++x[static_cast<std::size_t>(d)];
  }
  return out;
}

inline ccga::OneHotSolution solution(const std::vector<int>& x) {
  return ccga::OneHotSolution(std::vector<std::int32_t>(x.begin(), x.end()));
}

/// Exact expected change of every theta(d, k) after one ccGA step, by
/// enumerating all ordered pairs and applying "x wins iff f(x) >= f(x')".
/// Also returns the probability that theta(d, k) changes.
struct Drift {
  std::vector<std::vector<Rational>> drift;
  std::vector<std::vector<Rational>> move;
};

inline Drift enumerate_drift(const ccga::GridParams& params, ccga::ObjectiveKind kind) {
  const Index D = params.dimensions();
  const Index K = params.categories();
  const Rational eta(1, params.resolution().grid_size());
  const auto sols = all_solutions(D, K);
  std::vector<Rational> prob;
  std::vector<BigInt> values;
  for (const auto& x : sols) {
    Rational p = 1;
    for (Index d = 0; d < D; ++d) p *= params.theta<Rational>(d, x[static_cast<std::size_t>(d)]);
    prob.push_back(p);
    values.push_back(value(kind, D, K, x));
  }
  Drift out;
  out.drift.assign(static_cast<std::size_t>(D), std::vector<Rational>(static_cast<std::size_t>(K), 0));
  out.move = out.drift;
  for (std::size_t i = 0; i < sols.size(); ++i) {
    if (prob[i] == 0) continue;
    for (std::size_t j = 0; j < sols.size(); ++j) {
      if (prob[j] == 0) continue;
      const Rational p = prob[i] * prob[j];
      const bool first_wins = values[i] >= values[j];
      const auto& w = first_wins ? sols[i] : sols[j];
      const auto& l = first_wins ? sols[j] : sols[i];
      for (Index d = 0; d < D; ++d) {
        const int wk = w[static_cast<std::size_t>(d)];
        const int lk = l[static_cast<std::size_t>(d)];
        if (wk == lk) continue;
        out.drift[static_cast<std::size_t>(d)][static_cast<std::size_t>(wk)] += p * eta;
        out.drift[static_cast<std::size_t>(d)][static_cast<std::size_t>(lk)] -= p * eta;
        out.move[static_cast<std::size_t>(d)][static_cast<std::size_t>(wk)] += p;
        out.move[static_cast<std::size_t>(d)][static_cast<std::size_t>(lk)] += p;
      }
    }
  }
  return out;
}

}  // namespace oracle
