#pragma once

#include "ccga/model.hpp"

namespace ccga {

/// Per-dimension COM potential:
///   (1 - eta) / eta            if 0 <= theta(d,0) < eta
///   (1 - theta) / theta        otherwise
/// On the eta-grid the first branch is reachable only at theta(d,0) = 0.
double onemax_potential(const GridParams& params, Index d);
double onemax_potential(Count optimal_count, const Resolution& resolution);

/// KVal potential: sum_d X_d + D ln K with X_d = ln max(theta(d,0), eta).
/// Equals sum_d ln(max(n_d, 1) / m) in count units; zero at initialization.
double kval_potential(const GridParams& params);
double kval_potential(const CountVector& optimal_counts, const Resolution& resolution);

/// 1 - theta(d,0).
double onemax_legacy(const GridParams& params, Index d);
double onemax_legacy(Count optimal_count, const Resolution& resolution);

/// -sum_d (1 - theta(d,0)).
double kval_legacy(const GridParams& params);
double kval_legacy(const CountVector& optimal_counts, const Resolution& resolution);

}  // namespace ccga
