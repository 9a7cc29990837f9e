#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eustar/dataset.hpp"

namespace eustar {

/// Count and fraction of observations that put strictly more payoff in the
/// strictly more expensive state. Requires two equally likely states.
std::pair<int, double> fosd_violations(const Dataset& d);

/// Spearman rank correlation (average ranks on ties) between
/// log(x2/x1) and log(p2/p1) across observations. Corner choices are
/// nudged by 0.1% of income before taking logs. nullopt when either
/// series is constant.
std::optional<double> dsd_correlation(const Dataset& d);

/// Per-observation scatter rows (log p2/p1, log x2/x1) behind
/// dsd_correlation, as CSV for external plotting.
std::string dsd_scatter_csv(const Dataset& d);

/// True when every choice lies within Euclidean distance r of the equal
/// payoff point of its budget line.
bool almost_diagonal(const Dataset& d, double r);

/// Default radii reported for the almost-diagonal flag.
inline constexpr double kDiagonalRadii[] = {0.05, 0.2, 0.5, 1.0};

/// Upper bound on the minimal perturbation: the largest within-observation
/// ratio of risk-neutral prices, minus 1.
double e_upper_bound(const Dataset& d);

}  // namespace eustar
