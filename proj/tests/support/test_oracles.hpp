#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "eustar/dataset.hpp"

namespace eustar::testing {

/// Chi-squared quantile via the regularized incomplete gamma function and
/// bisection. Independent of the boost implementation used by the library.
double chi2_quantile_oracle(double p, int dof);

/// Standard normal quantile by bisection on std::erf. Independent of the
/// library's rational approximation.
double normal_quantile_oracle(double p);

/// Feasibility of the e = 0 objective-belief system checked as a
/// negative-cycle test (Floyd-Warshall) on the difference-constraint
/// graph. Independent of both the LP solver and the sequence enumerator.
bool saroeu_holds_floyd(const Dataset& d, double tau = 0.0);

/// Portable uniform in (0,1) from a mt19937_64 stream.
double uniform01(std::mt19937_64& rng);

/// Random dataset: prices log-uniform on [1/5, 5], quantities uniform on
/// the unit-income budget (expenditure shares), uniform belief.
Dataset random_dataset(std::mt19937_64& rng, int K, int S, const std::string& id = "rnd");

}  // namespace eustar::testing
