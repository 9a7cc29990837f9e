#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "eustar/dataset.hpp"

namespace eustar {

struct MPTestParams {
    double eta1 = 0.35;   // type-I probability of the variance test
    double eta2 = 0.35;   // type-II probability
    double alpha = 0.05;  // nominal size of the final test
    long draws = 200000;  // Monte Carlo sample count, >= 10000
    std::uint64_t seed = 1;

    void validate() const;
};

struct MPTestResult {
    double sigma_ratio = 1.0;  // sigma1^2 / sigma0^2
    double var_eps = 0.0;      // Var(eps)
    double xi2 = 0.0;          // log-scale variance
    double nu = 0.0;           // log-scale mean, pinned by E[eps] = 1
    double c_alpha = 1.0;      // Monte Carlo critical value
    double statistic = 1.0;    // 1 + e*
    bool reject = false;
};

/// Ratio of chi-squared quantiles with n-1 degrees of freedom: the
/// smallest variance inflation an agent testing at error probabilities
/// (eta1, eta2) could fail to detect. Throws CalibrationError when the
/// implied ratio falls below 1.
double calibrate_variance_ratio(int n, double eta1, double eta2);

/// Solves Var(ptilde)/Var(p) = E[eps]^2 + (1 + E[p]^2/Var(p)) Var(eps)
/// for Var(eps) with E[eps] = 1. The price sample pools all state prices
/// after rescaling each observation to unit income.
double epsilon_variance(const Dataset& d, double sigma_ratio);

/// Log-normal parameters (nu, xi2) with mean pinned to 1:
/// xi2 = ln(1 + var_eps), nu = -xi2/2.
std::pair<double, double> lognormal_params(double var_eps);

/// Monte Carlo (1 - alpha) quantile of max_{k,s,t} eps_s^k / eps_t^k with
/// i.i.d. log-normal(nu, xi2) perturbations. Deterministic per seed: each
/// draw consumes its own counter block, so threading cannot change the
/// result. Type-7 quantile interpolation.
double critical_value(int K, int S, double xi2, double alpha, long draws, std::uint64_t seed,
                      int threads = 0);

/// Full pipeline: calibrate -> epsilon variance -> log-normal parameters
/// -> critical value; the statistic is 1 + e*.
MPTestResult mp_test(const Dataset& d, const MPTestParams& params, double tau = 0.0,
                     int threads = 0);

std::string mp_result_to_json(const MPTestParams& params, const MPTestResult& r);

}  // namespace eustar
