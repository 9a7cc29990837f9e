#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eustar/dataset.hpp"

namespace eustar {

/// A sequence of budgets with unit income: one strictly positive price
/// vector per round.
struct BudgetSet {
    std::vector<std::vector<double>> prices;

    int rounds() const { return static_cast<int>(prices.size()); }
    int states() const { return prices.empty() ? 0 : static_cast<int>(prices.front().size()); }

    /// Budgets of an existing dataset, prices rescaled to unit income.
    static BudgetSet from_dataset(const Dataset& d);

    /// K random 2-state budgets with log price ratio uniform on
    /// [-log(ratio_cap), log(ratio_cap)].
    static BudgetSet random_two_state(int K, double ratio_cap, std::uint64_t seed);

    void validate() const;
};

/// Uniformly random chooser: expenditure shares drawn uniformly on the
/// budget line (Dirichlet shares for S > 2). Deterministic per seed.
Dataset bronars_subject(const BudgetSet& b, std::uint64_t seed,
                        const std::string& subject_id = "bronars");

/// Exact constant-relative-risk-aversion maximizer: x_s proportional to
/// (p_s / mu_s)^(-1/gamma), scaled to exhaust the budget.
Dataset crra_subject(const BudgetSet& b, double gamma, const ObjectiveBelief& mu,
                     const std::string& subject_id = "crra");

/// CRRA maximizer that chooses against prices perturbed by i.i.d.
/// log-normal(-xi2/2, xi2) noise; the recorded dataset keeps the true
/// prices. xi2 = 0 reduces to crra_subject.
Dataset perturbed_eu_subject(const BudgetSet& b, double gamma, const ObjectiveBelief& mu,
                             double xi2, std::uint64_t seed,
                             const std::string& subject_id = "perturbed");

}  // namespace eustar
