#pragma once

#include <string>
#include <vector>

#include "eustar/errors.hpp"

namespace eustar {

/// Known state probabilities mu. Strictly positive, sum to 1 (within 1e-12
/// after construction; constructors renormalize inputs that are close).
class ObjectiveBelief {
public:
    explicit ObjectiveBelief(std::vector<double> probs);

    /// Uniform belief over `states` states.
    static ObjectiveBelief uniform(int states);

    int states() const { return static_cast<int>(probs_.size()); }
    double operator[](int s) const { return probs_[static_cast<size_t>(s)]; }
    const std::vector<double>& probs() const { return probs_; }

    bool is_uniform(double tol = 1e-12) const;

private:
    std::vector<double> probs_;
};

/// One purchase: state prices and the chosen state-contingent payoff.
/// Income is derived as p.x and must be positive.
struct Observation {
    std::vector<double> prices;      // > 0, one per state
    std::vector<double> quantities;  // >= 0, one per state

    int states() const { return static_cast<int>(prices.size()); }
    double income() const;

    /// Throws ValidationError if any invariant fails. `where` names the
    /// observation in error messages (e.g. "subject s1 trial 3").
    void validate(const std::string& where) const;
};

/// A subject's full dataset: K observations over a common state space
/// plus the objective belief.
class Dataset {
public:
    Dataset(std::string subject_id, std::vector<Observation> observations,
            ObjectiveBelief belief);

    const std::string& subject_id() const { return subject_id_; }
    int num_observations() const { return static_cast<int>(observations_.size()); }
    int states() const { return belief_.states(); }
    const Observation& observation(int k) const { return observations_[static_cast<size_t>(k)]; }
    const std::vector<Observation>& observations() const { return observations_; }
    const ObjectiveBelief& belief() const { return belief_; }

    double price(int k, int s) const { return observations_[static_cast<size_t>(k)].prices[static_cast<size_t>(s)]; }
    double quantity(int k, int s) const { return observations_[static_cast<size_t>(k)].quantities[static_cast<size_t>(s)]; }
    double income(int k) const { return observations_[static_cast<size_t>(k)].income(); }

    /// Dataset restricted to the given observation indices (in the given order).
    Dataset subset(const std::vector<int>& keep) const;

    /// Same observations, different belief.
    Dataset with_belief(ObjectiveBelief belief) const;

private:
    std::string subject_id_;
    std::vector<Observation> observations_;
    ObjectiveBelief belief_;
};

/// Risk-neutral prices rho[k][s] = p[k][s] / mu[s], stored row-major K x S.
struct RiskNeutralPrices {
    int K = 0;
    int S = 0;
    std::vector<double> rho;

    double operator()(int k, int s) const { return rho[static_cast<size_t>(k * S + s)]; }
};

RiskNeutralPrices risk_neutral_prices(const Dataset& d);

/// Strict quantity comparison with the tie tolerance: values closer than
/// `tau` are treated as equal. tau = 0 gives the exact comparison.
inline bool quantity_greater(double a, double b, double tau = 0.0) {
    return a > b + tau;
}

}  // namespace eustar
