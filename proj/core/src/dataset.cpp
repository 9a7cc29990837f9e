#include "eustar/dataset.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

namespace eustar {

ObjectiveBelief::ObjectiveBelief(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.size() < 2) {
        throw ValidationError("belief needs at least 2 states, got " +
                              std::to_string(probs_.size()));
    }
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p > 0.0) || !std::isfinite(p)) {
            throw ValidationError("belief entries must be strictly positive");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "belief entries sum to " << sum << ", expected 1";
        throw ValidationError(os.str());
    }
    // Snap tiny input rounding so downstream code can rely on an exact simplex.
    for (double& p : probs_) p /= sum;
}

ObjectiveBelief ObjectiveBelief::uniform(int states) {
    return ObjectiveBelief(std::vector<double>(static_cast<size_t>(states),
                                               1.0 / static_cast<double>(states)));
}

bool ObjectiveBelief::is_uniform(double tol) const {
    const double ref = 1.0 / static_cast<double>(states());
    for (double p : probs_) {
        if (std::abs(p - ref) > tol) return false;
    }
    return true;
}

double Observation::income() const {
    double I = 0.0;
    for (size_t s = 0; s < prices.size(); ++s) I += prices[s] * quantities[s];
    return I;
}

void Observation::validate(const std::string& where) const {
    if (prices.size() != quantities.size()) {
        throw ValidationError(where + ": price/quantity dimension mismatch");
    }
    if (prices.size() < 2) {
        throw ValidationError(where + ": need at least 2 states");
    }
    for (size_t s = 0; s < prices.size(); ++s) {
        if (!(prices[s] > 0.0) || !std::isfinite(prices[s])) {
            throw ValidationError(where + ": non-positive price in state " + std::to_string(s));
        }
        if (quantities[s] < 0.0 || !std::isfinite(quantities[s])) {
            throw ValidationError(where + ": negative quantity in state " + std::to_string(s));
        }
    }
    if (!(income() > 0.0)) {
        throw ValidationError(where + ": income p.x must be positive");
    }
}

Dataset::Dataset(std::string subject_id, std::vector<Observation> observations,
                 ObjectiveBelief belief)
    : subject_id_(std::move(subject_id)),
      observations_(std::move(observations)),
      belief_(std::move(belief)) {
    if (observations_.empty()) {
        throw ValidationError("dataset " + subject_id_ + ": needs at least one observation");
    }
    for (size_t k = 0; k < observations_.size(); ++k) {
        const std::string where = "subject " + subject_id_ + " obs " + std::to_string(k);
        observations_[k].validate(where);
        if (observations_[k].states() != belief_.states()) {
            throw ValidationError(where + ": state count differs from belief");
        }
    }
}

Dataset Dataset::subset(const std::vector<int>& keep) const {
    std::vector<Observation> obs;
    obs.reserve(keep.size());
    for (int k : keep) {
        if (k < 0 || k >= num_observations()) {
            throw ArgumentError("subset index " + std::to_string(k) + " out of range");
        }
        obs.push_back(observations_[static_cast<size_t>(k)]);
    }
    return Dataset(subject_id_, std::move(obs), belief_);
}

Dataset Dataset::with_belief(ObjectiveBelief belief) const {
    return Dataset(subject_id_, observations_, std::move(belief));
}

RiskNeutralPrices risk_neutral_prices(const Dataset& d) {
    RiskNeutralPrices r;
    r.K = d.num_observations();
    r.S = d.states();
    r.rho.resize(static_cast<size_t>(r.K) * static_cast<size_t>(r.S));
    for (int k = 0; k < r.K; ++k) {
        for (int s = 0; s < r.S; ++s) {
            r.rho[static_cast<size_t>(k * r.S + s)] = d.price(k, s) / d.belief()[s];
        }
    }
    return r;
}

}  // namespace eustar
