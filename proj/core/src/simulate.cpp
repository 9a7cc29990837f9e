#include "eustar/simulate.hpp"

#include <cmath>

#include "eustar/rng.hpp"

namespace eustar {

void BudgetSet::validate() const {
    if (prices.empty()) throw ValidationError("budget set is empty");
    const size_t S = prices.front().size();
    if (S < 2) throw ValidationError("budgets need at least 2 states");
    for (const auto& p : prices) {
        if (p.size() != S) throw ValidationError("budget state counts differ");
        for (double v : p) {
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw ValidationError("budget prices must be strictly positive");
            }
        }
    }
}

BudgetSet BudgetSet::from_dataset(const Dataset& d) {
    BudgetSet b;
    b.prices.reserve(static_cast<size_t>(d.num_observations()));
    for (int k = 0; k < d.num_observations(); ++k) {
        const double I = d.income(k);
        std::vector<double> p = d.observation(k).prices;
        for (double& v : p) v /= I;
        b.prices.push_back(std::move(p));
    }
    return b;
}

BudgetSet BudgetSet::random_two_state(int K, double ratio_cap, std::uint64_t seed) {
    if (K < 1) throw ArgumentError("need at least one budget");
    if (!(ratio_cap > 1.0)) throw ArgumentError("ratio cap must exceed 1");
    CounterRng rng(seed, 0x6275646765747300ULL);
    BudgetSet b;
    b.prices.reserve(static_cast<size_t>(K));
    const double span = std::log(ratio_cap);
    for (int k = 0; k < K; ++k) {
        const double lr = (2.0 * rng.next_uniform() - 1.0) * span;  // log(p2/p1)
        b.prices.push_back({1.0, std::exp(lr)});
    }
    b.validate();
    return b;
}

Dataset bronars_subject(const BudgetSet& b, std::uint64_t seed, const std::string& subject_id) {
    b.validate();
    const int S = b.states();
    std::vector<Observation> obs;
    obs.reserve(static_cast<size_t>(b.rounds()));
    for (int k = 0; k < b.rounds(); ++k) {
        CounterRng rng(seed, static_cast<std::uint64_t>(k));
        const auto& p = b.prices[static_cast<size_t>(k)];
        std::vector<double> share(static_cast<size_t>(S));
        if (S == 2) {
            const double w = rng.next_uniform();
            share = {w, 1.0 - w};
        } else {
            // Dirichlet(1,...,1) via normalized exponentials.
            double total = 0.0;
            for (int s = 0; s < S; ++s) {
                share[static_cast<size_t>(s)] = -std::log(rng.next_uniform());
                total += share[static_cast<size_t>(s)];
            }
            for (double& w : share) w /= total;
        }
        Observation o;
        o.prices = p;
        o.quantities.resize(static_cast<size_t>(S));
        for (int s = 0; s < S; ++s) {
            o.quantities[static_cast<size_t>(s)] =
                share[static_cast<size_t>(s)] / p[static_cast<size_t>(s)];
        }
        obs.push_back(std::move(o));
    }
    return Dataset(subject_id, std::move(obs), ObjectiveBelief::uniform(S));
}

namespace {

Observation crra_choice(const std::vector<double>& true_prices,
                        const std::vector<double>& perceived_prices, double gamma,
                        const ObjectiveBelief& mu) {
    const int S = static_cast<int>(true_prices.size());
    // First-order condition against the perceived prices: x_s proportional
    // to rho_s^(-1/gamma) with rho_s = q_s/mu_s, spending the unit income.
    std::vector<double> raw(static_cast<size_t>(S));
    double spend = 0.0;
    for (int s = 0; s < S; ++s) {
        const double rho = perceived_prices[static_cast<size_t>(s)] / mu[s];
        raw[static_cast<size_t>(s)] = std::pow(rho, -1.0 / gamma);
        spend += perceived_prices[static_cast<size_t>(s)] * raw[static_cast<size_t>(s)];
    }
    Observation o;
    o.prices = true_prices;
    o.quantities.resize(static_cast<size_t>(S));
    for (int s = 0; s < S; ++s) {
        o.quantities[static_cast<size_t>(s)] = raw[static_cast<size_t>(s)] / spend;
    }
    return o;
}

}  // namespace

Dataset crra_subject(const BudgetSet& b, double gamma, const ObjectiveBelief& mu,
                     const std::string& subject_id) {
    b.validate();
    if (!(gamma > 0.0)) throw ArgumentError("gamma must be positive");
    if (mu.states() != b.states()) throw ArgumentError("belief/budget state mismatch");
    std::vector<Observation> obs;
    obs.reserve(static_cast<size_t>(b.rounds()));
    for (int k = 0; k < b.rounds(); ++k) {
        const auto& p = b.prices[static_cast<size_t>(k)];
        obs.push_back(crra_choice(p, p, gamma, mu));
    }
    return Dataset(subject_id, std::move(obs), mu);
}

Dataset perturbed_eu_subject(const BudgetSet& b, double gamma, const ObjectiveBelief& mu,
                             double xi2, std::uint64_t seed, const std::string& subject_id) {
    b.validate();
    if (!(gamma > 0.0)) throw ArgumentError("gamma must be positive");
    if (xi2 < 0.0) throw ArgumentError("xi2 must be non-negative");
    if (mu.states() != b.states()) throw ArgumentError("belief/budget state mismatch");
    const int S = b.states();
    const double xi = std::sqrt(xi2);
    std::vector<Observation> obs;
    obs.reserve(static_cast<size_t>(b.rounds()));
    for (int k = 0; k < b.rounds(); ++k) {
        CounterRng rng(seed, static_cast<std::uint64_t>(k));
        const auto& p = b.prices[static_cast<size_t>(k)];
        std::vector<double> perceived(static_cast<size_t>(S));
        for (int s = 0; s < S; ++s) {
            const double eps = std::exp(-0.5 * xi2 + xi * rng.next_normal());
            perceived[static_cast<size_t>(s)] = p[static_cast<size_t>(s)] * eps;
        }
        obs.push_back(crra_choice(p, perceived, gamma, mu));
    }
    return Dataset(subject_id, std::move(obs), mu);
}

}  // namespace eustar
