#include "support/test_oracles.hpp"

#include <cmath>
#include <vector>

namespace eustar::testing {

namespace {

// Regularized lower incomplete gamma P(a, x), series + continued fraction.
double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    // Continued fraction for Q(a, x) (modified Lentz).
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double dd = 1.0 / b;
    double h = dd;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        dd = an * dd + b;
        if (std::abs(dd) < tiny) dd = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        dd = 1.0 / dd;
        const double del = dd * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    const double q = std::exp(-x + a * std::log(x) - lg) * h;
    return 1.0 - q;
}

}  // namespace

double chi2_quantile_oracle(double p, int dof) {
    const double a = 0.5 * static_cast<double>(dof);
    auto cdf = [&](double x) { return gamma_p(a, 0.5 * x); };
    double lo = 0.0, hi = 1.0;
    while (cdf(hi) < p) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double normal_quantile_oracle(double p) {
    auto cdf = [](double x) { return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0))); };
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

bool saroeu_holds_floyd(const Dataset& d, double tau) {
    const int K = d.num_observations();
    const int S = d.states();
    const int n = K * S;
    const double inf = 1e100;
    std::vector<double> w(static_cast<size_t>(n) * n, inf);
    auto at = [&](int i, int j) -> double& { return w[static_cast<size_t>(i) * n + j]; };
    for (int i = 0; i < n; ++i) at(i, i) = 0.0;
    // Difference constraint y_a - y_b <= c gives edge b -> a of weight c.
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            if (a / S == b / S) {
                const double ra = std::log(d.price(a / S, a % S) / d.belief()[a % S]);
                const double rb = std::log(d.price(b / S, b % S) / d.belief()[b % S]);
                at(b, a) = std::min(at(b, a), ra - rb);
            }
            if (quantity_greater(d.quantity(a / S, a % S), d.quantity(b / S, b % S), tau)) {
                at(b, a) = std::min(at(b, a), 0.0);
            }
        }
    }
    for (int h = 0; h < n; ++h) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                at(i, j) = std::min(at(i, j), at(i, h) + at(h, j));
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (at(i, i) < -1e-9) return false;
    }
    return true;
}

double uniform01(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

Dataset random_dataset(std::mt19937_64& rng, int K, int S, const std::string& id) {
    const double span = std::log(5.0);
    std::vector<Observation> obs;
    obs.reserve(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) {
        Observation o;
        o.prices.resize(static_cast<size_t>(S));
        o.quantities.resize(static_cast<size_t>(S));
        for (int s = 0; s < S; ++s) {
            o.prices[static_cast<size_t>(s)] = std::exp((2.0 * uniform01(rng) - 1.0) * span);
        }
        std::vector<double> share(static_cast<size_t>(S));
        double total = 0.0;
        for (int s = 0; s < S; ++s) {
            share[static_cast<size_t>(s)] = -std::log(uniform01(rng));
            total += share[static_cast<size_t>(s)];
        }
        for (int s = 0; s < S; ++s) {
            o.quantities[static_cast<size_t>(s)] =
                share[static_cast<size_t>(s)] / total / o.prices[static_cast<size_t>(s)];
        }
        obs.push_back(std::move(o));
    }
    return Dataset(id, std::move(obs), ObjectiveBelief::uniform(S));
}

}  // namespace eustar::testing
