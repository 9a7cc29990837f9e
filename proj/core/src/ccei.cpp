#include "eustar/ccei.hpp"

#include <cmath>

namespace eustar {

RevealedRelation revealed_relation(const Dataset& d, double efficiency) {
    if (!(efficiency > 0.0) || efficiency > 1.0) {
        throw ArgumentError("efficiency must lie in (0, 1]");
    }
    const int K = d.num_observations();
    RevealedRelation r;
    r.K = K;
    r.weak.assign(static_cast<size_t>(K) * K, 0);
    r.strict.assign(static_cast<size_t>(K) * K, 0);
    for (int k = 0; k < K; ++k) {
        const double budget = efficiency * d.income(k);
        for (int l = 0; l < K; ++l) {
            double cost = 0.0;
            for (int s = 0; s < d.states(); ++s) cost += d.price(k, s) * d.quantity(l, s);
            r.weak[static_cast<size_t>(k * K + l)] = budget >= cost;
            r.strict[static_cast<size_t>(k * K + l)] = budget > cost;
        }
    }
    // Transitive closure by iterated boolean squaring.
    r.closure = r.weak;
    for (int step = 1; step < K; step *= 2) {
        std::vector<char> next = r.closure;
        for (int i = 0; i < K; ++i) {
            for (int j = 0; j < K; ++j) {
                if (next[static_cast<size_t>(i * K + j)]) continue;
                for (int h = 0; h < K; ++h) {
                    if (r.closure[static_cast<size_t>(i * K + h)] &&
                        r.closure[static_cast<size_t>(h * K + j)]) {
                        next[static_cast<size_t>(i * K + j)] = 1;
                        break;
                    }
                }
            }
        }
        if (next == r.closure) break;
        r.closure = std::move(next);
    }
    return r;
}

bool garp_holds(const Dataset& d, double efficiency) {
    const RevealedRelation r = revealed_relation(d, efficiency);
    for (int k = 0; k < r.K; ++k) {
        for (int l = 0; l < r.K; ++l) {
            if (r.closure_at(k, l) && r.strict_at(l, k)) return false;
        }
    }
    return true;
}

double ccei(const Dataset& d, double tol) {
    if (!(tol > 0.0)) throw ArgumentError("ccei tolerance must be positive");
    if (garp_holds(d, 1.0)) return 1.0;
    // A strict GARP violation needs a nonzero budget, so GARP always holds
    // for small enough efficiency: every p^k . x^l is positive.
    double lo = 0.0;
    double hi = 1.0;
    // Tighten the lower end before bisecting.
    for (double e : {0.5, 0.25, 0.125}) {
        if (garp_holds(d, e)) {
            lo = e;
            break;
        }
        hi = e;
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= 0.0 || mid >= 1.0) break;
        if (garp_holds(d, mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace eustar
