#pragma once

#include <vector>

#include "eustar/dataset.hpp"

namespace eustar {

/// Revealed-preference relations at a budget efficiency level e:
///   weak:   e * I^k >= p^k . x^l
///   strict: e * I^k >  p^k . x^l
/// closure is the transitive closure of weak.
struct RevealedRelation {
    int K = 0;
    std::vector<char> weak, strict, closure;  // K x K, row-major

    bool weak_at(int k, int l) const { return weak[static_cast<size_t>(k * K + l)] != 0; }
    bool strict_at(int k, int l) const { return strict[static_cast<size_t>(k * K + l)] != 0; }
    bool closure_at(int k, int l) const { return closure[static_cast<size_t>(k * K + l)] != 0; }
};

RevealedRelation revealed_relation(const Dataset& d, double efficiency);

/// GARP at efficiency level e: no pair (k,l) with k revealed preferred to
/// l (transitively, weakly) while l is strictly directly revealed
/// preferred to k.
bool garp_holds(const Dataset& d, double efficiency);

/// Critical cost efficiency index: sup of the efficiency levels at which
/// GARP holds, located by bisection to `tol`. Returns 1 when GARP holds
/// at full efficiency.
double ccei(const Dataset& d, double tol = 1e-6);

}  // namespace eustar
