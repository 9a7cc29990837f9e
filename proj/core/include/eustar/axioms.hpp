#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eustar/dataset.hpp"

namespace eustar {

/// Which revealed-preference axiom family a check runs against.
///  - oeu: ratio products of risk-neutral prices, observation-balanced
///    sequences.
///  - seu: ratio products of raw prices, observation- and state-balanced
///    sequences.
enum class AxiomKind { oeu, seu };

/// One comparison pair: consumption entry (k,s) strictly exceeds (k2,s2).
struct SequencePair {
    int k, s, k2, s2;
    friend bool operator==(const SequencePair&, const SequencePair&) = default;
};

/// An ordered list of comparison pairs. Valid test sequences satisfy
///   (i)  x[k][s] > x[k2][s2] for every pair, and
///   (ii) every observation appears on the left exactly as often as on
///        the right.
struct TestSequence {
    std::vector<SequencePair> pairs;
};

/// Net occurrence counts of a sequence: d[(k,s)] = #left - #right, and
/// m = sum of the positive d values.
struct SequenceStats {
    std::map<std::pair<int, int>, int> d;
    int m = 0;
};

/// Counts net occurrences and validates conditions (i) and (ii).
/// Throws ValidationError on an invalid sequence.
SequenceStats sequence_stats(const TestSequence& seq, const Dataset& d, double tau = 0.0);

/// A violating sequence: lhs is the ratio product, bound is (1+e)^m.
struct AxiomWitness {
    TestSequence sequence;
    double lhs = 0.0;
    double bound = 0.0;
};

std::string witness_to_json(const AxiomWitness& w);

/// Streams every test sequence of length <= max_len, each multiset of
/// pairs exactly once in canonical (sorted) pair order. With
/// balanced_states, only sequences where each state appears on the left
/// as often as on the right are emitted. The consumer returns false to
/// stop early.
void enumerate_test_sequences(const Dataset& d, int max_len, bool balanced_states,
                              const std::function<bool(const TestSequence&)>& consumer,
                              double tau = 0.0);

/// Checks the perturbed axiom at level e over sequences of length
/// <= max_len. Returns the most-violating witness (largest normalized
/// ratio), or nullopt when the axiom holds up to max_len. Near-boundary
/// products are re-verified in exact rational arithmetic.
std::optional<AxiomWitness> check_axiom(const Dataset& d, AxiomKind kind, double e,
                                        int max_len = -1, double tau = 0.0);

/// Smallest e' >= 0 such that no enumerated sequence of length <= max_len
/// violates the e'-perturbed axiom: the max over sequences with m > 0 of
/// (ratio product)^(1/m) - 1, floored at 0. Sequences with m = 0 have
/// ratio product exactly 1 and are skipped.
///
/// Brute force for desk-scale instances. max_len = -1 selects
/// K*S*(S-1) capped at 12 pairs; the cap makes large instances
/// non-exhaustive (pair with `oracle_max_len_capped` to warn).
double oracle_min_e(const Dataset& d, AxiomKind kind, int max_len = -1, double tau = 0.0);

int default_oracle_max_len(const Dataset& d);
bool oracle_max_len_capped(const Dataset& d);

}  // namespace eustar
