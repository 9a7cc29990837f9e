#pragma once

#include <vector>

#include "eustar/dataset.hpp"

namespace eustar {

struct DropResult {
    double e = 0.0;
    std::vector<int> dropped;  // sorted observation indices
};

/// Minimal e over all C(K, m) subsets of K - m observations. Subsets are
/// visited in lexicographic order of the dropped index set; ties keep the
/// lexicographically smallest dropped set. m = 0 returns the full solve.
DropResult drop_m_min_e(const Dataset& d, int m, double tau = 0.0, int threads = 0);

/// Mean |log epsilon| needed to rationalize the data (delegates to the
/// average-perturbation program).
double average_perturbation(const Dataset& d, double tau = 0.0);

struct RobustnessRow {
    double e_full = 0.0;
    double e_drop1 = 0.0;
    double e_drop2 = 0.0;
    std::vector<int> dropped1, dropped2;
    double e_bar = 0.0;
};

RobustnessRow robustness_row(const Dataset& d, double tau = 0.0, int threads = 0);

}  // namespace eustar
