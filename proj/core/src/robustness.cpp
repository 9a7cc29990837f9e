#include "eustar/robustness.hpp"

#include <algorithm>

#include "eustar/parallel.hpp"
#include "eustar/solver.hpp"

namespace eustar {

namespace {

// All m-element subsets of {0..K-1} in lexicographic order.
std::vector<std::vector<int>> combinations(int K, int m) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) cur[static_cast<size_t>(i)] = i;
    if (m == 0) {
        out.push_back({});
        return out;
    }
    while (true) {
        out.push_back(cur);
        int i = m - 1;
        while (i >= 0 && cur[static_cast<size_t>(i)] == K - m + i) --i;
        if (i < 0) break;
        ++cur[static_cast<size_t>(i)];
        for (int j = i + 1; j < m; ++j) {
            cur[static_cast<size_t>(j)] = cur[static_cast<size_t>(j - 1)] + 1;
        }
    }
    return out;
}

}  // namespace

DropResult drop_m_min_e(const Dataset& d, int m, double tau, int threads) {
    const int K = d.num_observations();
    if (m < 0 || m >= K) {
        throw ArgumentError("drop count m must satisfy 0 <= m < K");
    }
    const auto drops = combinations(K, m);
    std::vector<double> e(drops.size());
    parallel_for(static_cast<int>(drops.size()), [&](int i) {
        const auto& dropped = drops[static_cast<size_t>(i)];
        std::vector<int> keep;
        keep.reserve(static_cast<size_t>(K - m));
        size_t di = 0;
        for (int k = 0; k < K; ++k) {
            if (di < dropped.size() && dropped[di] == k) {
                ++di;
            } else {
                keep.push_back(k);
            }
        }
        e[static_cast<size_t>(i)] = min_e_oeu(d.subset(keep), tau).e_star;
    }, threads);

    // Deterministic fold: strict improvement only, so the first (lexico
    // smallest) dropped set wins ties.
    DropResult best;
    best.e = e[0];
    best.dropped = drops[0];
    for (size_t i = 1; i < drops.size(); ++i) {
        if (e[i] < best.e) {
            best.e = e[i];
            best.dropped = drops[i];
        }
    }
    return best;
}

double average_perturbation(const Dataset& d, double tau) {
    return min_avg_perturbation(d, tau).e_bar;
}

RobustnessRow robustness_row(const Dataset& d, double tau, int threads) {
    RobustnessRow row;
    row.e_full = min_e_oeu(d, tau).e_star;
    if (d.num_observations() >= 2) {
        auto d1 = drop_m_min_e(d, 1, tau, threads);
        row.e_drop1 = d1.e;
        row.dropped1 = std::move(d1.dropped);
    } else {
        row.e_drop1 = row.e_full;
    }
    if (d.num_observations() >= 3) {
        auto d2 = drop_m_min_e(d, 2, tau, threads);
        row.e_drop2 = d2.e;
        row.dropped2 = std::move(d2.dropped);
    } else {
        row.e_drop2 = row.e_drop1;
    }
    row.e_bar = average_perturbation(d, tau);
    return row;
}

}  // namespace eustar
