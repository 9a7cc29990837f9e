#include "eustar/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace eustar {

namespace {

void require_two_state_uniform(const Dataset& d, const char* op) {
    if (d.states() != 2 || !d.belief().is_uniform()) {
        throw ArgumentError(std::string(op) +
                            " is defined for 2 equally likely states only");
    }
}

// Fractional (average) ranks, 1-based.
std::vector<double> average_ranks(const std::vector<double>& v) {
    const size_t n = v.size();
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(n, 0.0);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (size_t h = i; h <= j; ++h) rank[idx[h]] = r;
        i = j + 1;
    }
    return rank;
}

bool is_constant(const std::vector<double>& v) {
    return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

// Log series with the 0.1%-of-income corner substitution.
void dsd_series(const Dataset& d, std::vector<double>& lp, std::vector<double>& lx) {
    const int K = d.num_observations();
    lp.resize(static_cast<size_t>(K));
    lx.resize(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) {
        double x1 = d.quantity(k, 0);
        double x2 = d.quantity(k, 1);
        const double nudge = 0.001 * d.income(k);
        if (x1 == 0.0) x1 = nudge;
        if (x2 == 0.0) x2 = nudge;
        lp[static_cast<size_t>(k)] = std::log(d.price(k, 1) / d.price(k, 0));
        lx[static_cast<size_t>(k)] = std::log(x2 / x1);
    }
}

}  // namespace

std::pair<int, double> fosd_violations(const Dataset& d) {
    require_two_state_uniform(d, "fosd_violations");
    int count = 0;
    for (int k = 0; k < d.num_observations(); ++k) {
        const double p1 = d.price(k, 0), p2 = d.price(k, 1);
        const double x1 = d.quantity(k, 0), x2 = d.quantity(k, 1);
        if ((p1 > p2 && x1 > x2) || (p2 > p1 && x2 > x1)) ++count;
    }
    return {count, static_cast<double>(count) / d.num_observations()};
}

std::optional<double> dsd_correlation(const Dataset& d) {
    if (d.states() != 2) throw ArgumentError("dsd_correlation is defined for 2 states only");
    std::vector<double> lp, lx;
    dsd_series(d, lp, lx);
    if (is_constant(lp) || is_constant(lx)) return std::nullopt;

    const std::vector<double> rp = average_ranks(lp);
    const std::vector<double> rx = average_ranks(lx);
    const size_t n = rp.size();
    double mp = 0.0, mx = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mp += rp[i];
        mx += rx[i];
    }
    mp /= static_cast<double>(n);
    mx /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (rp[i] - mp) * (rx[i] - mx);
        sxx += (rp[i] - mp) * (rp[i] - mp);
        syy += (rx[i] - mx) * (rx[i] - mx);
    }
    return sxy / std::sqrt(sxx * syy);
}

std::string dsd_scatter_csv(const Dataset& d) {
    std::vector<double> lp, lx;
    dsd_series(d, lp, lx);
    std::ostringstream os;
    os << "subject,trial,log_price_ratio,log_quantity_ratio\n";
    os.precision(17);
    for (size_t k = 0; k < lp.size(); ++k) {
        os << d.subject_id() << ',' << (k + 1) << ',' << lp[k] << ',' << lx[k] << '\n';
    }
    return os.str();
}

bool almost_diagonal(const Dataset& d, double r) {
    if (d.states() != 2) throw ArgumentError("almost_diagonal is defined for 2 states only");
    if (!(r > 0.0)) throw ArgumentError("radius must be positive");
    for (int k = 0; k < d.num_observations(); ++k) {
        const double mid = d.income(k) / (d.price(k, 0) + d.price(k, 1));
        const double dx = d.quantity(k, 0) - mid;
        const double dy = d.quantity(k, 1) - mid;
        if (std::hypot(dx, dy) > r) return false;
    }
    return true;
}

double e_upper_bound(const Dataset& d) {
    const RiskNeutralPrices rho = risk_neutral_prices(d);
    double worst = 1.0;
    for (int k = 0; k < rho.K; ++k) {
        double mn = rho(k, 0), mx = rho(k, 0);
        for (int s = 1; s < rho.S; ++s) {
            mn = std::min(mn, rho(k, s));
            mx = std::max(mx, rho(k, s));
        }
        worst = std::max(worst, mx / mn);
    }
    return worst - 1.0;
}

}  // namespace eustar
