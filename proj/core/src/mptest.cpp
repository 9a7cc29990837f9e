#include "eustar/mptest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <json.hpp>

#include "eustar/parallel.hpp"
#include "eustar/rng.hpp"
#include "eustar/solver.hpp"

namespace eustar {

void MPTestParams::validate() const {
    for (double v : {eta1, eta2, alpha}) {
        if (!(v > 0.0) || !(v < 1.0)) {
            throw ArgumentError("eta1, eta2 and alpha must lie in (0, 1)");
        }
    }
    if (draws < 10000) {
        throw ArgumentError("Monte Carlo draws must be at least 10000");
    }
}

double calibrate_variance_ratio(int n, double eta1, double eta2) {
    if (n < 2) throw ArgumentError("variance calibration needs n >= 2 observations");
    for (double v : {eta1, eta2}) {
        if (!(v > 0.0) || !(v < 1.0)) throw ArgumentError("eta must lie in (0, 1)");
    }
    const boost::math::chi_squared dist(n - 1);
    const double upper = boost::math::quantile(dist, 1.0 - eta1);
    const double lower = boost::math::quantile(dist, eta2);
    const double ratio = upper / lower;
    if (ratio < 1.0) {
        std::ostringstream os;
        os << "calibrated variance ratio " << ratio << " < 1; decrease eta1 + eta2 "
           << "(needs quantile(1-eta1) >= quantile(eta2))";
        throw CalibrationError(os.str());
    }
    return ratio;
}

double epsilon_variance(const Dataset& d, double sigma_ratio) {
    if (sigma_ratio < 1.0) throw ArgumentError("sigma_ratio must be >= 1");
    std::vector<double> sample;
    sample.reserve(static_cast<size_t>(d.num_observations()) * d.states());
    for (int k = 0; k < d.num_observations(); ++k) {
        const double I = d.income(k);
        for (int s = 0; s < d.states(); ++s) sample.push_back(d.price(k, s) / I);
    }
    double mean = 0.0;
    for (double v : sample) mean += v;
    mean /= static_cast<double>(sample.size());
    double var = 0.0;
    for (double v : sample) var += (v - mean) * (v - mean);
    var /= static_cast<double>(sample.size());
    if (!(var > 0.0)) {
        throw CalibrationError("price sample has zero variance; the test is undefined "
                               "for this subject");
    }
    return (sigma_ratio - 1.0) / (1.0 + mean * mean / var);
}

std::pair<double, double> lognormal_params(double var_eps) {
    if (var_eps < 0.0) throw ArgumentError("Var(eps) must be non-negative");
    const double xi2 = std::log1p(var_eps);
    return {-0.5 * xi2, xi2};
}

double critical_value(int K, int S, double xi2, double alpha, long draws, std::uint64_t seed,
                      int threads) {
    if (K < 1 || S < 2) throw ArgumentError("critical_value needs K >= 1, S >= 2");
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw ArgumentError("alpha must lie in (0, 1)");
    if (draws < 10000) throw ArgumentError("Monte Carlo draws must be at least 10000");
    if (xi2 == 0.0) return 1.0;

    const double xi = std::sqrt(xi2);
    std::vector<double> stat(static_cast<size_t>(draws));
    parallel_for(static_cast<int>(draws), [&](int i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        double worst = 0.0;
        for (int k = 0; k < K; ++k) {
            double zmin = std::numeric_limits<double>::infinity();
            double zmax = -zmin;
            for (int s = 0; s < S; ++s) {
                const double z = rng.next_normal();
                zmin = std::min(zmin, z);
                zmax = std::max(zmax, z);
            }
            worst = std::max(worst, zmax - zmin);
        }
        stat[static_cast<size_t>(i)] = std::exp(xi * worst);
    }, threads);

    std::sort(stat.begin(), stat.end());
    const double h = (static_cast<double>(draws) - 1.0) * (1.0 - alpha);
    const auto lo = static_cast<size_t>(h);
    if (lo + 1 >= stat.size()) return stat.back();
    return stat[lo] + (h - static_cast<double>(lo)) * (stat[lo + 1] - stat[lo]);
}

MPTestResult mp_test(const Dataset& d, const MPTestParams& params, double tau, int threads) {
    params.validate();
    MPTestResult r;
    r.sigma_ratio = calibrate_variance_ratio(d.num_observations(), params.eta1, params.eta2);
    r.var_eps = epsilon_variance(d, r.sigma_ratio);
    std::tie(r.nu, r.xi2) = lognormal_params(r.var_eps);
    r.c_alpha = critical_value(d.num_observations(), d.states(), r.xi2, params.alpha,
                               params.draws, params.seed, threads);
    r.statistic = 1.0 + min_e_oeu(d, tau).e_star;
    r.reject = r.statistic > r.c_alpha;
    return r;
}

std::string mp_result_to_json(const MPTestParams& params, const MPTestResult& r) {
    nlohmann::json j;
    j["params"] = {{"eta1", params.eta1}, {"eta2", params.eta2},     {"alpha", params.alpha},
                   {"draws", params.draws}, {"seed", params.seed}};
    j["sigma_ratio"] = r.sigma_ratio;
    j["var_eps"] = r.var_eps;
    j["xi2"] = r.xi2;
    j["nu"] = r.nu;
    j["c_alpha"] = r.c_alpha;
    j["statistic"] = r.statistic;
    j["reject"] = r.reject;
    return j.dump(2);
}

}  // namespace eustar
