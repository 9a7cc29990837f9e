#include "eustar/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

namespace eustar {

namespace {

std::vector<double> log_rho(const Dataset& d) {
    const int K = d.num_observations();
    const int S = d.states();
    std::vector<double> r(static_cast<size_t>(K) * S);
    for (int k = 0; k < K; ++k) {
        for (int s = 0; s < S; ++s) {
            r[static_cast<size_t>(k * S + s)] =
                std::log(d.price(k, s)) - std::log(d.belief()[s]);
        }
    }
    return r;
}

std::vector<double> log_p(const Dataset& d) {
    const int K = d.num_observations();
    const int S = d.states();
    std::vector<double> r(static_cast<size_t>(K) * S);
    for (int k = 0; k < K; ++k) {
        for (int s = 0; s < S; ++s) {
            r[static_cast<size_t>(k * S + s)] = std::log(d.price(k, s));
        }
    }
    return r;
}

void add_log_v_vars(LogLinearProgram& lp, int K, int S) {
    for (int k = 0; k < K; ++k) {
        for (int s = 0; s < S; ++s) {
            lp.add_var("log_v_" + std::to_string(k) + "_" + std::to_string(s));
        }
    }
}

// One row per strict quantity comparison, plus the tie-group hint that
// lets the solver collapse them to a chain (exact ties only).
void add_monotonicity(LogLinearProgram& lp, const Dataset& d, double tau) {
    const int K = d.num_observations();
    const int S = d.states();
    const int n = K * S;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            if (quantity_greater(d.quantity(a / S, a % S), d.quantity(b / S, b % S), tau)) {
                LpRow r;
                r.kind = RowKind::monotonicity;
                r.coef = {{a, 1.0}, {b, -1.0}};
                r.k = a / S;
                r.s = a % S;
                r.l = b / S;
                r.t = b % S;
                lp.rows.push_back(std::move(r));
            }
        }
    }
    if (tau != 0.0) return;
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return d.quantity(a / S, a % S) > d.quantity(b / S, b % S);
    });
    for (int e : order) {
        const double x = d.quantity(e / S, e % S);
        if (lp.mono_groups.empty() ||
            d.quantity(lp.mono_groups.back().front() / S, lp.mono_groups.back().front() % S) != x) {
            lp.mono_groups.emplace_back();
        }
        lp.mono_groups.back().push_back(e);
    }
}

}  // namespace

LogLinearProgram build_oeu_program(const Dataset& d, double tau) {
    const int K = d.num_observations();
    const int S = d.states();
    const std::vector<double> r = log_rho(d);

    LogLinearProgram lp;
    add_log_v_vars(lp, K, S);
    const int t_var = lp.add_var("t", 0.0, kInf, 1.0);

    for (int k = 0; k < K; ++k) {
        for (int s = 0; s < S; ++s) {
            for (int t = 0; t < S; ++t) {
                if (s == t) continue;
                LpRow row;
                row.kind = RowKind::perturbation;
                row.k = k;
                row.s = s;
                row.t = t;
                row.coef = {{k * S + s, 1.0}, {k * S + t, -1.0}, {t_var, -1.0}};
                row.rhs = r[static_cast<size_t>(k * S + s)] - r[static_cast<size_t>(k * S + t)];
                lp.rows.push_back(std::move(row));
            }
        }
    }
    add_monotonicity(lp, d, tau);
    return lp;
}

LogLinearProgram build_seu_program(const Dataset& d, double tau) {
    const int K = d.num_observations();
    const int S = d.states();
    const std::vector<double> P = log_p(d);

    LogLinearProgram lp;
    add_log_v_vars(lp, K, S);
    const int t_var = lp.add_var("t", 0.0, kInf, 1.0);

    for (int k = 0; k < K; ++k) {
        for (int l = k + 1; l < K; ++l) {
            for (int s = 0; s < S; ++s) {
                for (int t = 0; t < S; ++t) {
                    if (s == t) continue;
                    LpRow row;
                    row.kind = RowKind::belief_spread;
                    row.k = k;
                    row.l = l;
                    row.s = s;
                    row.t = t;
                    row.coef = {{k * S + s, -1.0},
                                {k * S + t, 1.0},
                                {l * S + s, 1.0},
                                {l * S + t, -1.0},
                                {t_var, -1.0}};
                    row.rhs = (P[static_cast<size_t>(l * S + s)] - P[static_cast<size_t>(l * S + t)]) -
                              (P[static_cast<size_t>(k * S + s)] - P[static_cast<size_t>(k * S + t)]);
                    lp.rows.push_back(std::move(row));
                }
            }
        }
    }
    add_monotonicity(lp, d, tau);
    return lp;
}

LogLinearProgram build_avg_perturbation_program(const Dataset& d, double tau) {
    const int K = d.num_observations();
    const int S = d.states();
    const int n = K * S;

    LogLinearProgram lp;
    add_log_v_vars(lp, K, S);
    std::vector<int> lambda(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) {
        lambda[static_cast<size_t>(k)] = lp.add_var("log_lambda_" + std::to_string(k));
    }
    const double w = 1.0 / static_cast<double>(n);
    std::vector<int> dplus(static_cast<size_t>(n)), dminus(static_cast<size_t>(n));
    for (int e = 0; e < n; ++e) {
        dplus[static_cast<size_t>(e)] = lp.add_var("dplus_" + std::to_string(e), 0.0, kInf, w);
        dminus[static_cast<size_t>(e)] = lp.add_var("dminus_" + std::to_string(e), 0.0, kInf, w);
    }

    for (int k = 0; k < K; ++k) {
        for (int s = 0; s < S; ++s) {
            const int e = k * S + s;
            LpRow row;
            row.kind = RowKind::foc;
            row.sense = RowSense::eq;
            row.k = k;
            row.s = s;
            // delta+ - delta- - log v + log lambda = log mu - log p
            row.coef = {{dplus[static_cast<size_t>(e)], 1.0},
                        {dminus[static_cast<size_t>(e)], -1.0},
                        {e, -1.0},
                        {lambda[static_cast<size_t>(k)], 1.0}};
            row.rhs = std::log(d.belief()[s]) - std::log(d.price(k, s));
            lp.rows.push_back(std::move(row));
        }
    }
    add_monotonicity(lp, d, tau);
    return lp;
}

namespace {

PerturbationSolution finish_minimax(const Dataset& d, const LogLinearProgram& lp,
                                    bool objective_belief) {
    SimplexResult res = solve_program(lp);
    if (res.status != SolveStatus::optimal) {
        throw SolverError("minimax program did not reach an optimum");
    }
    const int K = d.num_observations();
    const int S = d.states();

    PerturbationSolution sol;
    sol.iterations = res.iterations;
    sol.binding_rows = std::move(res.binding_rows);
    const double t_star = std::max(0.0, res.objective);
    sol.e_star = std::expm1(t_star);
    sol.log_v.assign(res.x.begin(), res.x.begin() + K * S);
    sol.log_lambda.resize(static_cast<size_t>(K));
    sol.epsilon.resize(static_cast<size_t>(K) * S);
    sol.beliefs.resize(static_cast<size_t>(K) * S);

    if (objective_belief) {
        // epsilon = exp(log mu + log v - log lambda - log p); lambda centers
        // each observation so that min_s eps * max_s eps = 1.
        const std::vector<double> r = log_rho(d);
        for (int k = 0; k < K; ++k) {
            double gmin = kInf, gmax = -kInf;
            for (int s = 0; s < S; ++s) {
                const double g = sol.log_v[static_cast<size_t>(k * S + s)] -
                                 r[static_cast<size_t>(k * S + s)];
                gmin = std::min(gmin, g);
                gmax = std::max(gmax, g);
            }
            const double ll = 0.5 * (gmin + gmax);
            sol.log_lambda[static_cast<size_t>(k)] = ll;
            double norm = 0.0;
            for (int s = 0; s < S; ++s) {
                const double g = sol.log_v[static_cast<size_t>(k * S + s)] -
                                 r[static_cast<size_t>(k * S + s)];
                const double eps = std::exp(g - ll);
                sol.epsilon[static_cast<size_t>(k * S + s)] = eps;
                norm += d.belief()[s] / eps;
            }
            for (int s = 0; s < S; ++s) {
                sol.beliefs[static_cast<size_t>(k * S + s)] =
                    d.belief()[s] / sol.epsilon[static_cast<size_t>(k * S + s)] / norm;
            }
        }
    } else {
        // Beliefs from the first-order condition, normalized to sum 1;
        // epsilon measured against the mean belief.
        const std::vector<double> P = log_p(d);
        std::vector<double> mean_mu(static_cast<size_t>(S), 0.0);
        for (int k = 0; k < K; ++k) {
            double mx = -kInf;
            for (int s = 0; s < S; ++s) {
                mx = std::max(mx, P[static_cast<size_t>(k * S + s)] -
                                      sol.log_v[static_cast<size_t>(k * S + s)]);
            }
            double norm = 0.0;
            for (int s = 0; s < S; ++s) {
                norm += std::exp(P[static_cast<size_t>(k * S + s)] -
                                 sol.log_v[static_cast<size_t>(k * S + s)] - mx);
            }
            sol.log_lambda[static_cast<size_t>(k)] = -(mx + std::log(norm));
            for (int s = 0; s < S; ++s) {
                const double mu = std::exp(P[static_cast<size_t>(k * S + s)] -
                                           sol.log_v[static_cast<size_t>(k * S + s)] - mx) /
                                  norm;
                sol.beliefs[static_cast<size_t>(k * S + s)] = mu;
                mean_mu[static_cast<size_t>(s)] += mu / static_cast<double>(K);
            }
        }
        for (int k = 0; k < K; ++k) {
            for (int s = 0; s < S; ++s) {
                sol.epsilon[static_cast<size_t>(k * S + s)] =
                    mean_mu[static_cast<size_t>(s)] / sol.beliefs[static_cast<size_t>(k * S + s)];
            }
        }
    }
    return sol;
}

}  // namespace

PerturbationSolution min_e_oeu(const Dataset& d, double tau) {
    return finish_minimax(d, build_oeu_program(d, tau), /*objective_belief=*/true);
}

PerturbationSolution min_e_seu(const Dataset& d, double tau) {
    return finish_minimax(d, build_seu_program(d, tau), /*objective_belief=*/false);
}

AvgPerturbationSolution min_avg_perturbation(const Dataset& d, double tau) {
    const LogLinearProgram lp = build_avg_perturbation_program(d, tau);
    SimplexResult res = solve_program(lp);
    if (res.status != SolveStatus::optimal) {
        throw SolverError("average-perturbation program did not reach an optimum");
    }
    const int K = d.num_observations();
    const int S = d.states();
    const int n = K * S;
    AvgPerturbationSolution sol;
    sol.e_bar = std::max(0.0, res.objective);
    sol.epsilon.resize(static_cast<size_t>(n));
    // delta+ and delta- follow the log-v block and the K lambdas.
    const int base = n + K;
    for (int e = 0; e < n; ++e) {
        const double delta = res.x[static_cast<size_t>(base + 2 * e)] -
                             res.x[static_cast<size_t>(base + 2 * e + 1)];
        sol.epsilon[static_cast<size_t>(e)] = std::exp(delta);
    }
    return sol;
}

Dataset recover_perturbed_dataset(const Dataset& d, const std::vector<double>& epsilon) {
    const int K = d.num_observations();
    const int S = d.states();
    if (static_cast<int>(epsilon.size()) != K * S) {
        throw ArgumentError("epsilon has wrong dimensions");
    }
    std::vector<Observation> obs;
    obs.reserve(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) {
        Observation o = d.observation(k);
        double spent = 0.0;
        for (int s = 0; s < S; ++s) {
            o.prices[static_cast<size_t>(s)] *= epsilon[static_cast<size_t>(k * S + s)];
            spent += o.prices[static_cast<size_t>(s)] * o.quantities[static_cast<size_t>(s)];
        }
        const double scale = d.income(k) / spent;
        for (int s = 0; s < S; ++s) o.prices[static_cast<size_t>(s)] *= scale;
        obs.push_back(std::move(o));
    }
    return Dataset(d.subject_id(), std::move(obs), d.belief());
}

Dataset recover_perturbed_dataset(const Dataset& d, const PerturbationSolution& sol) {
    return recover_perturbed_dataset(d, sol.epsilon);
}

Dataset recover_perturbed_dataset(const Dataset& d, const AvgPerturbationSolution& sol) {
    return recover_perturbed_dataset(d, sol.epsilon);
}

std::string solution_to_json(const PerturbationSolution& sol, int K, int S) {
    nlohmann::json j;
    j["e_star"] = sol.e_star;
    j["iterations"] = sol.iterations;
    auto matrix = [&](const std::vector<double>& v) {
        nlohmann::json rows = nlohmann::json::array();
        for (int k = 0; k < K; ++k) {
            nlohmann::json row = nlohmann::json::array();
            for (int s = 0; s < S; ++s) row.push_back(v[static_cast<size_t>(k * S + s)]);
            rows.push_back(std::move(row));
        }
        return rows;
    };
    j["log_v"] = matrix(sol.log_v);
    j["epsilon"] = matrix(sol.epsilon);
    j["beliefs"] = matrix(sol.beliefs);
    j["log_lambda"] = sol.log_lambda;
    j["binding_rows"] = sol.binding_rows;
    return j.dump();
}

}  // namespace eustar
