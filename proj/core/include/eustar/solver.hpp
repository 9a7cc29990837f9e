#pragma once

#include <string>
#include <vector>

#include "eustar/dataset.hpp"
#include "eustar/lp.hpp"

namespace eustar {

/// Optimal perturbation bundle for one subject. epsilon and beliefs are
/// stored row-major K x S; log_lambda has one entry per observation.
struct PerturbationSolution {
    double e_star = 0.0;
    std::vector<double> log_v;       // K*S log marginal-utility candidates
    std::vector<double> log_lambda;  // K multipliers
    std::vector<double> epsilon;     // K*S price perturbations
    std::vector<double> beliefs;     // K*S per-observation beliefs, sum 1 per k
    std::vector<int> binding_rows;   // indices into the solved program's rows
    long iterations = 0;
};

struct AvgPerturbationSolution {
    double e_bar = 0.0;
    std::vector<double> epsilon;  // K*S
};

/// Program for the minimax objective-belief problem: minimize t over log v
/// subject to, per observation and ordered state pair (s,t),
///   (log mu_s + log v_ks - log p_ks) - (log mu_t + log v_kt - log p_kt) <= t
/// plus a monotonicity row per strict quantity comparison.
LogLinearProgram build_oeu_program(const Dataset& d, double tau = 0.0);

/// Program for the subjective-belief problem: the multipliers cancel, so
/// per quadruple (k, l, s, t) the spread row is
///   [(log p_ks - log v_ks) - (log p_kt - log v_kt)]
/// - [(log p_ls - log v_ls) - (log p_lt - log v_lt)] <= t.
LogLinearProgram build_seu_program(const Dataset& d, double tau = 0.0);

/// Program for the mean absolute log perturbation: split variables
/// delta+ and delta- with the first-order-condition equalities
///   delta+ - delta- = log mu_s + log v_ks - log lambda_k - log p_ks.
LogLinearProgram build_avg_perturbation_program(const Dataset& d, double tau = 0.0);

/// Smallest e such that the dataset is e-perturbed rational against the
/// objective belief. Recovers epsilon (geometrically centered per
/// observation, min*max = 1) and the implied per-observation beliefs.
PerturbationSolution min_e_oeu(const Dataset& d, double tau = 0.0);

/// Subjective counterpart: beliefs are free, bounded in cross-observation
/// spread. epsilon is recovered against the mean belief.
PerturbationSolution min_e_seu(const Dataset& d, double tau = 0.0);

/// Minimal mean |log epsilon| subject to the perturbed dataset being
/// rationalizable.
AvgPerturbationSolution min_avg_perturbation(const Dataset& d, double tau = 0.0);

/// Applies a recovered perturbation to the prices, rescaled per
/// observation so incomes are preserved. The result satisfies the
/// objective-belief axiom at tolerance 1e-9.
Dataset recover_perturbed_dataset(const Dataset& d, const std::vector<double>& epsilon);
Dataset recover_perturbed_dataset(const Dataset& d, const PerturbationSolution& sol);
Dataset recover_perturbed_dataset(const Dataset& d, const AvgPerturbationSolution& sol);

std::string solution_to_json(const PerturbationSolution& sol, int K, int S);

}  // namespace eustar
