#pragma once

#include <limits>
#include <string>
#include <vector>

#include "eustar/errors.hpp"

namespace eustar {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { le, eq };

enum class RowKind {
    perturbation,   // within-observation log spread vs the objective t
    belief_spread,  // cross-observation spread (subjective-belief case)
    monotonicity,   // log v ordering implied by a strict quantity comparison
    foc,            // first-order-condition equality (average-perturbation LP)
    other,
};

struct LpRow {
    std::vector<std::pair<int, double>> coef;  // sparse (variable, coefficient)
    RowSense sense = RowSense::le;
    double rhs = 0.0;
    RowKind kind = RowKind::other;
    // Provenance tags for diagnostics; -1 when not applicable.
    int k = -1, l = -1, s = -1, t = -1;
};

struct LpVar {
    std::string name;
    double lower = -kInf;
    double upper = kInf;
};

/// A linear program in log variables. Monotonicity rows are present for
/// exactly the pairs with x[k][s] > x[k'][s'] under the dataset tie rule.
/// `mono_groups`, when non-empty, lists the log-v variable indices grouped
/// by tied quantity in descending quantity order; the solver may use it to
/// replace the monotonicity rows by an equivalent chain during the solve.
/// Solutions always satisfy every stored row.
struct LogLinearProgram {
    std::vector<LpVar> vars;
    std::vector<double> objective;  // minimized
    std::vector<LpRow> rows;
    std::vector<std::vector<int>> mono_groups;

    int add_var(std::string name, double lower = -kInf, double upper = kInf, double cost = 0.0);
};

enum class SolveStatus { optimal, infeasible, unbounded };

struct SimplexResult {
    SolveStatus status = SolveStatus::optimal;
    double objective = 0.0;
    std::vector<double> x;
    std::vector<int> binding_rows;  // indices into LogLinearProgram::rows
    long iterations = 0;
};

/// Two-phase bounded-variable primal simplex. Deterministic: Dantzig
/// pricing with lowest-index tie-breaks, switching to Bland's rule on a
/// degeneracy streak. Feasibility tolerance 1e-9, optimality 1e-7.
/// Throws SolverError with residual diagnostics on non-convergence.
SimplexResult solve_program(const LogLinearProgram& lp);

/// Row activities a_i . x for diagnostics and contract checks.
std::vector<double> row_activities(const LogLinearProgram& lp, const std::vector<double>& x);

}  // namespace eustar
