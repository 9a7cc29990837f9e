#include "eustar/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace eustar {

namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kOptTol = 1e-7;
constexpr double kPivotTol = 1e-11;

enum class VarState { basic, at_lower, at_upper, free_zero };

// Dense full-tableau bounded-variable simplex over A x = b with
// per-column bounds. Columns: structurals, then one slack per row,
// then one artificial per row.
class Simplex {
public:
    Simplex(const std::vector<LpVar>& vars, const std::vector<double>& cost,
            const std::vector<LpRow>& rows)
        : n_(static_cast<int>(vars.size())), m_(static_cast<int>(rows.size())) {
        ncols_ = n_ + 2 * m_;
        lower_.assign(static_cast<size_t>(ncols_), 0.0);
        upper_.assign(static_cast<size_t>(ncols_), kInf);
        cost_.assign(static_cast<size_t>(ncols_), 0.0);
        for (int j = 0; j < n_; ++j) {
            lower_[static_cast<size_t>(j)] = vars[static_cast<size_t>(j)].lower;
            upper_[static_cast<size_t>(j)] = vars[static_cast<size_t>(j)].upper;
            cost_[static_cast<size_t>(j)] = cost[static_cast<size_t>(j)];
        }
        for (int i = 0; i < m_; ++i) {
            const int sj = n_ + i;
            lower_[static_cast<size_t>(sj)] = 0.0;
            upper_[static_cast<size_t>(sj)] = rows[static_cast<size_t>(i)].sense == RowSense::le
                                                  ? kInf
                                                  : 0.0;
        }
        tab_.assign(static_cast<size_t>(m_) * ncols_, 0.0);
        b_.assign(static_cast<size_t>(m_), 0.0);
        for (int i = 0; i < m_; ++i) {
            for (const auto& [j, a] : rows[static_cast<size_t>(i)].coef) {
                at(i, j) += a;
            }
            at(i, n_ + i) = 1.0;
            b_[static_cast<size_t>(i)] = rows[static_cast<size_t>(i)].rhs;
        }
    }

    SolveStatus run(long* iterations_out) {
        init_start_point();
        // Phase I: minimize the artificial sum.
        std::vector<double> phase1(static_cast<size_t>(ncols_), 0.0);
        for (int i = 0; i < m_; ++i) phase1[static_cast<size_t>(n_ + m_ + i)] = 1.0;
        SolveStatus st = optimize(phase1);
        if (st != SolveStatus::optimal) return st;
        double art_sum = 0.0;
        for (int i = 0; i < m_; ++i) {
            const int aj = n_ + m_ + i;
            art_sum += std::abs(value_of(aj));
        }
        if (art_sum > kFeasTol * (1.0 + bscale_)) return SolveStatus::infeasible;
        lock_artificials();
        st = optimize(cost_);
        if (iterations_out) *iterations_out = iterations_;
        return st;
    }

    double value_of(int j) const {
        if (state_[static_cast<size_t>(j)] == VarState::basic) {
            return xb_[static_cast<size_t>(row_of_[static_cast<size_t>(j)])];
        }
        return nb_value(j);
    }

    std::vector<double> solution() const {
        std::vector<double> x(static_cast<size_t>(n_));
        for (int j = 0; j < n_; ++j) x[static_cast<size_t>(j)] = value_of(j);
        return x;
    }

    long iterations() const { return iterations_; }

private:
    double& at(int i, int j) { return tab_[static_cast<size_t>(i) * ncols_ + j]; }
    double at(int i, int j) const { return tab_[static_cast<size_t>(i) * ncols_ + j]; }

    double nb_value(int j) const {
        switch (state_[static_cast<size_t>(j)]) {
            case VarState::at_lower: return lower_[static_cast<size_t>(j)];
            case VarState::at_upper: return upper_[static_cast<size_t>(j)];
            default: return 0.0;
        }
    }

    void init_start_point() {
        state_.assign(static_cast<size_t>(ncols_), VarState::at_lower);
        for (int j = 0; j < n_ + m_; ++j) {
            const double lo = lower_[static_cast<size_t>(j)];
            const double up = upper_[static_cast<size_t>(j)];
            if (std::isfinite(lo)) {
                state_[static_cast<size_t>(j)] = VarState::at_lower;
            } else if (std::isfinite(up)) {
                state_[static_cast<size_t>(j)] = VarState::at_upper;
            } else {
                state_[static_cast<size_t>(j)] = VarState::free_zero;
            }
        }
        // Residuals at the nonbasic point decide the artificial signs.
        std::vector<double> resid = b_;
        bscale_ = 0.0;
        for (double v : b_) bscale_ = std::max(bscale_, std::abs(v));
        for (int j = 0; j < n_ + m_; ++j) {
            const double v = nb_value(j);
            if (v == 0.0) continue;
            for (int i = 0; i < m_; ++i) resid[static_cast<size_t>(i)] -= at(i, j) * v;
        }
        basis_.resize(static_cast<size_t>(m_));
        row_of_.assign(static_cast<size_t>(ncols_), -1);
        xb_.assign(static_cast<size_t>(m_), 0.0);
        for (int i = 0; i < m_; ++i) {
            const int aj = n_ + m_ + i;
            const double sign = resid[static_cast<size_t>(i)] >= 0.0 ? 1.0 : -1.0;
            at(i, aj) = sign;
            // B = diag(sign), so scale the row to make the basis column unit.
            if (sign < 0.0) {
                for (int j = 0; j < ncols_; ++j) at(i, j) = -at(i, j);
            }
            basis_[static_cast<size_t>(i)] = aj;
            row_of_[static_cast<size_t>(aj)] = i;
            state_[static_cast<size_t>(aj)] = VarState::basic;
            xb_[static_cast<size_t>(i)] = std::abs(resid[static_cast<size_t>(i)]);
        }
        locked_.assign(static_cast<size_t>(ncols_), false);
    }

    void lock_artificials() {
        for (int i = 0; i < m_; ++i) {
            const int aj = n_ + m_ + i;
            locked_[static_cast<size_t>(aj)] = true;
            upper_[static_cast<size_t>(aj)] = 0.0;
        }
        // Degenerate-pivot any basic artificial out when a real column
        // is available; a fully dependent row keeps its artificial at 0.
        for (int i = 0; i < m_; ++i) {
            const int bj = basis_[static_cast<size_t>(i)];
            if (bj < n_ + m_) continue;
            for (int j = 0; j < n_ + m_; ++j) {
                if (state_[static_cast<size_t>(j)] == VarState::basic) continue;
                if (std::abs(at(i, j)) > 1e-8) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    void compute_zrow(const std::vector<double>& c) {
        zrow_.assign(static_cast<size_t>(ncols_), 0.0);
        for (int j = 0; j < ncols_; ++j) zrow_[static_cast<size_t>(j)] = c[static_cast<size_t>(j)];
        for (int i = 0; i < m_; ++i) {
            const double cb = c[static_cast<size_t>(basis_[static_cast<size_t>(i)])];
            if (cb == 0.0) continue;
            for (int j = 0; j < ncols_; ++j) {
                zrow_[static_cast<size_t>(j)] -= cb * at(i, j);
            }
        }
    }

    SolveStatus optimize(const std::vector<double>& c) {
        compute_zrow(c);
        const long max_iter = 20000 + 200L * (m_ + ncols_);
        int degen_streak = 0;
        bool bland = false;
        long since_refresh = 0;
        while (true) {
            if (++iterations_ > max_iter) {
                throw SolverError(diagnostics("iteration limit exceeded"));
            }
            if (++since_refresh > 500) {
                compute_zrow(c);
                since_refresh = 0;
            }
            int q = -1, dir = 0;
            double best = kOptTol;
            for (int j = 0; j < ncols_; ++j) {
                if (state_[static_cast<size_t>(j)] == VarState::basic ||
                    locked_[static_cast<size_t>(j)]) {
                    continue;
                }
                const double d = zrow_[static_cast<size_t>(j)];
                double viol = 0.0;
                int cand_dir = 0;
                switch (state_[static_cast<size_t>(j)]) {
                    case VarState::at_lower:
                        if (d < -kOptTol) { viol = -d; cand_dir = +1; }
                        break;
                    case VarState::at_upper:
                        if (d > kOptTol) { viol = d; cand_dir = -1; }
                        break;
                    case VarState::free_zero:
                        if (std::abs(d) > kOptTol) { viol = std::abs(d); cand_dir = d < 0 ? +1 : -1; }
                        break;
                    default: break;
                }
                if (cand_dir == 0) continue;
                if (bland) { q = j; dir = cand_dir; break; }
                if (viol > best) { best = viol; q = j; dir = cand_dir; }
            }
            if (q < 0) return SolveStatus::optimal;

            // Ratio test: largest step delta >= 0 moving x_q by dir*delta.
            double flip_cap = upper_[static_cast<size_t>(q)] - lower_[static_cast<size_t>(q)];
            if (!std::isfinite(flip_cap)) flip_cap = kInf;
            double delta = flip_cap;
            int leave = -1;
            for (int i = 0; i < m_; ++i) {
                const double alpha = at(i, q);
                if (std::abs(alpha) <= kPivotTol) continue;
                const double rate = -dir * alpha;  // d xB_i / d delta
                const int bj = basis_[static_cast<size_t>(i)];
                double room;
                if (rate < 0.0) {
                    const double lo = lower_[static_cast<size_t>(bj)];
                    if (!std::isfinite(lo)) continue;
                    room = (xb_[static_cast<size_t>(i)] - lo) / (-rate);
                } else {
                    const double up = upper_[static_cast<size_t>(bj)];
                    if (!std::isfinite(up)) continue;
                    room = (up - xb_[static_cast<size_t>(i)]) / rate;
                }
                if (room < 0.0) room = 0.0;
                if (room < delta - 1e-12) {
                    delta = room;
                    leave = i;
                } else if (leave >= 0 && room <= delta + 1e-12) {
                    // Deterministic tie-break: bigger pivot, then lower basis index.
                    const double cur = std::abs(at(leave, q));
                    if (std::abs(alpha) > cur + 1e-12 ||
                        (std::abs(alpha) >= cur - 1e-12 &&
                         basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(leave)])) {
                        delta = std::min(delta, room);
                        leave = i;
                    }
                }
            }
            if (!std::isfinite(delta)) return SolveStatus::unbounded;

            if (delta <= 1e-12) {
                if (++degen_streak > 30) bland = true;
            } else {
                degen_streak = 0;
                bland = false;
            }

            if (leave < 0 || delta >= flip_cap - 1e-12) {
                // Bound flip: x_q crosses to its opposite bound.
                apply_step(q, dir, flip_cap);
                state_[static_cast<size_t>(q)] =
                    dir > 0 ? VarState::at_upper : VarState::at_lower;
                continue;
            }
            apply_step(q, dir, delta);
            const int old = basis_[static_cast<size_t>(leave)];
            const double rate = -dir * at(leave, q);
            state_[static_cast<size_t>(old)] = rate < 0.0 ? VarState::at_lower : VarState::at_upper;
            if (upper_[static_cast<size_t>(old)] == lower_[static_cast<size_t>(old)]) {
                state_[static_cast<size_t>(old)] = VarState::at_lower;
            }
            pivot_with_zrow(leave, q, dir, delta);
        }
    }

    // Move x_q by dir*delta, updating basic values only.
    void apply_step(int q, int dir, double delta) {
        if (delta == 0.0) return;
        for (int i = 0; i < m_; ++i) {
            xb_[static_cast<size_t>(i)] -= dir * delta * at(i, q);
        }
        qvalue_shift_ = dir * delta;  // consumed by pivot bookkeeping
        qvalue_base_ = nb_value(q);
    }

    void pivot_with_zrow(int leave, int q, int /*dir*/, double /*delta*/) {
        const int old = basis_[static_cast<size_t>(leave)];
        // Entering variable's new value.
        const double xq = qvalue_base_ + qvalue_shift_;
        basis_[static_cast<size_t>(leave)] = q;
        row_of_[static_cast<size_t>(q)] = leave;
        row_of_[static_cast<size_t>(old)] = -1;
        state_[static_cast<size_t>(q)] = VarState::basic;
        xb_[static_cast<size_t>(leave)] = xq;

        const double piv = at(leave, q);
        const double inv = 1.0 / piv;
        double* prow = &tab_[static_cast<size_t>(leave) * ncols_];
        for (int j = 0; j < ncols_; ++j) prow[j] *= inv;
        for (int i = 0; i < m_; ++i) {
            if (i == leave) continue;
            const double f = at(i, q);
            if (f == 0.0) continue;
            double* row = &tab_[static_cast<size_t>(i) * ncols_];
            for (int j = 0; j < ncols_; ++j) row[j] -= f * prow[j];
            at(i, q) = 0.0;
        }
        const double zf = zrow_[static_cast<size_t>(q)];
        if (zf != 0.0) {
            for (int j = 0; j < ncols_; ++j) zrow_[static_cast<size_t>(j)] -= zf * prow[j];
            zrow_[static_cast<size_t>(q)] = 0.0;
        }
    }

    void pivot(int leave, int q) {
        qvalue_base_ = nb_value(q);
        qvalue_shift_ = 0.0;
        zrow_.assign(static_cast<size_t>(ncols_), 0.0);
        const int old = basis_[static_cast<size_t>(leave)];
        state_[static_cast<size_t>(old)] = VarState::at_lower;
        pivot_with_zrow(leave, q, +1, 0.0);
    }

    std::string diagnostics(const char* what) const {
        double worst = 0.0;
        for (int i = 0; i < m_; ++i) {
            const int bj = basis_[static_cast<size_t>(i)];
            const double v = xb_[static_cast<size_t>(i)];
            const double lo = lower_[static_cast<size_t>(bj)];
            const double up = upper_[static_cast<size_t>(bj)];
            if (std::isfinite(lo)) worst = std::max(worst, lo - v);
            if (std::isfinite(up)) worst = std::max(worst, v - up);
        }
        std::ostringstream os;
        os << "simplex: " << what << " (rows " << m_ << ", cols " << ncols_ << ", iterations "
           << iterations_ << ", max bound residual " << worst << ")";
        return os.str();
    }

    int n_, m_, ncols_;
    std::vector<double> tab_, b_, lower_, upper_, cost_, zrow_, xb_;
    std::vector<int> basis_, row_of_;
    std::vector<VarState> state_;
    std::vector<bool> locked_;
    long iterations_ = 0;
    double bscale_ = 0.0;
    double qvalue_base_ = 0.0, qvalue_shift_ = 0.0;
};

// Replaces the monotonicity rows by an equivalent chain over quantity-tie
// groups (descending quantity): consecutive groups are linked directly
// when one side is a singleton, otherwise through one auxiliary level
// variable. Cuts the O((KS)^2) comparison rows to O(KS).
void append_mono_chain(const LogLinearProgram& lp, std::vector<LpVar>& vars,
                       std::vector<double>& cost, std::vector<LpRow>& rows) {
    const auto& groups = lp.mono_groups;
    for (size_t g = 0; g + 1 < groups.size(); ++g) {
        const auto& hi = groups[g];      // larger quantities: v must be <=
        const auto& lo = groups[g + 1];  // next smaller quantities
        if (hi.size() == 1 || lo.size() == 1) {
            for (int a : hi) {
                for (int b : lo) {
                    LpRow r;
                    r.kind = RowKind::monotonicity;
                    r.coef = {{a, 1.0}, {b, -1.0}};
                    rows.push_back(std::move(r));
                }
            }
        } else {
            const int z = static_cast<int>(vars.size());
            vars.push_back({"mono_level_" + std::to_string(g), -kInf, kInf});
            cost.push_back(0.0);
            for (int a : hi) {
                LpRow r;
                r.kind = RowKind::monotonicity;
                r.coef = {{a, 1.0}, {z, -1.0}};
                rows.push_back(std::move(r));
            }
            for (int b : lo) {
                LpRow r;
                r.kind = RowKind::monotonicity;
                r.coef = {{z, 1.0}, {b, -1.0}};
                rows.push_back(std::move(r));
            }
        }
    }
}

}  // namespace

int LogLinearProgram::add_var(std::string name, double lower, double upper, double cost) {
    vars.push_back({std::move(name), lower, upper});
    objective.push_back(cost);
    return static_cast<int>(vars.size()) - 1;
}

std::vector<double> row_activities(const LogLinearProgram& lp, const std::vector<double>& x) {
    std::vector<double> act(lp.rows.size(), 0.0);
    for (size_t i = 0; i < lp.rows.size(); ++i) {
        double a = 0.0;
        for (const auto& [j, c] : lp.rows[i].coef) a += c * x[static_cast<size_t>(j)];
        act[i] = a;
    }
    return act;
}

SimplexResult solve_program(const LogLinearProgram& lp) {
    std::vector<LpVar> vars = lp.vars;
    std::vector<double> cost = lp.objective;
    std::vector<LpRow> rows;
    rows.reserve(lp.rows.size());
    const bool reduce_mono = !lp.mono_groups.empty();
    for (const auto& r : lp.rows) {
        if (reduce_mono && r.kind == RowKind::monotonicity) continue;
        rows.push_back(r);
    }
    if (reduce_mono) append_mono_chain(lp, vars, cost, rows);

    Simplex simplex(vars, cost, rows);
    long iterations = 0;
    const SolveStatus st = simplex.run(&iterations);

    SimplexResult res;
    res.status = st;
    res.iterations = iterations;
    if (st != SolveStatus::optimal) return res;

    std::vector<double> x = simplex.solution();
    x.resize(lp.vars.size());
    res.x = std::move(x);
    res.objective = 0.0;
    for (size_t j = 0; j < lp.vars.size(); ++j) {
        res.objective += lp.objective[j] * res.x[j];
    }

    // The solution must satisfy every stored row, including any the
    // presolve replaced.
    const std::vector<double> act = row_activities(lp, res.x);
    for (size_t i = 0; i < lp.rows.size(); ++i) {
        const double scale = 1.0 + std::abs(lp.rows[i].rhs);
        const double resid = act[i] - lp.rows[i].rhs;
        const bool ok = lp.rows[i].sense == RowSense::le ? resid <= 1e-7 * scale
                                                         : std::abs(resid) <= 1e-7 * scale;
        if (!ok) {
            std::ostringstream os;
            os << "simplex: solution violates row " << i << " by " << resid;
            throw SolverError(os.str());
        }
        if (lp.rows[i].sense == RowSense::eq || std::abs(resid) <= 1e-9 * scale) {
            res.binding_rows.push_back(static_cast<int>(i));
        }
    }
    return res;
}

}  // namespace eustar
