#include "tsopt/simplex.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>

#include "tsopt/errors.hpp"

namespace tsopt {

int LpProblem::add_var(double cost, double lower, double upper) {
    obj.push_back(cost);
    lb.push_back(lower);
    ub.push_back(upper);
    return n_vars++;
}

int LpProblem::add_row(std::vector<std::pair<int, double>> entries, double lower, double upper) {
    rows.push_back(std::move(entries));
    row_lo.push_back(lower);
    row_up.push_back(upper);
    return static_cast<int>(rows.size()) - 1;
}

double lp_max_violation(const LpProblem& lp, const std::vector<double>& x) {
    double worst = 0.0;
    for (int j = 0; j < lp.n_vars; ++j) {
        worst = std::max(worst, lp.lb[static_cast<size_t>(j)] - x[static_cast<size_t>(j)]);
        worst = std::max(worst, x[static_cast<size_t>(j)] - lp.ub[static_cast<size_t>(j)]);
    }
    for (int i = 0; i < lp.n_rows(); ++i) {
        double a = 0.0;
        for (auto [j, v] : lp.rows[static_cast<size_t>(i)]) a += v * x[static_cast<size_t>(j)];
        if (std::isfinite(lp.row_lo[static_cast<size_t>(i)]))
            worst = std::max(worst, lp.row_lo[static_cast<size_t>(i)] - a);
        if (std::isfinite(lp.row_up[static_cast<size_t>(i)]))
            worst = std::max(worst, a - lp.row_up[static_cast<size_t>(i)]);
    }
    return worst;
}

namespace {

// Internal signal: the maintained basis inverse drifted far enough that the
// refactorized basis came out singular. The driver retries cold once.
struct SingularBasis {};

// Extended system [A -I][x; s] = 0 with bounds on both structural and
// logical columns; the basis is any invertible m-subset of extended columns.
class Simplex {
public:
    Simplex(const LpProblem& lp, const SimplexOptions& opts)
        : lp_(lp), o_(opts), m_(lp.n_rows()), n_(lp.n_vars), ntot_(n_ + m_) {
        // column-wise copy of A for pricing
        cols_.resize(static_cast<size_t>(n_));
        for (int i = 0; i < m_; ++i)
            for (auto [j, v] : lp_.rows[static_cast<size_t>(i)])
                if (v != 0.0) cols_[static_cast<size_t>(j)].emplace_back(i, v);

        lb_.resize(static_cast<size_t>(ntot_));
        ub_.resize(static_cast<size_t>(ntot_));
        cost_.assign(static_cast<size_t>(ntot_), 0.0);
        for (int j = 0; j < n_; ++j) {
            lb_[static_cast<size_t>(j)] = lp_.lb[static_cast<size_t>(j)];
            ub_[static_cast<size_t>(j)] = lp_.ub[static_cast<size_t>(j)];
            cost_[static_cast<size_t>(j)] = lp_.obj[static_cast<size_t>(j)];
        }
        for (int i = 0; i < m_; ++i) {
            lb_[static_cast<size_t>(n_ + i)] = lp_.row_lo[static_cast<size_t>(i)];
            ub_[static_cast<size_t>(n_ + i)] = lp_.row_up[static_cast<size_t>(i)];
        }
        x_.assign(static_cast<size_t>(ntot_), 0.0);
        pos_.assign(static_cast<size_t>(ntot_), -1);
        at_upper_.assign(static_cast<size_t>(ntot_), 0);
    }

    LpSolution run() {
        install_basis();
        LpSolution sol;
        sol.iterations = 0;

        if (!phase(true, sol.iterations)) {
            sol.status = infeasible_ ? LpStatus::Infeasible
                                     : LpStatus::IterationLimit;
            return sol;
        }
        if (!phase(false, sol.iterations)) {
            sol.status = unbounded_ ? LpStatus::Unbounded : LpStatus::IterationLimit;
            return sol;
        }

        sol.status = LpStatus::Optimal;
        sol.x.assign(x_.begin(), x_.begin() + n_);
        sol.row_activity.resize(static_cast<size_t>(m_));
        for (int i = 0; i < m_; ++i) sol.row_activity[static_cast<size_t>(i)] = x_[static_cast<size_t>(n_ + i)];
        sol.objective = 0.0;
        for (int j = 0; j < n_; ++j) sol.objective += cost_[static_cast<size_t>(j)] * x_[static_cast<size_t>(j)];
        sol.basis.basic = basis_;
        sol.basis.at_upper = at_upper_;
        return sol;
    }

private:
    const LpProblem& lp_;
    const SimplexOptions& o_;
    int m_, n_, ntot_;
    std::vector<std::vector<std::pair<int, double>>> cols_;
    std::vector<double> lb_, ub_, cost_, x_;
    std::vector<int> basis_;      // size m_
    std::vector<int> pos_;        // var -> basis position or -1
    std::vector<char> at_upper_;  // nonbasic rest side
    Eigen::MatrixXd binv_;
    int pivots_since_refactor_ = 0;
    bool infeasible_ = false;
    bool unbounded_ = false;

    static bool finite(double v) { return std::isfinite(v); }

    // Rest value for a nonbasic variable: the recorded side if finite, else
    // the other finite bound, else 0.
    double rest_value(int j) const {
        const double lo = lb_[static_cast<size_t>(j)], hi = ub_[static_cast<size_t>(j)];
        if (at_upper_[static_cast<size_t>(j)] && finite(hi)) return hi;
        if (finite(lo)) return lo;
        if (finite(hi)) return hi;
        return 0.0;
    }

    template <class F>
    void for_col(int j, F&& f) const {  // extended column j of [A -I]
        if (j < n_) {
            for (auto [i, v] : cols_[static_cast<size_t>(j)]) f(i, v);
        } else {
            f(j - n_, -1.0);
        }
    }

    void install_basis() {
        basis_.assign(static_cast<size_t>(m_), -1);
        bool warm = false;
        if (o_.warm_start && static_cast<int>(o_.warm_start->basic.size()) == m_ &&
            static_cast<int>(o_.warm_start->at_upper.size()) == ntot_) {
            basis_ = o_.warm_start->basic;
            at_upper_ = o_.warm_start->at_upper;
            warm = refactorize(false);
        }
        if (!warm) {
            for (int i = 0; i < m_; ++i) basis_[static_cast<size_t>(i)] = n_ + i;
            std::fill(at_upper_.begin(), at_upper_.end(), 0);
            // nonbasic rest side: the bound nearer zero, deterministically
            for (int j = 0; j < ntot_; ++j) {
                const double lo = lb_[static_cast<size_t>(j)], hi = ub_[static_cast<size_t>(j)];
                if (!finite(lo) && finite(hi)) at_upper_[static_cast<size_t>(j)] = 1;
                else if (finite(lo) && finite(hi) && std::abs(hi) < std::abs(lo))
                    at_upper_[static_cast<size_t>(j)] = 1;
            }
            refactorize(true);
        }
        recompute_values();
    }

    bool refactorize(bool must_succeed) {
        std::fill(pos_.begin(), pos_.end(), -1);
        std::vector<Eigen::Triplet<double>> trip;
        for (int i = 0; i < m_; ++i) {
            const int j = basis_[static_cast<size_t>(i)];
            if (j < 0 || j >= ntot_ || pos_[static_cast<size_t>(j)] >= 0) {
                if (must_succeed) throw NumericalFailure("corrupt simplex basis");
                return false;
            }
            pos_[static_cast<size_t>(j)] = i;
            for_col(j, [&](int r, double v) { trip.emplace_back(r, i, v); });
        }
        // basis matrices here are very sparse; a sparse factorization keeps
        // the refactorization far below the dense m^3
        Eigen::SparseMatrix<double> b(m_, m_);
        b.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(b);
        if (lu.info() != Eigen::Success) {
            if (must_succeed) throw NumericalFailure("singular simplex basis");
            std::fill(pos_.begin(), pos_.end(), -1);
            return false;
        }
        binv_ = lu.solve(Eigen::MatrixXd::Identity(m_, m_));
        if (!binv_.allFinite()) {
            if (must_succeed) throw NumericalFailure("singular simplex basis");
            std::fill(pos_.begin(), pos_.end(), -1);
            return false;
        }
        pivots_since_refactor_ = 0;
        return true;
    }

    void recompute_values() {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
        for (int j = 0; j < ntot_; ++j) {
            if (pos_[static_cast<size_t>(j)] >= 0) continue;
            const double v = rest_value(j);
            x_[static_cast<size_t>(j)] = v;
            if (v != 0.0) for_col(j, [&](int r, double a) { rhs(r) -= a * v; });
        }
        Eigen::VectorXd xb = binv_ * rhs;
        for (int i = 0; i < m_; ++i) x_[static_cast<size_t>(basis_[static_cast<size_t>(i)])] = xb(i);
    }

    double total_infeasibility() const {
        double s = 0.0;
        for (int i = 0; i < m_; ++i) {
            const int j = basis_[static_cast<size_t>(i)];
            s += std::max(0.0, lb_[static_cast<size_t>(j)] - x_[static_cast<size_t>(j)]);
            s += std::max(0.0, x_[static_cast<size_t>(j)] - ub_[static_cast<size_t>(j)]);
        }
        return s;
    }

    double max_infeasibility() const {
        double s = 0.0;
        for (int i = 0; i < m_; ++i) {
            const int j = basis_[static_cast<size_t>(i)];
            s = std::max(s, lb_[static_cast<size_t>(j)] - x_[static_cast<size_t>(j)]);
            s = std::max(s, x_[static_cast<size_t>(j)] - ub_[static_cast<size_t>(j)]);
        }
        return s;
    }

    Eigen::VectorXd ftran(int j) const {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(m_);
        for_col(j, [&](int r, double v) { a(r) = v; });
        return binv_ * a;
    }

    // y such that reduced cost d_j = c_eff_j - y . col_j
    Eigen::VectorXd dual_prices(bool phase1) const {
        Eigen::VectorXd cb(m_);
        for (int i = 0; i < m_; ++i) {
            const int j = basis_[static_cast<size_t>(i)];
            if (phase1) {
                if (x_[static_cast<size_t>(j)] < lb_[static_cast<size_t>(j)] - o_.feas_tol) cb(i) = -1.0;
                else if (x_[static_cast<size_t>(j)] > ub_[static_cast<size_t>(j)] + o_.feas_tol) cb(i) = 1.0;
                else cb(i) = 0.0;
            } else {
                cb(i) = cost_[static_cast<size_t>(j)];
            }
        }
        return binv_.transpose() * cb;
    }

    double reduced_cost(int j, const Eigen::VectorXd& y, bool phase1) const {
        double d = phase1 ? 0.0 : cost_[static_cast<size_t>(j)];
        for_col(j, [&](int r, double v) { d -= y(r) * v; });
        return d;
    }

    // Entering choice. dir = +1 means increase from rest value. Returns
    // (var, dir) or (-1, 0) when optimal.
    std::pair<int, int> price(const Eigen::VectorXd& y, bool phase1, bool bland) const {
        int best = -1, best_dir = 0;
        double best_score = o_.cost_tol;
        for (int j = 0; j < ntot_; ++j) {
            if (pos_[static_cast<size_t>(j)] >= 0) continue;
            const double lo = lb_[static_cast<size_t>(j)], hi = ub_[static_cast<size_t>(j)];
            if (lo == hi) continue;  // fixed
            const double d = reduced_cost(j, y, phase1);
            const double v = x_[static_cast<size_t>(j)];
            int dir = 0;
            // may increase unless pinned at upper; may decrease unless at lower
            const bool can_up = !(finite(hi) && v >= hi - o_.feas_tol);
            const bool can_dn = !(finite(lo) && v <= lo + o_.feas_tol);
            if (can_up && d < -best_score) dir = 1;
            else if (can_dn && d > best_score) dir = -1;
            else continue;
            if (bland) return {j, dir};
            best = j;
            best_dir = dir;
            best_score = std::abs(d);
        }
        return {best, best_dir};
    }

    struct RatioResult {
        double step = kInf;
        int leave_pos = -1;   // -1: entering flips to its opposite bound
        char leave_side = 0;  // 1 when the leaver stops at its upper bound
        bool blocked = false;
    };

    RatioResult ratio_test(int j_enter, int dir, const Eigen::VectorXd& alpha, bool phase1) const {
        RatioResult best;
        const double lo_e = lb_[static_cast<size_t>(j_enter)], hi_e = ub_[static_cast<size_t>(j_enter)];
        if (finite(lo_e) && finite(hi_e)) {
            best.step = hi_e - lo_e;
            best.blocked = true;
        }
        double best_pivot = 0.0;
        for (int i = 0; i < m_; ++i) {
            const double a = alpha(i);
            if (std::abs(a) <= o_.pivot_tol) continue;
            const double g = -static_cast<double>(dir) * a;  // basic slope
            const int jb = basis_[static_cast<size_t>(i)];
            const double v = x_[static_cast<size_t>(jb)];
            const double lo = lb_[static_cast<size_t>(jb)], hi = ub_[static_cast<size_t>(jb)];
            double t = kInf;
            char side = 0;
            if (phase1 && v < lo - o_.feas_tol) {
                if (g > 0) { t = (lo - v) / g; side = 0; }
            } else if (phase1 && v > hi + o_.feas_tol) {
                if (g < 0) { t = (hi - v) / g; side = 1; }
            } else if (g > 0) {
                if (finite(hi)) { t = std::max(0.0, (hi - v) / g); side = 1; }
            } else {
                if (finite(lo)) { t = std::max(0.0, (lo - v) / g); side = 0; }
            }
            if (!finite(t)) continue;
            t = std::max(t, 0.0);
            // Min ratio wins; inside a 1e-9 tie window prefer the larger
            // pivot, then the lower basic variable index. A basic event at
            // the same step as the entering bound flip displaces the flip.
            bool take = false;
            if (t < best.step - 1e-9) {
                take = true;
            } else if (t <= best.step + 1e-9) {
                if (best.leave_pos < 0) {
                    take = t <= best.step;
                } else {
                    take = std::abs(a) > best_pivot + 1e-12 ||
                           (std::abs(a) >= best_pivot - 1e-12 &&
                            jb < basis_[static_cast<size_t>(best.leave_pos)]);
                }
            }
            if (take) {
                best.step = std::min(best.step, t);
                best.leave_pos = i;
                best.leave_side = side;
                best.blocked = true;
                best_pivot = std::abs(a);
            }
        }
        return best;
    }

    void apply_step(int j_enter, int dir, const Eigen::VectorXd& alpha, double t) {
        x_[static_cast<size_t>(j_enter)] += dir * t;
        if (t == 0.0) return;
        for (int i = 0; i < m_; ++i) {
            const double a = alpha(i);
            if (a != 0.0) x_[static_cast<size_t>(basis_[static_cast<size_t>(i)])] -= dir * t * a;
        }
    }

    void pivot(int j_enter, int leave_pos, char leave_side, const Eigen::VectorXd& alpha) {
        const int j_leave = basis_[static_cast<size_t>(leave_pos)];
        // snap the leaver exactly onto its bound
        x_[static_cast<size_t>(j_leave)] = leave_side ? ub_[static_cast<size_t>(j_leave)] : lb_[static_cast<size_t>(j_leave)];
        at_upper_[static_cast<size_t>(j_leave)] = leave_side;
        pos_[static_cast<size_t>(j_leave)] = -1;
        basis_[static_cast<size_t>(leave_pos)] = j_enter;
        pos_[static_cast<size_t>(j_enter)] = leave_pos;

        const double piv = alpha(leave_pos);
        binv_.row(leave_pos) /= piv;
        for (int i = 0; i < m_; ++i) {
            if (i == leave_pos) continue;
            const double a = alpha(i);
            if (a != 0.0) binv_.row(i) -= a * binv_.row(leave_pos);
        }
        if (++pivots_since_refactor_ >= o_.refactor_every) {
            if (!refactorize(false)) throw SingularBasis{};
            recompute_values();
        }
    }

    // Returns true when the phase finished cleanly (feasible / optimal).
    bool phase(bool phase1, int& iterations) {
        int stall = 0;
        double last_merit = phase1 ? total_infeasibility() : current_cost();
        while (true) {
            if (phase1 && max_infeasibility() <= o_.feas_tol) return true;
            if (iterations >= o_.max_iterations) return false;
            ++iterations;

            const bool bland = stall > 200 + m_;
            const Eigen::VectorXd y = dual_prices(phase1);
            auto [j, dir] = price(y, phase1, bland);
            if (j < 0) {
                if (phase1) {
                    // No improving column: feasible within the relaxed
                    // tolerance, or proven infeasible.
                    infeasible_ = max_infeasibility() > 1e-6;
                    return !infeasible_;
                }
                return true;  // optimal
            }

            const Eigen::VectorXd alpha = ftran(j);
            const RatioResult r = ratio_test(j, dir, alpha, phase1);
            if (!r.blocked) {
                if (phase1) throw NumericalFailure("phase-1 ray while infeasible");
                unbounded_ = true;
                return false;
            }
            apply_step(j, dir, alpha, r.step);
            if (r.leave_pos < 0) {
                // bound flip; snap to kill drift
                at_upper_[static_cast<size_t>(j)] = dir > 0 ? 1 : 0;
                x_[static_cast<size_t>(j)] =
                    dir > 0 ? ub_[static_cast<size_t>(j)] : lb_[static_cast<size_t>(j)];
            } else {
                pivot(j, r.leave_pos, r.leave_side, alpha);
            }

            const double merit = phase1 ? total_infeasibility() : current_cost();
            if (merit < last_merit - 1e-12 * (1.0 + std::abs(last_merit))) {
                stall = 0;
                last_merit = merit;
            } else {
                ++stall;
            }
        }
    }

    double current_cost() const {
        double c = 0.0;
        for (int j = 0; j < n_; ++j) c += cost_[static_cast<size_t>(j)] * x_[static_cast<size_t>(j)];
        return c;
    }
};

}  // namespace

LpSolution solve_lp(const LpProblem& lp, const SimplexOptions& opts) {
    if (lp.n_rows() == 0) {
        // pure bound problem
        LpSolution sol;
        sol.status = LpStatus::Optimal;
        sol.x.resize(static_cast<size_t>(lp.n_vars));
        for (int j = 0; j < lp.n_vars; ++j) {
            const double c = lp.obj[static_cast<size_t>(j)];
            double v = c >= 0 ? lp.lb[static_cast<size_t>(j)] : lp.ub[static_cast<size_t>(j)];
            if (!std::isfinite(v)) {
                if (c == 0.0) v = std::isfinite(lp.lb[static_cast<size_t>(j)]) ? lp.lb[static_cast<size_t>(j)] : 0.0;
                else { sol.status = LpStatus::Unbounded; return sol; }
            }
            if (lp.lb[static_cast<size_t>(j)] > lp.ub[static_cast<size_t>(j)]) {
                sol.status = LpStatus::Infeasible;
                return sol;
            }
            sol.x[static_cast<size_t>(j)] = v;
            sol.objective += c * v;
        }
        return sol;
    }
    for (int j = 0; j < lp.n_vars; ++j)
        if (lp.lb[static_cast<size_t>(j)] > lp.ub[static_cast<size_t>(j)] + 1e-12) {
            LpSolution sol;
            sol.status = LpStatus::Infeasible;
            return sol;
        }
    try {
        Simplex s(lp, opts);
        return s.run();
    } catch (const SingularBasis&) {
        // retry cold with a stricter pivot rule and frequent refactorization
        SimplexOptions retry = opts;
        retry.warm_start = nullptr;
        retry.refactor_every = 16;
        retry.pivot_tol = std::max(opts.pivot_tol, 1e-7);
        try {
            Simplex s(lp, retry);
            return s.run();
        } catch (const SingularBasis&) {
            throw NumericalFailure("singular simplex basis");
        }
    }
}

}  // namespace tsopt
