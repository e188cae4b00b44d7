#pragma once

#include <limits>
#include <utility>
#include <vector>

namespace tsopt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Linear program in computational form:
//   min c^T x   s.t.  row_lo <= A x <= row_up,   lb <= x <= ub
// Equality rows use row_lo == row_up; one-sided rows use +-inf.
struct LpProblem {
    int n_vars = 0;
    std::vector<double> obj;  // size n_vars
    std::vector<double> lb;
    std::vector<double> ub;
    std::vector<std::vector<std::pair<int, double>>> rows;  // (var, coeff)
    std::vector<double> row_lo;
    std::vector<double> row_up;

    int add_var(double cost, double lower, double upper);
    int add_row(std::vector<std::pair<int, double>> entries, double lower, double upper);
    int n_rows() const { return static_cast<int>(rows.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

// Basis snapshot for warm starts across related solves (branch-and-bound
// nodes differ only in variable bounds).
struct LpBasis {
    std::vector<int> basic;      // variable index per row position; logical
                                 // column for row i is n_vars + i
    std::vector<char> at_upper;  // nonbasic rest position, size n_vars + n_rows
};

struct LpSolution {
    LpStatus status = LpStatus::IterationLimit;
    double objective = 0.0;
    std::vector<double> x;             // structural values
    std::vector<double> row_activity;  // A x per row
    LpBasis basis;
    int iterations = 0;
};

struct SimplexOptions {
    double feas_tol = 1e-8;      // bound violation tolerance
    double cost_tol = 1e-9;      // reduced-cost optimality tolerance
    double pivot_tol = 1e-9;     // minimum pivot magnitude
    int max_iterations = 200000;
    int refactor_every = 128;
    const LpBasis* warm_start = nullptr;
};

// Bounded-variable primal simplex with a dense maintained basis inverse.
// Composite phase 1 drives basic bound violations to zero, phase 2 is the
// textbook bounded Dantzig rule with a Bland fallback after stalls. Pivot
// selection is fully index-deterministic.
LpSolution solve_lp(const LpProblem& lp, const SimplexOptions& opts = {});

// Largest constraint/bound violation of a candidate point; test helper and
// post-solve sanity check.
double lp_max_violation(const LpProblem& lp, const std::vector<double>& x);

}  // namespace tsopt
