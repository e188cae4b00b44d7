#pragma once

#include <vector>

#include "tsopt/milp.hpp"
#include "tsopt/network.hpp"
#include "tsopt/sensitivity.hpp"

namespace tsopt {

// Lines loaded above alpha of their limit in the no-switching solve, per hour.
struct MonitoredLines {
    std::vector<std::vector<int>> per_hour;  // sorted line indices

    bool contains(int hour, int line_index) const;
};

struct CandidateLists {
    std::vector<int> original;                  // SLL_o, sorted line indices
    std::vector<std::vector<int>> excluded;     // SLL_E per hour
    std::vector<std::vector<int>> updated;      // SLL_u per hour
};

// |f| - alpha * f_max. Positive means the line is monitored; loading is
// direction independent, so the signed DC flow enters as its magnitude.
double violation_score(double flow, double f_max, double alpha);

MonitoredLines monitored_lines(const std::vector<HourDispatch>& step1, const Network& net,
                               double alpha);

// Screens each closed switchable candidate: it is excluded when opening it
// is predicted (via LODF transfer) to push any monitored line to or past its
// limit in some hour, and when it is a bridge. Initially-open candidates
// cannot be screened this way and are kept.
std::vector<std::vector<int>> excluded_candidates(const std::vector<HourDispatch>& step1,
                                                  const MonitoredLines& monitored,
                                                  const SensitivitySet& sens, const Network& net,
                                                  double overload_threshold = 1.0);

struct PlanOutcome {
    SolveResult solution;
    MonitoredLines monitored;
    CandidateLists candidates;
    std::vector<SolveResult> step1;  // per-hour no-switching OPF
    double step1_objective = 0.0;
    double sensitivity_time = 0.0;
    double wall_time = 0.0;
};

// The 5-step pipeline: per-hour OPF on the initial topology, monitored-line
// construction, one shared sensitivity batch, candidate screening, and the
// reduced MILP solve.
PlanOutcome plan_switching(const Network& net, const DemandProfile& demand,
                           const PlanningConfig& cfg);

}  // namespace tsopt
