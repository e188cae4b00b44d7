#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tsopt/network.hpp"
#include "tsopt/simplex.hpp"

namespace tsopt {

struct PlanningConfig {
    int T = 1;
    std::vector<double> H1;  // per-line switching budget; empty or inf = none
    std::vector<double> H2;  // per-hour system budget; empty or inf = none
    double alpha = 0.5;      // MLL loading threshold
    // Big-M per line; empty means the rule M_l = B_l * base * pi (tightest
    // always-valid constant under the +-pi/2 angle bounds).
    std::vector<double> big_m;
    bool charge_both_directions = true;
    double overload_threshold = 1.0;  // screening margin on f_max
    double mip_gap = 1e-4;
    long node_limit = -1;    // < 0: unlimited
    double time_limit = -1;  // seconds; < 0: unlimited

    double h1_for(int line_index) const {
        return H1.empty() ? kInf : H1[static_cast<size_t>(line_index)];
    }
    double h2_for(int hour) const { return H2.empty() ? kInf : H2[static_cast<size_t>(hour)]; }
};

// Built MILP with index maps back to network entities. Hour h of the model
// corresponds to demand block `blocks[h]`.
struct MilpModel {
    LpProblem lp;
    const Network* net = nullptr;
    std::vector<int> blocks;
    Topology base_topology;  // delta^0 and the fixed value for frozen lines

    // variable index maps, [hour][entity index]
    std::vector<std::vector<int>> v_p, v_f, v_theta, v_r, v_s, v_delta;
    std::vector<int> free_delta;  // variable ids of unfixed binaries
    std::unordered_map<int, std::pair<int, int>> delta_of_var;  // var -> (hour, line)

    // row bookkeeping for diagnostics
    std::vector<int> rows_h1, rows_h2;

    int hours() const { return static_cast<int>(blocks.size()); }
};

enum class SolveStatus { Optimal, FeasibleAtLimit, Infeasible, Unbounded };

struct SwitchingPlan {
    // delta[hour][line] in {0,1}; events[hour][line] = |delta - previous|
    std::vector<std::vector<int>> delta;
    std::vector<std::vector<int>> events;

    int total_events() const;
    int events_for_line(int line_index) const;
};

struct HourDispatch {
    Eigen::VectorXd p;      // per generator, MW
    Eigen::VectorXd f;      // per line, MW
    Eigen::VectorXd theta;  // per bus, rad
    Eigen::VectorXd r;      // per bus, MW curtailed
};

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    double objective = 0.0;
    SwitchingPlan plan;
    std::vector<HourDispatch> dispatch;
    double gap = 0.0;
    double wall_time = 0.0;
    long nodes = 0;
    int lp_iterations = 0;
};

// Eqs-driven model construction. free_candidates[h] lists line indices whose
// delta is a free binary in hour h; every other line is frozen at its
// base-topology status. Throws InvalidCandidate for non-switchable entries.
MilpModel build_model(const Network& net, const DemandProfile& demand, const PlanningConfig& cfg,
                      const std::vector<std::vector<int>>& free_candidates,
                      std::optional<Topology> base_topology = std::nullopt,
                      std::vector<int> blocks = {});

// Reference backend: best-first branch and bound over the free binaries,
// bounding via the LP relaxation, branching on the most fractional delta
// (ties toward the lowest hour, then line id). Deterministic: node order is
// (bound, creation index) and incumbent ties resolve to the
// lexicographically smallest delta vector.
SolveResult solve(const MilpModel& model, const PlanningConfig& cfg);

// Plain per-hour DC-OPF on a frozen topology (demand block t). The LP
// special case of the MILP with every candidate fixed.
SolveResult dc_opf(const Network& net, const Topology& topo, const DemandProfile& demand,
                   const PlanningConfig& cfg, int t);

// CPLEX-style LP text export for cross-checking against external tooling.
void export_lp_text(const MilpModel& model, std::ostream& os);

}  // namespace tsopt
