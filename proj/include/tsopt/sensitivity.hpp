#pragma once

#include <Eigen/Dense>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tsopt/network.hpp"

namespace tsopt {

// PTDF_{l,l} within eps_bridge of 1 is treated as a bridge so inverse noise
// cannot leak near-infinite LODFs into candidate screening.
inline constexpr double kBridgeEps = 1e-6;

// PTDF/LODF tables for one fixed topology. Immutable once built.
struct SensitivitySet {
    Topology topology;
    std::vector<int> candidates;  // line indices, closed in `topology`
    std::vector<int> monitored;   // line indices, closed in `topology`

    // ptdf_self[c] = PTDF_{l,l} for candidates[c]
    std::vector<double> ptdf_self;
    // is_bridge[c]: opening candidates[c] islands the network; lodf rows for
    // it are not stored
    std::vector<bool> is_bridge;
    // ptdf_cross(m, c) = PTDF_{monitored[m], candidates[c]}
    Eigen::MatrixXd ptdf_cross;
    // lodf(m, c); NaN where is_bridge[c]
    Eigen::MatrixXd lodf;

    std::optional<double> lodf_for(int monitored_line, int candidate_line) const;

    // line index -> row/column position
    std::unordered_map<int, int> monitored_pos;
    std::unordered_map<int, int> candidate_pos;
};

// Eq.-level scalar queries. Each factorizes Y on its own; use
// sensitivity_set for batch work.
double ptdf_self(const Network& net, const Topology& topo, int line_index);
double ptdf_cross(const Network& net, const Topology& topo, int monitored_line, int candidate_line);
double lodf(const Network& net, const Topology& topo, int monitored_line, int candidate_line);

// Predicted MW flow on a monitored line after opening the candidate.
inline double post_outage_flow(double f_monitored, double f_candidate, double lodf_value) {
    return f_monitored + lodf_value * f_candidate;
}

// Batch computation sharing one dense factorization of Y across all
// candidate solves. The parallel kernel partitions candidates across OpenMP
// threads; each pair is a pure read of the factorization, so results are
// identical to the serial reference.
SensitivitySet sensitivity_set(const Network& net, const Topology& topo,
                               const std::vector<int>& monitored,
                               const std::vector<int>& candidates);

// Serial reference kept for testing and benchmarking.
SensitivitySet sensitivity_set_serial(const Network& net, const Topology& topo,
                                      const std::vector<int>& monitored,
                                      const std::vector<int>& candidates);

// DC power flow for a fixed topology: bus angles from net injections
// (MW, reference excluded from the solve, its angle pinned at 0) and the
// per-line MW flows. Used as the module's independent oracle and by tools.
struct DcFlowResult {
    Eigen::VectorXd theta;  // size n_buses, radians
    Eigen::VectorXd flow;   // size n_lines, MW; 0 on open lines
};
DcFlowResult dc_power_flow(const Network& net, const Topology& topo,
                           const Eigen::VectorXd& injection_mw);

}  // namespace tsopt
