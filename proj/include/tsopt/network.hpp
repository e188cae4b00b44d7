#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "tsopt/errors.hpp"

namespace tsopt {

struct Bus {
    int id = 0;
    bool is_reference = false;
};

struct Generator {
    int id = 0;
    int bus = 0;
    std::vector<double> cost;   // $/MWh per load block
    std::vector<double> p_min;  // MW per load block
    std::vector<double> p_max;  // MW per load block
};

struct Line {
    int id = 0;
    int from_bus = 0;
    int to_bus = 0;
    double susceptance = 0.0;  // p.u., > 0
    double f_max = 0.0;        // MW
    double f_min = 0.0;        // MW, <= 0
    bool switchable = false;
    double switch_cost = 0.0;  // $/operation
    int initial_status = 1;    // 0 or 1
};

struct DemandProfile {
    // d[t][bus_index], MW
    std::vector<std::vector<double>> d;
    // q[bus_index], $/MWh curtailment penalty
    std::vector<double> q;

    int blocks() const { return static_cast<int>(d.size()); }
};

// Snapshot of the per-line open/closed vector.
struct Topology {
    std::vector<int> status;  // status[line_index] in {0,1}

    bool closed(int line_index) const { return status[static_cast<size_t>(line_index)] != 0; }
    int n_closed() const;

    bool operator==(const Topology&) const = default;
};

// Immutable grid model. Construction validates invariants; all queries are
// pure and safe to share across threads.
class Network {
public:
    Network(double mva_base, std::vector<Bus> buses, std::vector<Line> lines,
            std::vector<Generator> generators);

    double mva_base() const { return mva_base_; }
    const std::vector<Bus>& buses() const { return buses_; }
    const std::vector<Line>& lines() const { return lines_; }
    const std::vector<Generator>& generators() const { return generators_; }

    int n_buses() const { return static_cast<int>(buses_.size()); }
    int n_lines() const { return static_cast<int>(lines_.size()); }
    int n_generators() const { return static_cast<int>(generators_.size()); }

    int reference_index() const { return reference_index_; }
    int bus_index(int bus_id) const;
    int line_index(int line_id) const;

    Topology initial_topology() const;

    // Effective line stiffness in MW/rad (p.u. susceptance scaled by base).
    double line_mw_per_rad(int line_index) const {
        return lines_[static_cast<size_t>(line_index)].susceptance * mva_base_;
    }

private:
    double mva_base_;
    std::vector<Bus> buses_;
    std::vector<Line> lines_;
    std::vector<Generator> generators_;
    std::unordered_map<int, int> bus_index_;
    std::unordered_map<int, int> line_index_;
    int reference_index_ = -1;
};

// Reduced bus-branch incidence matrix: (n_buses - 1) x n_lines, the
// reference-bus row removed. Column l carries +1 at the from-bus row and -1
// at the to-bus row.
Eigen::MatrixXd incidence_matrix(const Network& net);

// Y = Psi_act * B_act * Psi_act^T over closed lines, susceptances in p.u.
// Throws SingularTopology when the closed-line graph is disconnected.
Eigen::MatrixXd reduced_admittance(const Network& net, const Topology& topo);

// Connected components of the closed-line graph. Components are ordered by
// their smallest bus id and each component lists bus ids ascending.
std::vector<std::vector<int>> connectivity(const Network& net, const Topology& topo);

inline bool is_connected(const Network& net, const Topology& topo) {
    return connectivity(net, topo).size() == 1;
}

}  // namespace tsopt
