#include "tsopt/network.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace tsopt {

int Topology::n_closed() const {
    return static_cast<int>(std::count(status.begin(), status.end(), 1));
}

Network::Network(double mva_base, std::vector<Bus> buses, std::vector<Line> lines,
                 std::vector<Generator> generators)
    : mva_base_(mva_base),
      buses_(std::move(buses)),
      lines_(std::move(lines)),
      generators_(std::move(generators)) {
    if (mva_base_ <= 0.0) throw IntegrityError("mva_base must be positive");
    if (buses_.empty()) throw IntegrityError("network has no buses");

    for (int i = 0; i < n_buses(); ++i) {
        const Bus& b = buses_[static_cast<size_t>(i)];
        if (!bus_index_.emplace(b.id, i).second)
            throw IntegrityError("duplicate bus id " + std::to_string(b.id));
        if (b.is_reference) {
            if (reference_index_ >= 0)
                throw IntegrityError("more than one reference bus");
            reference_index_ = i;
        }
    }
    if (reference_index_ < 0) throw IntegrityError("no reference bus declared");

    for (int i = 0; i < n_lines(); ++i) {
        const Line& l = lines_[static_cast<size_t>(i)];
        if (!line_index_.emplace(l.id, i).second)
            throw IntegrityError("duplicate line id " + std::to_string(l.id));
        if (!bus_index_.count(l.from_bus) || !bus_index_.count(l.to_bus))
            throw IntegrityError("line " + std::to_string(l.id) + " references unknown bus");
        if (l.from_bus == l.to_bus)
            throw IntegrityError("line " + std::to_string(l.id) + " is a self-loop");
        if (l.susceptance <= 0.0)
            throw IntegrityError("line " + std::to_string(l.id) + " susceptance must be > 0");
        if (l.f_min > 0.0 || l.f_max < 0.0)
            throw IntegrityError("line " + std::to_string(l.id) + " requires f_min <= 0 <= f_max");
        if (l.initial_status != 0 && l.initial_status != 1)
            throw IntegrityError("line " + std::to_string(l.id) + " initial_status must be 0 or 1");
    }

    for (const Generator& g : generators_) {
        if (!bus_index_.count(g.bus))
            throw IntegrityError("generator " + std::to_string(g.id) + " references unknown bus");
        if (g.cost.size() != g.p_min.size() || g.cost.size() != g.p_max.size())
            throw IntegrityError("generator " + std::to_string(g.id) + " block arrays disagree");
        for (size_t t = 0; t < g.p_min.size(); ++t) {
            if (g.p_min[t] < 0.0 || g.p_min[t] > g.p_max[t])
                throw IntegrityError("generator " + std::to_string(g.id) +
                                     " needs 0 <= p_min <= p_max in every block");
        }
    }
}

int Network::bus_index(int bus_id) const {
    auto it = bus_index_.find(bus_id);
    if (it == bus_index_.end()) throw IntegrityError("unknown bus id " + std::to_string(bus_id));
    return it->second;
}

int Network::line_index(int line_id) const {
    auto it = line_index_.find(line_id);
    if (it == line_index_.end()) throw IntegrityError("unknown line id " + std::to_string(line_id));
    return it->second;
}

Topology Network::initial_topology() const {
    Topology t;
    t.status.reserve(lines_.size());
    for (const Line& l : lines_) t.status.push_back(l.initial_status);
    return t;
}

Eigen::MatrixXd incidence_matrix(const Network& net) {
    const int nb = net.n_buses();
    const int nl = net.n_lines();
    const int ref = net.reference_index();
    Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(nb - 1, nl);
    // row r of psi corresponds to bus index r, skipping the reference row
    auto row_of = [&](int bus_idx) { return bus_idx < ref ? bus_idx : bus_idx - 1; };
    for (int l = 0; l < nl; ++l) {
        const Line& ln = net.lines()[static_cast<size_t>(l)];
        int fi = net.bus_index(ln.from_bus);
        int ti = net.bus_index(ln.to_bus);
        if (fi != ref) psi(row_of(fi), l) = 1.0;
        if (ti != ref) psi(row_of(ti), l) = -1.0;
    }
    return psi;
}

Eigen::MatrixXd reduced_admittance(const Network& net, const Topology& topo) {
    if (!is_connected(net, topo))
        throw SingularTopology("closed-line graph is disconnected");
    Eigen::MatrixXd psi = incidence_matrix(net);
    const int nb1 = net.n_buses() - 1;
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(nb1, nb1);
    for (int l = 0; l < net.n_lines(); ++l) {
        if (!topo.closed(l)) continue;
        const double b = net.lines()[static_cast<size_t>(l)].susceptance;
        y.noalias() += b * psi.col(l) * psi.col(l).transpose();
    }
    return y;
}

std::vector<std::vector<int>> connectivity(const Network& net, const Topology& topo) {
    const int nb = net.n_buses();
    std::vector<int> parent(static_cast<size_t>(nb));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    };
    for (int l = 0; l < net.n_lines(); ++l) {
        if (!topo.closed(l)) continue;
        const Line& ln = net.lines()[static_cast<size_t>(l)];
        int a = find(net.bus_index(ln.from_bus));
        int b = find(net.bus_index(ln.to_bus));
        if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
    }
    // group by root, then order components by smallest member bus id
    std::unordered_map<int, std::vector<int>> groups;
    for (int i = 0; i < nb; ++i) groups[find(i)].push_back(net.buses()[static_cast<size_t>(i)].id);
    std::vector<std::vector<int>> comps;
    comps.reserve(groups.size());
    for (auto& [root, ids] : groups) {
        std::sort(ids.begin(), ids.end());
        comps.push_back(std::move(ids));
    }
    std::sort(comps.begin(), comps.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return comps;
}

}  // namespace tsopt
