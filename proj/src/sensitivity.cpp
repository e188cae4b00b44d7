#include "tsopt/sensitivity.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <string>

namespace tsopt {

namespace {

Eigen::LLT<Eigen::MatrixXd> factorize(const Network& net, const Topology& topo) {
    Eigen::MatrixXd y = reduced_admittance(net, topo);
    Eigen::LLT<Eigen::MatrixXd> llt(y);
    if (llt.info() != Eigen::Success)
        throw SingularTopology("reduced admittance matrix is not positive definite");
    return llt;
}

void require_closed(const Topology& topo, int line_index, const char* what) {
    if (!topo.closed(line_index))
        throw LineOpen(std::string(what) + " line index " + std::to_string(line_index) +
                       " is open in this topology");
}

struct Kernel {
    const Network& net;
    Eigen::MatrixXd psi;
    Eigen::LLT<Eigen::MatrixXd> llt;

    Kernel(const Network& n, const Topology& topo)
        : net(n), psi(incidence_matrix(n)), llt(factorize(n, topo)) {}

    // y_sol = Y^{-1} psi_l; PTDF_{m,l} = B_mm psi_m^T y_sol
    Eigen::VectorXd solve_col(int l) const { return llt.solve(psi.col(l)); }

    double ptdf(int m, const Eigen::VectorXd& y_sol_l) const {
        return net.lines()[static_cast<size_t>(m)].susceptance * psi.col(m).dot(y_sol_l);
    }
};

template <bool Parallel>
SensitivitySet build_set(const Network& net, const Topology& topo,
                         const std::vector<int>& monitored, const std::vector<int>& candidates) {
    for (int m : monitored) require_closed(topo, m, "monitored");
    for (int c : candidates) require_closed(topo, c, "candidate");

    Kernel k(net, topo);
    const int nm = static_cast<int>(monitored.size());
    const int nc = static_cast<int>(candidates.size());

    SensitivitySet out;
    out.topology = topo;
    out.candidates = candidates;
    out.monitored = monitored;
    out.ptdf_self.assign(static_cast<size_t>(nc), 0.0);
    out.is_bridge.assign(static_cast<size_t>(nc), false);
    out.ptdf_cross = Eigen::MatrixXd::Zero(nm, nc);
    out.lodf = Eigen::MatrixXd::Constant(nm, nc, std::numeric_limits<double>::quiet_NaN());

#pragma omp parallel for schedule(static) if (Parallel)
    for (int c = 0; c < nc; ++c) {
        const int l = candidates[static_cast<size_t>(c)];
        const Eigen::VectorXd y_sol = k.solve_col(l);
        const double self = k.ptdf(l, y_sol);
        out.ptdf_self[static_cast<size_t>(c)] = self;
        const bool bridge = self >= 1.0 - kBridgeEps;
        out.is_bridge[static_cast<size_t>(c)] = bridge;
        for (int m = 0; m < nm; ++m) {
            const int ml = monitored[static_cast<size_t>(m)];
            if (ml == l) continue;
            const double cross = k.ptdf(ml, y_sol);
            out.ptdf_cross(m, c) = cross;
            if (!bridge) out.lodf(m, c) = cross / (1.0 - self);
        }
    }

    for (int m = 0; m < nm; ++m) out.monitored_pos[monitored[static_cast<size_t>(m)]] = m;
    for (int c = 0; c < nc; ++c) out.candidate_pos[candidates[static_cast<size_t>(c)]] = c;
    return out;
}

}  // namespace

std::optional<double> SensitivitySet::lodf_for(int monitored_line, int candidate_line) const {
    auto mi = monitored_pos.find(monitored_line);
    auto ci = candidate_pos.find(candidate_line);
    if (mi == monitored_pos.end() || ci == candidate_pos.end()) return std::nullopt;
    if (is_bridge[static_cast<size_t>(ci->second)]) return std::nullopt;
    return lodf(mi->second, ci->second);
}

double ptdf_self(const Network& net, const Topology& topo, int line_index) {
    require_closed(topo, line_index, "candidate");
    Kernel k(net, topo);
    return k.ptdf(line_index, k.solve_col(line_index));
}

double ptdf_cross(const Network& net, const Topology& topo, int monitored_line,
                  int candidate_line) {
    require_closed(topo, monitored_line, "monitored");
    require_closed(topo, candidate_line, "candidate");
    Kernel k(net, topo);
    return k.ptdf(monitored_line, k.solve_col(candidate_line));
}

double lodf(const Network& net, const Topology& topo, int monitored_line, int candidate_line) {
    require_closed(topo, monitored_line, "monitored");
    require_closed(topo, candidate_line, "candidate");
    Kernel k(net, topo);
    Eigen::VectorXd y_sol = k.solve_col(candidate_line);
    const double self = k.ptdf(candidate_line, y_sol);
    if (std::abs(1.0 - self) <= kBridgeEps)
        throw BridgeLine("line index " + std::to_string(candidate_line) +
                         " is a bridge; LODF undefined");
    return k.ptdf(monitored_line, y_sol) / (1.0 - self);
}

SensitivitySet sensitivity_set(const Network& net, const Topology& topo,
                               const std::vector<int>& monitored,
                               const std::vector<int>& candidates) {
    return build_set<true>(net, topo, monitored, candidates);
}

SensitivitySet sensitivity_set_serial(const Network& net, const Topology& topo,
                                      const std::vector<int>& monitored,
                                      const std::vector<int>& candidates) {
    return build_set<false>(net, topo, monitored, candidates);
}

DcFlowResult dc_power_flow(const Network& net, const Topology& topo,
                           const Eigen::VectorXd& injection_mw) {
    const int nb = net.n_buses();
    const int ref = net.reference_index();
    Eigen::LLT<Eigen::MatrixXd> llt = factorize(net, topo);
    Eigen::MatrixXd psi = incidence_matrix(net);

    Eigen::VectorXd rhs(nb - 1);
    for (int i = 0, r = 0; i < nb; ++i) {
        if (i == ref) continue;
        rhs(r++) = injection_mw(i) / net.mva_base();
    }
    Eigen::VectorXd theta_red = llt.solve(rhs);

    DcFlowResult res;
    res.theta = Eigen::VectorXd::Zero(nb);
    for (int i = 0, r = 0; i < nb; ++i) {
        if (i == ref) continue;
        res.theta(i) = theta_red(r++);
    }
    res.flow = Eigen::VectorXd::Zero(net.n_lines());
    for (int l = 0; l < net.n_lines(); ++l) {
        if (!topo.closed(l)) continue;
        const Line& ln = net.lines()[static_cast<size_t>(l)];
        const double dtheta = res.theta(net.bus_index(ln.from_bus)) - res.theta(net.bus_index(ln.to_bus));
        res.flow(l) = net.line_mw_per_rad(l) * dtheta;
    }
    return res;
}

}  // namespace tsopt
