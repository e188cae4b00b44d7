#pragma once

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "tsopt/milp.hpp"
#include "tsopt/network.hpp"

namespace tsopt::testing {

inline Network two_bus(double b = 10.0, double fmax = 100.0) {
    return Network(100.0, {{1, false}, {2, true}},
                   {{1, 1, 2, b, fmax, -fmax, true, 10.0, 1}},
                   {{1, 1, {10.0}, {0.0}, {200.0}}});
}

inline Network parallel_pair(double b = 10.0, double fmax = 100.0) {
    return Network(100.0, {{1, false}, {2, true}},
                   {{1, 1, 2, b, fmax, -fmax, true, 10.0, 1},
                    {2, 1, 2, b, fmax, -fmax, true, 10.0, 1}},
                   {{1, 1, {10.0}, {0.0}, {200.0}}});
}

// 3 buses, 3 lines, bus 3 reference, equal susceptances
inline Network triangle(double b = 10.0, double fmax = 100.0) {
    return Network(100.0, {{1, false}, {2, false}, {3, true}},
                   {{1, 1, 2, b, fmax, -fmax, true, 10.0, 1},
                    {2, 2, 3, b, fmax, -fmax, true, 10.0, 1},
                    {3, 1, 3, b, fmax, -fmax, true, 10.0, 1}},
                   {{1, 3, {10.0}, {0.0}, {400.0}}});
}

// Random connected network: spanning tree plus chords. Always one generator
// at the reference bus so DC-OPF stays sane.
inline Network random_connected(std::mt19937_64& rng, int n_buses, int n_lines) {
    std::uniform_real_distribution<double> b_dist(3.0, 20.0);
    std::vector<Bus> buses;
    for (int i = 0; i < n_buses; ++i) buses.push_back({i + 1, i == 0});
    std::vector<Line> lines;
    for (int i = 1; i < n_buses; ++i) {
        const int from = static_cast<int>(rng() % static_cast<unsigned>(i)) + 1;
        lines.push_back({i, from, i + 1, b_dist(rng), 500.0, -500.0, true, 10.0, 1});
    }
    for (int i = n_buses - 1; i < n_lines; ++i) {
        int a = static_cast<int>(rng() % static_cast<unsigned>(n_buses)) + 1;
        int b = a;
        while (b == a) b = static_cast<int>(rng() % static_cast<unsigned>(n_buses)) + 1;
        lines.push_back({i + 1, a, b, b_dist(rng), 500.0, -500.0, true, 10.0, 1});
    }
    std::vector<Generator> gens{{1, 1, {15.0}, {0.0}, {10000.0}}};
    return Network(100.0, std::move(buses), std::move(lines), std::move(gens));
}

// Congestion-prone random instance: tight-ish line limits and two price
// tiers so switching actually matters.
inline Network random_congested(std::mt19937_64& rng, int nb, int nl) {
    std::uniform_real_distribution<double> b_dist(3.0, 15.0), cap(40.0, 140.0), zeta(5.0, 40.0);
    std::vector<Bus> buses;
    for (int i = 0; i < nb; ++i) buses.push_back({i + 1, i == 0});
    std::vector<Line> lines;
    for (int i = 1; i < nb; ++i) {
        const int from = static_cast<int>(rng() % static_cast<unsigned>(i)) + 1;
        const double c = cap(rng);
        lines.push_back({i, from, i + 1, b_dist(rng), c, -c, true, zeta(rng), 1});
    }
    for (int i = nb - 1; i < nl; ++i) {
        int a = static_cast<int>(rng() % static_cast<unsigned>(nb)) + 1;
        int b = a;
        while (b == a) b = static_cast<int>(rng() % static_cast<unsigned>(nb)) + 1;
        const double c = cap(rng);
        lines.push_back({i + 1, a, b, b_dist(rng), c, -c, true, zeta(rng), 1});
    }
    std::vector<Generator> gens;
    gens.push_back({1, 1, {10.0}, {0.0}, {1000.0}});
    gens.push_back({2, nb, {80.0}, {0.0}, {1000.0}});
    return Network(100.0, std::move(buses), std::move(lines), std::move(gens));
}

inline DemandProfile random_demand(std::mt19937_64& rng, const Network& net, int T) {
    std::uniform_real_distribution<double> load(10.0, 60.0);
    DemandProfile d;
    d.q.assign(static_cast<size_t>(net.n_buses()), 1200.0);
    for (int t = 0; t < T; ++t) {
        std::vector<double> row(static_cast<size_t>(net.n_buses()), 0.0);
        for (int i = 1; i < net.n_buses(); ++i) row[static_cast<size_t>(i)] = load(rng);
        d.d.push_back(row);
    }
    return d;
}

// Replicate a single-block generator fleet to T identical blocks.
inline Network tile_blocks(const Network& net, int T) {
    std::vector<Generator> gens = net.generators();
    for (Generator& g : gens) {
        g.cost.assign(static_cast<size_t>(T), g.cost.at(0));
        g.p_min.assign(static_cast<size_t>(T), g.p_min.at(0));
        g.p_max.assign(static_cast<size_t>(T), g.p_max.at(0));
    }
    return Network(net.mva_base(), net.buses(), net.lines(), gens);
}

// Exhaustive oracle: best objective over every 0/1 assignment of the free
// binaries, each assignment solved as a plain LP.
inline double enumerate_optimum(const MilpModel& model) {
    LpProblem lp = model.lp;
    const size_t k = model.free_delta.size();
    if (k > 20) throw std::length_error("enumeration oracle capped at 20 binaries");
    double best = kInf;
    for (size_t mask = 0; mask < (size_t{1} << k); ++mask) {
        for (size_t i = 0; i < k; ++i) {
            const int v = model.free_delta[i];
            const double val = (mask >> i) & 1 ? 1.0 : 0.0;
            lp.lb[static_cast<size_t>(v)] = val;
            lp.ub[static_cast<size_t>(v)] = val;
        }
        LpSolution s = solve_lp(lp);
        if (s.status == LpStatus::Optimal) best = std::min(best, s.objective);
    }
    return best;
}

// Balanced random injection vector (sums to zero), MW.
inline Eigen::VectorXd random_injection(std::mt19937_64& rng, int n_buses) {
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    Eigen::VectorXd inj(n_buses);
    for (int i = 0; i < n_buses; ++i) inj(i) = u(rng);
    inj.array() -= inj.mean();
    return inj;
}

}  // namespace tsopt::testing
