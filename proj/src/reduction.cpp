#include "tsopt/reduction.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "tsopt/errors.hpp"

namespace tsopt {

namespace {
double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}
}  // namespace

bool MonitoredLines::contains(int hour, int line_index) const {
    const auto& v = per_hour[static_cast<size_t>(hour)];
    return std::binary_search(v.begin(), v.end(), line_index);
}

double violation_score(double flow, double f_max, double alpha) {
    return std::abs(flow) - alpha * f_max;
}

MonitoredLines monitored_lines(const std::vector<HourDispatch>& step1, const Network& net,
                               double alpha) {
    MonitoredLines mll;
    mll.per_hour.resize(step1.size());
    for (size_t h = 0; h < step1.size(); ++h) {
        for (int l = 0; l < net.n_lines(); ++l) {
            const Line& ln = net.lines()[static_cast<size_t>(l)];
            // Viol = 0 is not monitored (strict inequality)
            if (violation_score(step1[h].f(l), ln.f_max, alpha) > 0.0)
                mll.per_hour[h].push_back(l);
        }
    }
    return mll;
}

std::vector<std::vector<int>> excluded_candidates(const std::vector<HourDispatch>& step1,
                                                  const MonitoredLines& monitored,
                                                  const SensitivitySet& sens, const Network& net,
                                                  double overload_threshold) {
    const size_t H = step1.size();
    std::vector<std::vector<int>> excluded(H);
    for (size_t h = 0; h < H; ++h) {
        for (size_t c = 0; c < sens.candidates.size(); ++c) {
            const int l = sens.candidates[c];
            bool out = sens.is_bridge[c];
            if (!out) {
                for (int m : monitored.per_hour[h]) {
                    if (m == l) continue;
                    auto lo = sens.lodf_for(m, l);
                    if (!lo) continue;
                    const double predicted =
                        post_outage_flow(step1[h].f(m), step1[h].f(l), *lo);
                    const double limit =
                        overload_threshold * net.lines()[static_cast<size_t>(m)].f_max;
                    if (std::abs(predicted) >= limit) {
                        out = true;
                        break;
                    }
                }
            }
            if (out) excluded[h].push_back(l);
        }
    }
    return excluded;
}

PlanOutcome plan_switching(const Network& net, const DemandProfile& demand,
                           const PlanningConfig& cfg) {
    const double t0 = now_seconds();
    PlanOutcome out;
    const Topology topo = net.initial_topology();

    // Step 1: no-switching OPF per hour. Independent LPs; run in parallel,
    // results land in fixed slots.
    out.step1.resize(static_cast<size_t>(cfg.T));
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < cfg.T; ++t)
        out.step1[static_cast<size_t>(t)] = dc_opf(net, topo, demand, cfg, t);
    std::vector<HourDispatch> flows;
    for (const SolveResult& r : out.step1) {
        out.step1_objective += r.objective;
        flows.push_back(r.dispatch.at(0));
    }

    // Step 2: monitored lines
    out.monitored = monitored_lines(flows, net, cfg.alpha);

    // Steps 3-4: screen the closed switchable candidates against the union
    // of monitored lines with one shared factorization.
    std::vector<int> sll_o, closed_candidates;
    for (int l = 0; l < net.n_lines(); ++l) {
        if (!net.lines()[static_cast<size_t>(l)].switchable) continue;
        sll_o.push_back(l);
        if (topo.closed(l)) closed_candidates.push_back(l);
    }
    std::vector<int> monitored_union;
    for (const auto& hv : out.monitored.per_hour)
        monitored_union.insert(monitored_union.end(), hv.begin(), hv.end());
    std::sort(monitored_union.begin(), monitored_union.end());
    monitored_union.erase(std::unique(monitored_union.begin(), monitored_union.end()),
                          monitored_union.end());

    const double t_sens = now_seconds();
    const SensitivitySet sens = sensitivity_set(net, topo, monitored_union, closed_candidates);
    out.sensitivity_time = now_seconds() - t_sens;

    out.candidates.original = sll_o;
    out.candidates.excluded =
        excluded_candidates(flows, out.monitored, sens, net, cfg.overload_threshold);
    out.candidates.updated.resize(static_cast<size_t>(cfg.T));
    for (int t = 0; t < cfg.T; ++t) {
        const auto& ex = out.candidates.excluded[static_cast<size_t>(t)];
        auto& up = out.candidates.updated[static_cast<size_t>(t)];
        std::set_difference(sll_o.begin(), sll_o.end(), ex.begin(), ex.end(),
                            std::back_inserter(up));
    }

    // Step 5: reduced MILP
    MilpModel model = build_model(net, demand, cfg, out.candidates.updated);
    out.solution = solve(model, cfg);
    out.wall_time = now_seconds() - t0;
    return out;
}

}  // namespace tsopt
