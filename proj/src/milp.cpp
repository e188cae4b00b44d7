#include "tsopt/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <queue>

#include "tsopt/errors.hpp"

namespace tsopt {

namespace {
constexpr double kIntTol = 1e-6;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}
}  // namespace

int SwitchingPlan::total_events() const {
    int n = 0;
    for (const auto& row : events)
        for (int e : row) n += e;
    return n;
}

int SwitchingPlan::events_for_line(int line_index) const {
    int n = 0;
    for (const auto& row : events) n += row[static_cast<size_t>(line_index)];
    return n;
}

MilpModel build_model(const Network& net, const DemandProfile& demand, const PlanningConfig& cfg,
                      const std::vector<std::vector<int>>& free_candidates,
                      std::optional<Topology> base_topology, std::vector<int> blocks) {
    MilpModel m;
    m.net = &net;
    m.base_topology = base_topology ? std::move(*base_topology) : net.initial_topology();
    if (blocks.empty()) {
        blocks.resize(static_cast<size_t>(cfg.T));
        for (int t = 0; t < cfg.T; ++t) blocks[static_cast<size_t>(t)] = t;
    }
    m.blocks = std::move(blocks);
    const int H = m.hours();
    const int nb = net.n_buses(), nl = net.n_lines(), ng = net.n_generators();

    if (static_cast<int>(free_candidates.size()) != H)
        throw InvalidCandidate("free_candidates must list one set per hour");
    std::vector<std::vector<char>> is_free(static_cast<size_t>(H),
                                           std::vector<char>(static_cast<size_t>(nl), 0));
    for (int h = 0; h < H; ++h) {
        for (int l : free_candidates[static_cast<size_t>(h)]) {
            if (l < 0 || l >= nl) throw InvalidCandidate("candidate line index out of range");
            if (!net.lines()[static_cast<size_t>(l)].switchable)
                throw InvalidCandidate("line id " +
                                       std::to_string(net.lines()[static_cast<size_t>(l)].id) +
                                       " is not switchable");
            is_free[static_cast<size_t>(h)][static_cast<size_t>(l)] = 1;
        }
    }

    const double half_pi = std::numbers::pi / 2.0;

    // Big-M per line. The +-pi/2 bus-angle boxes always give M = B*base*pi.
    // When a path of guaranteed-closed lines joins the endpoints, the angle
    // spread of an open line is also bounded by the path's sum of
    // fmax/(B*base), which is usually far tighter and keeps the LP
    // relaxation honest.
    std::vector<double> m_of(static_cast<size_t>(nl));
    {
        std::vector<char> always_closed(static_cast<size_t>(nl), 1);
        for (int l = 0; l < nl; ++l) {
            if (m.base_topology.status[static_cast<size_t>(l)] == 0)
                always_closed[static_cast<size_t>(l)] = 0;
            for (int h = 0; h < H && always_closed[static_cast<size_t>(l)]; ++h)
                if (is_free[static_cast<size_t>(h)][static_cast<size_t>(l)])
                    always_closed[static_cast<size_t>(l)] = 0;
        }
        std::vector<std::vector<std::pair<int, double>>> adj(static_cast<size_t>(nb));
        for (int l = 0; l < nl; ++l) {
            if (!always_closed[static_cast<size_t>(l)]) continue;
            const Line& ln = net.lines()[static_cast<size_t>(l)];
            const double w =
                std::max(ln.f_max, -ln.f_min) / net.line_mw_per_rad(l);
            adj[static_cast<size_t>(net.bus_index(ln.from_bus))].emplace_back(
                net.bus_index(ln.to_bus), w);
            adj[static_cast<size_t>(net.bus_index(ln.to_bus))].emplace_back(
                net.bus_index(ln.from_bus), w);
        }
        auto spread_bound = [&](int src, int dst) {
            std::vector<double> dist(static_cast<size_t>(nb), kInf);
            std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>,
                                std::greater<>>
                pq;
            dist[static_cast<size_t>(src)] = 0.0;
            pq.push({0.0, src});
            while (!pq.empty()) {
                auto [d, u] = pq.top();
                pq.pop();
                if (d > dist[static_cast<size_t>(u)]) continue;
                if (u == dst) break;
                for (auto [v, w] : adj[static_cast<size_t>(u)]) {
                    if (d + w < dist[static_cast<size_t>(v)]) {
                        dist[static_cast<size_t>(v)] = d + w;
                        pq.push({d + w, v});
                    }
                }
            }
            return dist[static_cast<size_t>(dst)];
        };
        for (int l = 0; l < nl; ++l) {
            if (!cfg.big_m.empty()) {
                m_of[static_cast<size_t>(l)] = cfg.big_m[static_cast<size_t>(l)];
                continue;
            }
            const Line& ln = net.lines()[static_cast<size_t>(l)];
            double spread = std::numbers::pi;
            if (!always_closed[static_cast<size_t>(l)])
                spread = std::min(
                    spread, spread_bound(net.bus_index(ln.from_bus), net.bus_index(ln.to_bus)));
            m_of[static_cast<size_t>(l)] = net.line_mw_per_rad(l) * spread;
        }
    }
    auto big_m = [&](int l) { return m_of[static_cast<size_t>(l)]; };

    auto grid = [&](int rows, int cols_n) {
        return std::vector<std::vector<int>>(static_cast<size_t>(rows),
                                             std::vector<int>(static_cast<size_t>(cols_n), -1));
    };
    m.v_p = grid(H, ng);
    m.v_f = grid(H, nl);
    m.v_theta = grid(H, nb);
    m.v_r = grid(H, nb);
    m.v_s = grid(H, nl);
    m.v_delta = grid(H, nl);
    std::vector<std::vector<int>> v_open;  // opening-only charge variables
    if (!cfg.charge_both_directions) v_open = grid(H, nl);

    LpProblem& lp = m.lp;
    for (int h = 0; h < H; ++h) {
        const int t = m.blocks[static_cast<size_t>(h)];
        for (int g = 0; g < ng; ++g) {
            const Generator& gen = net.generators()[static_cast<size_t>(g)];
            m.v_p[static_cast<size_t>(h)][static_cast<size_t>(g)] =
                lp.add_var(gen.cost[static_cast<size_t>(t)], gen.p_min[static_cast<size_t>(t)],
                           gen.p_max[static_cast<size_t>(t)]);
        }
        for (int l = 0; l < nl; ++l) {
            const Line& ln = net.lines()[static_cast<size_t>(l)];
            m.v_f[static_cast<size_t>(h)][static_cast<size_t>(l)] = lp.add_var(0.0, ln.f_min, ln.f_max);
        }
        for (int i = 0; i < nb; ++i) {
            const bool ref = i == net.reference_index();
            m.v_theta[static_cast<size_t>(h)][static_cast<size_t>(i)] =
                lp.add_var(0.0, ref ? 0.0 : -half_pi, ref ? 0.0 : half_pi);
        }
        for (int i = 0; i < nb; ++i) {
            m.v_r[static_cast<size_t>(h)][static_cast<size_t>(i)] =
                lp.add_var(demand.q[static_cast<size_t>(i)], 0.0,
                           demand.d[static_cast<size_t>(t)][static_cast<size_t>(i)]);
        }
        for (int l = 0; l < nl; ++l) {
            const Line& ln = net.lines()[static_cast<size_t>(l)];
            const double s_cost = cfg.charge_both_directions ? ln.switch_cost : 0.0;
            m.v_s[static_cast<size_t>(h)][static_cast<size_t>(l)] = lp.add_var(s_cost, 0.0, 1.0);
            if (!cfg.charge_both_directions)
                v_open[static_cast<size_t>(h)][static_cast<size_t>(l)] =
                    lp.add_var(ln.switch_cost, 0.0, 1.0);
        }
        for (int l = 0; l < nl; ++l) {
            const double fixed = static_cast<double>(m.base_topology.status[static_cast<size_t>(l)]);
            const bool fr = is_free[static_cast<size_t>(h)][static_cast<size_t>(l)];
            const int v = lp.add_var(0.0, fr ? 0.0 : fixed, fr ? 1.0 : fixed);
            m.v_delta[static_cast<size_t>(h)][static_cast<size_t>(l)] = v;
            m.delta_of_var[v] = {h, l};
            if (fr) m.free_delta.push_back(v);
        }
    }

    for (int h = 0; h < H; ++h) {
        const int t = m.blocks[static_cast<size_t>(h)];
        // nodal balance
        for (int i = 0; i < nb; ++i) {
            std::vector<std::pair<int, double>> row;
            for (int g = 0; g < ng; ++g)
                if (net.bus_index(net.generators()[static_cast<size_t>(g)].bus) == i)
                    row.emplace_back(m.v_p[static_cast<size_t>(h)][static_cast<size_t>(g)], 1.0);
            row.emplace_back(m.v_r[static_cast<size_t>(h)][static_cast<size_t>(i)], 1.0);
            for (int l = 0; l < nl; ++l) {
                const Line& ln = net.lines()[static_cast<size_t>(l)];
                if (net.bus_index(ln.from_bus) == i)
                    row.emplace_back(m.v_f[static_cast<size_t>(h)][static_cast<size_t>(l)], -1.0);
                else if (net.bus_index(ln.to_bus) == i)
                    row.emplace_back(m.v_f[static_cast<size_t>(h)][static_cast<size_t>(l)], 1.0);
            }
            const double d = demand.d[static_cast<size_t>(t)][static_cast<size_t>(i)];
            lp.add_row(std::move(row), d, d);
        }
        for (int l = 0; l < nl; ++l) {
            const Line& ln = net.lines()[static_cast<size_t>(l)];
            const int vf = m.v_f[static_cast<size_t>(h)][static_cast<size_t>(l)];
            const int vd = m.v_delta[static_cast<size_t>(h)][static_cast<size_t>(l)];
            const int th_f = m.v_theta[static_cast<size_t>(h)][static_cast<size_t>(net.bus_index(ln.from_bus))];
            const int th_t = m.v_theta[static_cast<size_t>(h)][static_cast<size_t>(net.bus_index(ln.to_bus))];
            const double b = net.line_mw_per_rad(l);
            const double M = big_m(l);
            // f - b*dtheta + M*delta <= M  and  f - b*dtheta - M*delta >= -M
            lp.add_row({{vf, 1.0}, {th_f, -b}, {th_t, b}, {vd, M}}, -kInf, M);
            lp.add_row({{vf, 1.0}, {th_f, -b}, {th_t, b}, {vd, -M}}, -M, kInf);
            // delta-gated capacity
            lp.add_row({{vf, 1.0}, {vd, -ln.f_max}}, -kInf, 0.0);
            lp.add_row({{vf, 1.0}, {vd, -ln.f_min}}, 0.0, kInf);
            // switch-event linearization against the previous hour
            const int vs = m.v_s[static_cast<size_t>(h)][static_cast<size_t>(l)];
            if (h == 0) {
                const double d0 = static_cast<double>(m.base_topology.status[static_cast<size_t>(l)]);
                lp.add_row({{vs, 1.0}, {vd, -1.0}}, -d0, kInf);
                lp.add_row({{vs, 1.0}, {vd, 1.0}}, d0, kInf);
                if (!cfg.charge_both_directions)
                    lp.add_row({{v_open[static_cast<size_t>(h)][static_cast<size_t>(l)], 1.0}, {vd, 1.0}},
                               d0, kInf);
            } else {
                const int vd_prev = m.v_delta[static_cast<size_t>(h - 1)][static_cast<size_t>(l)];
                lp.add_row({{vs, 1.0}, {vd, -1.0}, {vd_prev, 1.0}}, 0.0, kInf);
                lp.add_row({{vs, 1.0}, {vd, 1.0}, {vd_prev, -1.0}}, 0.0, kInf);
                if (!cfg.charge_both_directions)
                    lp.add_row({{v_open[static_cast<size_t>(h)][static_cast<size_t>(l)], 1.0},
                                {vd, 1.0},
                                {vd_prev, -1.0}},
                               0.0, kInf);
            }
        }
    }

    // per-line horizon budget
    for (int l = 0; l < nl; ++l) {
        const double h1 = cfg.h1_for(l);
        if (!std::isfinite(h1)) continue;
        std::vector<std::pair<int, double>> row;
        for (int h = 0; h < H; ++h)
            row.emplace_back(m.v_s[static_cast<size_t>(h)][static_cast<size_t>(l)], 1.0);
        m.rows_h1.push_back(lp.add_row(std::move(row), -kInf, h1));
    }
    // per-hour system budget
    for (int h = 0; h < H; ++h) {
        const double h2 = cfg.h2_for(m.blocks[static_cast<size_t>(h)]);
        if (!std::isfinite(h2)) continue;
        std::vector<std::pair<int, double>> row;
        for (int l = 0; l < nl; ++l)
            row.emplace_back(m.v_s[static_cast<size_t>(h)][static_cast<size_t>(l)], 1.0);
        m.rows_h2.push_back(lp.add_row(std::move(row), -kInf, h2));
    }
    return m;
}

namespace {

SwitchingPlan extract_plan(const MilpModel& model, const std::vector<double>& x) {
    const int H = model.hours();
    const int nl = model.net->n_lines();
    SwitchingPlan plan;
    plan.delta.assign(static_cast<size_t>(H), std::vector<int>(static_cast<size_t>(nl), 0));
    plan.events = plan.delta;
    for (int h = 0; h < H; ++h) {
        for (int l = 0; l < nl; ++l) {
            const int v = model.v_delta[static_cast<size_t>(h)][static_cast<size_t>(l)];
            const int d = static_cast<int>(std::lround(x[static_cast<size_t>(v)]));
            plan.delta[static_cast<size_t>(h)][static_cast<size_t>(l)] = d;
            const int prev = h == 0 ? model.base_topology.status[static_cast<size_t>(l)]
                                    : plan.delta[static_cast<size_t>(h - 1)][static_cast<size_t>(l)];
            plan.events[static_cast<size_t>(h)][static_cast<size_t>(l)] = std::abs(d - prev);
        }
    }
    return plan;
}

std::vector<HourDispatch> extract_dispatch(const MilpModel& model, const std::vector<double>& x) {
    const int H = model.hours();
    std::vector<HourDispatch> out(static_cast<size_t>(H));
    for (int h = 0; h < H; ++h) {
        HourDispatch& d = out[static_cast<size_t>(h)];
        auto fill = [&](const std::vector<int>& vars, Eigen::VectorXd& vec) {
            vec.resize(static_cast<Eigen::Index>(vars.size()));
            for (size_t i = 0; i < vars.size(); ++i)
                vec(static_cast<Eigen::Index>(i)) = x[static_cast<size_t>(vars[i])];
        };
        fill(model.v_p[static_cast<size_t>(h)], d.p);
        fill(model.v_f[static_cast<size_t>(h)], d.f);
        fill(model.v_theta[static_cast<size_t>(h)], d.theta);
        fill(model.v_r[static_cast<size_t>(h)], d.r);
    }
    return out;
}

// objective of an LP point under the model costs
double model_objective(const LpProblem& lp, const std::vector<double>& x) {
    double z = 0.0;
    for (int j = 0; j < lp.n_vars; ++j) z += lp.obj[static_cast<size_t>(j)] * x[static_cast<size_t>(j)];
    return z;
}

struct Node {
    double bound;
    long index;
    std::vector<std::pair<int, int>> fixings;  // (delta var, value)
    LpBasis basis;
};
struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
        return a.index > b.index;
    }
};

std::vector<int> delta_vector(const MilpModel& model, const std::vector<double>& x) {
    std::vector<int> d;
    d.reserve(model.free_delta.size());
    for (int v : model.free_delta)
        d.push_back(static_cast<int>(std::lround(x[static_cast<size_t>(v)])));
    return d;
}

}  // namespace

SolveResult solve(const MilpModel& model, const PlanningConfig& cfg) {
    const double t_start = now_seconds();
    SolveResult res;
    LpProblem lp = model.lp;  // bounds are mutated per node
    SimplexOptions sopt;

    auto lp_solve = [&](const LpBasis* warm) {
        SimplexOptions o = sopt;
        o.warm_start = warm;
        LpSolution s = solve_lp(lp, o);
        if (s.status == LpStatus::IterationLimit)
            throw IterationLimit("LP iteration limit inside branch and bound");
        res.lp_iterations += s.iterations;
        return s;
    };

    LpSolution root = lp_solve(nullptr);
    if (root.status == LpStatus::Infeasible) {
        res.status = SolveStatus::Infeasible;
        res.wall_time = now_seconds() - t_start;
        return res;
    }
    if (root.status == LpStatus::Unbounded) {
        res.status = SolveStatus::Unbounded;
        res.wall_time = now_seconds() - t_start;
        return res;
    }

    auto is_integral = [&](const std::vector<double>& x) {
        for (int v : model.free_delta) {
            const double d = x[static_cast<size_t>(v)];
            if (std::abs(d - std::lround(d)) > kIntTol) return false;
        }
        return true;
    };

    auto finish = [&](SolveStatus st, double best_bound, const LpSolution& inc) {
        res.status = st;
        res.objective = inc.objective;
        res.plan = extract_plan(model, inc.x);
        res.dispatch = extract_dispatch(model, inc.x);
        res.gap = std::max(0.0, (inc.objective - best_bound) /
                                    std::max(1e-9, std::abs(inc.objective)));
        res.wall_time = now_seconds() - t_start;
        return res;
    };

    if (model.free_delta.empty()) {
        res.nodes = 1;
        return finish(SolveStatus::Optimal, root.objective, root);
    }

    // Incumbent seed: freeze every free binary at its base status.
    LpSolution incumbent;
    std::vector<int> incumbent_delta;
    bool have_incumbent = false;
    {
        std::vector<std::pair<int, int>> seed;
        for (int v : model.free_delta) {
            auto [h, l] = model.delta_of_var.at(v);
            (void)h;
            seed.emplace_back(v, model.base_topology.status[static_cast<size_t>(l)]);
        }
        for (auto [v, val] : seed) {
            lp.lb[static_cast<size_t>(v)] = val;
            lp.ub[static_cast<size_t>(v)] = val;
        }
        LpSolution s = lp_solve(&root.basis);
        for (auto [v, val] : seed) {
            (void)val;
            lp.lb[static_cast<size_t>(v)] = 0.0;
            lp.ub[static_cast<size_t>(v)] = 1.0;
        }
        if (s.status == LpStatus::Optimal) {
            incumbent = std::move(s);
            incumbent_delta = delta_vector(model, incumbent.x);
            have_incumbent = true;
        }
    }

    auto try_incumbent = [&](const LpSolution& s) {
        std::vector<int> d = delta_vector(model, s.x);
        const double tie = 1e-9 * (1.0 + std::abs(s.objective));
        if (!have_incumbent || s.objective < incumbent.objective - tie ||
            (std::abs(s.objective - incumbent.objective) <= tie && d < incumbent_delta)) {
            incumbent = s;
            incumbent_delta = std::move(d);
            have_incumbent = true;
        }
    };

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    long next_index = 0;
    open.push(Node{root.objective, next_index++, {}, root.basis});
    double best_bound = root.objective;
    bool hit_limit = false;

    auto prune_cut = [&]() {
        if (!have_incumbent) return kInf;
        return incumbent.objective -
               std::max(1e-9, cfg.mip_gap * std::abs(incumbent.objective));
    };

    // Rounding dive: repeatedly fix the most nearly-integral fractional
    // binary at its nearest value and re-solve warm. Cheap incumbents make
    // the best-first search prune hard.
    auto dive = [&](LpSolution cur, std::vector<std::pair<int, int>> fix) {
        for (size_t depth = 0; depth < model.free_delta.size(); ++depth) {
            int v_pick = -1, val_pick = 0;
            double best_dist = 2.0;
            for (int v : model.free_delta) {
                bool fixed = false;
                for (auto [fv, fval] : fix)
                    if (fv == v) { fixed = true; break; }
                if (fixed) continue;
                const double d = cur.x[static_cast<size_t>(v)];
                const double frac = std::min(d, 1.0 - d);
                if (frac <= kIntTol) continue;
                if (frac < best_dist) {
                    best_dist = frac;
                    v_pick = v;
                    val_pick = d >= 0.5 ? 1 : 0;
                }
            }
            if (v_pick < 0) break;  // integral up to tolerance
            fix.emplace_back(v_pick, val_pick);
            for (auto [v, val] : fix) {
                lp.lb[static_cast<size_t>(v)] = val;
                lp.ub[static_cast<size_t>(v)] = val;
            }
            LpSolution s = lp_solve(&cur.basis);
            for (auto [v, val] : fix) {
                (void)val;
                lp.lb[static_cast<size_t>(v)] = 0.0;
                lp.ub[static_cast<size_t>(v)] = 1.0;
            }
            if (s.status != LpStatus::Optimal || s.objective >= prune_cut()) return;
            cur = std::move(s);
            if (is_integral(cur.x)) break;
        }
        if (is_integral(cur.x)) try_incumbent(cur);
    };
    dive(root, {});

    // pseudocost averages of the LP degradation per branching direction
    struct Pseudo {
        double up_sum = 0.0, dn_sum = 0.0;
        int up_cnt = 0, dn_cnt = 0;
    };
    std::unordered_map<int, Pseudo> pseudo;

    while (!open.empty()) {
        if (cfg.node_limit >= 0 && res.nodes >= cfg.node_limit) { hit_limit = true; break; }
        if (cfg.time_limit >= 0 && now_seconds() - t_start > cfg.time_limit) { hit_limit = true; break; }
        Node node = open.top();
        open.pop();
        best_bound = node.bound;
        if (node.bound >= prune_cut()) {
            best_bound = have_incumbent ? std::min(node.bound, incumbent.objective) : node.bound;
            open = {};
            break;
        }
        ++res.nodes;

        for (auto [v, val] : node.fixings) {
            lp.lb[static_cast<size_t>(v)] = val;
            lp.ub[static_cast<size_t>(v)] = val;
        }
        LpSolution s = lp_solve(&node.basis);
        for (auto [v, val] : node.fixings) {
            (void)val;
            lp.lb[static_cast<size_t>(v)] = 0.0;
            lp.ub[static_cast<size_t>(v)] = 1.0;
        }

        if (s.status == LpStatus::Infeasible) continue;
        if (s.status == LpStatus::Unbounded)
            throw NumericalFailure("unbounded LP relaxation in a bounded model");

        // book the observed degradation for the fixing that created this node
        if (!node.fixings.empty()) {
            auto [fv, fval] = node.fixings.back();
            Pseudo& p = pseudo[fv];
            const double deg = std::max(0.0, s.objective - node.bound);
            if (fval == 1) { p.up_sum += deg; ++p.up_cnt; }
            else { p.dn_sum += deg; ++p.dn_cnt; }
        }

        if (s.objective >= prune_cut()) continue;

        if (is_integral(s.x)) {
            try_incumbent(s);
            continue;
        }
        if (res.nodes % 64 == 0) dive(s, node.fixings);
        if (s.objective >= prune_cut()) continue;

        // pseudocost product rule; fractionality as the cold-start estimate,
        // ties toward lowest hour then line id
        int branch_var = -1;
        double best_score = -1.0;
        for (int v : model.free_delta) {
            bool fixed = false;
            for (auto [fv, fval] : node.fixings)
                if (fv == v) { fixed = true; break; }
            if (fixed) continue;
            const double d = s.x[static_cast<size_t>(v)];
            const double frac = std::min(d, 1.0 - d);
            if (frac <= kIntTol) continue;
            const auto it = pseudo.find(v);
            double est_dn = d, est_up = 1.0 - d;
            if (it != pseudo.end()) {
                if (it->second.dn_cnt > 0) est_dn = (it->second.dn_sum / it->second.dn_cnt) * d;
                if (it->second.up_cnt > 0)
                    est_up = (it->second.up_sum / it->second.up_cnt) * (1.0 - d);
            }
            const double score = std::max(est_dn, 1e-12) * std::max(est_up, 1e-12);
            if (score > best_score * (1.0 + 1e-12)) {
                best_score = score;
                branch_var = v;
            }
        }
        if (branch_var < 0) {  // fractional only by tolerance noise
            try_incumbent(s);
            continue;
        }
        for (int val : {0, 1}) {
            Node child;
            child.bound = s.objective;
            child.index = next_index++;
            child.fixings = node.fixings;
            child.fixings.emplace_back(branch_var, val);
            child.basis = s.basis;
            open.push(child);
        }
    }

    if (!have_incumbent) {
        res.status = SolveStatus::Infeasible;
        res.wall_time = now_seconds() - t_start;
        return res;
    }
    if (!hit_limit && open.empty()) best_bound = incumbent.objective;
    return finish(hit_limit ? SolveStatus::FeasibleAtLimit : SolveStatus::Optimal, best_bound,
                  incumbent);
}

SolveResult dc_opf(const Network& net, const Topology& topo, const DemandProfile& demand,
                   const PlanningConfig& cfg, int t) {
    MilpModel m = build_model(net, demand, cfg, {{}}, topo, {t});
    return solve(m, cfg);
}

void export_lp_text(const MilpModel& model, std::ostream& os) {
    const LpProblem& lp = model.lp;
    std::vector<std::string> names(static_cast<size_t>(lp.n_vars));
    const int H = model.hours();
    auto nm = [&](const char* base, int h, int id) {
        return std::string(base) + "_" + std::to_string(h + 1) + "_" + std::to_string(id);
    };
    for (int h = 0; h < H; ++h) {
        const Network& net = *model.net;
        for (int g = 0; g < net.n_generators(); ++g)
            names[static_cast<size_t>(model.v_p[static_cast<size_t>(h)][static_cast<size_t>(g)])] =
                nm("p", h, net.generators()[static_cast<size_t>(g)].id);
        for (int l = 0; l < net.n_lines(); ++l) {
            names[static_cast<size_t>(model.v_f[static_cast<size_t>(h)][static_cast<size_t>(l)])] =
                nm("f", h, net.lines()[static_cast<size_t>(l)].id);
            names[static_cast<size_t>(model.v_s[static_cast<size_t>(h)][static_cast<size_t>(l)])] =
                nm("s", h, net.lines()[static_cast<size_t>(l)].id);
            names[static_cast<size_t>(model.v_delta[static_cast<size_t>(h)][static_cast<size_t>(l)])] =
                nm("delta", h, net.lines()[static_cast<size_t>(l)].id);
        }
        for (int i = 0; i < net.n_buses(); ++i) {
            names[static_cast<size_t>(model.v_theta[static_cast<size_t>(h)][static_cast<size_t>(i)])] =
                nm("theta", h, net.buses()[static_cast<size_t>(i)].id);
            names[static_cast<size_t>(model.v_r[static_cast<size_t>(h)][static_cast<size_t>(i)])] =
                nm("r", h, net.buses()[static_cast<size_t>(i)].id);
        }
    }
    for (int j = 0; j < lp.n_vars; ++j)
        if (names[static_cast<size_t>(j)].empty())
            names[static_cast<size_t>(j)] = "x_" + std::to_string(j);

    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::string(buf);
    };

    os << "Minimize\n obj:";
    bool first = true;
    for (int j = 0; j < lp.n_vars; ++j) {
        const double c = lp.obj[static_cast<size_t>(j)];
        if (c == 0.0) continue;
        os << (c < 0 ? (first ? " - " : " - ") : (first ? " " : " + "));
        os << num(std::abs(c)) << " " << names[static_cast<size_t>(j)];
        first = false;
    }
    if (first) os << " 0";
    os << "\nSubject To\n";
    for (int i = 0; i < lp.n_rows(); ++i) {
        const auto& row = lp.rows[static_cast<size_t>(i)];
        const double lo = lp.row_lo[static_cast<size_t>(i)], up = lp.row_up[static_cast<size_t>(i)];
        auto body = [&](std::ostream& o) {
            bool f2 = true;
            for (auto [j, v] : row) {
                o << (f2 ? (v < 0 ? "- " : "") : (v < 0 ? " - " : " + "));
                o << num(std::abs(v)) << " " << names[static_cast<size_t>(j)];
                f2 = false;
            }
        };
        if (std::isfinite(lo) && lo == up) {
            os << " c" << i << ": ";
            body(os);
            os << " = " << num(lo) << "\n";
        } else {
            if (std::isfinite(up)) {
                os << " c" << i << "u: ";
                body(os);
                os << " <= " << num(up) << "\n";
            }
            if (std::isfinite(lo)) {
                os << " c" << i << "l: ";
                body(os);
                os << " >= " << num(lo) << "\n";
            }
        }
    }
    os << "Bounds\n";
    for (int j = 0; j < lp.n_vars; ++j) {
        os << " " << num(lp.lb[static_cast<size_t>(j)]) << " <= " << names[static_cast<size_t>(j)]
           << " <= " << num(lp.ub[static_cast<size_t>(j)]) << "\n";
    }
    if (!model.free_delta.empty()) {
        os << "Binaries\n";
        for (int v : model.free_delta) os << " " << names[static_cast<size_t>(v)];
        os << "\n";
    }
    os << "End\n";
}

}  // namespace tsopt
