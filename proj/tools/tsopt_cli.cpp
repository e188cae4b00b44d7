// Command-line front end: generate, validate, probe, and solve planning cases.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tsopt/case_io.hpp"
#include "tsopt/reduction.hpp"
#include "tsopt/sensitivity.hpp"

using namespace tsopt;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaError("cannot write " + path);
    out << text;
}

std::vector<int> switchable_lines(const Network& net) {
    std::vector<int> sw;
    for (int l = 0; l < net.n_lines(); ++l)
        if (net.lines()[static_cast<size_t>(l)].switchable) sw.push_back(l);
    return sw;
}

struct SolveArgs {
    std::string case_path, regime = "compare-all", out_path;
    bool no_timing = false;
    std::optional<int> T;
    std::optional<double> H1, H2, alpha, gap, time_limit;
    std::optional<long> node_limit;
};

bool ok_status(SolveStatus s) {
    return s == SolveStatus::Optimal || s == SolveStatus::FeasibleAtLimit;
}

SolveResult solve_candidates(const Network& net, const DemandProfile& demand,
                             const PlanningConfig& cfg, const std::vector<int>& cand) {
    MilpModel m = build_model(net, demand, cfg,
                              std::vector<std::vector<int>>(static_cast<size_t>(cfg.T), cand));
    return solve(m, cfg);
}

int run_solve(const SolveArgs& a) {
    CaseFile c = parse_case(slurp(a.case_path));
    if (a.T) {
        if (*a.T < 1 || *a.T > c.config.T) {
            std::cerr << "error: --T must be in [1, " << c.config.T << "] for this case\n";
            return 2;
        }
        c.config.T = *a.T;
        c.demand.d.resize(static_cast<size_t>(*a.T));
        if (!c.config.H2.empty()) c.config.H2.resize(static_cast<size_t>(*a.T));
        for (Generator& g : c.generators) {
            g.cost.resize(static_cast<size_t>(*a.T));
            g.p_min.resize(static_cast<size_t>(*a.T));
            g.p_max.resize(static_cast<size_t>(*a.T));
        }
    }
    if (a.H1) c.config.H1.assign(c.lines.size(), *a.H1);
    if (a.H2) c.config.H2.assign(static_cast<size_t>(c.config.T), *a.H2);
    if (a.alpha) c.config.alpha = *a.alpha;
    if (a.gap) c.config.mip_gap = *a.gap;
    if (a.time_limit) c.config.time_limit = *a.time_limit;
    if (a.node_limit) c.config.node_limit = *a.node_limit;

    Network net = c.to_network();
    const std::vector<int> sw = switchable_lines(net);
    PlanningConfig open = c.config;
    open.H1.clear();
    open.H2.clear();

    RunReport rep;
    rep.case_name = c.name;
    rep.T = c.config.T;

    auto want = [&](const char* r) { return a.regime == "compare-all" || a.regime == r; };
    std::optional<SolveResult> z_ns, z_classic, z_con;
    std::optional<PlanOutcome> z_red;
    if (want("no-switching") || a.regime == "compare-all") {
        z_ns = solve_candidates(net, c.demand, c.config, {});
        rep.regimes.push_back(summarize_regime("no-switching", c, net, *z_ns));
    }
    if (want("classic")) {
        z_classic = solve_candidates(net, c.demand, open, sw);
        rep.regimes.push_back(summarize_regime("classic", c, net, *z_classic));
    }
    if (want("constrained")) {
        z_con = solve_candidates(net, c.demand, c.config, sw);
        rep.regimes.push_back(summarize_regime("constrained", c, net, *z_con));
    }
    if (want("reduced")) {
        z_red = plan_switching(net, c.demand, c.config);
        rep.regimes.push_back(summarize_regime("reduced", c, net, z_red->solution, &*z_red));
    }

    bool all_ok = true;
    for (const RegimeResult& r : rep.regimes) all_ok = all_ok && ok_status(r.status);

    if (a.regime == "compare-all" && all_ok) {
        // sanity invariants; a violation beyond the optimality gap means a
        // solver bug, not a bad case
        const double tol =
            std::max(1e-6, 2.0 * c.config.mip_gap) * (1.0 + std::abs(z_ns->objective));
        bool sane = z_ns->objective >= z_con->objective - tol &&
                    z_con->objective >= z_classic->objective - tol &&
                    z_red->solution.objective >= z_con->objective - tol;
        if (!sane) {
            std::cerr << "error: regime objectives violate the expected ordering\n";
            return 1;
        }
    }

    std::cout << write_report_text(rep);
    if (!a.out_path.empty()) spit(a.out_path, write_report_json(rep, !a.no_timing));
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transmission switching planner"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic case");
    std::uint64_t seed = 1;
    int n_buses = 13, n_lines = 34, gen_T = 5;
    double knob = 0.8;
    std::string gen_out = "case.json";
    bool force = false;
    gen->add_option("--seed", seed);
    gen->add_option("--buses", n_buses);
    gen->add_option("--lines", n_lines);
    gen->add_option("--T", gen_T);
    gen->add_option("--congestion", knob)->check(CLI::Range(0.0, 1.0));
    std::optional<double> gen_H1, gen_H2;
    gen->add_option("--H1", gen_H1, "per-line switching budget (default 2)");
    gen->add_option("--H2", gen_H2, "per-hour switching budget (default 4)");
    gen->add_option("--out", gen_out)->required();
    gen->add_flag("--force", force, "overwrite an existing file");

    // validate
    auto* val = app.add_subcommand("validate", "parse and validate a case file");
    std::string val_path;
    val->add_option("case", val_path)->required();

    // sensitivity
    auto* sens = app.add_subcommand("sensitivity", "distribution-factor table");
    std::string sens_path;
    std::vector<int> open_ids, monitored_ids;
    sens->add_option("case", sens_path)->required();
    sens->add_option("--open", open_ids, "line ids to open before the analysis");
    sens->add_option("--monitored", monitored_ids, "line ids to monitor (default: all closed)");

    // solve
    SolveArgs sa;
    auto* solve_cmd = app.add_subcommand("solve", "solve one regime or compare them all");
    solve_cmd->add_option("case", sa.case_path)->required();
    solve_cmd->add_option("--regime", sa.regime)
        ->check(CLI::IsMember({"no-switching", "classic", "constrained", "reduced", "compare-all"}));
    solve_cmd->add_option("--out", sa.out_path, "write the JSON report here");
    solve_cmd->add_flag("--no-timing", sa.no_timing, "omit timing for reproducible output");
    solve_cmd->add_option("--T", sa.T, "use only the first T demand blocks");
    solve_cmd->add_option("--H1", sa.H1, "per-line budget override");
    solve_cmd->add_option("--H2", sa.H2, "per-hour budget override");
    solve_cmd->add_option("--alpha", sa.alpha)->check(CLI::Range(1e-9, 1.0));
    solve_cmd->add_option("--gap", sa.gap, "relative optimality gap");
    solve_cmd->add_option("--time-limit", sa.time_limit, "seconds");
    solve_cmd->add_option("--node-limit", sa.node_limit);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            if (!force && std::filesystem::exists(gen_out)) {
                std::cerr << "error: " << gen_out << " exists; pass --force to overwrite\n";
                return 2;
            }
            CaseFile c = generate_case(seed, n_buses, n_lines, gen_T, knob);
            if (gen_H1) c.config.H1.assign(c.lines.size(), *gen_H1);
            if (gen_H2) c.config.H2.assign(static_cast<size_t>(c.config.T), *gen_H2);
            spit(gen_out, serialize_case(c));
            std::cout << "wrote " << gen_out << " (" << c.name << ")\n";
            return 0;
        }
        if (val->parsed()) {
            CaseFile c = parse_case(slurp(val_path));
            Network net = c.to_network();
            std::cout << c.name << ": " << net.n_buses() << " buses, " << net.n_lines()
                      << " lines (" << switchable_lines(net).size() << " switchable), "
                      << net.n_generators() << " generators, T=" << c.config.T << "\n";
            return 0;
        }
        if (sens->parsed()) {
            CaseFile c = parse_case(slurp(sens_path));
            Network net = c.to_network();
            Topology topo = net.initial_topology();
            for (int id : open_ids) topo.status[static_cast<size_t>(net.line_index(id))] = 0;
            std::vector<int> mon, cand;
            if (monitored_ids.empty()) {
                for (int l = 0; l < net.n_lines(); ++l)
                    if (topo.closed(l)) mon.push_back(l);
            } else {
                for (int id : monitored_ids) mon.push_back(net.line_index(id));
            }
            for (int l = 0; l < net.n_lines(); ++l)
                if (topo.closed(l) && net.lines()[static_cast<size_t>(l)].switchable)
                    cand.push_back(l);
            SensitivitySet set = sensitivity_set(net, topo, mon, cand);
            std::printf("%-8s %10s %8s", "line", "ptdf_self", "bridge");
            for (int m : set.monitored)
                std::printf(" lodf:%-4d", net.lines()[static_cast<size_t>(m)].id);
            std::printf("\n");
            for (size_t ci = 0; ci < set.candidates.size(); ++ci) {
                const int l = set.candidates[ci];
                std::printf("%-8d %10.6f %8s", net.lines()[static_cast<size_t>(l)].id,
                            set.ptdf_self[ci], set.is_bridge[ci] ? "yes" : "no");
                for (size_t mi = 0; mi < set.monitored.size(); ++mi) {
                    if (set.is_bridge[ci] || set.monitored[mi] == l)
                        std::printf(" %9s", "-");
                    else
                        std::printf(" %9.5f", set.lodf(static_cast<int>(mi), static_cast<int>(ci)));
                }
                std::printf("\n");
            }
            return 0;
        }
        if (solve_cmd->parsed()) return run_solve(sa);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
