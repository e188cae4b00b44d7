#include "tsopt/case_io.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "json.hpp"
#include "tsopt/errors.hpp"

namespace tsopt {

using json = nlohmann::ordered_json;

namespace {

const json& need(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path + " must be an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError("missing field " + path + "." + key);
    return *it;
}

double need_num(const json& j, const char* key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_number()) throw SchemaError(path + "." + key + " must be a number");
    return v.get<double>();
}

int need_int(const json& j, const char* key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_number_integer()) throw SchemaError(path + "." + key + " must be an integer");
    return v.get<int>();
}

bool opt_bool(const json& j, const char* key, bool fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    if (!j[key].is_boolean()) throw SchemaError(std::string("field ") + key + " must be a boolean");
    return j[key].get<bool>();
}

std::vector<double> need_num_array(const json& j, const char* key, const std::string& path,
                                   size_t expect) {
    const json& v = need(j, key, path);
    if (!v.is_array()) throw SchemaError(path + "." + key + " must be an array");
    if (expect != 0 && v.size() != expect)
        throw SchemaError(path + "." + key + " must have " + std::to_string(expect) + " entries");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw SchemaError(path + "." + key + " entries must be numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

// Budget field: absent/null = unbounded, scalar = replicated, array = as is.
std::vector<double> parse_budget(const json& cfg, const char* key, size_t n,
                                 const std::string& path) {
    if (!cfg.contains(key) || cfg[key].is_null()) return {};
    const json& v = cfg[key];
    if (v.is_number()) return std::vector<double>(n, v.get<double>());
    if (v.is_array()) {
        if (v.size() != n)
            throw SchemaError(path + "." + key + " must have " + std::to_string(n) + " entries");
        std::vector<double> out;
        for (const auto& e : v) out.push_back(e.get<double>());
        return out;
    }
    throw SchemaError(path + "." + key + " must be a number or array");
}

std::string status_str(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::FeasibleAtLimit: return "feasible_at_limit";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
    }
    return "unknown";
}

}  // namespace

const DutyCurve* CaseFile::curve_for_line(int line_id) const {
    auto it = line_duty.find(line_id);
    if (it != line_duty.end()) {
        auto c = duty_curves.find(it->second);
        if (c == duty_curves.end())
            throw IntegrityError("line " + std::to_string(line_id) + " references unknown duty curve '" +
                                 it->second + "'");
        return &c->second;
    }
    auto c = duty_curves.find("default");
    return c == duty_curves.end() ? nullptr : &c->second;
}

CaseFile parse_case(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("not valid JSON: ") + e.what());
    }
    if (need(j, "schema", "$").get<std::string>() != kCaseSchema)
        throw SchemaError("unsupported schema, expected " + std::string(kCaseSchema));

    CaseFile c;
    c.name = j.value("name", std::string("unnamed"));
    c.mva_base = need_num(j, "mva_base", "$");

    const json& jc = need(j, "config", "$");
    c.config.T = need_int(jc, "T", "$.config");
    if (c.config.T < 1) throw SchemaError("$.config.T must be >= 1");
    c.config.alpha = need_num(jc, "alpha", "$.config");
    if (c.config.alpha <= 0.0 || c.config.alpha > 1.0)
        throw SchemaError("$.config.alpha must be in (0, 1]");
    c.config.charge_both_directions = opt_bool(jc, "charge_both_directions", true);
    if (jc.contains("mip_gap")) c.config.mip_gap = jc["mip_gap"].get<double>();
    if (jc.contains("overload_threshold"))
        c.config.overload_threshold = jc["overload_threshold"].get<double>();
    if (jc.contains("node_limit")) c.config.node_limit = jc["node_limit"].get<long>();
    if (jc.contains("time_limit")) c.config.time_limit = jc["time_limit"].get<double>();

    const json& jb = need(j, "buses", "$");
    if (!jb.is_array() || jb.empty()) throw SchemaError("$.buses must be a non-empty array");
    for (size_t i = 0; i < jb.size(); ++i) {
        const std::string p = "$.buses[" + std::to_string(i) + "]";
        Bus b;
        b.id = need_int(jb[i], "id", p);
        b.is_reference = opt_bool(jb[i], "reference", false);
        c.buses.push_back(b);
    }

    const json& jl = need(j, "lines", "$");
    if (!jl.is_array()) throw SchemaError("$.lines must be an array");
    for (size_t i = 0; i < jl.size(); ++i) {
        const std::string p = "$.lines[" + std::to_string(i) + "]";
        Line l;
        l.id = need_int(jl[i], "id", p);
        l.from_bus = need_int(jl[i], "from", p);
        l.to_bus = need_int(jl[i], "to", p);
        l.susceptance = need_num(jl[i], "b", p);
        l.f_max = need_num(jl[i], "fmax", p);
        l.f_min = jl[i].contains("fmin") ? jl[i]["fmin"].get<double>() : -l.f_max;
        l.switchable = opt_bool(jl[i], "switchable", false);
        l.switch_cost = jl[i].contains("zeta") ? jl[i]["zeta"].get<double>() : 0.0;
        l.initial_status = jl[i].contains("delta0") ? jl[i]["delta0"].get<int>() : 1;
        c.lines.push_back(l);
    }

    const size_t T = static_cast<size_t>(c.config.T);
    const json& jg = need(j, "generators", "$");
    if (!jg.is_array()) throw SchemaError("$.generators must be an array");
    for (size_t i = 0; i < jg.size(); ++i) {
        const std::string p = "$.generators[" + std::to_string(i) + "]";
        Generator g;
        g.id = need_int(jg[i], "id", p);
        g.bus = need_int(jg[i], "bus", p);
        g.cost = need_num_array(jg[i], "Co", p, T);
        g.p_min = need_num_array(jg[i], "Pmin", p, T);
        g.p_max = need_num_array(jg[i], "Pmax", p, T);
        c.generators.push_back(g);
    }

    const json& jd = need(j, "demand", "$");
    c.demand.q = need_num_array(jd, "q", "$.demand", c.buses.size());
    const json& dd = need(jd, "d", "$.demand");
    if (!dd.is_array() || dd.size() != T)
        throw SchemaError("$.demand.d must have T block rows");
    for (size_t t = 0; t < T; ++t) {
        if (!dd[t].is_array() || dd[t].size() != c.buses.size())
            throw SchemaError("$.demand.d[" + std::to_string(t) + "] must have one entry per bus");
        std::vector<double> row;
        for (const auto& e : dd[t]) row.push_back(e.get<double>());
        c.demand.d.push_back(std::move(row));
    }

    c.config.H1 = parse_budget(jc, "H1", c.lines.size(), "$.config");
    c.config.H2 = parse_budget(jc, "H2", T, "$.config");
    if (jc.contains("big_m") && !jc["big_m"].is_null())
        c.config.big_m = need_num_array(jc, "big_m", "$.config", c.lines.size());

    if (j.contains("duty_curves")) {
        for (const auto& [name, jv] : j["duty_curves"].items()) {
            DutyCurve curve;
            curve.budget = need_num(jv, "budget", "$.duty_curves." + name);
            const json& pts = need(jv, "points", "$.duty_curves." + name);
            for (const auto& pt : pts)
                curve.points.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
            try {
                validate(curve);
            } catch (const OutOfRange& e) {
                throw SchemaError("$.duty_curves." + name + ": " + e.what());
            }
            c.duty_curves[name] = std::move(curve);
        }
    }
    if (j.contains("line_duty")) {
        for (const auto& [lid, jv] : j["line_duty"].items())
            c.line_duty[std::stoi(lid)] = jv.get<std::string>();
    }

    // full structural validation (duplicates, dangling references, one ref bus)
    Network net = c.to_network();
    for (int l = 0; l < net.n_lines(); ++l) (void)l;
    for (const auto& [lid, name] : c.line_duty) {
        net.line_index(lid);  // throws IntegrityError when dangling
        (void)c.curve_for_line(lid);
    }

    // demand invariants and the curtailment-as-last-resort price ordering
    double max_cost = 0.0;
    for (const Generator& g : c.generators)
        for (double co : g.cost) max_cost = std::max(max_cost, co);
    for (size_t i = 0; i < c.buses.size(); ++i) {
        bool has_load = false;
        for (size_t t = 0; t < T; ++t) {
            if (c.demand.d[t][i] < 0.0)
                throw IntegrityError("negative demand at bus " + std::to_string(c.buses[i].id));
            has_load = has_load || c.demand.d[t][i] > 0.0;
        }
        if (has_load && c.demand.q[i] <= max_cost)
            throw IntegrityError("curtailment penalty at bus " + std::to_string(c.buses[i].id) +
                                 " must exceed the largest generator cost");
    }
    for (const double h : c.config.H1)
        if (std::isfinite(h) && (h < 0.0 || h != std::floor(h)))
            throw IntegrityError("H1 entries must be non-negative integers");
    for (const double h : c.config.H2)
        if (std::isfinite(h) && (h < 0.0 || h != std::floor(h)))
            throw IntegrityError("H2 entries must be non-negative integers");
    return c;
}

std::string serialize_case(const CaseFile& c) {
    json j;
    j["schema"] = kCaseSchema;
    j["name"] = c.name;
    j["mva_base"] = c.mva_base;
    json jc;
    jc["T"] = c.config.T;
    jc["alpha"] = c.config.alpha;
    if (c.config.H1.empty()) jc["H1"] = nullptr;
    else jc["H1"] = c.config.H1;
    if (c.config.H2.empty()) jc["H2"] = nullptr;
    else jc["H2"] = c.config.H2;
    jc["charge_both_directions"] = c.config.charge_both_directions;
    jc["mip_gap"] = c.config.mip_gap;
    jc["overload_threshold"] = c.config.overload_threshold;
    if (!c.config.big_m.empty()) jc["big_m"] = c.config.big_m;
    j["config"] = std::move(jc);

    j["buses"] = json::array();
    for (const Bus& b : c.buses) {
        json e;
        e["id"] = b.id;
        if (b.is_reference) e["reference"] = true;
        j["buses"].push_back(std::move(e));
    }
    j["lines"] = json::array();
    for (const Line& l : c.lines) {
        json e;
        e["id"] = l.id;
        e["from"] = l.from_bus;
        e["to"] = l.to_bus;
        e["b"] = l.susceptance;
        e["fmax"] = l.f_max;
        e["fmin"] = l.f_min;
        e["switchable"] = l.switchable;
        e["zeta"] = l.switch_cost;
        e["delta0"] = l.initial_status;
        j["lines"].push_back(std::move(e));
    }
    j["generators"] = json::array();
    for (const Generator& g : c.generators) {
        json e;
        e["id"] = g.id;
        e["bus"] = g.bus;
        e["Co"] = g.cost;
        e["Pmin"] = g.p_min;
        e["Pmax"] = g.p_max;
        j["generators"].push_back(std::move(e));
    }
    json jd;
    jd["q"] = c.demand.q;
    jd["d"] = c.demand.d;
    j["demand"] = std::move(jd);
    if (!c.duty_curves.empty()) {
        json dc;
        for (const auto& [name, curve] : c.duty_curves) {
            json e;
            e["budget"] = curve.budget;
            e["points"] = json::array();
            for (auto [cur, k] : curve.points) e["points"].push_back(json::array({cur, k}));
            dc[name] = std::move(e);
        }
        j["duty_curves"] = std::move(dc);
    }
    if (!c.line_duty.empty()) {
        json ld;
        for (const auto& [lid, name] : c.line_duty) ld[std::to_string(lid)] = name;
        j["line_duty"] = std::move(ld);
    }
    return j.dump(2) + "\n";
}

CaseFile generate_case(std::uint64_t seed, int n_buses, int n_lines, int T,
                       double congestion_knob) {
    if (n_buses < 2) throw IntegrityError("need at least 2 buses");
    if (n_lines < n_buses - 1)
        throw IntegrityError("need at least n_buses - 1 lines for a connected network");
    if (T < 1) throw IntegrityError("T must be >= 1");
    congestion_knob = std::clamp(congestion_knob, 0.0, 1.0);

    std::mt19937_64 rng(seed);
    auto uni = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };

    CaseFile c;
    {
        std::ostringstream nm;
        nm << "synthetic-s" << seed << "-b" << n_buses << "-l" << n_lines << "-t" << T << "-c"
           << congestion_knob;
        c.name = nm.str();
    }
    c.mva_base = 100.0;
    for (int i = 0; i < n_buses; ++i) c.buses.push_back({i + 1, i == 0});

    // spanning tree, then chords
    for (int i = 1; i < n_buses; ++i) {
        Line l;
        l.id = i;
        l.from_bus = pick(i) + 1;
        l.to_bus = i + 1;
        c.lines.push_back(l);
    }
    for (int i = n_buses - 1; i < n_lines; ++i) {
        Line l;
        l.id = i + 1;
        l.from_bus = pick(n_buses) + 1;
        do {
            l.to_bus = pick(n_buses) + 1;
        } while (l.to_bus == l.from_bus);
        c.lines.push_back(l);
    }
    const int tree_edges = n_buses - 1;
    for (int i = 0; i < n_lines; ++i) {
        Line& l = c.lines[static_cast<size_t>(i)];
        l.susceptance = uni(5.0, 15.0);
        l.switchable = uni(0.0, 1.0) < (i < tree_edges ? 0.2 : 0.6);
        l.switch_cost = uni(20.0, 120.0);
        l.initial_status = 1;
    }

    // demand: ~70% of buses carry load
    std::vector<double> base_load(static_cast<size_t>(n_buses), 0.0);
    double total = 0.0;
    for (int i = 0; i < n_buses; ++i) {
        if (uni(0.0, 1.0) < 0.7 || i == n_buses - 1) {
            base_load[static_cast<size_t>(i)] = uni(0.5, 1.5);
            total += base_load[static_cast<size_t>(i)];
        }
    }
    const double target = 50.0 * n_buses;  // MW peak-ish scale
    for (double& b : base_load) b *= target / total;
    double peak_total = 0.0;
    for (int t = 0; t < T; ++t) {
        // day-shaped profile: strong mid-horizon peak plus noise, so the
        // best topology genuinely changes from block to block
        const double shape =
            T == 1 ? 1.0
                   : 0.55 + 0.45 * std::sin(3.14159265358979 * (t + 0.5) / T);
        const double profile = shape * uni(0.95, 1.1);
        std::vector<double> row;
        double row_total = 0.0;
        for (double b : base_load) {
            row.push_back(b * profile);
            row_total += b * profile;
        }
        peak_total = std::max(peak_total, row_total);
        c.demand.d.push_back(std::move(row));
    }
    for (int i = 0; i < n_buses; ++i) c.demand.q.push_back(1000.0 + uni(0.0, 500.0));

    // generators: mildly overbuilt fleet concentrated at a few buses so real
    // power actually has to travel
    const int ng = std::max(2, n_buses / 3);
    for (int g = 0; g < ng; ++g) {
        Generator gen;
        gen.id = g + 1;
        gen.bus = g == 0 ? 1 : pick(n_buses) + 1;
        const double base_cost = uni(10.0, 90.0);
        const double cap = peak_total * (1.7 / ng) * uni(0.5, 1.5);
        for (int t = 0; t < T; ++t) {
            gen.cost.push_back(base_cost * uni(0.9, 1.1));
            gen.p_min.push_back(0.0);
            gen.p_max.push_back(cap);
        }
        c.generators.push_back(gen);
    }

    // line limits: generous at knob 0, tight and uneven at knob 1. Geometric
    // interpolation so intermediate knob values actually bite.
    for (Line& l : c.lines) {
        const double loose = 10.0 * peak_total;
        const double tight = uni(0.4, 1.2) * peak_total / 5.0;
        l.f_max = std::pow(loose, 1.0 - congestion_knob) * std::pow(tight, congestion_knob);
        l.f_min = -l.f_max;
    }

    c.config.T = T;
    c.config.alpha = 0.5;
    c.config.H1.assign(static_cast<size_t>(n_lines), 2.0);
    c.config.H2.assign(static_cast<size_t>(T), 4.0);
    c.duty_curves["default"] = DutyCurve::default_curve();
    return c;
}

RegimeResult summarize_regime(const std::string& regime, const CaseFile& c, const Network& net,
                              const SolveResult& result, const PlanOutcome* pipeline) {
    RegimeResult r;
    r.regime = regime;
    r.status = result.status;
    r.objective = result.objective;
    r.gap = result.gap;
    r.nodes = result.nodes;
    r.solve_time = result.wall_time;
    r.total_time = pipeline ? pipeline->wall_time : result.wall_time;

    const int H = static_cast<int>(result.dispatch.size());
    for (int h = 0; h < H; ++h) {
        const HourDispatch& d = result.dispatch[static_cast<size_t>(h)];
        double cur = 0.0, gen = 0.0, sw = 0.0;
        for (int i = 0; i < net.n_buses(); ++i) cur += c.demand.q[static_cast<size_t>(i)] * d.r(i);
        for (int g = 0; g < net.n_generators(); ++g)
            gen += net.generators()[static_cast<size_t>(g)].cost[static_cast<size_t>(h)] * d.p(g);
        for (int l = 0; l < net.n_lines(); ++l) {
            if (result.plan.delta.empty()) continue;
            const int now = result.plan.delta[static_cast<size_t>(h)][static_cast<size_t>(l)];
            const int prev = h == 0 ? net.lines()[static_cast<size_t>(l)].initial_status
                                    : result.plan.delta[static_cast<size_t>(h - 1)][static_cast<size_t>(l)];
            const int charged = c.config.charge_both_directions ? std::abs(now - prev)
                                                                : std::max(0, prev - now);
            sw += net.lines()[static_cast<size_t>(l)].switch_cost * charged;
        }
        r.curtail_cost.push_back(cur);
        r.gen_cost.push_back(gen);
        r.switch_cost.push_back(sw);
    }

    if (!result.plan.events.empty()) {
        for (int l = 0; l < net.n_lines(); ++l) {
            const int e = result.plan.events_for_line(l);
            if (e == 0) continue;
            const int lid = net.lines()[static_cast<size_t>(l)].id;
            r.events_per_line[lid] = e;
            r.total_events += e;
            if (const DutyCurve* curve = c.curve_for_line(lid)) {
                LineWear w;
                w.events = e;
                const double normal = curve->points.front().first;
                w.remaining_after = remaining_operations(*curve, {{{normal, e}}}, normal);
                r.wear[lid] = w;
            }
        }
    }

    if (pipeline) {
        for (const auto& hv : pipeline->monitored.per_hour)
            r.mll_size.push_back(static_cast<int>(hv.size()));
        for (const auto& hv : pipeline->candidates.updated)
            r.sll_u_size.push_back(static_cast<int>(hv.size()));
    }
    return r;
}

std::string write_report_json(const RunReport& report, bool include_timing) {
    json j;
    j["schema"] = kReportSchema;
    j["case"] = report.case_name;
    j["seed"] = report.seed;
    j["T"] = report.T;
    j["regimes"] = json::array();
    for (const RegimeResult& r : report.regimes) {
        json e;
        e["regime"] = r.regime;
        e["status"] = status_str(r.status);
        e["objective"] = r.objective;
        e["gap"] = r.gap;
        e["nodes"] = r.nodes;
        json comp;
        comp["curtailment"] = r.curtail_cost;
        comp["generation"] = r.gen_cost;
        comp["switching"] = r.switch_cost;
        e["cost_components"] = std::move(comp);
        if (!r.mll_size.empty()) e["mll_size"] = r.mll_size;
        if (!r.sll_u_size.empty()) e["sll_u_size"] = r.sll_u_size;
        json ev;
        for (const auto& [lid, n] : r.events_per_line) ev[std::to_string(lid)] = n;
        e["events_per_line"] = std::move(ev);
        e["total_events"] = r.total_events;
        if (!r.wear.empty()) {
            json w;
            for (const auto& [lid, lw] : r.wear) {
                json we;
                we["events"] = lw.events;
                we["remaining_operations"] = lw.remaining_after;
                w[std::to_string(lid)] = std::move(we);
            }
            e["wear"] = std::move(w);
        }
        if (include_timing) {
            json t;
            t["solve_s"] = r.solve_time;
            t["total_s"] = r.total_time;
            e["timing"] = std::move(t);
        }
        j["regimes"].push_back(std::move(e));
    }
    if (report.regimes.size() > 1) {
        const RegimeResult& base = report.regimes.front();
        json cmp;
        cmp["base"] = base.regime;
        cmp["rows"] = json::array();
        for (size_t i = 1; i < report.regimes.size(); ++i) {
            const RegimeResult& r = report.regimes[i];
            json row;
            row["regime"] = r.regime;
            row["saving_pct"] =
                base.objective != 0.0 ? (base.objective - r.objective) / base.objective * 100.0 : 0.0;
            row["switch_events"] = r.total_events;
            row["switch_events_base"] = base.total_events;
            cmp["rows"].push_back(std::move(row));
        }
        j["comparison"] = std::move(cmp);
    }
    return j.dump(2) + "\n";
}

std::string write_report_text(const RunReport& report) {
    std::ostringstream os;
    os << "case: " << report.case_name << "  T=" << report.T << "\n";
    const RegimeResult* base = report.regimes.empty() ? nullptr : &report.regimes.front();
    char line[256];
    std::snprintf(line, sizeof line, "%-14s %-18s %14s %9s %7s %10s\n", "regime", "status",
                  "objective", "saving%", "events", "solve_s");
    os << line;
    for (const RegimeResult& r : report.regimes) {
        const double saving = (base && base->objective != 0.0 && &r != base)
                                  ? (base->objective - r.objective) / base->objective * 100.0
                                  : 0.0;
        std::snprintf(line, sizeof line, "%-14s %-18s %14.2f %9.4f %7d %10.3f\n",
                      r.regime.c_str(), status_str(r.status).c_str(), r.objective, saving,
                      r.total_events, r.solve_time);
        os << line;
    }
    for (const RegimeResult& r : report.regimes) {
        if (r.mll_size.empty()) continue;
        os << "reduced-list sizes per hour (" << r.regime << "):\n  |MLL|   ";
        for (int v : r.mll_size) os << v << " ";
        os << "\n  |SLL_u| ";
        for (int v : r.sll_u_size) os << v << " ";
        os << "\n";
    }
    return os.str();
}

}  // namespace tsopt
