#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tsopt/breaker.hpp"
#include "tsopt/milp.hpp"
#include "tsopt/network.hpp"
#include "tsopt/reduction.hpp"

namespace tsopt {

inline constexpr const char* kCaseSchema = "tsopt-case/1";
inline constexpr const char* kReportSchema = "tsopt-report/1";

// One self-contained planning case: grid, demand blocks, config defaults,
// optional breaker duty curves.
struct CaseFile {
    std::string name;
    double mva_base = 100.0;
    std::vector<Bus> buses;
    std::vector<Line> lines;
    std::vector<Generator> generators;
    DemandProfile demand;  // indexed in bus order
    PlanningConfig config;
    std::map<std::string, DutyCurve> duty_curves;  // "default" applies everywhere
    std::map<int, std::string> line_duty;          // line id -> curve name

    Network to_network() const { return Network(mva_base, buses, lines, generators); }
    const DutyCurve* curve_for_line(int line_id) const;
};

// Parse + validate. SchemaError names the offending field path,
// IntegrityError the dangling reference or violated invariant.
CaseFile parse_case(const std::string& text);
std::string serialize_case(const CaseFile& c);

// Seeded synthetic case: spanning tree plus random chords, demand scaled so
// congestion_knob in [0,1] controls how hard the network is loaded against
// its line limits. Deterministic per seed.
CaseFile generate_case(std::uint64_t seed, int n_buses, int n_lines, int T,
                       double congestion_knob);

struct LineWear {
    int events = 0;
    long remaining_after = 0;  // remaining normal-current operations
};

struct RegimeResult {
    std::string regime;  // no-switching | classic | constrained | reduced
    SolveStatus status = SolveStatus::Infeasible;
    double objective = 0.0;
    double gap = 0.0;
    long nodes = 0;
    std::vector<double> curtail_cost, gen_cost, switch_cost;  // per hour, $
    std::vector<int> mll_size, sll_u_size;                    // reduced regime only
    std::map<int, int> events_per_line;                       // line id -> count
    int total_events = 0;
    std::map<int, LineWear> wear;  // line id -> wear summary
    double solve_time = 0.0;
    double total_time = 0.0;
};

struct RunReport {
    std::string case_name;
    std::uint64_t seed = 0;
    int T = 0;
    std::vector<RegimeResult> regimes;
};

// Cost/plan summary for one solved regime.
RegimeResult summarize_regime(const std::string& regime, const CaseFile& c, const Network& net,
                              const SolveResult& result, const PlanOutcome* pipeline = nullptr);

// JSON document plus an aligned text table. Pairwise savings are
// (Z_base - Z_regime) / Z_base against the first regime row. Timing fields
// are omitted when include_timing is false so re-runs are byte identical.
std::string write_report_json(const RunReport& report, bool include_timing = true);
std::string write_report_text(const RunReport& report);

}  // namespace tsopt
