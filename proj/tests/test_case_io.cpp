#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "tsopt/case_io.hpp"
#include "tsopt/reduction.hpp"

using namespace tsopt;

namespace {

const char* kMinimalCase = R"({
  "schema": "tsopt-case/1",
  "name": "mini",
  "mva_base": 100.0,
  "config": {"T": 1, "alpha": 0.5},
  "buses": [{"id": 1, "reference": true}, {"id": 2}],
  "lines": [{"id": 1, "from": 1, "to": 2, "b": 10.0, "fmax": 100.0, "switchable": true, "zeta": 5.0}],
  "generators": [{"id": 1, "bus": 1, "Co": [10.0], "Pmin": [0.0], "Pmax": [200.0]}],
  "demand": {"q": [1000.0, 1000.0], "d": [[0.0, 50.0]]}
})";

std::string patched(const std::string& from, const std::string& to) {
    std::string s = kMinimalCase;
    const size_t p = s.find(from);
    REQUIRE(p != std::string::npos);
    s.replace(p, from.size(), to);
    return s;
}

}  // namespace

TEST_CASE("minimal case parses with sensible defaults") {
    CaseFile c = parse_case(kMinimalCase);
    CHECK(c.name == "mini");
    CHECK(c.mva_base == 100.0);
    REQUIRE(c.lines.size() == 1);
    CHECK(c.lines[0].f_min == -100.0);  // defaulted to -fmax
    CHECK(c.lines[0].initial_status == 1);
    CHECK(c.lines[0].switch_cost == 5.0);
    CHECK(c.config.H1.empty());  // absent budget = unbounded
    CHECK(c.config.H2.empty());
    CHECK(c.config.charge_both_directions);
    Network net = c.to_network();
    CHECK(net.n_buses() == 2);
    CHECK(net.reference_index() == 0);
}

TEST_CASE("schema violations name the offending path") {
    CHECK_THROWS_AS(parse_case("not json"), SchemaError);
    CHECK_THROWS_AS(parse_case(R"({"schema": "other/9"})"), SchemaError);
    try {
        parse_case(patched(R"("mva_base": 100.0,)", ""));
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("$.mva_base") != std::string::npos);
    }
    // T mismatch in generator arrays
    CHECK_THROWS_AS(parse_case(patched(R"("Co": [10.0])", R"("Co": [10.0, 11.0])")), SchemaError);
    CHECK_THROWS_AS(parse_case(patched(R"("T": 1)", R"("T": 0)")), SchemaError);
    CHECK_THROWS_AS(parse_case(patched(R"("alpha": 0.5)", R"("alpha": 1.5)")), SchemaError);
}

TEST_CASE("integrity violations surface as IntegrityError") {
    // duplicate bus id
    CHECK_THROWS_AS(parse_case(patched(R"({"id": 2})", R"({"id": 1})")), IntegrityError);
    // dangling generator bus
    CHECK_THROWS_AS(parse_case(patched(R"("bus": 1)", R"("bus": 7)")), IntegrityError);
    // curtailment penalty below the marginal generator cost
    CHECK_THROWS_AS(parse_case(patched(R"("q": [1000.0, 1000.0])", R"("q": [1000.0, 9.0])")),
                    IntegrityError);
    // fractional and negative budgets
    std::string s = patched(R"("alpha": 0.5)", R"("alpha": 0.5, "H1": 1.5)");
    CHECK_THROWS_AS(parse_case(s), IntegrityError);
    s = patched(R"("alpha": 0.5)", R"("alpha": 0.5, "H2": -1)");
    CHECK_THROWS_AS(parse_case(s), IntegrityError);
    // budgets that are fine parse and replicate
    s = patched(R"("alpha": 0.5)", R"("alpha": 0.5, "H1": 2, "H2": [3])");
    CaseFile c = parse_case(s);
    CHECK(c.config.H1 == std::vector<double>{2.0});
    CHECK(c.config.H2 == std::vector<double>{3.0});
}

TEST_CASE("dangling duty curve reference is rejected") {
    std::string s = patched(R"("demand")", R"("line_duty": {"1": "missing"}, "demand")");
    CHECK_THROWS_AS(parse_case(s), IntegrityError);
}

TEST_CASE("serialize then parse is the identity") {
    for (std::uint64_t seed : {1ull, 7ull, 99ull}) {
        CaseFile c = generate_case(seed, 9, 14, 3, 0.7);
        const std::string text = serialize_case(c);
        CaseFile back = parse_case(text);
        CHECK(serialize_case(back) == text);
        CHECK(back.name == c.name);
        CHECK(back.config.H1 == c.config.H1);
        CHECK(back.demand.d == c.demand.d);
    }
}

TEST_CASE("generation is deterministic per seed") {
    const std::string a = serialize_case(generate_case(42, 13, 34, 5, 0.8));
    const std::string b = serialize_case(generate_case(42, 13, 34, 5, 0.8));
    const std::string other = serialize_case(generate_case(43, 13, 34, 5, 0.8));
    CHECK(a == b);
    CHECK(a != other);
}

TEST_CASE("generated dimensions and budgets at the benchmark scale") {
    CaseFile c = generate_case(5, 13, 34, 5, 0.9);
    CHECK(c.buses.size() == 13);
    CHECK(c.lines.size() == 34);
    CHECK(c.demand.d.size() == 5);
    CHECK(c.config.H1 == std::vector<double>(34, 2.0));
    CHECK(c.config.H2 == std::vector<double>(5, 4.0));
    CHECK(c.config.alpha == 0.5);
    CHECK(c.duty_curves.count("default") == 1);
    CHECK_NOTHROW((void)c.to_network());
    // every case validates through its own serialized form
    CHECK_NOTHROW((void)parse_case(serialize_case(c)));
}

TEST_CASE("uncongested knob yields an empty monitored set") {
    for (std::uint64_t seed : {3ull, 11ull}) {
        CaseFile c = generate_case(seed, 10, 16, 3, 0.0);
        Network net = c.to_network();
        std::vector<HourDispatch> flows;
        for (int t = 0; t < c.config.T; ++t) {
            SolveResult r = dc_opf(net, net.initial_topology(), c.demand, c.config, t);
            REQUIRE(r.status == SolveStatus::Optimal);
            CHECK(r.dispatch[0].r.sum() == doctest::Approx(0.0).epsilon(1e-9));
            flows.push_back(r.dispatch[0]);
        }
        MonitoredLines mll = monitored_lines(flows, net, c.config.alpha);
        for (const auto& hv : mll.per_hour) CHECK(hv.empty());
    }
}

TEST_CASE("cost components add up to the objective") {
    CaseFile c = generate_case(21, 8, 13, 2, 0.9);
    Network net = c.to_network();
    PlanOutcome out = plan_switching(net, c.demand, c.config);
    REQUIRE(out.solution.status == SolveStatus::Optimal);
    RegimeResult r = summarize_regime("reduced", c, net, out.solution, &out);
    double total = 0.0;
    for (size_t h = 0; h < r.curtail_cost.size(); ++h)
        total += r.curtail_cost[h] + r.gen_cost[h] + r.switch_cost[h];
    CHECK(total == doctest::Approx(out.solution.objective).epsilon(1e-7));
    CHECK(r.mll_size.size() == 2);
    CHECK(r.sll_u_size.size() == 2);
    int ev = 0;
    for (const auto& [lid, n] : r.events_per_line) ev += n;
    CHECK(ev == r.total_events);
    CHECK(r.total_events == out.solution.plan.total_events());
}

TEST_CASE("report savings math and determinism") {
    RunReport rep;
    rep.case_name = "toy";
    rep.seed = 1;
    rep.T = 1;
    RegimeResult base;
    base.regime = "no-switching";
    base.status = SolveStatus::Optimal;
    base.objective = 1000.0;
    base.solve_time = 0.5;
    RegimeResult red = base;
    red.regime = "reduced";
    red.objective = 998.8;
    red.total_events = 2;
    red.solve_time = 0.9;
    rep.regimes = {base, red};

    const std::string doc = write_report_json(rep, false);
    auto j = nlohmann::json::parse(doc);
    CHECK(j["schema"] == kReportSchema);
    CHECK(j["comparison"]["rows"][0]["saving_pct"].get<double>() ==
          doctest::Approx(0.12).epsilon(1e-12));
    CHECK(!j["regimes"][0].contains("timing"));

    // identical content with different wall times must be byte-identical
    RunReport rep2 = rep;
    rep2.regimes[0].solve_time = 123.0;
    rep2.regimes[1].total_time = 7.0;
    CHECK(write_report_json(rep2, false) == doc);
    CHECK(write_report_json(rep2, true) != doc);

    const std::string text = write_report_text(rep);
    CHECK(text.find("no-switching") != std::string::npos);
    CHECK(text.find("reduced") != std::string::npos);
    CHECK(text.find("0.1200") != std::string::npos);
}
