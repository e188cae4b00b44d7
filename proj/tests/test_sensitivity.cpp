#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "tsopt/sensitivity.hpp"

using namespace tsopt;
using namespace tsopt::testing;

namespace {

// Oracle: flow induced on line l by a +1/-1 MW pair at its own terminals,
// via a fresh DC power-flow solve.
double ptdf_by_injection(const Network& net, const Topology& topo, int m, int l) {
    Eigen::VectorXd inj = Eigen::VectorXd::Zero(net.n_buses());
    const Line& ln = net.lines()[static_cast<size_t>(l)];
    inj(net.bus_index(ln.from_bus)) = 1.0;
    inj(net.bus_index(ln.to_bus)) = -1.0;
    return dc_power_flow(net, topo, inj).flow(m);
}

}  // namespace

TEST_CASE("self ptdf anchors") {
    SUBCASE("single line is a bridge") {
        Network net = two_bus();
        CHECK(ptdf_self(net, net.initial_topology(), 0) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("identical parallel pair splits evenly") {
        Network net = parallel_pair();
        auto topo = net.initial_topology();
        CHECK(ptdf_self(net, topo, 0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(ptdf_self(net, topo, 1) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(ptdf_cross(net, topo, 0, 1) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("triangle equal susceptances") {
        Network net = triangle();
        auto topo = net.initial_topology();
        for (int l = 0; l < 3; ++l) {
            CHECK(ptdf_self(net, topo, l) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
            CHECK(ptdf_self(net, topo, l) ==
                  doctest::Approx(ptdf_by_injection(net, topo, l, l)).epsilon(1e-10));
        }
        CHECK(std::abs(ptdf_cross(net, topo, 0, 1)) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
}

TEST_CASE("open and disconnected queries are rejected") {
    Network net = triangle();
    Topology topo = net.initial_topology();
    topo.status[1] = 0;
    CHECK_THROWS_AS(ptdf_self(net, topo, 1), LineOpen);
    CHECK_THROWS_AS(ptdf_cross(net, topo, 1, 0), LineOpen);
    Topology split{{0, 1, 0}};  // only line 2 closed: bus 1 islanded
    CHECK_THROWS_AS(ptdf_self(net, split, 1), SingularTopology);
}

TEST_CASE("lodf anchors and bridge rejection") {
    SUBCASE("parallel pair transfers everything") {
        Network net = parallel_pair();
        CHECK(lodf(net, net.initial_topology(), 0, 1) == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("triangle magnitude one") {
        Network net = triangle();
        auto topo = net.initial_topology();
        CHECK(std::abs(lodf(net, topo, 0, 1)) == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("radial feeder throws BridgeLine") {
        Network net = two_bus();
        Topology topo = net.initial_topology();
        CHECK_THROWS_AS(lodf(net, topo, 0, 0), BridgeLine);
    }
}

TEST_CASE("post outage flow arithmetic") {
    CHECK(post_outage_flow(0.0, 0.0, 0.7) == 0.0);
    CHECK(post_outage_flow(40.0, 60.0, 1.0) == doctest::Approx(100.0));
}

TEST_CASE("post outage flows match a fresh re-solve on random networks") {
    std::mt19937_64 rng(2025);
    for (int trial = 0; trial < 30; ++trial) {
        const int nb = 4 + static_cast<int>(rng() % 5);
        const int nl = nb + static_cast<int>(rng() % 4);
        Network net = random_connected(rng, nb, nl);
        Topology topo = net.initial_topology();
        Eigen::VectorXd inj = random_injection(rng, nb);
        DcFlowResult base = dc_power_flow(net, topo, inj);

        for (int l = 0; l < net.n_lines(); ++l) {
            Topology outage = topo;
            outage.status[static_cast<size_t>(l)] = 0;
            if (connectivity(net, outage).size() != 1) {
                CHECK(ptdf_self(net, topo, l) == doctest::Approx(1.0).epsilon(1e-9));
                continue;
            }
            DcFlowResult after = dc_power_flow(net, outage, inj);
            for (int m = 0; m < net.n_lines(); ++m) {
                if (m == l) continue;
                const double predicted =
                    post_outage_flow(base.flow(m), base.flow(l), lodf(net, topo, m, l));
                CHECK(predicted ==
                      doctest::Approx(after.flow(m)).epsilon(1e-8).scale(1.0));
            }
        }
    }
}

TEST_CASE("batch set equals scalar queries and flags bridges") {
    std::mt19937_64 rng(5150);
    Network net = random_connected(rng, 8, 11);
    Topology topo = net.initial_topology();
    std::vector<int> all;
    for (int l = 0; l < net.n_lines(); ++l) all.push_back(l);
    SensitivitySet set = sensitivity_set(net, topo, all, all);
    for (size_t c = 0; c < set.candidates.size(); ++c) {
        const int l = set.candidates[c];
        CHECK(set.ptdf_self[c] == doctest::Approx(ptdf_self(net, topo, l)).epsilon(1e-12));
        for (size_t m = 0; m < set.monitored.size(); ++m) {
            if (set.monitored[m] == l) continue;
            if (set.is_bridge[c]) {
                CHECK(!set.lodf_for(set.monitored[m], l).has_value());
            } else {
                CHECK(set.lodf(static_cast<int>(m), static_cast<int>(c)) ==
                      doctest::Approx(lodf(net, topo, set.monitored[m], l)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("empty monitored list still yields self ptdfs") {
    Network net = triangle();
    SensitivitySet set = sensitivity_set(net, net.initial_topology(), {}, {0, 1, 2});
    REQUIRE(set.ptdf_self.size() == 3);
    CHECK(set.lodf.rows() == 0);
    for (double p : set.ptdf_self) CHECK(p == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("open line in the monitored list is rejected") {
    Network net = triangle();
    Topology topo = net.initial_topology();
    topo.status[2] = 0;
    CHECK_THROWS_AS(sensitivity_set(net, topo, {2}, {0}), LineOpen);
    CHECK_THROWS_AS(sensitivity_set(net, topo, {0}, {2}), LineOpen);
}

TEST_CASE("parallel kernel is byte-identical to the serial reference") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 5; ++trial) {
        Network net = random_connected(rng, 20, 32);
        Topology topo = net.initial_topology();
        std::vector<int> mon, cand;
        for (int l = 0; l < net.n_lines(); ++l) {
            if (l % 2 == 0) mon.push_back(l);
            cand.push_back(l);
        }
        SensitivitySet par = sensitivity_set(net, topo, mon, cand);
        SensitivitySet ser = sensitivity_set_serial(net, topo, mon, cand);
        CHECK(par.ptdf_self == ser.ptdf_self);
        CHECK(par.is_bridge == ser.is_bridge);
        CHECK((par.ptdf_cross.array() == ser.ptdf_cross.array()).all());
        for (int m = 0; m < par.lodf.rows(); ++m)
            for (int c = 0; c < par.lodf.cols(); ++c) {
                const bool eq = par.lodf(m, c) == ser.lodf(m, c) ||
                                (std::isnan(par.lodf(m, c)) && std::isnan(ser.lodf(m, c)));
                CHECK(eq);
            }
    }
}

TEST_CASE("graph automorphism symmetry: equal susceptance triangle ptdfs agree") {
    Network net = triangle(7.5);
    auto topo = net.initial_topology();
    const double p0 = ptdf_self(net, topo, 0);
    const double p1 = ptdf_self(net, topo, 1);
    const double p2 = ptdf_self(net, topo, 2);
    CHECK(p0 == doctest::Approx(p1).epsilon(1e-12));
    CHECK(p1 == doctest::Approx(p2).epsilon(1e-12));
}
