#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "tsopt/breaker.hpp"
#include "tsopt/errors.hpp"

using namespace tsopt;

TEST_CASE("default curve anchors") {
    DutyCurve c = DutyCurve::default_curve();
    CHECK(weight_at(c, 4.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(weight_at(c, 40.0) == doctest::Approx(600.0).epsilon(1e-15));
    // fresh breaker: 6000 normal operations, 10 full fault interruptions
    CHECK(remaining_operations(c, {}, 4.0) == 6000);
    CHECK(remaining_operations(c, {}, 40.0) == 10);
}

TEST_CASE("log-log interpolation lies between the knots geometrically") {
    DutyCurve c = DutyCurve::default_curve();
    // midpoint in log space: sqrt(4*40)=12.649 kA -> sqrt(1*600)
    const double mid = std::sqrt(4.0 * 40.0);
    CHECK(weight_at(c, mid) == doctest::Approx(std::sqrt(600.0)).epsilon(1e-12));
    // multi-knot curve returns the knot values exactly
    DutyCurve m{{{1.0, 1.0}, {10.0, 7.0}, {100.0, 900.0}}, 5000.0};
    CHECK(weight_at(m, 10.0) == 7.0);
    CHECK(weight_at(m, 1.0) == 1.0);
    CHECK(weight_at(m, 100.0) == 900.0);
    CHECK(weight_at(m, std::sqrt(10.0)) == doctest::Approx(std::sqrt(7.0)).epsilon(1e-12));
}

TEST_CASE("queries outside the curve range are rejected") {
    DutyCurve c = DutyCurve::default_curve();
    CHECK_THROWS_AS(weight_at(c, 3.9), OutOfRange);
    CHECK_THROWS_AS(weight_at(c, 40.1), OutOfRange);
    CHECK_THROWS_AS(weight_at(c, 0.0), OutOfRange);
    CHECK_THROWS_AS(weight_at(c, -4.0), OutOfRange);
}

TEST_CASE("curve validation") {
    CHECK_THROWS_AS(validate(DutyCurve{{{4.0, 1.0}}, 6000.0}), OutOfRange);
    CHECK_THROWS_AS(validate(DutyCurve{{{4.0, 1.0}, {40.0, 600.0}}, 0.0}), OutOfRange);
    CHECK_THROWS_AS(validate(DutyCurve{{{40.0, 1.0}, {4.0, 600.0}}, 6000.0}), OutOfRange);
    CHECK_THROWS_AS(validate(DutyCurve{{{4.0, 600.0}, {40.0, 1.0}}, 6000.0}), OutOfRange);
    CHECK_THROWS_AS(validate(DutyCurve{{{4.0, 0.5}, {40.0, 600.0}}, 6000.0}), OutOfRange);
    CHECK_NOTHROW(validate(DutyCurve::default_curve()));
}

TEST_CASE("history consumes budget") {
    DutyCurve c = DutyCurve::default_curve();
    SwitchHistory one_fault{{{40.0, 1}}};
    CHECK(remaining_operations(c, one_fault, 4.0) == 5400);
    CHECK(remaining_operations(c, one_fault, 40.0) == 9);
    SwitchHistory mixed{{{40.0, 2}, {4.0, 300}}};
    // spent = 1200 + 300 = 1500; remaining at normal current = 4500
    CHECK(remaining_operations(c, mixed, 4.0) == 4500);
    SwitchHistory exhausted{{{40.0, 10}}};
    CHECK(remaining_operations(c, exhausted, 4.0) == 0);
    SwitchHistory overdrawn{{{40.0, 11}}};
    CHECK(remaining_operations(c, overdrawn, 4.0) == 0);
    CHECK_THROWS_AS(remaining_operations(c, SwitchHistory{{{4.0, -1}}}, 4.0), OutOfRange);
}

TEST_CASE("monotonicity over random histories") {
    DutyCurve c = DutyCurve::default_curve();
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> cur(4.0, 40.0);
    for (int trial = 0; trial < 1000; ++trial) {
        SwitchHistory h;
        const int events = static_cast<int>(rng() % 6);
        for (int e = 0; e < events; ++e)
            h.interruptions.push_back({cur(rng), static_cast<long>(rng() % 50)});
        const double probe = cur(rng);
        const long before = remaining_operations(c, h, probe);

        // adding history never increases what is left
        SwitchHistory more = h;
        more.interruptions.push_back({cur(rng), 1 + static_cast<long>(rng() % 10)});
        CHECK(remaining_operations(c, more, probe) <= before);

        // probing at a harsher current never increases what is left
        const double harsher = std::min(40.0, probe * (1.0 + 0.5 * cur(rng) / 40.0));
        CHECK(remaining_operations(c, h, harsher) <= before);

        // exhaustion consistency: spending everything the probe allows leaves < 1 op
        SwitchHistory all = h;
        all.interruptions.push_back({probe, before});
        CHECK(remaining_operations(c, all, probe) <= 0);
    }
}
