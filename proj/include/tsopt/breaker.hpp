#pragma once

#include <utility>
#include <vector>

namespace tsopt {

// Breaker duty curve: weighting factor k versus interrupted current, with a
// total weighted-operations budget before maintenance. Interpolation between
// knots is log-log linear.
struct DutyCurve {
    std::vector<std::pair<double, double>> points;  // (current kA, weight k)
    double budget = 6000.0;

    // Anchors from the vendor curve: weight 1 at normal rated current, and a
    // 40 kA fault interruption costing 1/10 of the whole budget.
    static DutyCurve default_curve();
};

struct SwitchHistory {
    std::vector<std::pair<double, long>> interruptions;  // (current kA, count)
};

// Interpolated weight at current I. Throws OutOfRange outside the knots.
double weight_at(const DutyCurve& curve, double current_ka);

// floor((budget - sum n_i k_i) / k_x), clamped at zero.
long remaining_operations(const DutyCurve& curve, const SwitchHistory& history, double current_ka);

void validate(const DutyCurve& curve);

}  // namespace tsopt
