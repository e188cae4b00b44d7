#include "tsopt/breaker.hpp"

#include <cmath>
#include <string>

#include "tsopt/errors.hpp"

namespace tsopt {

DutyCurve DutyCurve::default_curve() {
    DutyCurve c;
    c.points = {{4.0, 1.0}, {40.0, 600.0}};
    c.budget = 6000.0;
    return c;
}

void validate(const DutyCurve& curve) {
    if (curve.points.size() < 2) throw OutOfRange("duty curve needs at least two knots");
    if (curve.budget <= 0.0) throw OutOfRange("duty curve budget must be positive");
    for (size_t i = 0; i < curve.points.size(); ++i) {
        const auto [cur, k] = curve.points[i];
        if (cur <= 0.0 || k < 1.0) throw OutOfRange("duty curve knots need current > 0, k >= 1");
        if (i > 0) {
            if (cur <= curve.points[i - 1].first)
                throw OutOfRange("duty curve currents must be strictly increasing");
            if (k < curve.points[i - 1].second)
                throw OutOfRange("duty curve weights must be non-decreasing");
        }
    }
}

double weight_at(const DutyCurve& curve, double current_ka) {
    validate(curve);
    const auto& p = curve.points;
    if (current_ka < p.front().first || current_ka > p.back().first)
        throw OutOfRange("current " + std::to_string(current_ka) +
                         " kA outside the duty curve range [" + std::to_string(p.front().first) +
                         ", " + std::to_string(p.back().first) + "]");
    for (size_t i = 1; i < p.size(); ++i) {
        if (current_ka > p[i].first) continue;
        const auto [x0, y0] = p[i - 1];
        const auto [x1, y1] = p[i];
        if (current_ka == x0) return y0;
        if (current_ka == x1) return y1;
        const double u = (std::log(current_ka) - std::log(x0)) / (std::log(x1) - std::log(x0));
        return std::exp(std::log(y0) + u * (std::log(y1) - std::log(y0)));
    }
    return p.back().second;
}

long remaining_operations(const DutyCurve& curve, const SwitchHistory& history, double current_ka) {
    const double kx = weight_at(curve, current_ka);
    double spent = 0.0;
    for (const auto& [cur, n] : history.interruptions) {
        if (n < 0) throw OutOfRange("negative interruption count");
        spent += static_cast<double>(n) * weight_at(curve, cur);
    }
    const double left = (curve.budget - spent) / kx;
    if (left <= 0.0) return 0;
    return static_cast<long>(std::floor(left + 1e-9));
}

}  // namespace tsopt
