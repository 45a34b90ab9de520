#include "rom/method_b.hpp"

#include <cmath>
#include <numbers>

#include "rom/errors.hpp"
#include "rom/gravity.hpp"

namespace rom {

namespace {
constexpr double kDegPerRad = 180.0 / std::numbers::pi;
constexpr double kMinMagnitude = 1.0;
}  // namespace

const char* to_string(Quadrant q) {
    switch (q) {
        case Quadrant::I: return "I";
        case Quadrant::II: return "II";
        case Quadrant::III: return "III";
        case Quadrant::IV: return "IV";
    }
    return "?";
}

TiltAnglesB tilt_atan(const GravityVector& g) {
    const double sm = signal_magnitude(g);
    if (!(sm > kMinMagnitude))
        throw NumericError("tilt undefined: signal magnitude " +
                           std::to_string(sm) + " m/s² (free-fall?)");
    TiltAnglesB t;
    // atan2 handles a zero denominator: the angle saturates at ±90.
    t.theta_x = std::atan2(g.gx, std::hypot(g.gy, g.gz)) * kDegPerRad;
    t.theta_y = std::atan2(g.gy, std::hypot(g.gx, g.gz)) * kDegPerRad;
    t.theta_z = std::atan2(g.gz, std::hypot(g.gx, g.gy)) * kDegPerRad;
    return t;
}

Quadrant classify_quadrant(const GravityVector& g) {
    const bool x_neg = g.gx < 0.0;  // exact zero classifies positive
    const bool z_neg = g.gz < 0.0;
    if (x_neg) return z_neg ? Quadrant::IV : Quadrant::I;
    return z_neg ? Quadrant::III : Quadrant::II;
}

double correct_y_offset_b(const TiltAnglesB& t) {
    const double offset = std::abs(t.theta_y) * (90.0 - std::abs(t.theta_x)) / 90.0;
    const double corrected = std::abs(t.theta_z) + offset;
    return t.theta_z < 0.0 ? -corrected : corrected;
}

double knee_angle_b(const SensorAngleB& top, const SensorAngleB& bottom) {
    const auto x_negative = [](Quadrant q) {
        return q == Quadrant::I || q == Quadrant::IV;
    };
    const bool same_side = x_negative(top.quadrant) == x_negative(bottom.quadrant);
    if (same_side)
        return top.theta_z - bottom.theta_z;
    return 180.0 - (top.theta_z + bottom.theta_z);
}

}  // namespace rom
