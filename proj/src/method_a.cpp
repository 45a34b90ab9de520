#include "rom/method_a.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rom/errors.hpp"
#include "rom/gravity.hpp"

namespace rom {

namespace {
constexpr double kDegPerRad = 180.0 / std::numbers::pi;
constexpr double kMinMagnitude = 1.0;  // below this, gravity no longer dominates

double acos_deg(double ratio) {
    return std::acos(std::clamp(ratio, -1.0, 1.0)) * kDegPerRad;
}
}  // namespace

TiltAnglesA tilt_acos(const GravityVector& g) {
    const double sm = signal_magnitude(g);
    if (!(sm > kMinMagnitude))
        throw NumericError("tilt undefined: signal magnitude " +
                           std::to_string(sm) + " m/s² (free-fall?)");
    TiltAnglesA t;
    t.theta_x = acos_deg(g.gx / sm);
    t.theta_y = acos_deg(g.gy / sm);
    t.theta_z = acos_deg(g.gz / sm);
    t.theta_z_signed = t.theta_z;
    return t;
}

TiltAnglesA apply_x_inversion(TiltAnglesA t) {
    t.theta_z_signed = (t.theta_x < 90.0) ? -t.theta_z : t.theta_z;
    return t;
}

double correct_y_offset_a(const TiltAnglesA& t) {
    const double y_component = std::abs(90.0 - std::abs(t.theta_y));
    const double scale = (90.0 - std::abs(90.0 - t.theta_x)) / 90.0;
    const double corrected = t.theta_z - y_component * scale;
    return t.theta_z_signed < 0.0 ? -corrected : corrected;
}

double knee_angle_a(double top_theta_z, double bottom_theta_z) {
    return bottom_theta_z - top_theta_z;
}

}  // namespace rom
