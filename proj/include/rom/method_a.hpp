#pragma once
#include "rom/types.hpp"

namespace rom {

/// Per-sensor tilt from the inverse cosine of each gravity component over
/// the signal magnitude. Each angle lies in [0, 180]; theta_z_signed is
/// theta_z after the X-inversion rule and spans [-180, 180].
struct TiltAnglesA {
    double theta_x = 0.0;
    double theta_y = 0.0;
    double theta_z = 0.0;
    double theta_z_signed = 0.0;
};

/// theta_k = acos(component_k / signal magnitude), in degrees.
/// Requires signal magnitude > 1 m/s²; tilt is undefined in free-fall.
TiltAnglesA tilt_acos(const GravityVector& g);

/// An X angle below 90° means the sensor is tilted to the opposite side of
/// vertical; the Z angle takes a negative sign there, enabling full-circle
/// tracking.
TiltAnglesA apply_x_inversion(TiltAnglesA t);

/// Y-offset correction: subtracts the Y angular offset scaled by how close
/// the X angle is to 90°. Works on the unsigned Z angle; the inversion sign
/// is re-applied to the result.
double correct_y_offset_a(const TiltAnglesA& t);

/// Knee bending angle: shank minus thigh corrected Z angles.
double knee_angle_a(double top_theta_z, double bottom_theta_z);

}  // namespace rom
