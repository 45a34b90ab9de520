#pragma once
#include "rom/types.hpp"

namespace rom {

/// Per-sensor elevation angles from the inverse tangent of each component
/// over the norm of the other two. Each angle lies in [-90, 90] and carries
/// the sign of its gravity component.
struct TiltAnglesB {
    double theta_x = 0.0;
    double theta_y = 0.0;
    double theta_z = 0.0;
};

/// X-Z quadrant of the sensor's gravity vector. Zero components classify as
/// positive.
///   I: (-,+)   II: (+,+)   III: (+,-)   IV: (-,-)
enum class Quadrant { I, II, III, IV };
const char* to_string(Quadrant q);

/// theta_z = atan(gz / sqrt(gx² + gy²)), in degrees; theta_x, theta_y take
/// the same form with their own axis in the numerator.
/// Requires signal magnitude > 1 m/s². gx = gy = 0 yields ±90 by sign of gz.
TiltAnglesB tilt_atan(const GravityVector& g);

Quadrant classify_quadrant(const GravityVector& g);

/// Y-offset correction: adds the Y angle scaled by how far the X angle is
/// from ±90°, applied to |theta_z| with the original sign restored.
double correct_y_offset_b(const TiltAnglesB& t);

/// Corrected Z angle plus the quadrant it was measured in.
struct SensorAngleB {
    double theta_z = 0.0;
    Quadrant quadrant = Quadrant::II;
};

/// Knee bending angle from the quadrant-dependent difference rules:
/// sensors on the same side of vertical (quadrant pairs {I, IV} / {II, III})
/// use top - bottom; opposite sides use 180 - (top + bottom).
double knee_angle_b(const SensorAngleB& top, const SensorAngleB& bottom);

}  // namespace rom
