#pragma once
#include <string>
#include <vector>

namespace rom {

inline constexpr double kGravityMs2 = 9.81;
// EM7180-class part, ±2 g full scale.
inline constexpr double kAccelRangeMs2 = 2.0 * kGravityMs2;

enum class SensorRole { Thigh, Shank };
const char* to_string(SensorRole role);

/// One raw accelerometer reading, SI units (seconds, m/s²).
struct AccelSample {
    double t = 0.0;
    double ax = 0.0, ay = 0.0, az = 0.0;
};

/// A timestamped stream from one body-mounted sensor.
struct SensorTrace {
    SensorRole role = SensorRole::Thigh;
    double nominal_rate = 0.0;  // samples/s, derived from the median gap
    std::vector<AccelSample> samples;
};

/// Two traces resampled onto a shared uniform grid over their overlap.
struct Session {
    SensorTrace thigh;
    SensorTrace shank;
    double rate = 250.0;
};

/// Low-pass-filtered acceleration: the emulated gravity signal.
struct GravityVector {
    double t = 0.0;
    double gx = 0.0, gy = 0.0, gz = 0.0;
};

struct GravityTrace {
    SensorRole role = SensorRole::Thigh;
    double rate = 0.0;
    std::vector<GravityVector> samples;
};

/// Knee bending angle in degrees (0 = straight leg, positive = flexion).
struct KneeAngleSample {
    double t = 0.0;
    double theta_d = 0.0;
};

struct KneeAngleTrace {
    double rate = 0.0;
    std::vector<KneeAngleSample> samples;
};

enum class Method { A, B };

}  // namespace rom
