#pragma once
#include <array>
#include <filesystem>
#include <vector>

#include "rom/types.hpp"
#include "rom/vision.hpp"

namespace rom::sim {

/// Orientation of the fixed thigh segment.
enum class ThighPose { Standing, Sitting };

enum class Profile { Sweep, Walk, Stairs };

/// Uniaxial hinge: the thigh is fixed, the shank rotates by the flexion
/// profile about the mediolateral axis. Sensors sit with their Z axis along
/// the limb (proximal) and X in the sagittal plane, so gravity swings
/// between the X and Z axes as the knee bends. A Y-offset models a sensor
/// mis-mounted by a rotation about its X axis, which tips Z toward Y.
struct HingeConfig {
    Profile profile = Profile::Sweep;
    ThighPose pose = ThighPose::Standing;
    double duration_s = 10.0;
    double rate_hz = 250.0;

    double sweep_max_deg = 135.0;  // raised cosine 0 -> max -> 0

    double walk_min_deg = 5.0;
    double walk_max_deg = 65.0;
    double walk_hz = 1.0;

    std::vector<double> stair_levels{30.0, 60.0, 90.0};
    double stair_dwell_s = 3.0;
    double stair_ramp_s = 0.5;

    double noise_std = 0.0;       // zero-mean Gaussian, m/s², per axis
    double disturb_amp = 0.0;     // sinusoid on the sensor X axis, m/s²
    double disturb_hz = 2.0;
    double y_offset_thigh_deg = 0.0;
    double y_offset_shank_deg = 0.0;
    unsigned seed = 1;
};

/// Ground-truth flexion angle at time t, degrees.
double flexion_at(const HingeConfig& cfg, double t);

/// World angle of the thigh sensor's long axis from vertical, degrees.
double thigh_world_angle(ThighPose pose);

/// Noiseless gravity reading (ax, ay, az) for a sensor whose long axis sits
/// at `world_angle_deg` from vertical, twisted by `y_offset_deg` about its
/// X axis.
std::array<double, 3> sensor_reading(double world_angle_deg,
                                     double y_offset_deg);

/// Generate both sensor streams on a shared uniform grid.
Session simulate_session(const HingeConfig& cfg);

void write_session_csvs(const Session& session,
                        const std::filesystem::path& dir);

/// Ground truth as `t_s,angle_deg` at the sample rate.
void write_truth_csv(const HingeConfig& cfg, const std::filesystem::path& path);

struct FrameGeom {
    int width = 240;
    int height = 240;
    double limb_px = 80.0;  // marker distance from the knee
    int dot_radius = 5;
};

struct MarkerPoints {
    vision::Point red;    // knee
    vision::Point green;  // thigh
    vision::Point blue;   // calf
};

/// Marker pixel positions for a given flexion; the interior angle at the
/// red dot equals 180 - flexion.
MarkerPoints marker_points(double flexion_deg, ThighPose pose,
                           const FrameGeom& geom);

/// Render the three marker dots on a black background.
vision::Image render_frame(double flexion_deg, ThighPose pose,
                           const FrameGeom& geom);

/// Render frames at fps into dir/frames and write dir/manifest.csv.
/// Returns the number of frames written.
int write_frames(const HingeConfig& cfg, double fps,
                 const std::filesystem::path& dir,
                 const FrameGeom& geom = FrameGeom{});

}  // namespace rom::sim
