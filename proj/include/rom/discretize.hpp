#pragma once
#include <optional>
#include <vector>

#include "rom/types.hpp"

namespace rom {

struct DiscretizeConfig {
    double window_s = 1.0;       // sliding window duration
    double hold_std_deg = 1.0;   // window std below this -> hold detected
    double move_std_deg = 4.0;   // window std above this -> re-arm detection
};

/// A detected plateau: the window means at the moment of detection.
struct HoldEvent {
    double t_mean = 0.0;
    double angle_mean = 0.0;
};

struct ThresholdBin {
    double target = 0.0;
    int count = 0;
};

enum class AlertKind { Ceiling, Floor };

struct Alert {
    double t = 0.0;
    AlertKind kind = AlertKind::Ceiling;
};

struct ThresholdReport {
    std::vector<ThresholdBin> bins;
    std::vector<Alert> alerts;
};

/// Two-state scan over a dense sliding window (one sample per step).
/// Seeking: when the window std drops below hold_std_deg, emit the window
/// means and start waiting. Waiting: when the std exceeds move_std_deg,
/// resume seeking. Repeats over the whole trace.
std::vector<HoldEvent> discretize(const KneeAngleTrace& trace,
                                  const DiscretizeConfig& cfg);

/// Bin each hold to its nearest target (if within tol) and scan the raw
/// trace for upward ceiling crossings and downward floor crossings. Alerts
/// run on the continuous angle, not on holds: a transient overextension
/// must not be masked by the hold filter.
ThresholdReport threshold_report(const std::vector<HoldEvent>& holds,
                                 const KneeAngleTrace& trace,
                                 const std::vector<double>& targets,
                                 double tol,
                                 std::optional<double> ceiling,
                                 std::optional<double> floor);

}  // namespace rom
