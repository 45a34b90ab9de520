#pragma once
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rom/discretize.hpp"
#include "rom/gravity.hpp"
#include "rom/types.hpp"

namespace rom {

struct RunConfig {
    Method method = Method::A;
    FilterSpec filter;
    DiscretizeConfig disc;
    std::vector<double> targets{30.0, 60.0, 90.0};
    double tol = 5.0;
    std::optional<double> ceiling;
    std::optional<double> floor;
};

/// Filter both sensors and compute the knee angle per sample.
///
/// Output timestamps are shifted back by the filter's group delay so each
/// angle is stamped with the time of the motion that produced it; samples
/// whose shifted time falls before the capture start are dropped.
KneeAngleTrace compute_knee_trace(const Session& session, Method method,
                                  const FilterSpec& filter);

struct RunResult {
    KneeAngleTrace angle;
    std::vector<HoldEvent> holds;
    ThresholdReport report;
};

/// Full session pipeline: parse, align, filter, angles, holds, report.
/// Writes angle.csv, holds.csv, report.csv, alerts.csv and angle.svg into
/// out_dir; on failure any partially written outputs are removed.
RunResult run_session(const std::filesystem::path& thigh_csv,
                      const std::filesystem::path& shank_csv,
                      const RunConfig& cfg,
                      const std::filesystem::path& out_dir);

enum class BaselineKind { Synthetic, Cv };

struct ComparisonMetrics {
    double max_abs_error = 0.0;
    std::vector<double> per_peak_errors;
    double fraction_peaks_within_5deg = 1.0;
};

/// Interpolate the baseline onto the trace timebase over their overlap
/// (>= 1 s required) and report absolute errors. A CV baseline carries the
/// interior marker angle and is mapped to flexion as 180 - angle first.
/// Peaks are local maxima with at least `peak_prominence_deg` prominence.
ComparisonMetrics compare_traces(const KneeAngleTrace& trace,
                                 const KneeAngleTrace& baseline,
                                 BaselineKind kind,
                                 double peak_prominence_deg = 20.0);

/// Angle trace CSV, header `t_s,theta_d_deg` or `t_s,angle_deg`.
KneeAngleTrace read_angle_csv(const std::filesystem::path& path);
void write_angle_csv(const KneeAngleTrace& trace,
                     const std::filesystem::path& path,
                     const std::string& value_header = "theta_d_deg");

void write_holds_csv(const std::vector<HoldEvent>& holds,
                     const std::filesystem::path& path);
void write_report_csv(const ThresholdReport& report,
                      const std::filesystem::path& path);
void write_alerts_csv(const ThresholdReport& report,
                      const std::filesystem::path& path);
void write_angle_svg(const KneeAngleTrace& trace,
                     const std::filesystem::path& path);

/// Audit text: section coefficients, DC gain, magnitude response at
/// 0.1/1/5/10 Hz and the group delay.
std::string filter_info_text(const FilterSpec& spec);

}  // namespace rom
