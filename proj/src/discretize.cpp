#include "rom/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rom/errors.hpp"

namespace rom {

std::vector<HoldEvent> discretize(const KneeAngleTrace& trace,
                                  const DiscretizeConfig& cfg) {
    if (!(cfg.window_s > 0.0))
        throw DataError("discretize: window duration must be positive");
    if (!(cfg.hold_std_deg > 0.0) || !(cfg.hold_std_deg < cfg.move_std_deg))
        throw DataError("discretize: need 0 < hold threshold < move threshold");
    if (!(trace.rate > 0.0))
        throw DataError("discretize: trace rate must be positive");

    const auto n = trace.samples.size();
    const auto window = static_cast<std::size_t>(std::lround(cfg.window_s * trace.rate));
    if (window < 2)
        throw DataError("discretize: window must contain at least 2 samples");
    if (window > n)
        throw DataError("discretize: window longer than trace");

    const auto& s = trace.samples;
    double sum = 0.0, sumsq = 0.0, tsum = 0.0;
    for (std::size_t i = 0; i < window; ++i) {
        sum += s[i].theta_d;
        sumsq += s[i].theta_d * s[i].theta_d;
        tsum += s[i].t;
    }

    std::vector<HoldEvent> holds;
    bool seeking = true;
    const double wd = static_cast<double>(window);
    for (std::size_t i = 0;; ++i) {
        const double mean = sum / wd;
        const double var = std::max(0.0, sumsq / wd - mean * mean);
        const double sd = std::sqrt(var);

        if (seeking && sd < cfg.hold_std_deg) {
            holds.push_back({tsum / wd, mean});
            seeking = false;
        } else if (!seeking && sd > cfg.move_std_deg) {
            seeking = true;
        }

        if (i + window >= n) break;
        const double out = s[i].theta_d;
        const double in = s[i + window].theta_d;
        sum += in - out;
        sumsq += in * in - out * out;
        tsum += s[i + window].t - s[i].t;
        // refresh running sums now and then to shed rounding drift
        if ((i & 0x1fff) == 0x1fff) {
            sum = sumsq = tsum = 0.0;
            for (std::size_t j = i + 1; j <= i + window; ++j) {
                sum += s[j].theta_d;
                sumsq += s[j].theta_d * s[j].theta_d;
                tsum += s[j].t;
            }
        }
    }
    return holds;
}

ThresholdReport threshold_report(const std::vector<HoldEvent>& holds,
                                 const KneeAngleTrace& trace,
                                 const std::vector<double>& targets,
                                 double tol,
                                 std::optional<double> ceiling,
                                 std::optional<double> floor) {
    if (!(tol > 0.0))
        throw DataError("threshold report: tolerance must be positive");

    ThresholdReport report;
    report.bins.reserve(targets.size());
    for (double t : targets) report.bins.push_back({t, 0});

    for (const HoldEvent& h : holds) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < targets.size(); ++i) {
            const double d = std::abs(h.angle_mean - targets[i]);
            if (d < best) {
                best = d;
                best_i = i;
            }
        }
        if (!targets.empty() && best <= tol) ++report.bins[best_i].count;
    }

    // Crossing detection tracks the last nonzero side so that samples landing
    // exactly on the threshold do not double-count.
    const auto scan = [&](double level, bool upward, AlertKind kind) {
        int side = 0;  // -1 below, +1 above
        for (const KneeAngleSample& smp : trace.samples) {
            const double d = smp.theta_d - level;
            const int now = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
            if (now == 0) continue;
            if (side != 0 && now != side) {
                const bool rising = now > 0;
                if (rising == upward) report.alerts.push_back({smp.t, kind});
            }
            side = now;
        }
    };
    if (ceiling) scan(*ceiling, true, AlertKind::Ceiling);
    if (floor) scan(*floor, false, AlertKind::Floor);
    std::sort(report.alerts.begin(), report.alerts.end(),
              [](const Alert& a, const Alert& b) {
                  return a.t != b.t ? a.t < b.t : a.kind < b.kind;
              });
    return report;
}

}  // namespace rom
