#include "rom/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include "rom/errors.hpp"
#include "rom/ingest.hpp"
#include "rom/method_a.hpp"
#include "rom/method_b.hpp"

namespace rom {

KneeAngleTrace compute_knee_trace(const Session& session, Method method,
                                  const FilterSpec& filter) {
    const GravityTrace thigh = filter_trace(session.thigh, filter);
    const GravityTrace shank = filter_trace(session.shank, filter);

    const SosCascade cascade = SosCascade::design_lowpass(filter);
    const double delay = cascade.group_delay_at(0.0);
    const double t_start = session.thigh.samples.front().t;

    KneeAngleTrace out;
    out.rate = session.rate;
    out.samples.reserve(thigh.samples.size());
    for (std::size_t i = 0; i < thigh.samples.size(); ++i) {
        const GravityVector& gt = thigh.samples[i];
        const GravityVector& gs = shank.samples[i];
        // stamp each angle with the time of the motion that produced it
        const double t = gt.t - delay;
        if (t < t_start) continue;

        double theta_d = 0.0;
        if (method == Method::A) {
            const double top = correct_y_offset_a(apply_x_inversion(tilt_acos(gt)));
            const double bottom = correct_y_offset_a(apply_x_inversion(tilt_acos(gs)));
            theta_d = knee_angle_a(top, bottom);
        } else {
            const SensorAngleB top{correct_y_offset_b(tilt_atan(gt)),
                                   classify_quadrant(gt)};
            const SensorAngleB bottom{correct_y_offset_b(tilt_atan(gs)),
                                      classify_quadrant(gs)};
            theta_d = knee_angle_b(top, bottom);
        }
        out.samples.push_back({t, theta_d});
    }
    return out;
}

namespace {

std::string_view trim_view(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    return s;
}

double parse_double(std::string_view field, const std::string& path, long line) {
    field = trim_view(field);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty() ||
        !std::isfinite(value))
        throw ParseError(path, line, "malformed number '" + std::string(field) + "'");
    return value;
}

}  // namespace

KneeAngleTrace read_angle_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + path.string());

    std::string line;
    long line_no = 0;
    if (!std::getline(in, line))
        throw ParseError(path.string(), 1, "empty file");
    ++line_no;
    const std::string_view header = trim_view(line);
    if (header != "t_s,theta_d_deg" && header != "t_s,angle_deg")
        throw ParseError(path.string(), 1,
                         "expected header 't_s,theta_d_deg' or 't_s,angle_deg'");

    KneeAngleTrace trace;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = trim_view(line);
        if (row.empty()) continue;
        const std::size_t comma = row.find(',');
        if (comma == std::string_view::npos)
            throw ParseError(path.string(), line_no, "expected 2 fields");
        const double t = parse_double(row.substr(0, comma), path.string(), line_no);
        const double a = parse_double(row.substr(comma + 1), path.string(), line_no);
        if (!trace.samples.empty() && t <= trace.samples.back().t)
            throw ParseError(path.string(), line_no, "non-monotone timestamp");
        trace.samples.push_back({t, a});
    }
    if (trace.samples.size() < 2)
        throw DataError(path.string() + ": trace needs at least 2 samples");

    std::vector<double> gaps(trace.samples.size() - 1);
    for (std::size_t i = 1; i < trace.samples.size(); ++i)
        gaps[i - 1] = trace.samples[i].t - trace.samples[i - 1].t;
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    trace.rate = 1.0 / gaps[gaps.size() / 2];
    return trace;
}

void write_angle_csv(const KneeAngleTrace& trace,
                     const std::filesystem::path& path,
                     const std::string& value_header) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write " + path.string());
    out << "t_s," << value_header << "\n";
    char buf[80];
    for (const KneeAngleSample& s : trace.samples) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f\n", s.t, s.theta_d);
        out << buf;
    }
}

void write_holds_csv(const std::vector<HoldEvent>& holds,
                     const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write " + path.string());
    out << "t_s,angle_deg\n";
    char buf[80];
    for (const HoldEvent& h : holds) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f\n", h.t_mean, h.angle_mean);
        out << buf;
    }
}

void write_report_csv(const ThresholdReport& report,
                      const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write " + path.string());
    out << "target,count\n";
    char buf[64];
    for (const ThresholdBin& b : report.bins) {
        std::snprintf(buf, sizeof buf, "%.6f,%d\n", b.target, b.count);
        out << buf;
    }
}

void write_alerts_csv(const ThresholdReport& report,
                      const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write " + path.string());
    out << "t_s,kind\n";
    char buf[80];
    for (const Alert& a : report.alerts) {
        std::snprintf(buf, sizeof buf, "%.6f,%s\n", a.t,
                      a.kind == AlertKind::Ceiling ? "ceiling" : "floor");
        out << buf;
    }
}

void write_angle_svg(const KneeAngleTrace& trace,
                     const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write " + path.string());

    constexpr int w = 800, h = 300, ml = 60, mr = 15, mt = 15, mb = 40;
    double t0 = 0.0, t1 = 1.0, a0 = 0.0, a1 = 1.0;
    if (!trace.samples.empty()) {
        t0 = trace.samples.front().t;
        t1 = trace.samples.back().t;
        a0 = a1 = trace.samples.front().theta_d;
        for (const KneeAngleSample& s : trace.samples) {
            a0 = std::min(a0, s.theta_d);
            a1 = std::max(a1, s.theta_d);
        }
    }
    if (t1 - t0 < 1e-12) t1 = t0 + 1.0;
    if (a1 - a0 < 1e-12) {
        a0 -= 1.0;
        a1 += 1.0;
    }
    const auto sx = [&](double t) { return ml + (t - t0) / (t1 - t0) * (w - ml - mr); };
    const auto sy = [&](double a) { return h - mb - (a - a0) / (a1 - a0) * (h - mt - mb); };

    char buf[160];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
        << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    out << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n",
                  ml, h - mb, w - mr, h - mb);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n",
                  ml, mt, ml, h - mb);
    out << buf;
    for (int i = 0; i <= 4; ++i) {
        const double t = t0 + (t1 - t0) * i / 4.0;
        const double a = a0 + (a1 - a0) * i / 4.0;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.2f\" y1=\"%d\" x2=\"%.2f\" y2=\"%d\" stroke=\"black\"/>\n",
                      sx(t), h - mb, sx(t), h - mb + 5);
        out << buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.2f\" y=\"%d\" font-size=\"12\" text-anchor=\"middle\">%.1f</text>\n",
                      sx(t), h - mb + 20, t);
        out << buf;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%d\" y1=\"%.2f\" x2=\"%d\" y2=\"%.2f\" stroke=\"black\"/>\n",
                      ml - 5, sy(a), ml, sy(a));
        out << buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%d\" y=\"%.2f\" font-size=\"12\" text-anchor=\"end\">%.1f</text>\n",
                      ml - 8, sy(a) + 4, a);
        out << buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"%d\" font-size=\"12\" text-anchor=\"middle\">t (s)</text>\n",
                  (ml + w - mr) / 2, h - 5);
    out << buf;
    out << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"";
    for (const KneeAngleSample& s : trace.samples) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(s.t), sy(s.theta_d));
        out << buf;
    }
    out << "\"/>\n</svg>\n";
}

RunResult run_session(const std::filesystem::path& thigh_csv,
                      const std::filesystem::path& shank_csv,
                      const RunConfig& cfg,
                      const std::filesystem::path& out_dir) {
    const SensorTrace thigh = parse_trace(thigh_csv, SensorRole::Thigh);
    const SensorTrace shank = parse_trace(shank_csv, SensorRole::Shank);
    const Session session = align(thigh, shank, cfg.filter.rate_hz);

    RunResult result;
    result.angle = compute_knee_trace(session, cfg.method, cfg.filter);
    result.holds = discretize(result.angle, cfg.disc);
    result.report = threshold_report(result.holds, result.angle, cfg.targets,
                                     cfg.tol, cfg.ceiling, cfg.floor);

    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    try {
        const auto emit = [&](const std::filesystem::path& p, auto&& writer) {
            written.push_back(p);
            writer(p);
        };
        emit(out_dir / "angle.csv",
             [&](const auto& p) { write_angle_csv(result.angle, p); });
        emit(out_dir / "holds.csv",
             [&](const auto& p) { write_holds_csv(result.holds, p); });
        emit(out_dir / "report.csv",
             [&](const auto& p) { write_report_csv(result.report, p); });
        emit(out_dir / "alerts.csv",
             [&](const auto& p) { write_alerts_csv(result.report, p); });
        emit(out_dir / "angle.svg",
             [&](const auto& p) { write_angle_svg(result.angle, p); });
    } catch (...) {
        std::error_code ec;
        for (const auto& p : written) std::filesystem::remove(p, ec);
        throw;
    }
    return result;
}

namespace {

// Linear interpolation of a trace at time t (t must lie within the span).
double interp_at(const std::vector<KneeAngleSample>& s, std::size_t& hint, double t) {
    while (hint + 2 < s.size() && s[hint + 1].t <= t) ++hint;
    const KneeAngleSample& lo = s[hint];
    const KneeAngleSample& hi = s[hint + 1];
    const double u = std::clamp((t - lo.t) / (hi.t - lo.t), 0.0, 1.0);
    return lo.theta_d + u * (hi.theta_d - lo.theta_d);
}

// Peak prominence: height above the higher of the two valley floors that
// separate the peak from its nearest higher neighbours (or the trace ends).
std::vector<std::size_t> find_peaks(const std::vector<double>& v, double prominence) {
    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (!(v[i] > v[i - 1] && v[i] >= v[i + 1])) continue;
        double left_min = v[i];
        for (std::size_t j = i; j-- > 0;) {
            if (v[j] > v[i]) break;
            left_min = std::min(left_min, v[j]);
        }
        double right_min = v[i];
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            if (v[j] > v[i]) break;
            right_min = std::min(right_min, v[j]);
        }
        if (v[i] - std::max(left_min, right_min) >= prominence)
            peaks.push_back(i);
    }
    return peaks;
}

}  // namespace

ComparisonMetrics compare_traces(const KneeAngleTrace& trace,
                                 const KneeAngleTrace& baseline,
                                 BaselineKind kind,
                                 double peak_prominence_deg) {
    if (trace.samples.size() < 2 || baseline.samples.size() < 2)
        throw DataError("compare: both traces need at least 2 samples");

    KneeAngleTrace base = baseline;
    if (kind == BaselineKind::Cv) {
        // marker interior angle -> flexion
        for (KneeAngleSample& s : base.samples) s.theta_d = 180.0 - s.theta_d;
    }

    const double start = std::max(trace.samples.front().t, base.samples.front().t);
    const double end = std::min(trace.samples.back().t, base.samples.back().t);
    if (end <= start)
        throw DataError("compare: traces do not overlap in time");
    if (end - start < 1.0 - 1e-9)
        throw DataError("compare: overlap shorter than 1 second");

    ComparisonMetrics m;
    std::vector<double> values;
    std::vector<double> errors;
    std::size_t hint = 0;
    for (const KneeAngleSample& s : trace.samples) {
        if (s.t < start || s.t > end) continue;
        const double b = interp_at(base.samples, hint, s.t);
        values.push_back(s.theta_d);
        errors.push_back(std::abs(s.theta_d - b));
        m.max_abs_error = std::max(m.max_abs_error, errors.back());
    }

    const std::vector<std::size_t> peaks = find_peaks(values, peak_prominence_deg);
    int within = 0;
    for (std::size_t i : peaks) {
        m.per_peak_errors.push_back(errors[i]);
        if (errors[i] <= 5.0) ++within;
    }
    m.fraction_peaks_within_5deg =
        peaks.empty() ? 1.0 : static_cast<double>(within) / peaks.size();
    return m;
}

std::string filter_info_text(const FilterSpec& spec) {
    const SosCascade cascade = SosCascade::design_lowpass(spec);
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "Butterworth low-pass: order %d, cutoff %.6g Hz, rate %.6g Hz\n",
                  spec.order, spec.cutoff_hz, spec.rate_hz);
    out << buf;
    out << "second-order sections (b0 b1 b2 | a1 a2):\n";
    for (const Biquad& s : cascade.sections()) {
        std::snprintf(buf, sizeof buf, "  %.12e %.12e %.12e | %.12e %.12e\n",
                      s.b0, s.b1, s.b2, s.a1, s.a2);
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "dc gain: %.12f\n", cascade.magnitude_at(0.0));
    out << buf;
    std::snprintf(buf, sizeof buf, "group delay at dc: %.4f s\n",
                  cascade.group_delay_at(0.0));
    out << buf;
    out << "magnitude response:\n";
    for (double f : {0.1, 1.0, 5.0, 10.0}) {
        if (f >= spec.rate_hz / 2.0) continue;
        std::snprintf(buf, sizeof buf, "  |H(%5.2f Hz)| = %.6e\n", f,
                      cascade.magnitude_at(f));
        out << buf;
    }
    return out.str();
}

}  // namespace rom
