#include "rom/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include "rom/errors.hpp"

namespace rom {

const char* to_string(SensorRole role) {
    return role == SensorRole::Thigh ? "thigh" : "shank";
}

namespace {

constexpr double kMaxDropoutS = 0.1;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    return s;
}

double parse_field(std::string_view field, const std::string& path, long line) {
    field = trim(field);
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || field.empty() || !std::isfinite(value))
        throw ParseError(path, line, "malformed number '" + std::string(field) + "'");
    return value;
}

}  // namespace

SensorTrace parse_trace(const std::filesystem::path& path, SensorRole role) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + path.string());

    SensorTrace trace;
    trace.role = role;

    std::string line;
    long line_no = 0;

    if (!std::getline(in, line))
        throw ParseError(path.string(), 1, "empty file");
    ++line_no;
    if (trim(line) != "t_s,ax,ay,az")
        throw ParseError(path.string(), 1, "expected header 't_s,ax,ay,az'");

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view row = trim(line);
        if (row.empty()) continue;

        AccelSample s;
        double* fields[4] = {&s.t, &s.ax, &s.ay, &s.az};
        std::size_t start = 0;
        for (int f = 0; f < 4; ++f) {
            const std::size_t comma = row.find(',', start);
            const bool last_field = (f == 3);
            if (last_field != (comma == std::string_view::npos))
                throw ParseError(path.string(), line_no, "expected 4 comma-separated fields");
            const std::size_t end = last_field ? row.size() : comma;
            *fields[f] = parse_field(row.substr(start, end - start), path.string(), line_no);
            start = end + 1;
        }

        if (s.t < 0.0)
            throw ParseError(path.string(), line_no, "negative timestamp");
        if (!trace.samples.empty() && s.t <= trace.samples.back().t)
            throw ParseError(path.string(), line_no, "non-monotone timestamp");
        if (!trace.samples.empty() &&
            s.t - trace.samples.back().t > kMaxDropoutS)
            throw ParseError(path.string(), line_no,
                             "dropout longer than 100 ms; rejecting trace");
        for (double* a : {&s.ax, &s.ay, &s.az}) {
            if (std::abs(*a) > kAccelRangeMs2 + 1e-9)
                throw ParseError(path.string(), line_no,
                                 "acceleration outside the ±2 g sensor range "
                                 "(|a| <= 19.62 m/s²)");
        }
        trace.samples.push_back(s);
    }

    if (trace.samples.size() < 2)
        throw DataError(path.string() + ": trace needs at least 2 samples");

    std::vector<double> gaps(trace.samples.size() - 1);
    for (std::size_t i = 1; i < trace.samples.size(); ++i)
        gaps[i - 1] = trace.samples[i].t - trace.samples[i - 1].t;
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    trace.nominal_rate = 1.0 / gaps[gaps.size() / 2];
    return trace;
}

namespace {

// Linear interpolation onto a uniform grid; t values must lie inside the
// trace's time span. Grid nodes that coincide with samples copy them exactly.
SensorTrace resample(const SensorTrace& trace, double start, double rate,
                     std::size_t count) {
    SensorTrace out;
    out.role = trace.role;
    out.nominal_rate = rate;
    out.samples.reserve(count);

    const auto& src = trace.samples;
    std::size_t j = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const double t = start + static_cast<double>(i) / rate;
        while (j + 2 < src.size() && src[j + 1].t <= t) ++j;
        const AccelSample& lo = src[j];
        const AccelSample& hi = src[j + 1];
        const double span = hi.t - lo.t;
        double u = (t - lo.t) / span;
        if (std::abs(t - lo.t) < 1e-9 * std::max(1.0, std::abs(t))) u = 0.0;
        if (std::abs(t - hi.t) < 1e-9 * std::max(1.0, std::abs(t))) u = 1.0;
        u = std::clamp(u, 0.0, 1.0);
        out.samples.push_back({t,
                               lo.ax + u * (hi.ax - lo.ax),
                               lo.ay + u * (hi.ay - lo.ay),
                               lo.az + u * (hi.az - lo.az)});
    }
    return out;
}

}  // namespace

Session align(const SensorTrace& thigh, const SensorTrace& shank, double rate) {
    if (rate <= 0.0)
        throw DataError("align: rate must be positive");
    if (thigh.samples.size() < 2 || shank.samples.size() < 2)
        throw DataError("align: both traces need at least 2 samples");

    const double start = std::max(thigh.samples.front().t, shank.samples.front().t);
    const double end = std::min(thigh.samples.back().t, shank.samples.back().t);
    if (end <= start)
        throw DataError("align: traces do not overlap in time");
    if (end - start < 1.0 - 1e-9)
        throw DataError("align: overlap shorter than 1 second (" +
                        std::to_string(end - start) + " s)");

    const auto count = static_cast<std::size_t>((end - start) * rate + 1e-9) + 1;
    Session session;
    session.rate = rate;
    session.thigh = resample(thigh, start, rate, count);
    session.shank = resample(shank, start, rate, count);
    return session;
}

}  // namespace rom
