#include "rom/sim.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include "rom/errors.hpp"

namespace rom::sim {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kRadPerDeg = kPi / 180.0;

double smoothstep(double u) { return u * u * (3.0 - 2.0 * u); }
}  // namespace

double flexion_at(const HingeConfig& cfg, double t) {
    switch (cfg.profile) {
        case Profile::Sweep:
            // raised cosine: at rest at both ends, peak at mid-session
            return 0.5 * cfg.sweep_max_deg * (1.0 - std::cos(2.0 * kPi * t / cfg.duration_s));
        case Profile::Walk: {
            const double amp = 0.5 * (cfg.walk_max_deg - cfg.walk_min_deg);
            return cfg.walk_min_deg + amp * (1.0 - std::cos(2.0 * kPi * cfg.walk_hz * t));
        }
        case Profile::Stairs: {
            if (cfg.stair_levels.empty()) return 0.0;
            double seg_start = 0.0;
            for (std::size_t i = 0; i < cfg.stair_levels.size(); ++i) {
                const double dwell_end = seg_start + cfg.stair_dwell_s;
                if (t < dwell_end || i + 1 == cfg.stair_levels.size())
                    return cfg.stair_levels[i];
                const double ramp_end = dwell_end + cfg.stair_ramp_s;
                if (t < ramp_end) {
                    const double u = (t - dwell_end) / cfg.stair_ramp_s;
                    return cfg.stair_levels[i] +
                           (cfg.stair_levels[i + 1] - cfg.stair_levels[i]) * smoothstep(u);
                }
                seg_start = ramp_end;
            }
            return cfg.stair_levels.back();
        }
    }
    return 0.0;
}

double thigh_world_angle(ThighPose pose) {
    return pose == ThighPose::Standing ? 0.0 : -90.0;
}

std::array<double, 3> sensor_reading(double world_angle_deg, double y_offset_deg) {
    const double w = world_angle_deg * kRadPerDeg;
    const double rho = y_offset_deg * kRadPerDeg;
    // gravity in the limb frame, then the mounting twist about sensor X
    const double gx = -kGravityMs2 * std::sin(w);
    const double gz = kGravityMs2 * std::cos(w);
    return {gx, gz * std::sin(rho), gz * std::cos(rho)};
}

Session simulate_session(const HingeConfig& cfg) {
    if (!(cfg.rate_hz > 0.0) || !(cfg.duration_s > 0.0))
        throw DataError("simulate: rate and duration must be positive");

    std::mt19937 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto noise = [&]() {
        return cfg.noise_std > 0.0 ? cfg.noise_std * gauss(rng) : 0.0;
    };

    const double w_thigh = thigh_world_angle(cfg.pose);
    const auto n = static_cast<std::size_t>(cfg.duration_s * cfg.rate_hz + 1e-9) + 1;

    Session session;
    session.rate = cfg.rate_hz;
    session.thigh.role = SensorRole::Thigh;
    session.shank.role = SensorRole::Shank;
    session.thigh.nominal_rate = cfg.rate_hz;
    session.shank.nominal_rate = cfg.rate_hz;
    session.thigh.samples.reserve(n);
    session.shank.samples.reserve(n);

    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / cfg.rate_hz;
        const double disturb =
            cfg.disturb_amp * std::sin(2.0 * kPi * cfg.disturb_hz * t);

        const auto gt = sensor_reading(w_thigh, cfg.y_offset_thigh_deg);
        session.thigh.samples.push_back({t,
                                         gt[0] + disturb + noise(),
                                         gt[1] + noise(),
                                         gt[2] + noise()});

        const double w_shank = w_thigh + flexion_at(cfg, t);
        const auto gs = sensor_reading(w_shank, cfg.y_offset_shank_deg);
        session.shank.samples.push_back({t,
                                         gs[0] + disturb + noise(),
                                         gs[1] + noise(),
                                         gs[2] + noise()});
    }
    return session;
}

namespace {

void write_trace_csv(const SensorTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write " + path.string());
    out << "t_s,ax,ay,az\n";
    char buf[128];
    for (const AccelSample& s : trace.samples) {
        std::snprintf(buf, sizeof buf, "%.6f,%.9f,%.9f,%.9f\n", s.t, s.ax, s.ay, s.az);
        out << buf;
    }
}

}  // namespace

void write_session_csvs(const Session& session, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_trace_csv(session.thigh, dir / "thigh.csv");
    write_trace_csv(session.shank, dir / "shank.csv");
}

void write_truth_csv(const HingeConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write " + path.string());
    out << "t_s,angle_deg\n";
    char buf[64];
    const auto n = static_cast<std::size_t>(cfg.duration_s * cfg.rate_hz + 1e-9) + 1;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / cfg.rate_hz;
        std::snprintf(buf, sizeof buf, "%.6f,%.6f\n", t, flexion_at(cfg, t));
        out << buf;
    }
}

MarkerPoints marker_points(double flexion_deg, ThighPose pose,
                           const FrameGeom& geom) {
    const double w_t = thigh_world_angle(pose) * kRadPerDeg;
    const double w_s = w_t + flexion_deg * kRadPerDeg;
    const double cx = geom.width / 2.0;
    const double cy = geom.height / 2.0;
    // image x maps to world X (anterior), image y runs downward
    MarkerPoints m;
    m.red = {cx, cy};
    m.green = {cx + geom.limb_px * std::sin(w_t), cy - geom.limb_px * std::cos(w_t)};
    m.blue = {cx - geom.limb_px * std::sin(w_s), cy + geom.limb_px * std::cos(w_s)};
    return m;
}

namespace {

void draw_dot(vision::Image& img, vision::Point at, int radius,
              std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const int x0 = static_cast<int>(std::lround(at.x));
    const int y0 = static_cast<int>(std::lround(at.y));
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            if (dx * dx + dy * dy > radius * radius) continue;
            const int x = x0 + dx, y = y0 + dy;
            if (x < 0 || x >= img.width || y < 0 || y >= img.height) continue;
            std::uint8_t* p = img.pixel(x, y);
            p[0] = r;
            p[1] = g;
            p[2] = b;
        }
    }
}

}  // namespace

vision::Image render_frame(double flexion_deg, ThighPose pose,
                           const FrameGeom& geom) {
    vision::Image img;
    img.width = geom.width;
    img.height = geom.height;
    img.data.assign(static_cast<std::size_t>(geom.width) * geom.height * 3, 0);
    const MarkerPoints m = marker_points(flexion_deg, pose, geom);
    draw_dot(img, m.red, geom.dot_radius, 255, 0, 0);
    draw_dot(img, m.green, geom.dot_radius, 0, 255, 0);
    draw_dot(img, m.blue, geom.dot_radius, 0, 0, 255);
    return img;
}

int write_frames(const HingeConfig& cfg, double fps,
                 const std::filesystem::path& dir, const FrameGeom& geom) {
    if (!(fps > 0.0))
        throw DataError("simulate: fps must be positive");
    const auto frames_dir = dir / "frames";
    std::filesystem::create_directories(frames_dir);

    std::ofstream manifest(dir / "manifest.csv", std::ios::binary);
    if (!manifest)
        throw DataError("cannot write " + (dir / "manifest.csv").string());
    manifest << "t_s,path\n";

    int count = 0;
    char name[64];
    char row[128];
    for (;; ++count) {
        const double t = count / fps;
        if (t > cfg.duration_s + 1e-9) break;
        std::snprintf(name, sizeof name, "frame_%05d.ppm", count);
        const vision::Image img =
            render_frame(flexion_at(cfg, t), cfg.pose, geom);
        vision::write_ppm(img, frames_dir / name);
        std::snprintf(row, sizeof row, "%.6f,frames/%s\n", t, name);
        manifest << row;
    }
    return count;
}

}  // namespace rom::sim
