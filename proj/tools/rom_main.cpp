// rom: knee range-of-motion from two body-mounted accelerometers.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 numeric/degenerate error.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rom/errors.hpp"
#include "rom/pipeline.hpp"
#include "rom/sim.hpp"
#include "rom/vision.hpp"

namespace {

rom::vision::ColorRange make_range(const std::vector<int>& lo,
                                   const std::vector<int>& hi) {
    rom::vision::ColorRange r;
    for (int i = 0; i < 3; ++i) {
        r.min_rgb[i] = lo[i];
        r.max_rgb[i] = hi[i];
        if (r.min_rgb[i] > r.max_rgb[i])
            throw rom::DataError("color range: min exceeds max per channel");
    }
    return r;
}

void print_metrics(const rom::ComparisonMetrics& m) {
    std::printf("max_abs_error_deg=%.6f\n", m.max_abs_error);
    std::printf("peaks=%zu\n", m.per_peak_errors.size());
    std::printf("per_peak_errors_deg=");
    for (std::size_t i = 0; i < m.per_peak_errors.size(); ++i)
        std::printf("%s%.6f", i ? "," : "", m.per_peak_errors[i]);
    std::printf("\n");
    std::printf("fraction_peaks_within_5deg=%.6f\n", m.fraction_peaks_within_5deg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rom: knee range-of-motion from dual accelerometer streams"};
    app.require_subcommand(1);

    // run
    std::string run_thigh, run_shank, run_out;
    std::string run_method = "a";
    rom::RunConfig run_cfg;
    double run_ceiling = 0.0, run_floor = 0.0;
    auto* run = app.add_subcommand("run", "process a dual-sensor session");
    run->add_option("--thigh", run_thigh, "thigh sensor CSV (t_s,ax,ay,az)")
        ->required()->check(CLI::ExistingFile);
    run->add_option("--shank", run_shank, "shank sensor CSV (t_s,ax,ay,az)")
        ->required()->check(CLI::ExistingFile);
    run->add_option("--out", run_out, "output directory")->required();
    run->add_option("--method", run_method, "angle method: a|b")
        ->check(CLI::IsMember({"a", "b"}));
    run->add_option("--rate", run_cfg.filter.rate_hz, "resample rate, Hz");
    run->add_option("--cutoff", run_cfg.filter.cutoff_hz, "filter cutoff, Hz");
    run->add_option("--order", run_cfg.filter.order, "filter order (even)");
    run->add_option("--window-s", run_cfg.disc.window_s, "hold window, s");
    run->add_option("--hold-std", run_cfg.disc.hold_std_deg, "hold std threshold, deg");
    run->add_option("--move-std", run_cfg.disc.move_std_deg, "move std threshold, deg");
    run->add_option("--targets", run_cfg.targets, "hold targets, deg")->delimiter(',');
    run->add_option("--tol", run_cfg.tol, "target tolerance, deg");
    auto* ceil_opt = run->add_option("--ceiling", run_ceiling, "alert ceiling, deg");
    auto* floor_opt = run->add_option("--floor", run_floor, "alert floor, deg");

    // compare
    std::string cmp_trace, cmp_base;
    std::string cmp_kind = "synthetic";
    double cmp_prominence = 20.0;
    auto* cmp = app.add_subcommand("compare", "compare a trace against a baseline");
    cmp->add_option("--trace", cmp_trace, "angle trace CSV")
        ->required()->check(CLI::ExistingFile);
    cmp->add_option("--baseline", cmp_base, "baseline trace CSV")
        ->required()->check(CLI::ExistingFile);
    cmp->add_option("--baseline-kind", cmp_kind, "cv|synthetic")
        ->check(CLI::IsMember({"cv", "synthetic"}));
    cmp->add_option("--prominence", cmp_prominence, "peak prominence, deg");

    // cv-extract
    std::string cvx_manifest, cvx_out;
    int cvx_min_pixels = 10;
    std::vector<int> red_min{150, 0, 0}, red_max{255, 100, 100};
    std::vector<int> green_min{0, 150, 0}, green_max{100, 255, 100};
    std::vector<int> blue_min{0, 0, 150}, blue_max{100, 100, 255};
    auto* cvx = app.add_subcommand("cv-extract",
                                   "marker angles from rendered video frames");
    cvx->add_option("--manifest", cvx_manifest, "frame manifest CSV (t_s,path)")
        ->required()->check(CLI::ExistingFile);
    cvx->add_option("--out", cvx_out, "output trace CSV")->required();
    cvx->add_option("--min-pixels", cvx_min_pixels, "minimum pixels per marker");
    for (auto [name, vec] : {std::pair{"--red-min", &red_min},
                             std::pair{"--red-max", &red_max},
                             std::pair{"--green-min", &green_min},
                             std::pair{"--green-max", &green_max},
                             std::pair{"--blue-min", &blue_min},
                             std::pair{"--blue-max", &blue_max}}) {
        cvx->add_option(name, *vec, "R,G,B 0..255")
            ->delimiter(',')->expected(3)->check(CLI::Range(0, 255));
    }

    // filter-info
    rom::FilterSpec fi_spec;
    auto* fi = app.add_subcommand("filter-info", "print filter coefficients and response");
    fi->add_option("--rate", fi_spec.rate_hz, "sampling rate, Hz");
    fi->add_option("--cutoff", fi_spec.cutoff_hz, "cutoff, Hz");
    fi->add_option("--order", fi_spec.order, "filter order (even)");

    // simulate
    rom::sim::HingeConfig sim_cfg;
    std::string sim_out;
    std::string sim_profile = "sweep", sim_pose = "standing";
    double sim_fps = 0.0;
    auto* sim = app.add_subcommand("simulate",
                                   "emit a synthetic hinge session (and frames)");
    sim->add_option("--out", sim_out, "output directory")->required();
    sim->add_option("--profile", sim_profile, "sweep|walk|stairs")
        ->check(CLI::IsMember({"sweep", "walk", "stairs"}));
    sim->add_option("--thigh-pose", sim_pose, "standing|sitting")
        ->check(CLI::IsMember({"standing", "sitting"}));
    sim->add_option("--duration", sim_cfg.duration_s, "session length, s");
    sim->add_option("--rate", sim_cfg.rate_hz, "sample rate, Hz");
    sim->add_option("--fps", sim_fps, "render frames at this rate (0 = none)");
    sim->add_option("--sweep-max", sim_cfg.sweep_max_deg, "sweep peak flexion, deg");
    sim->add_option("--walk-min", sim_cfg.walk_min_deg, "walk min flexion, deg");
    sim->add_option("--walk-max", sim_cfg.walk_max_deg, "walk max flexion, deg");
    sim->add_option("--walk-hz", sim_cfg.walk_hz, "walk cadence, Hz");
    sim->add_option("--noise-std", sim_cfg.noise_std, "accel noise sigma, m/s²");
    sim->add_option("--disturb-amp", sim_cfg.disturb_amp, "linear-accel disturbance, m/s²");
    sim->add_option("--disturb-hz", sim_cfg.disturb_hz, "disturbance frequency, Hz");
    sim->add_option("--y-offset-thigh", sim_cfg.y_offset_thigh_deg, "thigh mount twist, deg");
    sim->add_option("--y-offset-shank", sim_cfg.y_offset_shank_deg, "shank mount twist, deg");
    sim->add_option("--seed", sim_cfg.seed, "noise seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) {
            run_cfg.method = run_method == "a" ? rom::Method::A : rom::Method::B;
            if (*ceil_opt) run_cfg.ceiling = run_ceiling;
            if (*floor_opt) run_cfg.floor = run_floor;
            const rom::RunResult res =
                rom::run_session(run_thigh, run_shank, run_cfg, run_out);
            std::printf("samples=%zu holds=%zu alerts=%zu -> %s\n",
                        res.angle.samples.size(), res.holds.size(),
                        res.report.alerts.size(), run_out.c_str());
        } else if (*cmp) {
            const rom::KneeAngleTrace trace = rom::read_angle_csv(cmp_trace);
            const rom::KneeAngleTrace base = rom::read_angle_csv(cmp_base);
            const auto kind = cmp_kind == "cv" ? rom::BaselineKind::Cv
                                               : rom::BaselineKind::Synthetic;
            print_metrics(rom::compare_traces(trace, base, kind, cmp_prominence));
        } else if (*cvx) {
            const rom::vision::ExtractResult res = rom::vision::extract_trace(
                cvx_manifest, make_range(red_min, red_max),
                make_range(green_min, green_max), make_range(blue_min, blue_max),
                cvx_min_pixels);
            rom::KneeAngleTrace trace;
            for (const auto& fa : res.angles)
                trace.samples.push_back({fa.t, fa.angle});
            rom::write_angle_csv(trace, cvx_out, "angle_deg");
            for (const auto& f : res.failures)
                std::fprintf(stderr, "frame failed (t=%.3f, %s): %s\n", f.t,
                             f.path.c_str(), f.reason.c_str());
            std::printf("frames=%zu failures=%zu -> %s\n", res.angles.size(),
                        res.failures.size(), cvx_out.c_str());
        } else if (*fi) {
            std::fputs(rom::filter_info_text(fi_spec).c_str(), stdout);
        } else if (*sim) {
            sim_cfg.profile = sim_profile == "sweep" ? rom::sim::Profile::Sweep
                              : sim_profile == "walk" ? rom::sim::Profile::Walk
                                                      : rom::sim::Profile::Stairs;
            sim_cfg.pose = sim_pose == "standing" ? rom::sim::ThighPose::Standing
                                                  : rom::sim::ThighPose::Sitting;
            const rom::Session session = rom::sim::simulate_session(sim_cfg);
            rom::sim::write_session_csvs(session, sim_out);
            rom::sim::write_truth_csv(sim_cfg,
                                      std::filesystem::path(sim_out) / "truth.csv");
            int frames = 0;
            if (sim_fps > 0.0)
                frames = rom::sim::write_frames(sim_cfg, sim_fps, sim_out);
            std::printf("samples=%zu frames=%d -> %s\n",
                        session.thigh.samples.size(), frames, sim_out.c_str());
        }
    } catch (const rom::NumericError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const rom::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
