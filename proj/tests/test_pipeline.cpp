#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "rom/errors.hpp"
#include "rom/pipeline.hpp"
#include "rom/sim.hpp"

using namespace rom;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int seq = 0;
        path = fs::temp_directory_path() / ("rom_pipeline_" + std::to_string(seq++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

KneeAngleTrace constant_trace(double value, double t0, double t1, double rate) {
    KneeAngleTrace t;
    t.rate = rate;
    const auto n = static_cast<std::size_t>((t1 - t0) * rate) + 1;
    for (std::size_t i = 0; i < n; ++i)
        t.samples.push_back({t0 + static_cast<double>(i) / rate, value});
    return t;
}

}  // namespace

TEST_CASE("a static vertical leg reads zero flexion under both methods") {
    sim::HingeConfig cfg;
    cfg.sweep_max_deg = 0.0;  // no motion
    cfg.duration_s = 5.0;
    const Session session = sim::simulate_session(cfg);
    for (const Method m : {Method::A, Method::B}) {
        const KneeAngleTrace trace = compute_knee_trace(session, m, FilterSpec{});
        REQUIRE(!trace.samples.empty());
        for (const auto& s : trace.samples)
            CHECK(std::abs(s.theta_d) <= 1e-6);
    }
}

TEST_CASE("angle timestamps are shifted back by the filter group delay") {
    sim::HingeConfig cfg;
    cfg.duration_s = 5.0;
    const Session session = sim::simulate_session(cfg);
    const KneeAngleTrace trace = compute_knee_trace(session, Method::A, FilterSpec{});
    const double delay = SosCascade::design_lowpass(FilterSpec{}).group_delay_at(0.0);
    CHECK(trace.samples.front().t >= 0.0);
    CHECK(trace.samples.front().t <= 1.0 / 250.0 + 1e-9);
    CHECK(trace.samples.back().t == doctest::Approx(5.0 - delay).epsilon(1e-6));
}

TEST_CASE("methods A and B agree on a walking session") {
    sim::HingeConfig cfg;
    cfg.profile = sim::Profile::Walk;
    const Session session = sim::simulate_session(cfg);
    const KneeAngleTrace a = compute_knee_trace(session, Method::A, FilterSpec{});
    const KneeAngleTrace b = compute_knee_trace(session, Method::B, FilterSpec{});
    REQUIRE(a.samples.size() == b.samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        worst = std::max(worst, std::abs(a.samples[i].theta_d - b.samples[i].theta_d));
    CHECK(worst <= 5.0);
}

TEST_CASE("staircase session produces three holds and a full report") {
    TempDir dir;
    sim::HingeConfig cfg;
    cfg.profile = sim::Profile::Stairs;
    cfg.duration_s = 12.0;
    sim::write_session_csvs(sim::simulate_session(cfg), dir.path);

    RunConfig run_cfg;
    run_cfg.ceiling = 120.0;
    const RunResult res = run_session(dir.path / "thigh.csv", dir.path / "shank.csv",
                                      run_cfg, dir.path / "out");
    REQUIRE(res.holds.size() == 3);
    CHECK(res.report.bins.size() == 3);
    for (const ThresholdBin& b : res.report.bins) CHECK(b.count == 1);
    CHECK(res.report.alerts.empty());

    for (const char* name :
         {"angle.csv", "holds.csv", "report.csv", "alerts.csv", "angle.svg"})
        CHECK(fs::exists(dir.path / "out" / name));

    const std::string holds = slurp(dir.path / "out" / "holds.csv");
    CHECK(holds.rfind("t_s,angle_deg\n", 0) == 0);
    CHECK(std::count(holds.begin(), holds.end(), '\n') == 4);  // header + 3 rows
}

TEST_CASE("repeated runs are byte-identical") {
    TempDir dir;
    sim::HingeConfig cfg;
    cfg.profile = sim::Profile::Walk;
    cfg.noise_std = 0.1;
    sim::write_session_csvs(sim::simulate_session(cfg), dir.path);

    RunConfig run_cfg;
    run_cfg.ceiling = 150.0;
    run_cfg.floor = -20.0;
    run_session(dir.path / "thigh.csv", dir.path / "shank.csv", run_cfg,
                dir.path / "out1");
    run_session(dir.path / "thigh.csv", dir.path / "shank.csv", run_cfg,
                dir.path / "out2");
    for (const char* name :
         {"angle.csv", "holds.csv", "report.csv", "alerts.csv", "angle.svg"}) {
        CHECK(slurp(dir.path / "out1" / name) == slurp(dir.path / "out2" / name));
        CHECK(!slurp(dir.path / "out1" / name).empty());
    }
}

TEST_CASE("a deep sweep trips the ceiling alert once per pass") {
    TempDir dir;
    sim::HingeConfig cfg;  // sweep to 135 and back
    sim::write_session_csvs(sim::simulate_session(cfg), dir.path);
    RunConfig run_cfg;
    run_cfg.ceiling = 120.0;
    const RunResult res = run_session(dir.path / "thigh.csv", dir.path / "shank.csv",
                                      run_cfg, dir.path / "out");
    REQUIRE(res.report.alerts.size() == 1);
    CHECK(res.report.alerts[0].kind == AlertKind::Ceiling);
    // 67.5*(1 - cos(2*pi*t/10)) crosses 120 at t = 3.92
    CHECK(std::abs(res.report.alerts[0].t - 3.92) < 0.15);
}

TEST_CASE("free-fall gravity propagates as a numeric error") {
    Session session;
    session.rate = 250.0;
    for (auto* trace : {&session.thigh, &session.shank}) {
        trace->nominal_rate = 250.0;
        for (int i = 0; i < 500; ++i)
            trace->samples.push_back({i / 250.0, 0.0, 0.0, 0.1});
    }
    session.shank.role = SensorRole::Shank;
    CHECK_THROWS_AS(compute_knee_trace(session, Method::A, FilterSpec{}),
                    NumericError);
}

TEST_CASE("comparison of a trace with itself is exact") {
    const KneeAngleTrace t = constant_trace(42.0, 0.0, 3.0, 100.0);
    const ComparisonMetrics m = compare_traces(t, t, BaselineKind::Synthetic);
    CHECK(m.max_abs_error == doctest::Approx(0.0));
    CHECK(m.fraction_peaks_within_5deg == doctest::Approx(1.0));
    CHECK(m.per_peak_errors.empty());
}

TEST_CASE("a constant offset appears as the max error") {
    KneeAngleTrace t;
    t.rate = 100.0;
    KneeAngleTrace base;
    base.rate = 100.0;
    for (int i = 0; i <= 500; ++i) {
        const double time = i / 100.0;
        const double v = 30.0 + 25.0 * std::sin(2.0 * std::numbers::pi * 0.5 * time);
        t.samples.push_back({time, v + 3.0});
        base.samples.push_back({time, v});
    }
    const ComparisonMetrics m = compare_traces(t, base, BaselineKind::Synthetic);
    CHECK(m.max_abs_error == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(m.per_peak_errors.size() == 3);  // 0.5 Hz peaks at t = 0.5, 2.5, 4.5
    for (double e : m.per_peak_errors) CHECK(e == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(m.fraction_peaks_within_5deg == doctest::Approx(1.0));

    // swapping the arguments keeps the absolute error
    const ComparisonMetrics rev = compare_traces(base, t, BaselineKind::Synthetic);
    CHECK(rev.max_abs_error == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("cv baselines are mapped from interior angle to flexion") {
    KneeAngleTrace t = constant_trace(40.0, 0.0, 2.0, 50.0);
    KneeAngleTrace cv = constant_trace(140.0, 0.0, 2.0, 50.0);  // 180 - 40
    const ComparisonMetrics m = compare_traces(t, cv, BaselineKind::Cv);
    CHECK(m.max_abs_error == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("disjoint traces cannot be compared") {
    const KneeAngleTrace a = constant_trace(10.0, 0.0, 2.0, 50.0);
    const KneeAngleTrace b = constant_trace(10.0, 5.0, 7.0, 50.0);
    CHECK_THROWS_AS(compare_traces(a, b, BaselineKind::Synthetic), DataError);
    const KneeAngleTrace c = constant_trace(10.0, 1.5, 4.0, 50.0);
    CHECK_THROWS_AS(compare_traces(a, c, BaselineKind::Synthetic), DataError);
}

TEST_CASE("angle csv round trip") {
    TempDir dir;
    KneeAngleTrace t;
    t.rate = 250.0;
    for (int i = 0; i < 500; ++i)
        t.samples.push_back({i / 250.0, 45.0 * std::sin(i / 100.0)});
    write_angle_csv(t, dir.path / "angle.csv");
    const KneeAngleTrace back = read_angle_csv(dir.path / "angle.csv");
    REQUIRE(back.samples.size() == t.samples.size());
    CHECK(back.rate == doctest::Approx(250.0));
    for (std::size_t i = 0; i < t.samples.size(); ++i) {
        CHECK(back.samples[i].t == doctest::Approx(t.samples[i].t).epsilon(1e-6));
        CHECK(back.samples[i].theta_d ==
              doctest::Approx(t.samples[i].theta_d).epsilon(1e-6));
    }
    CHECK_THROWS_AS(read_angle_csv(dir.path / "nope.csv"), DataError);
}

TEST_CASE("filter info lists the audit numbers") {
    const std::string text = filter_info_text(FilterSpec{});
    CHECK(text.find("order 4") != std::string::npos);
    CHECK(text.find("7.071068e-01") != std::string::npos);   // -3 dB at 1 Hz
    CHECK(text.find("group delay") != std::string::npos);
    CHECK_THROWS_AS(filter_info_text({4, 200.0, 250.0}), DataError);
}

TEST_CASE("bad input files surface as data errors with context") {
    TempDir dir;
    std::ofstream(dir.path / "thigh.csv", std::ios::binary)
        << "t_s,ax,ay,az\n0.000,0,0,9.81\n0.004,0,0,9.81\n";
    std::ofstream(dir.path / "shank.csv", std::ios::binary)
        << "t_s,ax,ay,az\n0.000,0,0,9.81\n0.003,0,0,bogus\n";
    try {
        run_session(dir.path / "thigh.csv", dir.path / "shank.csv", RunConfig{},
                    dir.path / "out");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("shank.csv:3") != std::string::npos);
    }
    CHECK(!fs::exists(dir.path / "out" / "angle.csv"));
}
