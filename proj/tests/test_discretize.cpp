#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "rom/discretize.hpp"
#include "rom/errors.hpp"
#include "rom/sim.hpp"

using namespace rom;

namespace {

KneeAngleTrace from_values(const std::vector<double>& v, double rate) {
    KneeAngleTrace t;
    t.rate = rate;
    for (std::size_t i = 0; i < v.size(); ++i)
        t.samples.push_back({static_cast<double>(i) / rate, v[i]});
    return t;
}

KneeAngleTrace from_profile(const sim::HingeConfig& cfg) {
    KneeAngleTrace t;
    t.rate = cfg.rate_hz;
    const auto n = static_cast<std::size_t>(cfg.duration_s * cfg.rate_hz) + 1;
    for (std::size_t i = 0; i < n; ++i) {
        const double time = static_cast<double>(i) / cfg.rate_hz;
        t.samples.push_back({time, sim::flexion_at(cfg, time)});
    }
    return t;
}

}  // namespace

TEST_CASE("a constant trace yields exactly one hold") {
    const auto trace = from_values(std::vector<double>(1250, 30.0), 250.0);
    const auto holds = discretize(trace, DiscretizeConfig{});
    REQUIRE(holds.size() == 1);
    CHECK(holds[0].angle_mean == doctest::Approx(30.0));
}

TEST_CASE("two dwells with a fast transition yield two holds") {
    std::vector<double> v;
    for (int i = 0; i < 750; ++i) v.push_back(0.0);          // 3 s at 0
    for (int i = 0; i < 50; ++i) v.push_back(90.0 * i / 50); // 0.2 s ramp
    for (int i = 0; i < 750; ++i) v.push_back(90.0);         // 3 s at 90
    const auto holds = discretize(from_values(v, 250.0), DiscretizeConfig{});
    REQUIRE(holds.size() == 2);
    CHECK(std::abs(holds[0].angle_mean - 0.0) <= 1.0);
    CHECK(std::abs(holds[1].angle_mean - 90.0) <= 1.0);
}

TEST_CASE("30/60/90 staircase with 3 s dwells yields three holds") {
    sim::HingeConfig cfg;
    cfg.profile = sim::Profile::Stairs;
    const auto holds = discretize(from_profile(cfg), DiscretizeConfig{});
    REQUIRE(holds.size() == 3);
    CHECK(std::abs(holds[0].angle_mean - 30.0) <= 1.0);
    CHECK(std::abs(holds[1].angle_mean - 60.0) <= 1.0);
    CHECK(std::abs(holds[2].angle_mean - 90.0) <= 1.0);
    CHECK(std::is_sorted(holds.begin(), holds.end(),
                         [](const HoldEvent& a, const HoldEvent& b) {
                             return a.t_mean < b.t_mean;
                         }));
}

TEST_CASE("hold times are strictly increasing and means stay in range") {
    std::mt19937 rng(37);
    std::normal_distribution<double> jitter(0.0, 0.3);
    sim::HingeConfig cfg;
    cfg.profile = sim::Profile::Stairs;
    KneeAngleTrace trace = from_profile(cfg);
    for (auto& s : trace.samples) s.theta_d += jitter(rng);

    const auto holds = discretize(trace, DiscretizeConfig{});
    const auto window = static_cast<std::size_t>(1.0 * trace.rate);
    for (std::size_t k = 0; k < holds.size(); ++k) {
        if (k > 0) CHECK(holds[k].t_mean > holds[k - 1].t_mean);
        // window mean must lie within the window's min/max
        const auto mid = static_cast<std::size_t>(holds[k].t_mean * trace.rate);
        const std::size_t lo = mid >= window ? mid - window : 0;
        double vmin = 1e30, vmax = -1e30;
        for (std::size_t i = lo; i <= std::min(mid + window, trace.samples.size() - 1); ++i) {
            vmin = std::min(vmin, trace.samples[i].theta_d);
            vmax = std::max(vmax, trace.samples[i].theta_d);
        }
        CHECK(holds[k].angle_mean >= vmin);
        CHECK(holds[k].angle_mean <= vmax);
    }
}

TEST_CASE("time reversal preserves the multiset of hold angles") {
    sim::HingeConfig cfg;
    cfg.profile = sim::Profile::Stairs;
    const KneeAngleTrace fwd = from_profile(cfg);
    KneeAngleTrace rev;
    rev.rate = fwd.rate;
    for (std::size_t i = fwd.samples.size(); i-- > 0;)
        rev.samples.push_back({fwd.samples[fwd.samples.size() - 1 - i].t,
                               fwd.samples[i].theta_d});

    auto a = discretize(fwd, DiscretizeConfig{});
    auto b = discretize(rev, DiscretizeConfig{});
    REQUIRE(a.size() == b.size());
    auto by_angle = [](const HoldEvent& x, const HoldEvent& y) {
        return x.angle_mean < y.angle_mean;
    };
    std::sort(a.begin(), a.end(), by_angle);
    std::sort(b.begin(), b.end(), by_angle);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(std::abs(a[i].angle_mean - b[i].angle_mean) <= 1.0);
}

TEST_CASE("degenerate configurations are rejected") {
    const auto trace = from_values(std::vector<double>(100, 10.0), 250.0);
    DiscretizeConfig bad;
    bad.window_s = 10.0;
    CHECK_THROWS_AS(discretize(trace, bad), DataError);  // window longer than trace
    bad = DiscretizeConfig{};
    bad.hold_std_deg = 5.0;  // hold >= move
    CHECK_THROWS_AS(discretize(trace, bad), DataError);
    bad = DiscretizeConfig{};
    bad.window_s = 0.001;  // < 2 samples
    CHECK_THROWS_AS(discretize(trace, bad), DataError);
}

TEST_CASE("holds are binned to their nearest target") {
    std::vector<HoldEvent> holds{{1.0, 30.4}, {2.0, 59.2}, {3.0, 91.0}};
    const auto trace = from_values(std::vector<double>(500, 0.0), 250.0);
    const auto report =
        threshold_report(holds, trace, {30.0, 60.0, 90.0}, 5.0, {}, {});
    REQUIRE(report.bins.size() == 3);
    CHECK(report.bins[0].count == 1);
    CHECK(report.bins[1].count == 1);
    CHECK(report.bins[2].count == 1);
    CHECK(report.alerts.empty());

    // out-of-tolerance hold stays unbinned
    const auto none =
        threshold_report({{1.0, 45.0}}, trace, {30.0, 60.0, 90.0}, 5.0, {}, {});
    CHECK(none.bins[0].count + none.bins[1].count + none.bins[2].count == 0);
    CHECK_THROWS_AS(threshold_report(holds, trace, {30.0}, 0.0, {}, {}), DataError);
}

TEST_CASE("ceiling alerts fire on upward crossings only") {
    std::vector<double> rising;
    for (int i = 0; i <= 500; ++i) rising.push_back(130.0 * i / 500.0);
    const auto trace = from_values(rising, 250.0);
    const auto report = threshold_report({}, trace, {}, 5.0, 120.0, {});
    CHECK(report.alerts.size() == 1);
    CHECK(report.alerts[0].kind == AlertKind::Ceiling);

    std::vector<double> low(500, 40.0);
    const auto quiet = threshold_report({}, from_values(low, 250.0), {}, 5.0, 120.0, {});
    CHECK(quiet.alerts.empty());
}

TEST_CASE("alert count equals the negative-to-positive sign changes") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    const double ceiling = 60.0, floor = 20.0;
    std::vector<double> v;
    for (int i = 0; i < 3000; ++i) v.push_back(u(rng));

    int expected_up = 0, expected_down = 0;
    int side_c = 0, side_f = 0;
    for (double x : v) {
        const int sc = x > ceiling ? 1 : (x < ceiling ? -1 : 0);
        if (sc != 0) {
            if (side_c == -1 && sc == 1) ++expected_up;
            side_c = sc;
        }
        const int sf = x > floor ? 1 : (x < floor ? -1 : 0);
        if (sf != 0) {
            if (side_f == 1 && sf == -1) ++expected_down;
            side_f = sf;
        }
    }
    const auto report =
        threshold_report({}, from_values(v, 250.0), {}, 5.0, ceiling, floor);
    int up = 0, down = 0;
    for (const Alert& a : report.alerts)
        (a.kind == AlertKind::Ceiling ? up : down)++;
    CHECK(up == expected_up);
    CHECK(down == expected_down);
}
