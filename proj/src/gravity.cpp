#include "rom/gravity.hpp"

#include <cmath>
#include <numbers>

#include "rom/errors.hpp"

namespace rom {

namespace {
constexpr double kPi = std::numbers::pi;

void validate(const FilterSpec& spec) {
    if (spec.rate_hz <= 0.0)
        throw DataError("filter: sampling rate must be positive");
    if (spec.order < 2 || spec.order % 2 != 0)
        throw DataError("filter: order must be even and >= 2");
    if (spec.cutoff_hz <= 0.0)
        throw DataError("filter: cutoff must be positive");
    if (spec.cutoff_hz >= spec.rate_hz / 2.0)
        throw DataError("filter: cutoff at or above Nyquist (" +
                        std::to_string(spec.rate_hz / 2.0) + " Hz)");
}
}  // namespace

SosCascade SosCascade::design_lowpass(const FilterSpec& spec) {
    validate(spec);

    SosCascade c;
    c.spec_ = spec;
    const double k = std::tan(kPi * spec.cutoff_hz / spec.rate_hz);
    const int pairs = spec.order / 2;
    c.sections_.reserve(pairs);
    for (int i = 0; i < pairs; ++i) {
        // Butterworth pole-pair quality factors.
        const double q = 1.0 / (2.0 * std::sin(kPi * (2 * i + 1) / (2.0 * spec.order)));
        const double norm = 1.0 + k / q + k * k;
        Biquad s;
        s.b0 = k * k / norm;
        s.b1 = 2.0 * s.b0;
        s.b2 = s.b0;
        s.a1 = 2.0 * (k * k - 1.0) / norm;
        s.a2 = (1.0 - k / q + k * k) / norm;
        c.sections_.push_back(s);
    }
    return c;
}

std::complex<double> SosCascade::response_at(double f_hz) const {
    const double w = 2.0 * kPi * f_hz / spec_.rate_hz;
    const std::complex<double> z1 = std::polar(1.0, -w);
    const std::complex<double> z2 = z1 * z1;
    std::complex<double> h{1.0, 0.0};
    for (const Biquad& s : sections_)
        h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
    return h;
}

double SosCascade::magnitude_at(double f_hz) const {
    return std::abs(response_at(f_hz));
}

double SosCascade::group_delay_at(double f_hz) const {
    const double df = 1e-4;
    if (f_hz < df) {
        // phase(0) = 0 by construction; one-sided slope
        const double phi = std::arg(response_at(df));
        return -phi / (2.0 * kPi * df);
    }
    const double p1 = std::arg(response_at(f_hz - df));
    const double p2 = std::arg(response_at(f_hz + df));
    double dphi = p2 - p1;
    // unwrap a single 2*pi jump, if any
    if (dphi > kPi) dphi -= 2.0 * kPi;
    if (dphi < -kPi) dphi += 2.0 * kPi;
    return -dphi / (2.0 * kPi * 2.0 * df);
}

SosFilter::SosFilter(const SosCascade& cascade)
    : sections_(cascade.sections()), state_(cascade.sections().size()) {}

void SosFilter::init_steady_state(double x0) {
    // Each section has unity DC gain, so x0 propagates unchanged.
    for (std::size_t i = 0; i < sections_.size(); ++i) {
        const Biquad& s = sections_[i];
        state_[i].s1 = (1.0 - s.b0) * x0;
        state_[i].s2 = (s.b2 - s.a2) * x0;
    }
}

double SosFilter::process(double x) {
    for (std::size_t i = 0; i < sections_.size(); ++i) {
        const Biquad& s = sections_[i];
        State& st = state_[i];
        const double y = s.b0 * x + st.s1;
        st.s1 = s.b1 * x - s.a1 * y + st.s2;
        st.s2 = s.b2 * x - s.a2 * y;
        x = y;
    }
    return x;
}

void SosFilter::reset() {
    for (State& st : state_) st = State{};
}

GravityTrace filter_trace(const SensorTrace& trace, const FilterSpec& spec) {
    const SosCascade cascade = SosCascade::design_lowpass(spec);
    if (trace.samples.size() < 2)
        throw DataError("filter: trace needs at least 2 samples");

    const double dt = 1.0 / spec.rate_hz;
    for (std::size_t i = 1; i < trace.samples.size(); ++i) {
        const double gap = trace.samples[i].t - trace.samples[i - 1].t;
        if (std::abs(gap - dt) > 1e-3 * dt)
            throw DataError("filter: non-uniform sampling at t=" +
                            std::to_string(trace.samples[i].t) + " s");
    }

    SosFilter fx(cascade), fy(cascade), fz(cascade);
    fx.init_steady_state(trace.samples.front().ax);
    fy.init_steady_state(trace.samples.front().ay);
    fz.init_steady_state(trace.samples.front().az);

    GravityTrace out;
    out.role = trace.role;
    out.rate = spec.rate_hz;
    out.samples.reserve(trace.samples.size());
    for (const AccelSample& s : trace.samples) {
        out.samples.push_back(
            {s.t, fx.process(s.ax), fy.process(s.ay), fz.process(s.az)});
    }
    return out;
}

double signal_magnitude(const GravityVector& g) {
    return std::sqrt(g.gx * g.gx + g.gy * g.gy + g.gz * g.gz);
}

}  // namespace rom
