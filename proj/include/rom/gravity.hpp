#pragma once
#include <complex>
#include <vector>

#include "rom/types.hpp"

namespace rom {

/// Low-pass design parameters. Defaults emulate a gravity sensor:
/// fourth-order Butterworth, 1 Hz cutoff, 250 Hz stream.
struct FilterSpec {
    int order = 4;          // even, >= 2
    double cutoff_hz = 1.0;
    double rate_hz = 250.0;
};

struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;  // a0 normalized to 1
};

/// Butterworth low-pass as cascaded second-order sections.
///
/// Discretized with the bilinear transform and frequency pre-warping, so the
/// -3 dB point lands exactly on cutoff_hz. A single high-order polynomial is
/// ill-conditioned at cutoff/rate ratios like 1/250; the cascade is not.
class SosCascade {
public:
    static SosCascade design_lowpass(const FilterSpec& spec);

    std::complex<double> response_at(double f_hz) const;
    double magnitude_at(double f_hz) const;
    /// Group delay in seconds, from the phase slope at f_hz.
    double group_delay_at(double f_hz) const;

    const std::vector<Biquad>& sections() const { return sections_; }
    const FilterSpec& spec() const { return spec_; }

private:
    FilterSpec spec_;
    std::vector<Biquad> sections_;
};

/// Stateful causal single-pass filter over one scalar stream.
/// One instance per stream; do not share across streams.
class SosFilter {
public:
    explicit SosFilter(const SosCascade& cascade);

    /// Seed the state as if the input had been held at x0 forever, so a
    /// static capture starts at its steady-state value instead of ramping.
    void init_steady_state(double x0);
    double process(double x);
    void reset();

private:
    struct State { double s1 = 0.0, s2 = 0.0; };  // direct form II transposed
    std::vector<Biquad> sections_;
    std::vector<State> state_;
};

/// Filter all three axes with identical coefficients, causally, in one pass.
/// Input must be uniform at spec.rate_hz; output length equals input length.
GravityTrace filter_trace(const SensorTrace& trace, const FilterSpec& spec);

/// Euclidean norm of the filtered components; about 9.81 m/s² once linear
/// acceleration has been removed.
double signal_magnitude(const GravityVector& g);

}  // namespace rom
