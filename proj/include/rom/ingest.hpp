#pragma once
#include <filesystem>

#include "rom/types.hpp"

namespace rom {

/// Parse one sensor CSV (header `t_s,ax,ay,az`, seconds and m/s²).
/// Rejects malformed rows (with line number), non-monotone timestamps,
/// readings outside the ±2 g sensor range, and dropouts longer than 100 ms.
SensorTrace parse_trace(const std::filesystem::path& path, SensorRole role);

/// Linearly interpolate both traces onto a uniform grid at `rate` covering
/// the time interval where they overlap. No extrapolation: samples outside
/// the overlap are discarded. Overlap must be at least one second.
Session align(const SensorTrace& thigh, const SensorTrace& shank, double rate);

}  // namespace rom
