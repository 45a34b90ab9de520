#pragma once
#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace rom::vision {

/// 8-bit RGB raster.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // row-major, 3 bytes per pixel

    std::uint8_t* pixel(int x, int y) { return data.data() + 3 * (static_cast<std::size_t>(y) * width + x); }
    const std::uint8_t* pixel(int x, int y) const { return data.data() + 3 * (static_cast<std::size_t>(y) * width + x); }
};

Image read_ppm(const std::filesystem::path& path);     // binary P6, maxval 255
void write_ppm(const Image& img, const std::filesystem::path& path);

/// Inclusive per-channel RGB window.
struct ColorRange {
    std::array<int, 3> min_rgb{0, 0, 0};
    std::array<int, 3> max_rgb{255, 255, 255};
};

// Saturated-primary defaults for synthetic frames.
inline constexpr ColorRange kRedRange{{150, 0, 0}, {255, 100, 100}};
inline constexpr ColorRange kGreenRange{{0, 150, 0}, {100, 255, 100}};
inline constexpr ColorRange kBlueRange{{0, 0, 150}, {100, 100, 255}};

struct DotDetection {
    double cx = 0.0;
    double cy = 0.0;
    long pixel_count = 0;
};

/// Centroid of every pixel whose channels fall inside the range. No
/// connected-component analysis: two disjoint blobs average to their
/// midpoint, a known failure mode of this detector.
DotDetection detect_dot(const Image& frame, const ColorRange& range,
                        int min_pixels = 10);

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Unsigned angle in degrees between the red->green and red->blue rays,
/// in [0, 180]. Coincident points are a degenerate-geometry error.
double frame_angle(Point red, Point green, Point blue);

struct FrameAngle {
    double t = 0.0;
    double angle = 0.0;  // degrees
};

struct FrameFailure {
    double t = 0.0;
    std::string path;
    std::string reason;
};

struct ExtractResult {
    std::vector<FrameAngle> angles;
    std::vector<FrameFailure> failures;
};

/// Process every frame listed in a manifest CSV (header `t_s,path`; paths
/// resolved relative to the manifest). Per-frame failures are recorded and
/// skipped, never fatal.
ExtractResult extract_trace(const std::filesystem::path& manifest,
                            const ColorRange& red = kRedRange,
                            const ColorRange& green = kGreenRange,
                            const ColorRange& blue = kBlueRange,
                            int min_pixels = 10);

}  // namespace rom::vision
