#include "rom/vision.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>
#include <string_view>

#include "rom/errors.hpp"

namespace rom::vision {

namespace {

// Next whitespace-delimited token, skipping '#' comments to end of line.
std::string next_token(std::istream& in, const std::string& path) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    if (tok.empty())
        throw DataError(path + ": truncated PPM header");
    return tok;
}

int header_int(std::istream& in, const std::string& path) {
    const std::string tok = next_token(in, path);
    int value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw DataError(path + ": malformed PPM header field '" + tok + "'");
    return value;
}

}  // namespace

Image read_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + path.string());

    if (next_token(in, path.string()) != "P6")
        throw DataError(path.string() + ": not a binary PPM (P6) file");
    Image img;
    img.width = header_int(in, path.string());
    img.height = header_int(in, path.string());
    const int maxval = header_int(in, path.string());
    if (img.width <= 0 || img.height <= 0)
        throw DataError(path.string() + ": bad PPM dimensions");
    if (maxval != 255)
        throw DataError(path.string() + ": only maxval 255 supported");
    // header_int consumed exactly one whitespace after maxval

    const std::size_t bytes = static_cast<std::size_t>(img.width) * img.height * 3;
    img.data.resize(bytes);
    in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(bytes));
    if (static_cast<std::size_t>(in.gcount()) != bytes)
        throw DataError(path.string() + ": truncated PPM pixel data");
    return img;
}

void write_ppm(const Image& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write " + path.string());
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.data.size()));
    if (!out)
        throw DataError("write failed: " + path.string());
}

DotDetection detect_dot(const Image& frame, const ColorRange& range,
                        int min_pixels) {
    if (frame.width <= 0 || frame.height <= 0 || frame.data.empty())
        throw DataError("detect_dot: empty frame");

    double sx = 0.0, sy = 0.0;
    long count = 0;
    const std::uint8_t* p = frame.data.data();
    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x, p += 3) {
            if (p[0] < range.min_rgb[0] || p[0] > range.max_rgb[0]) continue;
            if (p[1] < range.min_rgb[1] || p[1] > range.max_rgb[1]) continue;
            if (p[2] < range.min_rgb[2] || p[2] > range.max_rgb[2]) continue;
            sx += x;
            sy += y;
            ++count;
        }
    }
    if (count < min_pixels)
        throw DataError("missing marker: " + std::to_string(count) +
                        " matching pixels (minimum " + std::to_string(min_pixels) + ")");
    return {sx / count, sy / count, count};
}

double frame_angle(Point red, Point green, Point blue) {
    const double v1x = green.x - red.x, v1y = green.y - red.y;
    const double v2x = blue.x - red.x, v2y = blue.y - red.y;
    const double n1 = std::hypot(v1x, v1y);
    const double n2 = std::hypot(v2x, v2y);
    if (n1 == 0.0 || n2 == 0.0)
        throw NumericError("frame_angle: coincident marker centroids");
    const double c = std::clamp((v1x * v2x + v1y * v2y) / (n1 * n2), -1.0, 1.0);
    return std::acos(c) * 180.0 / std::numbers::pi;
}

ExtractResult extract_trace(const std::filesystem::path& manifest,
                            const ColorRange& red, const ColorRange& green,
                            const ColorRange& blue, int min_pixels) {
    std::ifstream in(manifest, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + manifest.string());

    const auto base = manifest.parent_path();
    ExtractResult result;
    std::string line;
    long line_no = 0;

    if (!std::getline(in, line))
        throw ParseError(manifest.string(), 1, "empty manifest");
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line != "t_s,path")
        throw ParseError(manifest.string(), 1, "expected header 't_s,path'");

    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;

        const std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError(manifest.string(), line_no, "expected 't_s,path'");
        double t = 0.0;
        {
            const std::string_view f(line.data(), comma);
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), t);
            if (ec != std::errc{} || ptr != f.data() + f.size() || !std::isfinite(t))
                throw ParseError(manifest.string(), line_no, "malformed timestamp");
        }
        const std::string rel = line.substr(comma + 1);
        const std::filesystem::path frame_path =
            std::filesystem::path(rel).is_absolute() ? std::filesystem::path(rel)
                                                     : base / rel;
        try {
            const Image img = read_ppm(frame_path);
            const DotDetection r = detect_dot(img, red, min_pixels);
            const DotDetection g = detect_dot(img, green, min_pixels);
            const DotDetection b = detect_dot(img, blue, min_pixels);
            const double angle = frame_angle({r.cx, r.cy}, {g.cx, g.cy}, {b.cx, b.cy});
            result.angles.push_back({t, angle});
        } catch (const Error& e) {
            result.failures.push_back({t, frame_path.string(), e.what()});
        }
    }
    return result;
}

}  // namespace rom::vision
