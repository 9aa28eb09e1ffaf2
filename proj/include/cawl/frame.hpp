#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cawl/error.hpp"

namespace cawl {

// All sample grids share one signed coefficient type. Temporal lifting of
// 8-bit input stays well inside 16 bits for up to 8 levels; the spatial
// transform expands further, so a 32-bit container covers every stage.
using sample_t = std::int32_t;

// A level-0 video frame. Samples are row-major, one byte of dynamic range
// ([0,255]) even though the container type is wider.
struct Frame {
    int width = 0;
    int height = 0;
    std::vector<sample_t> samples;

    Frame() = default;
    Frame(int w, int h, sample_t fill = 0)
        : width(w), height(h), samples(static_cast<size_t>(w) * h, fill) {
        if (w <= 0 || h <= 0)
            throw ArgumentError("frame_io", "frame dimensions must be positive");
    }

    sample_t& at(int x, int y) { return samples[static_cast<size_t>(y) * width + x]; }
    sample_t at(int x, int y) const { return samples[static_cast<size_t>(y) * width + x]; }
    size_t pixel_count() const { return samples.size(); }
};

enum class SubbandKind : std::uint8_t { Lp = 0, Hp = 1 };

// A wavelet-domain frame. LP frames approximate the scene, HP frames carry
// the prediction residual and can be negative.
struct CoefficientFrame {
    int width = 0;
    int height = 0;
    SubbandKind kind = SubbandKind::Lp;
    std::vector<sample_t> samples;

    CoefficientFrame() = default;
    CoefficientFrame(int w, int h, SubbandKind k, sample_t fill = 0)
        : width(w), height(h), kind(k), samples(static_cast<size_t>(w) * h, fill) {
        if (w <= 0 || h <= 0)
            throw ArgumentError("frame_io", "frame dimensions must be positive");
    }

    sample_t& at(int x, int y) { return samples[static_cast<size_t>(y) * width + x]; }
    sample_t at(int x, int y) const { return samples[static_cast<size_t>(y) * width + x]; }
    size_t pixel_count() const { return samples.size(); }

    bool same_shape(const CoefficientFrame& other) const {
        return width == other.width && height == other.height;
    }
};

inline CoefficientFrame to_coefficients(const Frame& frame) {
    CoefficientFrame out(frame.width, frame.height, SubbandKind::Lp);
    out.samples = frame.samples;
    return out;
}

// Converts a reconstructed level-0 coefficient frame back to pixels.
// Values must already lie in [0,255]; anything else means the caller is
// holding coefficients, not pixels.
inline Frame to_frame(const CoefficientFrame& coeffs) {
    Frame out(coeffs.width, coeffs.height);
    for (size_t i = 0; i < coeffs.samples.size(); ++i) {
        sample_t v = coeffs.samples[i];
        if (v < 0 || v > 255)
            throw RangeError("frame_io", "sample " + std::to_string(v) +
                                             " outside [0,255]; frame is not 8-bit pixel data");
        out.samples[i] = v;
    }
    return out;
}

// An ordered list of equally sized frames.
struct Sequence {
    std::vector<Frame> frames;

    int width() const { return frames.empty() ? 0 : frames.front().width; }
    int height() const { return frames.empty() ? 0 : frames.front().height; }
    int frame_count() const { return static_cast<int>(frames.size()); }
};

// Reads headerless planar 8-bit grayscale video. The file is a plain
// concatenation of frames, each width*height bytes, row-major.
inline Sequence load_raw_sequence(const std::string& path, int width, int height) {
    if (width <= 0 || height <= 0)
        throw ArgumentError("frame_io", "width and height must be positive");

    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("frame_io", "cannot open '" + path + "' for reading");

    in.seekg(0, std::ios::end);
    const std::uint64_t file_size = static_cast<std::uint64_t>(in.tellg());
    in.seekg(0, std::ios::beg);

    const std::uint64_t frame_bytes = static_cast<std::uint64_t>(width) * height;
    if (file_size == 0)
        throw MalformedInputError("frame_io", "'" + path + "' is empty; need at least one " +
                                                  std::to_string(frame_bytes) + "-byte frame");
    if (file_size % frame_bytes != 0)
        throw MalformedInputError(
            "frame_io", "'" + path + "' is " + std::to_string(file_size) +
                            " bytes, not a multiple of the " + std::to_string(frame_bytes) +
                            "-byte frame size for " + std::to_string(width) + "x" +
                            std::to_string(height));

    const std::uint64_t frame_count = file_size / frame_bytes;
    Sequence seq;
    seq.frames.reserve(frame_count);
    std::vector<std::uint8_t> buffer(frame_bytes);
    for (std::uint64_t t = 0; t < frame_count; ++t) {
        if (!in.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(frame_bytes)))
            throw IoError("frame_io", "short read from '" + path + "'");
        Frame frame(width, height);
        for (std::uint64_t i = 0; i < frame_bytes; ++i)
            frame.samples[i] = buffer[i];
        seq.frames.push_back(std::move(frame));
    }
    return seq;
}

// Byte-exact inverse of load_raw_sequence.
inline void save_raw_sequence(const Sequence& seq, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("frame_io", "cannot open '" + path + "' for writing");

    std::vector<std::uint8_t> buffer;
    for (const Frame& frame : seq.frames) {
        buffer.resize(frame.samples.size());
        for (size_t i = 0; i < frame.samples.size(); ++i) {
            sample_t v = frame.samples[i];
            if (v < 0 || v > 255)
                throw RangeError("frame_io",
                                 "sample " + std::to_string(v) +
                                     " outside [0,255]; coefficients cannot be saved as raw video");
            buffer[i] = static_cast<std::uint8_t>(v);
        }
        if (!out.write(reinterpret_cast<const char*>(buffer.data()),
                       static_cast<std::streamsize>(buffer.size())))
            throw IoError("frame_io", "short write to '" + path + "'");
    }
}

}  // namespace cawl
