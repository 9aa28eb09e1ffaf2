#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cawl/codec.hpp"
#include "cawl/container.hpp"
#include "cawl/error.hpp"
#include "cawl/frame.hpp"

namespace cawl {

// Base-layer quality: one MSE pooled over every (preview frame, original
// frame in its span) comparison, then converted to dB. Intra frames compare
// against themselves and contribute zero error. A zero pooled error is the
// lossless sentinel (infinite PSNR).
struct PsnrResult {
    double mse = 0.0;
    bool lossless = false;

    double db() const {
        return lossless ? std::numeric_limits<double>::infinity()
                        : 10.0 * std::log10(255.0 * 255.0 / mse);
    }
};

inline PsnrResult psnr_lp_t(const std::vector<PreviewFrame>& base_layer, const Sequence& original) {
    if (original.frames.empty())
        throw ArgumentError("metrics", "original sequence is empty");
    double total = 0.0;
    std::uint64_t comparisons = 0;
    for (const PreviewFrame& preview : base_layer) {
        if (preview.frame.width != original.width() || preview.frame.height != original.height())
            throw ArgumentError("metrics", "preview frame dimensions differ from the original");
        for (int t = preview.position; t < preview.position + preview.span; ++t) {
            if (t < 0 || t >= original.frame_count())
                throw ArgumentError("metrics", "preview span reaches outside the sequence");
            const Frame& reference = original.frames[static_cast<size_t>(t)];
            for (size_t i = 0; i < preview.frame.samples.size(); ++i) {
                const double diff =
                    static_cast<double>(preview.frame.samples[i]) - reference.samples[i];
                total += diff * diff;
            }
            ++comparisons;
        }
    }
    if (comparisons == 0)
        throw ArgumentError("metrics", "base layer is empty");
    PsnrResult result;
    result.mse = total / (static_cast<double>(comparisons) *
                          static_cast<double>(original.width()) * original.height());
    result.lossless = result.mse == 0.0;
    return result;
}

// Exact byte attribution of a container: every byte lands in exactly one
// bucket and the buckets sum to the file size.
struct RateReport {
    std::uint64_t header_bytes = 0;  // global header + section/frame length prefixes
    std::uint64_t v_bytes = 0;
    std::uint64_t motion_bytes = 0;
    std::uint64_t base_layer_bytes = 0;
    std::vector<std::uint64_t> enhancement_bytes;  // [level] 1..i_max
    std::uint64_t total_bytes = 0;

    double bits_per_pixel(const StreamHeader& h) const {
        return static_cast<double>(total_bytes) * 8.0 /
               (static_cast<double>(h.width) * h.height * h.frame_count);
    }
};

inline RateReport rate_report(const std::vector<std::uint8_t>& bytes) {
    ByteReader reader(bytes);
    const StreamHeader h = read_header(reader);

    RateReport report;
    report.total_bytes = bytes.size();
    report.header_bytes = StreamHeader::byte_size;
    report.enhancement_bytes.assign(static_cast<size_t>(h.i_max) + 1, 0);

    for (int g = 0; g < h.full_gop_count(); ++g) {
        const std::uint32_t section_length = reader.u32le();
        report.header_bytes += 4;
        const std::vector<std::uint8_t> body = reader.bytes(section_length);
        ByteReader section(body);

        size_t start = section.position();
        const CodedStream v_stream = read_framed_stream(section);
        report.v_bytes += section.position() - start;

        const DepthVector depth = decode_depth_vector(v_stream, h.gop_size, h.i_max);
        const RoleCounts counts = count_roles(depth, parse_depth_vector(depth));

        if (h.mc_mode == McMode::Block)
            for (int level = h.i_max; level >= h.i_max - h.kept_levels + 1; --level)
                for (int n = 0; n < counts.hp_per_level[static_cast<size_t>(level)]; ++n) {
                    start = section.position();
                    read_framed_stream(section);
                    report.motion_bytes += section.position() - start;
                }

        for (int n = 0; n < counts.base_layer; ++n) {
            start = section.position();
            read_framed_payload(section);
            report.base_layer_bytes += section.position() - start;
        }

        for (int level = h.i_max; level >= h.i_max - h.kept_levels + 1; --level)
            for (int n = 0; n < counts.hp_per_level[static_cast<size_t>(level)]; ++n) {
                start = section.position();
                read_framed_payload(section);
                report.enhancement_bytes[static_cast<size_t>(level)] +=
                    section.position() - start;
            }
    }

    while (!reader.at_end()) {
        const size_t start = reader.position();
        read_framed_payload(reader);
        report.base_layer_bytes += reader.position() - start;
    }

    std::uint64_t sum = report.header_bytes + report.v_bytes + report.motion_bytes +
                        report.base_layer_bytes;
    for (std::uint64_t b : report.enhancement_bytes)
        sum += b;
    if (sum != report.total_bytes)
        throw InternalError("metrics", "rate report buckets sum to " + std::to_string(sum) +
                                           " of " + std::to_string(report.total_bytes) + " bytes");
    return report;
}

// CSV shape consumed by plotting scripts: one row per sweep point.
inline std::string csv_header() { return "level,mode,lambda,file_size_bytes,psnr_lp_t_db"; }

inline std::string csv_row(int level, const std::string& mode, double lambda,
                           std::uint64_t file_size, const PsnrResult& psnr) {
    std::ostringstream row;
    row << level << ',' << mode << ',' << lambda << ',' << file_size << ',';
    if (psnr.lossless)
        row << "inf";
    else
        row << psnr.db();
    return row.str();
}

}  // namespace cawl
