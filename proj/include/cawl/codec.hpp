#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cawl/adaptive.hpp"
#include "cawl/container.hpp"
#include "cawl/error.hpp"
#include "cawl/frame.hpp"
#include "cawl/lifting.hpp"
#include "cawl/motion.hpp"
#include "cawl/spatial_codec.hpp"

namespace cawl {

namespace detail {
// Runs fn(0..count-1) on up to `threads` workers. Work items must be
// independent; results land in caller-owned slots so the outcome does not
// depend on scheduling.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
    if (threads <= 0)
        threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, count));
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count || failed.load())
                return;
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true))
                    failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (failed.load())
        std::rethrow_exception(failure);
}
}  // namespace detail

struct EncodeConfig {
    int i_max = 3;
    double lambda = 3.0;
    McMode mc_mode = McMode::None;
    McParams mc;
    HpDistortionPolicy hp_distortion = HpDistortionPolicy::Energy;
    bool force_uniform = false;
    int threads = 0;  // 0: one worker per hardware thread
    // Test hook, forwarded into each GOP's decision loop.
    std::function<std::optional<PairDecision>(int gop_index, int level, int position)>
        decision_override;

    void validate() const {
        if (i_max < 1 || i_max > 8)
            throw ArgumentError("cli", "i_max must lie in [1,8]");
        if (!(lambda >= 0.0))
            throw ArgumentError("cli", "lambda must be non-negative");
        if (mc_mode == McMode::Block)
            mc.validate();
    }
};

inline EncodedSequence encode_sequence(const Sequence& seq, const EncodeConfig& config) {
    config.validate();
    if (seq.frames.empty())
        throw ArgumentError("codec", "sequence must contain at least one frame");

    EncodedSequence out;
    StreamHeader& h = out.header;
    h.width = seq.width();
    h.height = seq.height();
    h.frame_count = seq.frame_count();
    h.i_max = config.i_max;
    h.gop_size = 1 << config.i_max;
    h.kept_levels = config.i_max;
    h.lambda_milli = static_cast<std::uint32_t>(std::lround(config.lambda * 1000.0));
    h.mc_mode = config.mc_mode;
    h.mc = config.mc;
    h.trailing_frame_count = h.frame_count % h.gop_size;

    const int gop_count = h.full_gop_count();
    out.gops.resize(static_cast<size_t>(gop_count));
    detail::parallel_for(gop_count, config.threads, [&](int g) {
        GopConfig gop_config;
        gop_config.i_max = config.i_max;
        gop_config.lambda.lambda = config.lambda;
        gop_config.mc_mode = config.mc_mode;
        gop_config.mc = config.mc;
        gop_config.hp_distortion = config.hp_distortion;
        gop_config.force_uniform = config.force_uniform;
        if (config.decision_override)
            gop_config.decision_override = [&, g](int level, int position) {
                return config.decision_override(g, level, position);
            };
        const std::span<const Frame> frames(seq.frames.data() +
                                                static_cast<size_t>(g) * h.gop_size,
                                            static_cast<size_t>(h.gop_size));
        out.gops[static_cast<size_t>(g)] = build_adaptive_decomposition(frames, gop_config);
    });

    out.trailing_payloads.reserve(static_cast<size_t>(h.trailing_frame_count));
    for (int t = h.frame_count - h.trailing_frame_count; t < h.frame_count; ++t)
        out.trailing_payloads.push_back(
            encode_frame_lossless(to_coefficients(seq.frames[static_cast<size_t>(t)])));
    return out;
}

inline std::vector<std::uint8_t> encode_to_bytes(const Sequence& seq, const EncodeConfig& config) {
    return write_container(encode_sequence(seq, config));
}

// One decoded frame of a temporal preview: it stands for `span` original
// frames starting at `position`.
struct PreviewFrame {
    int position = 0;
    int span = 1;
    CoefficientFrame frame;
};

namespace detail {

struct DecodedGop {
    std::vector<PositionRole> roles;
    std::vector<CoefficientFrame> base_layer;                 // indexed like ParsedGop::base_layer
    std::vector<std::vector<CoefficientFrame>> hp;            // [level][entry]
    std::vector<std::vector<MotionField>> motion;             // [level][entry], block mode only
};

inline DecodedGop decode_gop_payloads(const ParsedGop& gop, const StreamHeader& h) {
    DecodedGop decoded;
    decoded.roles = parse_depth_vector(gop.depth);

    decoded.base_layer.reserve(gop.base_layer.size());
    for (const auto& [position, payload] : gop.base_layer)
        decoded.base_layer.push_back(decode_frame_lossless(payload, h.width, h.height, SubbandKind::Lp));

    decoded.hp.resize(static_cast<size_t>(h.i_max) + 1);
    decoded.motion.resize(static_cast<size_t>(h.i_max) + 1);
    for (int level = h.i_max; level >= h.i_max - h.kept_levels + 1; --level) {
        for (const ParsedEnhancement& el : gop.enhancement[static_cast<size_t>(level)]) {
            decoded.hp[static_cast<size_t>(level)].push_back(
                decode_frame_lossless(el.payload, h.width, h.height, SubbandKind::Hp));
            if (h.mc_mode == McMode::Block) {
                if (!el.motion)
                    throw DecodeError("container", "missing motion payload in MC stream");
                decoded.motion[static_cast<size_t>(level)].push_back(
                    decode_motion_field(*el.motion, h.width, h.height, h.mc.block_size,
                                        search_range_for_level(level, h.mc)));
            }
        }
    }
    return decoded;
}

// Index of the enhancement entry at `position` within its level group.
inline int enhancement_index(const ParsedGop& gop, int level, int position) {
    const auto& group = gop.enhancement[static_cast<size_t>(level)];
    for (size_t n = 0; n < group.size(); ++n)
        if (group[n].position == position)
            return static_cast<int>(n);
    throw InternalError("codec", "enhancement frame for position " + std::to_string(position) +
                                     " not found at level " + std::to_string(level));
}

// Inverts the lifting over the span rooted at `position` until frames reach
// `target_level`, then hands them to the sink.
template <typename Sink>
void synthesize_span(const ParsedGop& gop, const DecodedGop& decoded, const StreamHeader& h,
                     int position, int level, CoefficientFrame frame, int target_level,
                     Sink&& sink) {
    if (level <= target_level) {
        sink(position, level, std::move(frame));
        return;
    }
    const int half = 1 << (level - 1);
    const int hp_index = enhancement_index(gop, level, position + half);
    WarpPair warp;
    if (h.mc_mode == McMode::Block)
        warp.field = &decoded.motion[static_cast<size_t>(level)][static_cast<size_t>(hp_index)];
    auto [odd, even] = lift_pair_inverse(
        frame, decoded.hp[static_cast<size_t>(level)][static_cast<size_t>(hp_index)], warp);
    synthesize_span(gop, decoded, h, position, level - 1, std::move(odd), target_level, sink);
    synthesize_span(gop, decoded, h, position + half, level - 1, std::move(even), target_level, sink);
}

template <typename Sink>
void decode_gop(const ParsedGop& gop, const StreamHeader& h, int target_level, Sink&& sink) {
    const DecodedGop decoded = decode_gop_payloads(gop, h);
    for (size_t n = 0; n < gop.base_layer.size(); ++n) {
        const int position = gop.base_layer[n].first;
        const int level = decoded.roles[static_cast<size_t>(position)].level;
        synthesize_span(gop, decoded, h, position, level, decoded.base_layer[n], target_level,
                        sink);
    }
}

}  // namespace detail

// Full lossless reconstruction; requires every enhancement layer.
inline Sequence decode_full(const ParsedContainer& parsed, int threads = 0) {
    const StreamHeader& h = parsed.header;
    if (h.kept_levels != h.i_max)
        throw ArgumentError("codec", "stream retains " + std::to_string(h.kept_levels) + " of " +
                                         std::to_string(h.i_max) +
                                         " enhancement layers; lossless decode needs all of them");

    Sequence seq;
    seq.frames.assign(static_cast<size_t>(h.frame_count), Frame(h.width, h.height));
    detail::parallel_for(static_cast<int>(parsed.gops.size()), threads, [&](int g) {
        const int base = g * h.gop_size;
        detail::decode_gop(parsed.gops[static_cast<size_t>(g)], h, 0,
                           [&](int position, int, CoefficientFrame frame) {
                               seq.frames[static_cast<size_t>(base + position)] = to_frame(frame);
                           });
    });
    int position = h.frame_count - h.trailing_frame_count;
    for (const auto& payload : parsed.trailing_payloads)
        seq.frames[static_cast<size_t>(position++)] =
            to_frame(decode_frame_lossless(payload, h.width, h.height, SubbandKind::Lp));
    return seq;
}

// Decodes the temporal resolution that `keep_levels` enhancement layers
// support: spans decomposed deeper than the target stay at LP level
// i_max - keep_levels; shallower spans appear at their own depth.
inline std::vector<PreviewFrame> decode_preview(const ParsedContainer& parsed, int keep_levels,
                                                int threads = 0) {
    const StreamHeader& h = parsed.header;
    if (keep_levels < 0 || keep_levels > h.kept_levels)
        throw ArgumentError("codec", "keep_levels " + std::to_string(keep_levels) +
                                         " outside [0," + std::to_string(h.kept_levels) + "]");
    const int target_level = h.i_max - keep_levels;

    std::vector<std::vector<PreviewFrame>> per_gop(parsed.gops.size());
    detail::parallel_for(static_cast<int>(parsed.gops.size()), threads, [&](int g) {
        const int base = g * h.gop_size;
        detail::decode_gop(parsed.gops[static_cast<size_t>(g)], h, target_level,
                           [&](int position, int level, CoefficientFrame frame) {
                               per_gop[static_cast<size_t>(g)].push_back(
                                   PreviewFrame{base + position, 1 << level, std::move(frame)});
                           });
        std::sort(per_gop[static_cast<size_t>(g)].begin(), per_gop[static_cast<size_t>(g)].end(),
                  [](const PreviewFrame& a, const PreviewFrame& b) { return a.position < b.position; });
    });

    std::vector<PreviewFrame> preview;
    for (auto& gop_frames : per_gop)
        for (auto& frame : gop_frames)
            preview.push_back(std::move(frame));
    int position = h.frame_count - h.trailing_frame_count;
    for (const auto& payload : parsed.trailing_payloads) {
        preview.push_back(PreviewFrame{
            position++, 1, decode_frame_lossless(payload, h.width, h.height, SubbandKind::Lp)});
    }
    return preview;
}

inline Sequence decode_bytes(const std::vector<std::uint8_t>& bytes, int threads = 0) {
    return decode_full(read_container(bytes), threads);
}

}  // namespace cawl
