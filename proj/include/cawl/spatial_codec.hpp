#pragma once

#include <cstdint>
#include <vector>

#include "cawl/dwt53.hpp"
#include "cawl/entropy.hpp"
#include "cawl/error.hpp"
#include "cawl/frame.hpp"
#include "cawl/range_coder.hpp"

namespace cawl {

constexpr int spatial_levels = 4;

namespace detail {
// Payload order: LL of the deepest level first, then HL, LH, HH from the
// deepest level up to the shallowest.
template <typename Fn>
void for_each_subband(const SpatialDecomposition& decomp, Fn&& fn) {
    fn(decomp.ll_rect());
    for (int level = decomp.levels; level >= 1; --level) {
        fn(decomp.detail_rect(level, 'H'));
        fn(decomp.detail_rect(level, 'L'));
        fn(decomp.detail_rect(level, 'X'));
    }
}
}  // namespace detail

// Lossless intra coding of one frame: 4-level 5/3 transform, then each
// subband as its own framed signed-value stream with fresh contexts. The
// byte size of the result is the rate figure the decomposition decisions
// work from.
inline std::vector<std::uint8_t> encode_frame_lossless(const CoefficientFrame& frame) {
    const SpatialDecomposition decomp = dwt53_forward(frame, spatial_levels);
    std::vector<std::uint8_t> payload;
    detail::for_each_subband(decomp, [&](const SubbandRect& rect) {
        const CodedStream stream = encode_signed_values(decomp.gather(rect));
        write_framed_stream(payload, stream);
    });
    return payload;
}

inline CoefficientFrame decode_frame_lossless(const std::vector<std::uint8_t>& payload, int width,
                                              int height, SubbandKind kind) {
    if (width <= 0 || height <= 0)
        throw ArgumentError("spatial", "frame dimensions must be positive");

    SpatialDecomposition decomp;
    decomp.width = width;
    decomp.height = height;
    decomp.levels = effective_spatial_levels(width, height, spatial_levels);
    decomp.coeffs.assign(static_cast<size_t>(width) * height, 0);

    ByteReader reader(payload);
    detail::for_each_subband(decomp, [&](const SubbandRect& rect) {
        const CodedStream stream = read_framed_stream(reader);
        decomp.scatter(rect, decode_signed_values(stream, rect.pixel_count()));
    });
    if (!reader.at_end())
        throw DecodeError("spatial", "frame payload has " + std::to_string(reader.remaining()) +
                                         " trailing bytes");
    return dwt53_inverse(decomp, kind);
}

}  // namespace cawl
