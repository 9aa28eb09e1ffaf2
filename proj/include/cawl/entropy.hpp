#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "cawl/depth_vector.hpp"
#include "cawl/error.hpp"
#include "cawl/frame.hpp"
#include "cawl/range_coder.hpp"

namespace cawl {

// --- generic signed-value coding -----------------------------------------
// Binarization: significance flag, sign, then an exp-Golomb style layout
// (unary exponent + mantissa bits), every bin arithmetic-coded with its own
// adaptive context. Shared by motion vectors and spatial coefficients.

constexpr int max_magnitude_bits = 24;  // caps |value| < 2^24 and bounds decode loops

struct SignedValueModel {
    BinaryContext significant;
    BinaryContext negative;
    std::array<BinaryContext, max_magnitude_bits> exponent;
    std::array<BinaryContext, max_magnitude_bits> mantissa;
};

inline void encode_signed(RangeEncoder& enc, SignedValueModel& model, sample_t value) {
    enc.encode_bit(model.significant, value != 0);
    if (value == 0)
        return;
    enc.encode_bit(model.negative, value < 0);
    const std::uint32_t magnitude = static_cast<std::uint32_t>(value < 0 ? -static_cast<std::int64_t>(value)
                                                                         : value);
    if (magnitude >= (1u << max_magnitude_bits))
        throw InternalError("entropy", "magnitude " + std::to_string(magnitude) +
                                           " exceeds the coder's " +
                                           std::to_string(max_magnitude_bits) + "-bit limit");
    const int exponent = std::bit_width(magnitude) - 1;  // 0..23
    for (int j = 0; j < exponent; ++j)
        enc.encode_bit(model.exponent[static_cast<size_t>(j)], true);
    if (exponent < max_magnitude_bits - 1)
        enc.encode_bit(model.exponent[static_cast<size_t>(exponent)], false);
    for (int j = exponent - 1; j >= 0; --j)
        enc.encode_bit(model.mantissa[static_cast<size_t>(j)], (magnitude >> j) & 1u);
}

inline sample_t decode_signed(RangeDecoder& dec, SignedValueModel& model) {
    if (!dec.decode_bit(model.significant))
        return 0;
    const bool negative = dec.decode_bit(model.negative);
    int exponent = 0;
    while (exponent < max_magnitude_bits - 1 &&
           dec.decode_bit(model.exponent[static_cast<size_t>(exponent)]))
        ++exponent;
    std::uint32_t magnitude = 1u << exponent;
    for (int j = exponent - 1; j >= 0; --j)
        if (dec.decode_bit(model.mantissa[static_cast<size_t>(j)]))
            magnitude |= 1u << j;
    const sample_t value = static_cast<sample_t>(magnitude);
    return negative ? -value : value;
}

inline CodedStream encode_signed_values(const std::vector<sample_t>& values) {
    RangeEncoder enc;
    SignedValueModel model;
    for (sample_t v : values)
        encode_signed(enc, model, v);
    return enc.finish();
}

inline std::vector<sample_t> decode_signed_values(const CodedStream& stream, size_t count) {
    RangeDecoder dec(stream);
    SignedValueModel model;
    std::vector<sample_t> values(count);
    for (size_t i = 0; i < count; ++i)
        values[i] = decode_signed(dec, model);
    return values;
}

// --- depth vector coding --------------------------------------------------
// Entries are truncated-unary binarized up to i_max. Each bin's context is
// conditioned on the value of the most recent nonzero entry, which tracks
// the strong spatial correlation of decomposition depths.

struct DepthVectorModel {
    static constexpr int max_bins = 8;
    static constexpr int prev_classes = 9;  // previous nonzero value 0..8
    std::array<std::array<BinaryContext, prev_classes>, max_bins> bins;
};

inline CodedStream encode_depth_vector(const DepthVector& dv) {
    parse_depth_vector(dv);  // rejects invalid vectors before any bit is spent

    DepthVectorModel model;
    RangeEncoder enc;
    int prev_nonzero = 0;
    for (int entry : dv.v) {
        for (int b = 0; b < dv.i_max; ++b) {
            const bool more = entry > b;
            enc.encode_bit(model.bins[static_cast<size_t>(std::min(b, DepthVectorModel::max_bins - 1))]
                                     [static_cast<size_t>(prev_nonzero)],
                           more);
            if (!more)
                break;
        }
        if (entry > 0)
            prev_nonzero = entry;
    }
    return enc.finish();
}

inline DepthVector decode_depth_vector(const CodedStream& stream, int length, int i_max) {
    if (length < 0 || i_max < 0 || i_max > DepthVectorModel::max_bins)
        throw ArgumentError("entropy", "invalid depth vector shape");

    DepthVectorModel model;
    RangeDecoder dec(stream);
    DepthVector dv;
    dv.i_max = i_max;
    dv.v.resize(static_cast<size_t>(length), 0);
    int prev_nonzero = 0;
    for (int p = 0; p < length; ++p) {
        int entry = 0;
        while (entry < i_max &&
               dec.decode_bit(model.bins[static_cast<size_t>(std::min(entry, DepthVectorModel::max_bins - 1))]
                                        [static_cast<size_t>(prev_nonzero)]))
            ++entry;
        dv.v[static_cast<size_t>(p)] = entry;
        if (entry > 0)
            prev_nonzero = entry;
    }

    try {
        parse_depth_vector(dv);
    } catch (const MalformedInputError& e) {
        throw DecodeError("entropy", std::string("depth vector stream is malformed: ") + e.what());
    }
    return dv;
}

}  // namespace cawl
