#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "cawl/entropy.hpp"
#include "cawl/error.hpp"
#include "cawl/frame.hpp"
#include "cawl/range_coder.hpp"

namespace cawl {

struct McParams {
    int block_size = 8;
    int initial_search_range = 8;
    int max_search_range = 64;

    void validate() const {
        if (block_size < 1)
            throw ArgumentError("motion", "block size must be >= 1");
        if (initial_search_range < 1 || initial_search_range > max_search_range)
            throw ArgumentError("motion", "need 0 < initial search range <= max search range");
    }
};

struct MotionVector {
    int dx = 0;
    int dy = 0;
};

// One integer-pel vector per block, grid anchored at the current (even)
// frame. Edge blocks are clipped to the frame; the grid always covers it.
struct MotionField {
    int blocks_x = 0;
    int blocks_y = 0;
    int block_size = 0;
    int search_range = 0;
    std::vector<MotionVector> vectors;

    const MotionVector& at(int bx, int by) const {
        return vectors[static_cast<size_t>(by) * blocks_x + bx];
    }
    MotionVector& at(int bx, int by) {
        return vectors[static_cast<size_t>(by) * blocks_x + bx];
    }

    bool covers(int width, int height) const {
        return block_size >= 1 && blocks_x * block_size >= width &&
               blocks_y * block_size >= height &&
               vectors.size() == static_cast<size_t>(blocks_x) * blocks_y;
    }
};

inline MotionField make_zero_field(int width, int height, int block_size, int search_range = 0) {
    MotionField field;
    field.block_size = block_size;
    field.search_range = search_range;
    field.blocks_x = (width + block_size - 1) / block_size;
    field.blocks_y = (height + block_size - 1) / block_size;
    field.vectors.assign(static_cast<size_t>(field.blocks_x) * field.blocks_y, MotionVector{});
    return field;
}

// The search window starts at the configured size and doubles per level,
// capped: frames at deeper levels are further apart in time.
inline int search_range_for_level(int level, const McParams& params) {
    if (level < 1)
        throw ArgumentError("motion", "decomposition level must be >= 1");
    params.validate();
    const std::int64_t grown = static_cast<std::int64_t>(params.initial_search_range)
                               << (std::min(level, 32) - 1);
    return static_cast<int>(std::min<std::int64_t>(grown, params.max_search_range));
}

namespace detail {
inline sample_t clamped_read(const CoefficientFrame& frame, int x, int y) {
    x = std::clamp(x, 0, frame.width - 1);
    y = std::clamp(y, 0, frame.height - 1);
    return frame.at(x, y);
}
}  // namespace detail

// Exhaustive SAD search over [-range, range]^2 per block. Reference reads
// clamp to the frame edge. Ties break toward smaller |dx|+|dy|, then to the
// earlier candidate in (dy, dx) scan order, so results are deterministic.
inline MotionField estimate_block_motion(const CoefficientFrame& reference,
                                         const CoefficientFrame& current, int range,
                                         const McParams& params) {
    if (!reference.same_shape(current))
        throw ArgumentError("motion", "reference and current frame dimensions differ");
    params.validate();
    if (range < 0)
        throw ArgumentError("motion", "search range must be non-negative");

    MotionField field = make_zero_field(current.width, current.height, params.block_size, range);
    const int bs = params.block_size;

    for (int by = 0; by < field.blocks_y; ++by) {
        for (int bx = 0; bx < field.blocks_x; ++bx) {
            const int x0 = bx * bs;
            const int y0 = by * bs;
            const int bw = std::min(bs, current.width - x0);
            const int bh = std::min(bs, current.height - y0);

            std::int64_t best_sad = -1;
            int best_l1 = 0;
            MotionVector best{};
            for (int dy = -range; dy <= range; ++dy) {
                for (int dx = -range; dx <= range; ++dx) {
                    std::int64_t sad = 0;
                    for (int j = 0; j < bh; ++j)
                        for (int i = 0; i < bw; ++i)
                            sad += std::abs(current.at(x0 + i, y0 + j) -
                                            detail::clamped_read(reference, x0 + i + dx, y0 + j + dy));
                    const int l1 = std::abs(dx) + std::abs(dy);
                    if (best_sad < 0 || sad < best_sad || (sad == best_sad && l1 < best_l1)) {
                        best_sad = sad;
                        best_l1 = l1;
                        best = {dx, dy};
                    }
                }
            }
            field.at(bx, by) = best;
        }
    }
    return field;
}

// Prediction warp: each output block is copied from the reference at its
// motion offset, clamped at the edges. Realizes the forward operator of the
// lifting prediction step.
inline CoefficientFrame warp_predict(const CoefficientFrame& reference, const MotionField& field) {
    if (!field.covers(reference.width, reference.height))
        throw ArgumentError("motion", "motion field does not cover the frame");
    CoefficientFrame out(reference.width, reference.height, reference.kind);
    const int bs = field.block_size;
    for (int by = 0; by < field.blocks_y; ++by) {
        for (int bx = 0; bx < field.blocks_x; ++bx) {
            const MotionVector mv = field.at(bx, by);
            const int x0 = bx * bs;
            const int y0 = by * bs;
            const int bw = std::min(bs, reference.width - x0);
            const int bh = std::min(bs, reference.height - y0);
            for (int j = 0; j < bh; ++j)
                for (int i = 0; i < bw; ++i)
                    out.at(x0 + i, y0 + j) =
                        detail::clamped_read(reference, x0 + i + mv.dx, y0 + j + mv.dy);
        }
    }
    return out;
}

// Index-reversed warp for the update step: HP blocks scatter back to the
// positions they were predicted from. Output starts all zero; blocks land
// in row-major order and later writes win; pixels leaving the frame drop.
// Any deterministic rule here keeps the lifting lossless.
inline CoefficientFrame warp_update(const CoefficientFrame& hp, const MotionField& field) {
    if (!field.covers(hp.width, hp.height))
        throw ArgumentError("motion", "motion field does not cover the frame");
    CoefficientFrame out(hp.width, hp.height, hp.kind, 0);
    const int bs = field.block_size;
    for (int by = 0; by < field.blocks_y; ++by) {
        for (int bx = 0; bx < field.blocks_x; ++bx) {
            const MotionVector mv = field.at(bx, by);
            const int x0 = bx * bs;
            const int y0 = by * bs;
            const int bw = std::min(bs, hp.width - x0);
            const int bh = std::min(bs, hp.height - y0);
            for (int j = 0; j < bh; ++j) {
                const int ty = y0 + j + mv.dy;
                if (ty < 0 || ty >= hp.height)
                    continue;
                for (int i = 0; i < bw; ++i) {
                    const int tx = x0 + i + mv.dx;
                    if (tx < 0 || tx >= hp.width)
                        continue;
                    out.at(tx, ty) = hp.at(x0 + i, y0 + j);
                }
            }
        }
    }
    return out;
}

// Motion payload: per block in row-major order, dx and dy residuals against
// the left neighbour in the same block row, coded as adaptive signed values
// with one context group per component.
inline CodedStream encode_motion_field(const MotionField& field) {
    RangeEncoder enc;
    SignedValueModel model_dx;
    SignedValueModel model_dy;
    for (int by = 0; by < field.blocks_y; ++by) {
        MotionVector left{};
        for (int bx = 0; bx < field.blocks_x; ++bx) {
            const MotionVector mv = field.at(bx, by);
            encode_signed(enc, model_dx, mv.dx - left.dx);
            encode_signed(enc, model_dy, mv.dy - left.dy);
            left = mv;
        }
    }
    return enc.finish();
}

inline MotionField decode_motion_field(const CodedStream& stream, int width, int height,
                                       int block_size, int search_range) {
    MotionField field = make_zero_field(width, height, block_size, search_range);
    RangeDecoder dec(stream);
    SignedValueModel model_dx;
    SignedValueModel model_dy;
    for (int by = 0; by < field.blocks_y; ++by) {
        MotionVector left{};
        for (int bx = 0; bx < field.blocks_x; ++bx) {
            MotionVector mv;
            mv.dx = left.dx + decode_signed(dec, model_dx);
            mv.dy = left.dy + decode_signed(dec, model_dy);
            if (std::abs(mv.dx) > search_range || std::abs(mv.dy) > search_range)
                throw DecodeError("motion", "decoded vector (" + std::to_string(mv.dx) + "," +
                                                std::to_string(mv.dy) + ") exceeds search range " +
                                                std::to_string(search_range));
            field.at(bx, by) = mv;
            left = mv;
        }
    }
    return field;
}

}  // namespace cawl
