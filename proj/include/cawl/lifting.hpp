#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "cawl/error.hpp"
#include "cawl/frame.hpp"
#include "cawl/motion.hpp"

namespace cawl {

enum class McMode : std::uint8_t { None = 0, Block = 1 };

inline const char* to_string(McMode mode) { return mode == McMode::Block ? "block" : "none"; }

// floor(x / 2) toward minus infinity; arithmetic shift is exact for this.
inline sample_t floor_half(sample_t x) {
    static_assert((-3 >> 1) == -2, "arithmetic right shift required");
    return x >> 1;
}

// The pair of warping operators used inside one lifting step. A null field
// is the identity warp (no motion compensation). Both directions derive
// from the same field, which is what makes the transform invertible for
// any field contents.
struct WarpPair {
    const MotionField* field = nullptr;

    CoefficientFrame predict(const CoefficientFrame& reference) const {
        return field ? warp_predict(reference, *field) : reference;
    }
    CoefficientFrame update(const CoefficientFrame& hp) const {
        return field ? warp_update(hp, *field) : hp;
    }
};

// Forward Haar lifting of one frame pair:
//   hp = even - predict(odd)
//   lp = odd + floor(update(hp) / 2)
inline std::pair<CoefficientFrame, CoefficientFrame> lift_pair_forward(
    const CoefficientFrame& odd, const CoefficientFrame& even, const WarpPair& warp) {
    if (!odd.same_shape(even))
        throw ArgumentError("lifting", "pair frames have different dimensions");

    const CoefficientFrame prediction = warp.predict(odd);
    CoefficientFrame hp(odd.width, odd.height, SubbandKind::Hp);
    for (size_t i = 0; i < hp.samples.size(); ++i)
        hp.samples[i] = even.samples[i] - prediction.samples[i];

    const CoefficientFrame update = warp.update(hp);
    CoefficientFrame lp(odd.width, odd.height, SubbandKind::Lp);
    for (size_t i = 0; i < lp.samples.size(); ++i)
        lp.samples[i] = odd.samples[i] + floor_half(update.samples[i]);

    return {std::move(lp), std::move(hp)};
}

// Bit-exact inverse; requires the same warp (same motion field) as forward.
inline std::pair<CoefficientFrame, CoefficientFrame> lift_pair_inverse(
    const CoefficientFrame& lp, const CoefficientFrame& hp, const WarpPair& warp) {
    if (!lp.same_shape(hp))
        throw ArgumentError("lifting", "LP/HP frames have different dimensions");

    const CoefficientFrame update = warp.update(hp);
    CoefficientFrame odd(lp.width, lp.height, SubbandKind::Lp);
    for (size_t i = 0; i < odd.samples.size(); ++i)
        odd.samples[i] = lp.samples[i] - floor_half(update.samples[i]);

    const CoefficientFrame prediction = warp.predict(odd);
    CoefficientFrame even(lp.width, lp.height, SubbandKind::Lp);
    for (size_t i = 0; i < even.samples.size(); ++i)
        even.samples[i] = hp.samples[i] + prediction.samples[i];

    return {std::move(odd), std::move(even)};
}

struct LevelResult {
    std::vector<CoefficientFrame> lp;
    std::vector<CoefficientFrame> hp;
    std::vector<MotionField> motion;  // one per pair in block mode, empty otherwise
};

namespace detail {
// Coefficients stay far below this for 8-bit input at any depth we allow;
// exceeding it means a bug upstream, not bad input.
constexpr sample_t coefficient_limit = 1 << 20;

inline void check_coefficient_range(const CoefficientFrame& frame) {
    for (sample_t v : frame.samples)
        if (v <= -coefficient_limit || v >= coefficient_limit)
            throw InternalError("lifting", "coefficient " + std::to_string(v) +
                                               " outside the expected dynamic range");
}
}  // namespace detail

// One temporal decomposition level over an even-length frame list. Frames
// (2k, 2k+1) form a pair: the earlier frame takes the odd (LP) role, the
// later one the even (HP) role.
inline LevelResult analyze_level(const std::vector<CoefficientFrame>& input, McMode mode,
                                 int level, const McParams& params) {
    if (input.size() % 2 != 0)
        throw ArgumentError("lifting", "level input must hold an even number of frames");

    LevelResult result;
    const size_t pairs = input.size() / 2;
    result.lp.reserve(pairs);
    result.hp.reserve(pairs);
    if (mode == McMode::Block)
        result.motion.reserve(pairs);

    for (size_t k = 0; k < pairs; ++k) {
        const CoefficientFrame& odd = input[2 * k];
        const CoefficientFrame& even = input[2 * k + 1];

        WarpPair warp;
        if (mode == McMode::Block) {
            const int range = search_range_for_level(level, params);
            result.motion.push_back(estimate_block_motion(odd, even, range, params));
            warp.field = &result.motion.back();
        }

        auto [lp, hp] = lift_pair_forward(odd, even, warp);
        detail::check_coefficient_range(lp);
        detail::check_coefficient_range(hp);
        result.lp.push_back(std::move(lp));
        result.hp.push_back(std::move(hp));
    }
    return result;
}

// Exact inverse of analyze_level given the same motion fields.
inline std::vector<CoefficientFrame> synthesize_level(const std::vector<CoefficientFrame>& lp,
                                                      const std::vector<CoefficientFrame>& hp,
                                                      const std::vector<MotionField>& motion,
                                                      McMode mode) {
    if (lp.size() != hp.size())
        throw ArgumentError("lifting", "LP/HP frame counts differ");
    if (mode == McMode::Block && motion.size() != lp.size())
        throw ArgumentError("lifting", "motion field count does not match pair count");

    std::vector<CoefficientFrame> output;
    output.reserve(lp.size() * 2);
    for (size_t k = 0; k < lp.size(); ++k) {
        WarpPair warp;
        if (mode == McMode::Block)
            warp.field = &motion[k];
        auto [odd, even] = lift_pair_inverse(lp[k], hp[k], warp);
        output.push_back(std::move(odd));
        output.push_back(std::move(even));
    }
    return output;
}

}  // namespace cawl
