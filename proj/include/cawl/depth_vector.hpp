#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cawl/error.hpp"

namespace cawl {

// Per-position record of how deep the temporal decomposition went. A value
// i > 0 at position p means one LP frame of level i represents the span
// [p, p + 2^i); its HP partner sits at distance 2^(i-1). Zeros are either
// HP/interior positions claimed by some LP span or untouched intra frames.
struct DepthVector {
    std::vector<int> v;
    int i_max = 0;

    int size() const { return static_cast<int>(v.size()); }
};

enum class FrameRole : std::uint8_t { Intra = 0, Lp = 1, Hp = 2 };

struct PositionRole {
    FrameRole role = FrameRole::Intra;
    int level = 0;    // Lp: decomposition depth; Hp: level of the residual
    int partner = -1; // Hp: position of the LP-side frame of its lifting pair
};

// Expands v into one role per temporal position. A span of depth i claims
// its LP position plus every HP position of the full dyadic tree below it;
// anything left over is intra. Violations of the partition are rejected.
inline std::vector<PositionRole> parse_depth_vector(const DepthVector& dv) {
    const int n = dv.size();
    std::vector<PositionRole> roles(static_cast<size_t>(n));
    std::vector<bool> claimed(static_cast<size_t>(n), false);

    auto claim = [&](int pos, PositionRole role) {
        if (claimed[static_cast<size_t>(pos)])
            throw MalformedInputError("adaptive", "depth vector claims position " +
                                                      std::to_string(pos) + " twice");
        claimed[static_cast<size_t>(pos)] = true;
        roles[static_cast<size_t>(pos)] = role;
    };

    for (int p = 0; p < n; ++p) {
        const int depth = dv.v[static_cast<size_t>(p)];
        if (depth == 0)
            continue;
        if (depth < 0 || depth > dv.i_max)
            throw MalformedInputError("adaptive", "depth vector entry " + std::to_string(depth) +
                                                      " at position " + std::to_string(p) +
                                                      " outside [0," + std::to_string(dv.i_max) + "]");
        const int span = 1 << depth;
        if (p + span > n)
            throw MalformedInputError("adaptive",
                                      "depth vector span at position " + std::to_string(p) +
                                          " (level " + std::to_string(depth) + ") exceeds the GOP");
        claim(p, {FrameRole::Lp, depth, -1});
        for (int level = depth; level >= 1; --level) {
            const int step = 1 << level;
            for (int q = p + (step >> 1); q < p + span; q += step) {
                if (dv.v[static_cast<size_t>(q)] != 0)
                    throw MalformedInputError(
                        "adaptive", "position " + std::to_string(q) + " must be zero; it is the"
                                    " level-" + std::to_string(level) + " HP partner of " +
                                        std::to_string(q - (step >> 1)));
                claim(q, {FrameRole::Hp, level, q - (step >> 1)});
            }
        }
    }
    return roles;
}

// Records one decomposition level: every surviving LP position gains one
// level of depth and its HP partner is reset to zero.
inline DepthVector update_depth_vector(const DepthVector& dv, int level,
                                       const std::vector<int>& surviving_lp_positions) {
    if (level < 1 || level > dv.i_max)
        throw ArgumentError("adaptive", "level " + std::to_string(level) + " outside [1," +
                                            std::to_string(dv.i_max) + "]");
    DepthVector out = dv;
    const int distance = 1 << (level - 1);
    for (int p : surviving_lp_positions) {
        if (p < 0 || p >= out.size())
            throw InternalError("adaptive", "LP position " + std::to_string(p) + " out of range");
        if (p + distance >= out.size())
            throw InternalError("adaptive", "HP partner of position " + std::to_string(p) +
                                                " falls outside the GOP");
        int& lp_entry = out.v[static_cast<size_t>(p)];
        int& hp_entry = out.v[static_cast<size_t>(p + distance)];
        if (lp_entry != level - 1 || hp_entry != level - 1)
            throw InternalError("adaptive", "position " + std::to_string(p) +
                                                " collides with an HP partner at level " +
                                                std::to_string(level));
        lp_entry = level;
        hp_entry = 0;
    }
    return out;
}

// Number of coded frames per role, used to size container sections.
struct RoleCounts {
    int base_layer = 0;                 // surviving LP frames + intra frames
    std::vector<int> hp_per_level;      // index 1..i_max
};

inline RoleCounts count_roles(const DepthVector& dv, const std::vector<PositionRole>& roles) {
    RoleCounts counts;
    counts.hp_per_level.assign(static_cast<size_t>(dv.i_max) + 1, 0);
    for (const PositionRole& role : roles) {
        if (role.role == FrameRole::Hp)
            ++counts.hp_per_level[static_cast<size_t>(role.level)];
        else
            ++counts.base_layer;
    }
    return counts;
}

}  // namespace cawl
