#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cawl/depth_vector.hpp"
#include "cawl/error.hpp"
#include "cawl/frame.hpp"
#include "cawl/lifting.hpp"
#include "cawl/motion.hpp"
#include "cawl/range_coder.hpp"
#include "cawl/spatial_codec.hpp"

namespace cawl {

// Distortion is per-pixel MSE on the 8-bit scale, rate is bits per pixel.
// Per-pixel units keep the lambda trade-off resolution independent.
struct CostRecord {
    double distortion = 0.0;
    double rate = 0.0;
};

struct LambdaConfig {
    double lambda = 3.0;

    void validate() const {
        if (!(lambda >= 0.0))
            throw ArgumentError("adaptive", "lambda must be non-negative");
    }
};

// The paper-style cost never defines HP distortion operationally; coefficient
// energy (distance from the all-zero ideal residual) is the default, with a
// zero policy available.
enum class HpDistortionPolicy : std::uint8_t { Energy = 0, Zero = 1 };

enum class PairDecision : std::uint8_t { KeepParent = 0, Decompose = 1 };

// Mean squared error of an LP frame against every original frame it stands
// for. No amplitude rescaling: integer Haar LP frames live on the same
// scale as the input.
inline double node_distortion_lp(const CoefficientFrame& lp, std::span<const Frame> support) {
    if (support.empty())
        throw ArgumentError("adaptive", "LP distortion needs a non-empty support");
    double total = 0.0;
    for (const Frame& original : support) {
        if (original.width != lp.width || original.height != lp.height)
            throw ArgumentError("adaptive", "support frame dimensions differ from the LP frame");
        for (size_t i = 0; i < lp.samples.size(); ++i) {
            const double diff = static_cast<double>(lp.samples[i]) - original.samples[i];
            total += diff * diff;
        }
    }
    return total / (static_cast<double>(support.size()) * lp.pixel_count());
}

inline double node_distortion_hp(const CoefficientFrame& hp,
                                 HpDistortionPolicy policy = HpDistortionPolicy::Energy) {
    if (policy == HpDistortionPolicy::Zero)
        return 0.0;
    double total = 0.0;
    for (sample_t v : hp.samples)
        total += static_cast<double>(v) * v;
    return total / static_cast<double>(hp.pixel_count());
}

inline double lagrangian_cost(const CostRecord& rec, double lambda) {
    return rec.distortion + lambda * rec.rate;
}

// Keep the parent pair when its cost does not exceed the combined child
// cost; equality keeps the parent.
inline PairDecision prune_decision(const CostRecord& parent_pair, const CostRecord& child_lp,
                                   const CostRecord& child_hp, double lambda) {
    const double parent = lagrangian_cost(parent_pair, lambda);
    const double children =
        (child_lp.distortion + child_hp.distortion) + lambda * (child_lp.rate + child_hp.rate);
    return parent <= children ? PairDecision::KeepParent : PairDecision::Decompose;
}

// --- decomposition tree ----------------------------------------------------

struct DecompositionNode {
    int level = 0;
    int position = 0;  // original-frame index of the node's frame
    FrameRole role = FrameRole::Lp;
    int support = 1;   // number of original frames represented (LP nodes)
    CostRecord cost;
    int lp_child = -1;  // set on the first node of a decomposed pair
    int hp_child = -1;
    bool pruned = false;  // pair was evaluated and kept its parent representation
};

struct GopTree {
    std::vector<DecompositionNode> nodes;

    const DecompositionNode* find(int level, int position, FrameRole role) const {
        for (const DecompositionNode& n : nodes)
            if (n.level == level && n.position == position && n.role == role)
                return &n;
        return nullptr;
    }
};

// --- GOP encoding ------------------------------------------------------------

struct GopConfig {
    int i_max = 3;
    LambdaConfig lambda;
    McMode mc_mode = McMode::None;
    McParams mc;
    HpDistortionPolicy hp_distortion = HpDistortionPolicy::Energy;
    bool force_uniform = false;  // uniform lifting baseline: never prune
    // Test hook: overrides the R-D decision for the pair whose LP sits at
    // `position` when the transition to `level` is evaluated.
    std::function<std::optional<PairDecision>(int level, int position)> decision_override;
};

struct BaseLayerFrame {
    int position = 0;
    int level = 0;  // 0 for intra frames
    CoefficientFrame frame;
    std::vector<std::uint8_t> payload;
};

struct EnhancementFrame {
    int position = 0;
    int level = 0;
    std::vector<std::uint8_t> payload;
    std::optional<CodedStream> motion;  // present in block-MC mode
};

struct GopEncoding {
    DepthVector depth;
    std::vector<DepthVector> depth_after_level;  // snapshot after each level 1..i_max
    GopTree tree;
    std::vector<BaseLayerFrame> base_layer;                  // ascending position
    std::vector<std::vector<EnhancementFrame>> enhancement;  // [level], ascending position
};

// Runs every decomposition level over the whole GOP up front, prices every
// produced frame with the spatial codec, then walks the levels in order and
// keeps each pair's cheaper representation. A pair that keeps its parent is
// final; nothing deeper is built on top of it.
inline GopEncoding build_adaptive_decomposition(std::span<const Frame> gop, const GopConfig& config) {
    const int gop_size = static_cast<int>(gop.size());
    if (config.i_max < 1)
        throw ArgumentError("adaptive", "i_max must be >= 1");
    if (gop_size != (1 << config.i_max))
        throw ArgumentError("adaptive", "GOP length " + std::to_string(gop_size) +
                                            " is not 2^i_max = " +
                                            std::to_string(1 << config.i_max));
    config.lambda.validate();
    if (config.mc_mode == McMode::Block)
        config.mc.validate();

    const double pixels = static_cast<double>(gop[0].pixel_count());

    // Stage 1: full decomposition of the whole GOP, all levels.
    std::vector<std::vector<CoefficientFrame>> lp_levels(static_cast<size_t>(config.i_max) + 1);
    std::vector<LevelResult> level_results(static_cast<size_t>(config.i_max) + 1);
    lp_levels[0].reserve(gop.size());
    for (const Frame& frame : gop)
        lp_levels[0].push_back(to_coefficients(frame));
    for (int i = 1; i <= config.i_max; ++i) {
        level_results[static_cast<size_t>(i)] =
            analyze_level(lp_levels[static_cast<size_t>(i - 1)], config.mc_mode, i, config.mc);
        lp_levels[static_cast<size_t>(i)] = level_results[static_cast<size_t>(i)].lp;
    }

    // Stage 2: price every produced frame; motion fields are priced into the
    // HP side of the pair they belong to.
    std::vector<std::vector<std::vector<std::uint8_t>>> lp_payload(static_cast<size_t>(config.i_max) + 1);
    std::vector<std::vector<std::vector<std::uint8_t>>> hp_payload(static_cast<size_t>(config.i_max) + 1);
    std::vector<std::vector<CodedStream>> motion_streams(static_cast<size_t>(config.i_max) + 1);
    std::vector<std::vector<CostRecord>> lp_cost(static_cast<size_t>(config.i_max) + 1);
    std::vector<std::vector<CostRecord>> hp_cost(static_cast<size_t>(config.i_max) + 1);

    for (int i = 0; i <= config.i_max; ++i) {
        const auto& lps = lp_levels[static_cast<size_t>(i)];
        lp_payload[static_cast<size_t>(i)].resize(lps.size());
        lp_cost[static_cast<size_t>(i)].resize(lps.size());
        for (size_t k = 0; k < lps.size(); ++k) {
            auto payload = encode_frame_lossless(lps[k]);
            const int position = static_cast<int>(k) << i;
            const int support = 1 << i;
            CostRecord rec;
            rec.distortion = node_distortion_lp(lps[k], gop.subspan(static_cast<size_t>(position),
                                                                    static_cast<size_t>(support)));
            rec.rate = static_cast<double>(payload.size()) * 8.0 / pixels;
            lp_cost[static_cast<size_t>(i)][k] = rec;
            lp_payload[static_cast<size_t>(i)][k] = std::move(payload);
        }
        if (i == 0)
            continue;
        const auto& hps = level_results[static_cast<size_t>(i)].hp;
        hp_payload[static_cast<size_t>(i)].resize(hps.size());
        hp_cost[static_cast<size_t>(i)].resize(hps.size());
        if (config.mc_mode == McMode::Block)
            motion_streams[static_cast<size_t>(i)].resize(hps.size());
        for (size_t k = 0; k < hps.size(); ++k) {
            auto payload = encode_frame_lossless(hps[k]);
            CostRecord rec;
            rec.distortion = node_distortion_hp(hps[k], config.hp_distortion);
            rec.rate = static_cast<double>(payload.size()) * 8.0 / pixels;
            if (config.mc_mode == McMode::Block) {
                CodedStream mv =
                    encode_motion_field(level_results[static_cast<size_t>(i)].motion[k]);
                rec.rate += static_cast<double>(mv.bytes.size()) * 8.0 / pixels;
                motion_streams[static_cast<size_t>(i)][k] = std::move(mv);
            }
            hp_cost[static_cast<size_t>(i)][k] = rec;
            hp_payload[static_cast<size_t>(i)][k] = std::move(payload);
        }
    }

    // Stage 3: retrospective evaluation, shallow to deep. A pair is only
    // eligible when both constituent nodes are still live at the previous
    // level.
    GopEncoding out;
    out.depth.i_max = config.i_max;
    out.depth.v.assign(static_cast<size_t>(gop_size), 0);

    std::vector<std::vector<bool>> live(static_cast<size_t>(config.i_max) + 1);
    live[0].assign(static_cast<size_t>(gop_size), true);
    std::vector<std::vector<bool>> decomposed(static_cast<size_t>(config.i_max) + 1);

    for (int i = 1; i <= config.i_max; ++i) {
        const size_t pair_count = static_cast<size_t>(gop_size) >> i;
        live[static_cast<size_t>(i)].assign(pair_count, false);
        decomposed[static_cast<size_t>(i)].assign(pair_count, false);
        std::vector<int> surviving;
        for (size_t k = 0; k < pair_count; ++k) {
            const size_t a = 2 * k;
            const size_t b = 2 * k + 1;
            if (!live[static_cast<size_t>(i - 1)][a] || !live[static_cast<size_t>(i - 1)][b])
                continue;
            const int position = static_cast<int>(k) << i;

            PairDecision decision;
            std::optional<PairDecision> forced;
            if (config.decision_override)
                forced = config.decision_override(i, position);
            if (forced) {
                decision = *forced;
            } else if (config.force_uniform) {
                decision = PairDecision::Decompose;
            } else {
                const CostRecord& rec_a = lp_cost[static_cast<size_t>(i - 1)][a];
                const CostRecord& rec_b = lp_cost[static_cast<size_t>(i - 1)][b];
                const CostRecord parent{(rec_a.distortion + rec_b.distortion) / 2.0,
                                        rec_a.rate + rec_b.rate};
                decision = prune_decision(parent, lp_cost[static_cast<size_t>(i)][k],
                                          hp_cost[static_cast<size_t>(i)][k], config.lambda.lambda);
            }

            if (decision == PairDecision::Decompose) {
                live[static_cast<size_t>(i)][k] = true;
                live[static_cast<size_t>(i - 1)][a] = false;
                live[static_cast<size_t>(i - 1)][b] = false;
                decomposed[static_cast<size_t>(i)][k] = true;
                surviving.push_back(position);
            }
        }
        out.depth = update_depth_vector(out.depth, i, surviving);
        out.depth_after_level.push_back(out.depth);
    }

    // Stage 4: tree bookkeeping for inspection and reporting.
    std::vector<std::vector<int>> lp_node(static_cast<size_t>(config.i_max) + 1);
    for (int i = 0; i <= config.i_max; ++i) {
        const auto& lps = lp_levels[static_cast<size_t>(i)];
        lp_node[static_cast<size_t>(i)].resize(lps.size(), -1);
        for (size_t k = 0; k < lps.size(); ++k) {
            DecompositionNode node;
            node.level = i;
            node.position = static_cast<int>(k) << i;
            node.role = FrameRole::Lp;
            node.support = 1 << i;
            node.cost = lp_cost[static_cast<size_t>(i)][k];
            lp_node[static_cast<size_t>(i)][k] = static_cast<int>(out.tree.nodes.size());
            out.tree.nodes.push_back(node);
        }
    }
    for (int i = 1; i <= config.i_max; ++i) {
        const auto& hps = level_results[static_cast<size_t>(i)].hp;
        for (size_t k = 0; k < hps.size(); ++k) {
            DecompositionNode node;
            node.level = i;
            node.position = (static_cast<int>(k) << i) + (1 << (i - 1));
            node.role = FrameRole::Hp;
            node.support = 1 << i;
            node.cost = hp_cost[static_cast<size_t>(i)][k];
            const int hp_id = static_cast<int>(out.tree.nodes.size());
            out.tree.nodes.push_back(node);
            if (decomposed[static_cast<size_t>(i)][k]) {
                DecompositionNode& first =
                    out.tree.nodes[static_cast<size_t>(lp_node[static_cast<size_t>(i - 1)][2 * k])];
                first.lp_child = lp_node[static_cast<size_t>(i)][k];
                first.hp_child = hp_id;
            }
        }
    }
    // Pairs that were evaluated but kept shallow get the pruned mark.
    for (int i = 1; i <= config.i_max; ++i) {
        const size_t pair_count = static_cast<size_t>(gop_size) >> i;
        for (size_t k = 0; k < pair_count; ++k) {
            const int prev = i - 1;
            const size_t a = 2 * k;
            const size_t b = 2 * k + 1;
            const int va = out.depth.v[static_cast<size_t>(a) << prev];
            const int vb = out.depth.v[(static_cast<size_t>(b) << prev)];
            if (va == prev && vb == prev) {  // both nodes terminal at level i-1
                out.tree.nodes[static_cast<size_t>(lp_node[static_cast<size_t>(prev)][a])].pruned = true;
                out.tree.nodes[static_cast<size_t>(lp_node[static_cast<size_t>(prev)][b])].pruned = true;
            }
        }
    }

    // Stage 5: emit the surviving representation.
    const std::vector<PositionRole> roles = parse_depth_vector(out.depth);
    out.enhancement.resize(static_cast<size_t>(config.i_max) + 1);
    for (int p = 0; p < gop_size; ++p) {
        const PositionRole& role = roles[static_cast<size_t>(p)];
        if (role.role == FrameRole::Hp) {
            const int level = role.level;
            const size_t k = static_cast<size_t>(p) >> level;
            EnhancementFrame el;
            el.position = p;
            el.level = level;
            el.payload = hp_payload[static_cast<size_t>(level)][k];
            if (config.mc_mode == McMode::Block)
                el.motion = motion_streams[static_cast<size_t>(level)][k];
            out.enhancement[static_cast<size_t>(level)].push_back(std::move(el));
        } else {
            const int level = role.role == FrameRole::Lp ? role.level : 0;
            const size_t k = static_cast<size_t>(p) >> level;
            BaseLayerFrame bl;
            bl.position = p;
            bl.level = level;
            bl.frame = lp_levels[static_cast<size_t>(level)][k];
            bl.payload = lp_payload[static_cast<size_t>(level)][k];
            out.base_layer.push_back(std::move(bl));
        }
    }
    return out;
}

}  // namespace cawl
