#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cawl/lifting.hpp"
#include "test_util.hpp"

using namespace cawl;

namespace {
CoefficientFrame pixel(sample_t v) {
    CoefficientFrame f(1, 1, SubbandKind::Lp);
    f.samples[0] = v;
    return f;
}

MotionField random_field(std::mt19937& rng, int width, int height, int block_size, int range) {
    MotionField field = make_zero_field(width, height, block_size, range);
    std::uniform_int_distribution<int> dist(-range, range);
    for (auto& mv : field.vectors)
        mv = {dist(rng), dist(rng)};
    return field;
}
}  // namespace

TEST_CASE("single-pixel lifting matches hand-evaluated values") {
    WarpPair identity;

    SECTION("identical frames: zero residual") {
        auto [lp, hp] = lift_pair_forward(pixel(100), pixel(100), identity);
        CHECK(hp.samples[0] == 0);
        CHECK(lp.samples[0] == 100);
    }
    SECTION("odd=10, even=13") {
        auto [lp, hp] = lift_pair_forward(pixel(10), pixel(13), identity);
        CHECK(hp.samples[0] == 3);
        CHECK(lp.samples[0] == 11);

        auto [odd, even] = lift_pair_inverse(lp, hp, identity);
        CHECK(odd.samples[0] == 10);
        CHECK(even.samples[0] == 13);
    }
    SECTION("odd=13, even=10: floor acts toward minus infinity") {
        auto [lp, hp] = lift_pair_forward(pixel(13), pixel(10), identity);
        CHECK(hp.samples[0] == -3);
        CHECK(lp.samples[0] == 11);  // 13 + floor(-3/2) = 13 - 2
    }
}

TEST_CASE("identity-warp closed form holds exhaustively at one pixel") {
    WarpPair identity;
    for (int odd = 0; odd < 256; ++odd)
        for (int even = 0; even < 256; ++even) {
            auto [lp, hp] = lift_pair_forward(pixel(odd), pixel(even), identity);
            REQUIRE(hp.samples[0] == even - odd);
            // floor((odd+even)/2), non-negative here, so / is exact
            REQUIRE(lp.samples[0] == (odd + even) / 2);
            auto [o, e] = lift_pair_inverse(lp, hp, identity);
            REQUIRE(o.samples[0] == odd);
            REQUIRE(e.samples[0] == even);
        }
}

TEST_CASE("inverse(forward) is the identity for random frames, identity warp") {
    std::mt19937 rng(41);
    WarpPair identity;
    for (int trial = 0; trial < 1000; ++trial) {
        const int w = std::uniform_int_distribution<int>(1, 12)(rng);
        const int h = std::uniform_int_distribution<int>(1, 12)(rng);
        const CoefficientFrame odd = testutil::random_coefficients(rng, w, h, 0, 255, SubbandKind::Lp);
        const CoefficientFrame even = testutil::random_coefficients(rng, w, h, 0, 255, SubbandKind::Lp);
        auto [lp, hp] = lift_pair_forward(odd, even, identity);
        auto [o, e] = lift_pair_inverse(lp, hp, identity);
        REQUIRE(o.samples == odd.samples);
        REQUIRE(e.samples == even.samples);
    }
}

TEST_CASE("losslessness is warp-independent: arbitrary motion fields reconstruct") {
    std::mt19937 rng(43);
    for (int trial = 0; trial < 300; ++trial) {
        const int w = std::uniform_int_distribution<int>(1, 24)(rng);
        const int h = std::uniform_int_distribution<int>(1, 24)(rng);
        const int block = std::uniform_int_distribution<int>(1, 8)(rng);
        const int range = std::uniform_int_distribution<int>(0, 12)(rng);
        const MotionField field = random_field(rng, w, h, block, range);
        WarpPair warp{&field};

        const CoefficientFrame odd = testutil::random_coefficients(rng, w, h, 0, 255, SubbandKind::Lp);
        const CoefficientFrame even = testutil::random_coefficients(rng, w, h, 0, 255, SubbandKind::Lp);
        auto [lp, hp] = lift_pair_forward(odd, even, warp);
        auto [o, e] = lift_pair_inverse(lp, hp, warp);
        REQUIRE(o.samples == odd.samples);
        REQUIRE(e.samples == even.samples);
    }
}

TEST_CASE("lifting rejects mismatched dimensions") {
    WarpPair identity;
    CoefficientFrame a(2, 2, SubbandKind::Lp);
    CoefficientFrame b(2, 3, SubbandKind::Lp);
    CHECK_THROWS_AS(lift_pair_forward(a, b, identity), ArgumentError);
    CHECK_THROWS_AS(lift_pair_inverse(a, b, identity), ArgumentError);
}

TEST_CASE("analyze_level pairs frames in order") {
    McParams params;

    SECTION("identical frames: LP equals input, HP zero") {
        std::vector<CoefficientFrame> frames(8, CoefficientFrame(4, 4, SubbandKind::Lp, 77));
        const LevelResult result = analyze_level(frames, McMode::None, 1, params);
        REQUIRE(result.lp.size() == 4);
        REQUIRE(result.hp.size() == 4);
        CHECK(result.motion.empty());
        for (const auto& lp : result.lp)
            CHECK(lp.samples == frames[0].samples);
        for (const auto& hp : result.hp)
            for (sample_t v : hp.samples)
                CHECK(v == 0);
    }
    SECTION("odd-length input is rejected") {
        std::vector<CoefficientFrame> frames(3, CoefficientFrame(4, 4, SubbandKind::Lp));
        CHECK_THROWS_AS(analyze_level(frames, McMode::None, 1, params), ArgumentError);
    }
    SECTION("empty input gives empty output") {
        const LevelResult result = analyze_level({}, McMode::Block, 1, params);
        CHECK(result.lp.empty());
        CHECK(result.hp.empty());
        const auto back = synthesize_level({}, {}, {}, McMode::Block);
        CHECK(back.empty());
    }
    SECTION("16 frames produce level-1 subbands at the expected positions") {
        std::mt19937 rng(47);
        std::vector<CoefficientFrame> frames;
        for (int t = 0; t < 16; ++t)
            frames.push_back(testutil::random_coefficients(rng, 4, 4, 0, 255, SubbandKind::Lp));
        const LevelResult result = analyze_level(frames, McMode::None, 1, params);
        REQUIRE(result.lp.size() == 8);
        REQUIRE(result.hp.size() == 8);
        // Pair k consumes originals (2k, 2k+1): LP derives from the earlier
        // frame, HP from the later one.
        WarpPair identity;
        for (size_t k = 0; k < 8; ++k) {
            auto [lp, hp] = lift_pair_forward(frames[2 * k], frames[2 * k + 1], identity);
            CHECK(result.lp[k].samples == lp.samples);
            CHECK(result.hp[k].samples == hp.samples);
        }
    }
}

TEST_CASE("global translation within range yields zero HP on interior-matched blocks") {
    std::mt19937 rng(53);
    const CoefficientFrame reference =
        testutil::random_coefficients(rng, 32, 32, 0, 255, SubbandKind::Lp);
    // Content moves by (-2,-1): every current block maps to a reference
    // block shifted by (2,1), fully inside for non-border blocks.
    CoefficientFrame current(32, 32, SubbandKind::Lp);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x)
            current.at(x, y) =
                reference.at(std::clamp(x + 2, 0, 31), std::clamp(y + 1, 0, 31));

    const LevelResult result = analyze_level({reference, current}, McMode::Block, 1, McParams{});
    REQUIRE(result.motion.size() == 1);
    const CoefficientFrame& hp = result.hp[0];
    for (int by = 0; by < 4; ++by)
        for (int bx = 0; bx < 4; ++bx) {
            const MotionVector mv = result.motion[0].at(bx, by);
            const bool matched_inside = bx * 8 + mv.dx >= 0 && bx * 8 + 7 + mv.dx < 32 &&
                                        by * 8 + mv.dy >= 0 && by * 8 + 7 + mv.dy < 32;
            if (!matched_inside)
                continue;
            for (int j = 0; j < 8; ++j)
                for (int i = 0; i < 8; ++i)
                    CHECK(hp.at(bx * 8 + i, by * 8 + j) == 0);
        }
}

TEST_CASE("synthesize_level inverts analyze_level") {
    std::mt19937 rng(59);
    McParams params;
    for (McMode mode : {McMode::None, McMode::Block}) {
        for (int trial = 0; trial < 10; ++trial) {
            const int w = std::uniform_int_distribution<int>(2, 20)(rng);
            const int h = std::uniform_int_distribution<int>(2, 20)(rng);
            const int count = 2 * std::uniform_int_distribution<int>(1, 8)(rng);
            std::vector<CoefficientFrame> frames;
            for (int t = 0; t < count; ++t)
                frames.push_back(testutil::random_coefficients(rng, w, h, 0, 255, SubbandKind::Lp));
            const LevelResult result = analyze_level(frames, mode, 1, params);
            const auto back = synthesize_level(result.lp, result.hp, result.motion, mode);
            REQUIRE(back.size() == frames.size());
            for (size_t t = 0; t < frames.size(); ++t)
                REQUIRE(back[t].samples == frames[t].samples);
        }
    }
}

TEST_CASE("all-zero HP with identity motion interleaves predictions") {
    std::mt19937 rng(61);
    const CoefficientFrame lp = testutil::random_coefficients(rng, 6, 6, 0, 255, SubbandKind::Lp);
    const CoefficientFrame hp(6, 6, SubbandKind::Hp, 0);
    const auto frames = synthesize_level({lp}, {hp}, {}, McMode::None);
    REQUIRE(frames.size() == 2);
    // odd = lp - 0; even = 0 + prediction(odd) = odd
    CHECK(frames[0].samples == lp.samples);
    CHECK(frames[1].samples == lp.samples);
}

TEST_CASE("synthesize_level validates lengths") {
    std::vector<CoefficientFrame> one(1, CoefficientFrame(2, 2, SubbandKind::Lp));
    std::vector<CoefficientFrame> two(2, CoefficientFrame(2, 2, SubbandKind::Hp));
    CHECK_THROWS_AS(synthesize_level(one, two, {}, McMode::None), ArgumentError);
    CHECK_THROWS_AS(synthesize_level(one, one, {}, McMode::Block), ArgumentError);
}
