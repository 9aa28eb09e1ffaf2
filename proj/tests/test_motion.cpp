#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <random>

#include "cawl/motion.hpp"
#include "test_util.hpp"

using namespace cawl;

namespace {

// Independent full-search oracle: plain nested scan, clamp-to-edge reads,
// ties to smaller |dx|+|dy| then earlier (dy, dx) candidate. Kept separate
// from the implementation on purpose.
MotionVector oracle_best_vector(const CoefficientFrame& reference, const CoefficientFrame& current,
                                int x0, int y0, int bw, int bh, int range) {
    long long best_sad = -1;
    int best_l1 = 0;
    MotionVector best{};
    for (int dy = -range; dy <= range; ++dy) {
        for (int dx = -range; dx <= range; ++dx) {
            long long sad = 0;
            for (int j = 0; j < bh; ++j) {
                for (int i = 0; i < bw; ++i) {
                    int rx = x0 + i + dx;
                    int ry = y0 + j + dy;
                    rx = rx < 0 ? 0 : (rx >= reference.width ? reference.width - 1 : rx);
                    ry = ry < 0 ? 0 : (ry >= reference.height ? reference.height - 1 : ry);
                    sad += std::llabs(static_cast<long long>(current.at(x0 + i, y0 + j)) -
                                      reference.at(rx, ry));
                }
            }
            const int l1 = std::abs(dx) + std::abs(dy);
            if (best_sad < 0 || sad < best_sad || (sad == best_sad && l1 < best_l1)) {
                best_sad = sad;
                best_l1 = l1;
                best = {dx, dy};
            }
        }
    }
    return best;
}

CoefficientFrame shifted_frame(const CoefficientFrame& source, int sx, int sy) {
    CoefficientFrame out(source.width, source.height, source.kind);
    for (int y = 0; y < source.height; ++y)
        for (int x = 0; x < source.width; ++x) {
            const int fx = std::clamp(x - sx, 0, source.width - 1);
            const int fy = std::clamp(y - sy, 0, source.height - 1);
            out.at(x, y) = source.at(fx, fy);
        }
    return out;
}

}  // namespace

TEST_CASE("search range doubles per level up to the cap") {
    McParams params;
    CHECK(search_range_for_level(1, params) == 8);
    CHECK(search_range_for_level(2, params) == 16);
    CHECK(search_range_for_level(3, params) == 32);
    CHECK(search_range_for_level(4, params) == 64);
    CHECK(search_range_for_level(5, params) == 64);
    CHECK(search_range_for_level(8, params) == 64);

    McParams tight{8, 8, 8};
    CHECK(search_range_for_level(1, tight) == 8);
    CHECK(search_range_for_level(6, tight) == 8);

    CHECK_THROWS_AS(search_range_for_level(0, params), ArgumentError);
}

TEST_CASE("identical frames give all-zero motion") {
    std::mt19937 rng(11);
    const CoefficientFrame frame =
        testutil::random_coefficients(rng, 24, 16, 0, 255, SubbandKind::Lp);
    const MotionField field = estimate_block_motion(frame, frame, 4, McParams{});
    for (const MotionVector& mv : field.vectors) {
        CHECK(mv.dx == 0);
        CHECK(mv.dy == 0);
    }
}

TEST_CASE("pure translation is found on interior blocks") {
    std::mt19937 rng(13);
    const CoefficientFrame reference =
        testutil::random_coefficients(rng, 32, 32, 0, 255, SubbandKind::Lp);
    const CoefficientFrame current = shifted_frame(reference, 3, 2);
    const MotionField field = estimate_block_motion(reference, current, 4, McParams{});

    // Interior blocks: their matched reference block must not touch an edge.
    for (int by = 1; by + 1 < field.blocks_y; ++by)
        for (int bx = 1; bx + 1 < field.blocks_x; ++bx) {
            CHECK(field.at(bx, by).dx == -3);
            CHECK(field.at(bx, by).dy == -2);
        }

    SECTION("prediction from the estimated field matches on interior pixels") {
        const CoefficientFrame predicted = warp_predict(reference, field);
        for (int y = 8; y < 24; ++y)
            for (int x = 8; x < 24; ++x)
                CHECK(predicted.at(x, y) == current.at(x, y));
    }
}

TEST_CASE("full search equals the brute-force oracle") {
    std::mt19937 rng(17);
    McParams params;
    for (int trial = 0; trial < 20; ++trial) {
        const CoefficientFrame reference =
            testutil::random_coefficients(rng, 32, 32, 0, 255, SubbandKind::Lp);
        const CoefficientFrame current =
            testutil::random_coefficients(rng, 32, 32, 0, 255, SubbandKind::Lp);
        const MotionField field = estimate_block_motion(reference, current, 4, params);
        for (int by = 0; by < field.blocks_y; ++by)
            for (int bx = 0; bx < field.blocks_x; ++bx) {
                const MotionVector expected = oracle_best_vector(
                    reference, current, bx * 8, by * 8, std::min(8, 32 - bx * 8),
                    std::min(8, 32 - by * 8), 4);
                REQUIRE(field.at(bx, by).dx == expected.dx);
                REQUIRE(field.at(bx, by).dy == expected.dy);
            }
    }
}

TEST_CASE("estimation rejects mismatched dimensions") {
    CoefficientFrame a(8, 8, SubbandKind::Lp);
    CoefficientFrame b(8, 9, SubbandKind::Lp);
    CHECK_THROWS_AS(estimate_block_motion(a, b, 2, McParams{}), ArgumentError);
}

TEST_CASE("warp_predict with a zero field is the identity") {
    std::mt19937 rng(19);
    const CoefficientFrame frame =
        testutil::random_coefficients(rng, 17, 9, -255, 255, SubbandKind::Hp);
    const MotionField field = make_zero_field(17, 9, 8);
    CHECK(warp_predict(frame, field).samples == frame.samples);
}

TEST_CASE("warp_predict clamps out-of-bounds reads to the edge") {
    CoefficientFrame frame(4, 1, SubbandKind::Lp);
    frame.samples = {10, 20, 30, 40};
    MotionField field = make_zero_field(4, 1, 8);
    field.vectors[0] = {1, 0};
    const CoefficientFrame out = warp_predict(frame, field);
    CHECK(out.samples == std::vector<sample_t>{20, 30, 40, 40});
}

TEST_CASE("warp_update scatters with row-major overwrite") {
    SECTION("zero field is the identity") {
        std::mt19937 rng(23);
        const CoefficientFrame hp =
            testutil::random_coefficients(rng, 16, 8, -100, 100, SubbandKind::Hp);
        CHECK(warp_update(hp, make_zero_field(16, 8, 8)).samples == hp.samples);
    }
    SECTION("zero input stays zero under any field") {
        CoefficientFrame hp(16, 8, SubbandKind::Hp, 0);
        MotionField field = make_zero_field(16, 8, 8);
        field.vectors[0] = {5, 2};
        field.vectors[1] = {-3, 1};
        const CoefficientFrame out = warp_update(hp, field);
        for (sample_t v : out.samples)
            CHECK(v == 0);
    }
    SECTION("overlapping targets keep the later block") {
        // Two 2x2 blocks side by side; both scatter onto the left block's
        // area. The right block is processed later and must win.
        CoefficientFrame hp(4, 2, SubbandKind::Hp);
        hp.samples = {1, 1, 2, 2,
                      1, 1, 2, 2};
        MotionField field = make_zero_field(4, 2, 2);
        field.vectors[0] = {0, 0};
        field.vectors[1] = {-2, 0};
        const CoefficientFrame out = warp_update(hp, field);
        CHECK(out.samples == std::vector<sample_t>{2, 2, 0, 0,
                                                   2, 2, 0, 0});
    }
    SECTION("pixels leaving the frame are dropped") {
        CoefficientFrame hp(2, 2, SubbandKind::Hp);
        hp.samples = {5, 6, 7, 8};
        MotionField field = make_zero_field(2, 2, 2);
        field.vectors[0] = {1, 0};
        const CoefficientFrame out = warp_update(hp, field);
        CHECK(out.samples == std::vector<sample_t>{0, 5, 0, 7});
    }
}

TEST_CASE("warps are deterministic") {
    std::mt19937 rng(29);
    const CoefficientFrame frame =
        testutil::random_coefficients(rng, 20, 12, -255, 255, SubbandKind::Hp);
    MotionField field = make_zero_field(20, 12, 8, 4);
    for (auto& mv : field.vectors)
        mv = {std::uniform_int_distribution<int>(-4, 4)(rng),
              std::uniform_int_distribution<int>(-4, 4)(rng)};
    CHECK(warp_predict(frame, field).samples == warp_predict(frame, field).samples);
    CHECK(warp_update(frame, field).samples == warp_update(frame, field).samples);
}

TEST_CASE("motion field coding round-trips") {
    SECTION("zero field compresses below a byte per vector") {
        const MotionField field = make_zero_field(64, 64, 8, 8);  // 64 blocks
        REQUIRE(field.vectors.size() == 64);
        const CodedStream stream = encode_motion_field(field);
        CHECK(stream.bytes.size() < 64);
        const MotionField back = decode_motion_field(stream, 64, 64, 8, 8);
        for (const MotionVector& mv : back.vectors) {
            CHECK(mv.dx == 0);
            CHECK(mv.dy == 0);
        }
    }
    SECTION("random fields round-trip exactly") {
        std::mt19937 rng(37);
        for (int trial = 0; trial < 50; ++trial) {
            const int w = std::uniform_int_distribution<int>(1, 100)(rng);
            const int h = std::uniform_int_distribution<int>(1, 100)(rng);
            const int range = std::uniform_int_distribution<int>(0, 32)(rng);
            MotionField field = make_zero_field(w, h, 8, range);
            for (auto& mv : field.vectors)
                mv = {std::uniform_int_distribution<int>(-range, range)(rng),
                      std::uniform_int_distribution<int>(-range, range)(rng)};
            const CodedStream stream = encode_motion_field(field);
            const MotionField back = decode_motion_field(stream, w, h, 8, range);
            REQUIRE(back.blocks_x == field.blocks_x);
            REQUIRE(back.blocks_y == field.blocks_y);
            for (size_t i = 0; i < field.vectors.size(); ++i) {
                REQUIRE(back.vectors[i].dx == field.vectors[i].dx);
                REQUIRE(back.vectors[i].dy == field.vectors[i].dy);
            }
        }
    }
    SECTION("empty field gives an empty payload") {
        MotionField field;
        field.block_size = 8;
        const CodedStream stream = encode_motion_field(field);
        CHECK(stream.bytes.empty());
    }
}
