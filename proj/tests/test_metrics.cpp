#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "cawl/metrics.hpp"
#include "test_util.hpp"

using namespace cawl;

TEST_CASE("psnr_lp_t pools errors over each frame's support") {
    SECTION("hand-evaluated two-frame case") {
        Sequence seq;
        seq.frames.emplace_back(1, 1, 10);
        seq.frames.emplace_back(1, 1, 13);

        EncodeConfig config;
        config.i_max = 1;
        config.decision_override = [](int, int, int) { return PairDecision::Decompose; };
        const auto parsed = read_container(encode_to_bytes(seq, config));
        const auto preview = decode_preview(parsed, 0);
        REQUIRE(preview.size() == 1);
        REQUIRE(preview[0].frame.samples[0] == 11);

        const PsnrResult psnr = psnr_lp_t(preview, seq);
        CHECK(psnr.mse == Catch::Approx(2.5));
        CHECK_FALSE(psnr.lossless);
        CHECK(psnr.db() == Catch::Approx(44.15).margin(0.01));
    }
    SECTION("constant sequences are lossless at any depth") {
        Sequence seq;
        for (int t = 0; t < 16; ++t)
            seq.frames.emplace_back(4, 4, 200);
        for (int i_max : {1, 2, 3, 4}) {
            EncodeConfig config;
            config.i_max = i_max;
            const auto preview = decode_preview(read_container(encode_to_bytes(seq, config)), 0);
            const PsnrResult psnr = psnr_lp_t(preview, seq);
            CHECK(psnr.lossless);
            CHECK(std::isinf(psnr.db()));
        }
    }
    SECTION("dimension mismatches are rejected") {
        Sequence seq;
        seq.frames.emplace_back(2, 2, 0);
        std::vector<PreviewFrame> preview;
        preview.push_back(PreviewFrame{0, 1, CoefficientFrame(3, 2, SubbandKind::Lp)});
        CHECK_THROWS_AS(psnr_lp_t(preview, seq), ArgumentError);
    }
}

TEST_CASE("rate report attributes every byte") {
    std::mt19937 rng(151);
    const Sequence seq = testutil::static_then_noise_sequence(rng, 16, 12, 20);

    SECTION("no-MC stream has zero motion bytes") {
        EncodeConfig config;
        config.i_max = 2;
        const auto bytes = encode_to_bytes(seq, config);
        const RateReport report = rate_report(bytes);
        CHECK(report.total_bytes == bytes.size());
        CHECK(report.motion_bytes == 0);
        CHECK(report.v_bytes > 0);
        CHECK(report.base_layer_bytes > 0);
    }
    SECTION("MC stream pays for motion") {
        EncodeConfig config;
        config.i_max = 2;
        config.mc_mode = McMode::Block;
        config.force_uniform = true;
        const auto bytes = encode_to_bytes(seq, config);
        const RateReport report = rate_report(bytes);
        CHECK(report.total_bytes == bytes.size());
        CHECK(report.motion_bytes > 0);
    }
    SECTION("deeper uniform decomposition of constant input costs less") {
        Sequence constant;
        for (int t = 0; t < 16; ++t)
            constant.frames.emplace_back(16, 16, 77);
        std::uint64_t previous = 0;
        for (int level : {1, 2}) {
            EncodeConfig config;
            config.i_max = level;
            config.force_uniform = true;
            const auto bytes = encode_to_bytes(constant, config);
            if (previous > 0)
                CHECK(bytes.size() < previous);
            previous = bytes.size();
        }
    }
}

TEST_CASE("csv rows carry exactly the documented five columns") {
    const std::string header = csv_header();
    CHECK(std::count(header.begin(), header.end(), ',') == 4);

    PsnrResult psnr;
    psnr.mse = 2.5;
    const std::string row = csv_row(3, "block", 3.0, 12345, psnr);
    CHECK(std::count(row.begin(), row.end(), ',') == 4);

    PsnrResult lossless;
    lossless.lossless = true;
    CHECK(csv_row(1, "none", 1.0, 10, lossless).find("inf") != std::string::npos);
}
