#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <utility>
#include <vector>

#include "cawl/range_coder.hpp"

using namespace cawl;

TEST_CASE("skewed input compresses far below a bit per symbol") {
    std::vector<std::pair<bool, int>> bits(10000, {false, 0});
    const CodedStream stream = ac_encode(bits, 1);
    CHECK(stream.bytes.size() < 100);

    const std::vector<int> schedule(10000, 0);
    const std::vector<bool> decoded = ac_decode(stream, schedule, 1);
    CHECK(decoded == std::vector<bool>(10000, false));
}

TEST_CASE("alternating input round-trips near one bit per symbol") {
    std::vector<std::pair<bool, int>> bits;
    for (int i = 0; i < 10000; ++i)
        bits.emplace_back(i % 2 == 1, 0);
    const CodedStream stream = ac_encode(bits, 1);
    // An adaptive model hovers near p = 1/2 here, so the stream should be
    // close to 10000 bits = 1250 bytes.
    CHECK(stream.bytes.size() > 1100);
    CHECK(stream.bytes.size() < 1400);

    const std::vector<int> schedule(10000, 0);
    const std::vector<bool> decoded = ac_decode(stream, schedule, 1);
    for (int i = 0; i < 10000; ++i)
        REQUIRE(decoded[size_t(i)] == (i % 2 == 1));
}

TEST_CASE("empty input produces a flush-only stream that decodes to empty") {
    const CodedStream stream = ac_encode({}, 1);
    CHECK(stream.bytes.size() <= 4);
    CHECK(ac_decode(stream, {}, 1).empty());
}

TEST_CASE("random bit/context streams round-trip exactly") {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const int context_count = std::uniform_int_distribution<int>(1, 8)(rng);
        const int length = std::uniform_int_distribution<int>(0, 2000)(rng);
        // Mix skewed and balanced contexts so adaptation paths vary.
        std::vector<double> bias(size_t(context_count), 0.0);
        for (auto& b : bias)
            b = std::uniform_real_distribution<double>(0.02, 0.98)(rng);

        std::vector<std::pair<bool, int>> bits;
        std::vector<int> schedule;
        for (int i = 0; i < length; ++i) {
            const int ctx = std::uniform_int_distribution<int>(0, context_count - 1)(rng);
            const bool bit = std::bernoulli_distribution(bias[size_t(ctx)])(rng);
            bits.emplace_back(bit, ctx);
            schedule.push_back(ctx);
        }
        const CodedStream stream = ac_encode(bits, context_count);
        const std::vector<bool> decoded = ac_decode(stream, schedule, context_count);
        REQUIRE(decoded.size() == bits.size());
        for (size_t i = 0; i < bits.size(); ++i)
            REQUIRE(decoded[i] == bits[i].first);
    }
}

TEST_CASE("encoding is deterministic") {
    std::vector<std::pair<bool, int>> bits;
    for (int i = 0; i < 500; ++i)
        bits.emplace_back((i * 7) % 3 == 0, i % 4);
    const CodedStream a = ac_encode(bits, 4);
    const CodedStream b = ac_encode(bits, 4);
    CHECK(a.bytes == b.bytes);
}

TEST_CASE("context state stays strictly inside (0, scale)") {
    BinaryContext ctx;
    for (int i = 0; i < 10000; ++i) {
        ctx.update(true);
        REQUIRE(ctx.p0 > 0);
    }
    for (int i = 0; i < 10000; ++i) {
        ctx.update(false);
        REQUIRE(ctx.p0 < BinaryContext::probability_scale);
    }
}

TEST_CASE("framed streams detect truncation with a position") {
    std::vector<std::pair<bool, int>> bits(64, {true, 0});
    const CodedStream stream = ac_encode(bits, 1);
    std::vector<std::uint8_t> framed;
    write_framed_stream(framed, stream);

    SECTION("intact") {
        ByteReader reader(framed);
        const CodedStream back = read_framed_stream(reader);
        CHECK(back.bytes == stream.bytes);
        CHECK(reader.at_end());
    }
    SECTION("payload cut short") {
        std::vector<std::uint8_t> cut(framed.begin(), framed.end() - 1);
        ByteReader reader(cut);
        CHECK_THROWS_MATCHES(read_framed_stream(reader), DecodeError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("truncated at byte")));
    }
    SECTION("length prefix cut short") {
        std::vector<std::uint8_t> cut(framed.begin(), framed.begin() + 2);
        ByteReader reader(cut);
        CHECK_THROWS_AS(read_framed_stream(reader), DecodeError);
    }
}
