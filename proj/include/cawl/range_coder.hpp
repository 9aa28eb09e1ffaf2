#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cawl/error.hpp"

namespace cawl {

// A finished arithmetic-coded stream. Payloads are whole bytes; the bit
// length is kept explicitly because the framed on-disk form stores it.
struct CodedStream {
    std::vector<std::uint8_t> bytes;

    std::uint64_t bit_length() const { return static_cast<std::uint64_t>(bytes.size()) * 8; }
};

// One adaptive binary probability state. p0 is the probability of a zero
// bit in 1/65536 units; adaptation is a shift-based exponential decay with
// a staged shift: the first updates move fast so fresh contexts converge
// within a few symbols, later updates use the stable shift. The 16-bit
// scale lets long runs cost a fraction of a millibit per symbol, which is
// what keeps zero subbands nearly free.
struct BinaryContext {
    static constexpr int probability_bits = 16;
    static constexpr std::uint32_t probability_scale = 1u << probability_bits;
    static constexpr int stable_shift = 4;

    std::uint16_t p0 = probability_scale / 2;
    std::uint8_t warmup = 0;

    void update(bool bit) {
        const int shift = std::min(stable_shift, 1 + warmup / 2);
        if (warmup < 2 * (stable_shift - 1))
            ++warmup;
        if (bit)
            p0 -= p0 >> shift;
        else
            p0 += (probability_scale - p0) >> shift;
    }
};

namespace detail {
// Carryless range-coder bounds (Subbotin). The coder maintains
// low + range <= 2^32, so intervals never wrap and unsigned compares are
// exact.
constexpr std::uint32_t rc_top = 1u << 24;
constexpr std::uint32_t rc_bottom = 1u << 16;
}  // namespace detail

// Binary adaptive range encoder over 32-bit integer state. Deterministic:
// the output depends only on the coded (bit, context) sequence.
class RangeEncoder {
public:
    void encode_bit(BinaryContext& ctx, bool bit) {
        // range >= 2^16 after normalization, so r0 stays in [1, range).
        const std::uint32_t r0 = (range_ >> BinaryContext::probability_bits) * ctx.p0;
        if (!bit) {
            range_ = r0;
        } else {
            low_ += r0;
            range_ -= r0;
        }
        ctx.update(bit);
        normalize();
    }

    // Emits the shortest byte tail whose zero-padded 32-bit value lands in
    // the final interval. Decoders pad missing bytes with zeros, so short
    // streams stay decodable.
    CodedStream finish() {
        for (int emitted = 0; emitted <= 4; ++emitted) {
            const std::uint32_t mask =
                emitted == 4 ? 0u : (0xFFFFFFFFu >> (emitted * 8));
            const std::uint32_t offset = (0u - low_) & mask;
            if (offset < range_) {
                const std::uint32_t value = low_ + offset;
                for (int i = 0; i < emitted; ++i)
                    out_.push_back(static_cast<std::uint8_t>(value >> (24 - 8 * i)));
                break;
            }
        }
        CodedStream stream;
        stream.bytes = std::move(out_);
        reset();
        return stream;
    }

    void reset() {
        low_ = 0;
        range_ = 0xFFFFFFFFu;
        out_.clear();
    }

private:
    void normalize() {
        while ((low_ ^ (low_ + range_)) < detail::rc_top ||
               (range_ < detail::rc_bottom &&
                ((range_ = (0u - low_) & (detail::rc_bottom - 1)), true))) {
            out_.push_back(static_cast<std::uint8_t>(low_ >> 24));
            low_ <<= 8;
            range_ <<= 8;
        }
    }

    std::uint32_t low_ = 0;
    std::uint32_t range_ = 0xFFFFFFFFu;
    std::vector<std::uint8_t> out_;
};

// Mirror of RangeEncoder. Reads implied zero bytes past the end of the
// payload (the minimal flush relies on it).
class RangeDecoder {
public:
    explicit RangeDecoder(const CodedStream& stream) : bytes_(&stream.bytes) {
        for (int i = 0; i < 4; ++i)
            code_ = (code_ << 8) | next_byte();
    }

    bool decode_bit(BinaryContext& ctx) {
        const std::uint32_t r0 = (range_ >> BinaryContext::probability_bits) * ctx.p0;
        bool bit;
        if (code_ - low_ < r0) {
            bit = false;
            range_ = r0;
        } else {
            bit = true;
            low_ += r0;
            range_ -= r0;
        }
        ctx.update(bit);
        normalize();
        return bit;
    }

    size_t consumed_bytes() const { return pos_ < bytes_->size() ? pos_ : bytes_->size(); }

private:
    std::uint8_t next_byte() {
        if (pos_ < bytes_->size())
            return (*bytes_)[pos_++];
        ++pos_;
        return 0;
    }

    void normalize() {
        while ((low_ ^ (low_ + range_)) < detail::rc_top ||
               (range_ < detail::rc_bottom &&
                ((range_ = (0u - low_) & (detail::rc_bottom - 1)), true))) {
            code_ = (code_ << 8) | next_byte();
            low_ <<= 8;
            range_ <<= 8;
        }
    }

    const std::vector<std::uint8_t>* bytes_;
    size_t pos_ = 0;
    std::uint32_t low_ = 0;
    std::uint32_t code_ = 0;
    std::uint32_t range_ = 0xFFFFFFFFu;
};

// Spec-level convenience surface: code a whole (bit, context id) sequence
// against a shared context pool in one call.
inline CodedStream ac_encode(const std::vector<std::pair<bool, int>>& bits, int context_count) {
    if (context_count <= 0)
        throw ArgumentError("entropy", "context count must be positive");
    std::vector<BinaryContext> contexts(static_cast<size_t>(context_count));
    RangeEncoder enc;
    for (const auto& [bit, ctx] : bits) {
        if (ctx < 0 || ctx >= context_count)
            throw ArgumentError("entropy", "context id out of range");
        enc.encode_bit(contexts[static_cast<size_t>(ctx)], bit);
    }
    return enc.finish();
}

inline std::vector<bool> ac_decode(const CodedStream& stream, const std::vector<int>& schedule,
                                   int context_count) {
    if (context_count <= 0)
        throw ArgumentError("entropy", "context count must be positive");
    std::vector<BinaryContext> contexts(static_cast<size_t>(context_count));
    RangeDecoder dec(stream);
    std::vector<bool> bits;
    bits.reserve(schedule.size());
    for (int ctx : schedule) {
        if (ctx < 0 || ctx >= context_count)
            throw ArgumentError("entropy", "context id out of range");
        bits.push_back(dec.decode_bit(contexts[static_cast<size_t>(ctx)]));
    }
    return bits;
}

// --- framing ------------------------------------------------------------
// Every stream embedded in a larger payload is framed as a 32-bit little-
// endian bit length followed by ceil(bits/8) payload bytes.

inline void write_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 24));
}

// Cursor over a byte buffer used by all container parsing. Throws
// DecodeError with the offending byte offset on truncation.
class ByteReader {
public:
    ByteReader(const std::uint8_t* data, size_t size) : data_(data), size_(size) {}
    explicit ByteReader(const std::vector<std::uint8_t>& buf) : data_(buf.data()), size_(buf.size()) {}

    std::uint8_t u8() {
        require(1);
        return data_[pos_++];
    }

    std::uint16_t u16le() {
        require(2);
        std::uint16_t v = static_cast<std::uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }

    std::uint32_t u32le() {
        require(4);
        std::uint32_t v = static_cast<std::uint32_t>(data_[pos_]) |
                          (static_cast<std::uint32_t>(data_[pos_ + 1]) << 8) |
                          (static_cast<std::uint32_t>(data_[pos_ + 2]) << 16) |
                          (static_cast<std::uint32_t>(data_[pos_ + 3]) << 24);
        pos_ += 4;
        return v;
    }

    std::vector<std::uint8_t> bytes(size_t n) {
        require(n);
        std::vector<std::uint8_t> out(data_ + pos_, data_ + pos_ + n);
        pos_ += n;
        return out;
    }

    void skip(size_t n) {
        require(n);
        pos_ += n;
    }

    size_t position() const { return pos_; }
    size_t remaining() const { return size_ - pos_; }
    bool at_end() const { return pos_ == size_; }

private:
    void require(size_t n) const {
        if (size_ - pos_ < n)
            throw DecodeError("container", "stream truncated at byte " + std::to_string(pos_) +
                                               " (need " + std::to_string(n) + " more)");
    }

    const std::uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
};

inline void write_framed_stream(std::vector<std::uint8_t>& out, const CodedStream& stream) {
    write_u32le(out, static_cast<std::uint32_t>(stream.bit_length()));
    out.insert(out.end(), stream.bytes.begin(), stream.bytes.end());
}

inline CodedStream read_framed_stream(ByteReader& reader) {
    const std::uint32_t bit_length = reader.u32le();
    const size_t byte_count = (static_cast<size_t>(bit_length) + 7) / 8;
    CodedStream stream;
    stream.bytes = reader.bytes(byte_count);
    return stream;
}

inline size_t framed_size(const CodedStream& stream) { return 4 + stream.bytes.size(); }

}  // namespace cawl
