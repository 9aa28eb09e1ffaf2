#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cawl/adaptive.hpp"
#include "cawl/depth_vector.hpp"
#include "cawl/entropy.hpp"
#include "cawl/error.hpp"
#include "cawl/lifting.hpp"
#include "cawl/motion.hpp"
#include "cawl/range_coder.hpp"

namespace cawl {

// Fixed-size little-endian header. gop_size is stored redundantly with
// i_max and cross-checked on read. kept_levels tracks how many enhancement
// layers are still present after extraction.
struct StreamHeader {
    static constexpr std::array<std::uint8_t, 4> magic = {'C', 'A', 'W', 'L'};
    static constexpr std::uint8_t current_version = 1;
    static constexpr size_t byte_size = 30;

    std::uint8_t version = current_version;
    int width = 0;
    int height = 0;
    int frame_count = 0;
    int gop_size = 0;
    int i_max = 0;
    int kept_levels = 0;
    std::uint32_t lambda_milli = 3000;
    McMode mc_mode = McMode::None;
    McParams mc;
    int trailing_frame_count = 0;

    int full_gop_count() const { return (frame_count - trailing_frame_count) / gop_size; }

    void validate() const {
        if (width <= 0 || height <= 0)
            throw DecodeError("container", "header has non-positive dimensions");
        if (i_max < 1 || i_max > 8)
            throw DecodeError("container", "header i_max " + std::to_string(i_max) +
                                               " outside [1,8]");
        if (gop_size != (1 << i_max))
            throw DecodeError("container", "header gop_size " + std::to_string(gop_size) +
                                               " is not 2^i_max");
        if (kept_levels < 0 || kept_levels > i_max)
            throw DecodeError("container", "header kept_levels outside [0,i_max]");
        if (trailing_frame_count < 0 || trailing_frame_count >= gop_size)
            throw DecodeError("container", "header trailing_frame_count outside [0,gop_size)");
        if (frame_count < 1 || (frame_count - trailing_frame_count) % gop_size != 0)
            throw DecodeError("container", "header frame count inconsistent with GOP structure");
    }
};

inline void write_header(std::vector<std::uint8_t>& out, const StreamHeader& h) {
    out.insert(out.end(), StreamHeader::magic.begin(), StreamHeader::magic.end());
    out.push_back(h.version);
    write_u32le(out, static_cast<std::uint32_t>(h.width));
    write_u32le(out, static_cast<std::uint32_t>(h.height));
    write_u32le(out, static_cast<std::uint32_t>(h.frame_count));
    out.push_back(static_cast<std::uint8_t>(h.gop_size & 0xFF));
    out.push_back(static_cast<std::uint8_t>(h.gop_size >> 8));
    out.push_back(static_cast<std::uint8_t>(h.i_max));
    out.push_back(static_cast<std::uint8_t>(h.kept_levels));
    write_u32le(out, h.lambda_milli);
    out.push_back(static_cast<std::uint8_t>(h.mc_mode));
    out.push_back(static_cast<std::uint8_t>(h.mc.block_size));
    out.push_back(static_cast<std::uint8_t>(h.mc.initial_search_range));
    out.push_back(static_cast<std::uint8_t>(h.mc.max_search_range));
    out.push_back(static_cast<std::uint8_t>(h.trailing_frame_count));
}

inline StreamHeader read_header(ByteReader& reader) {
    const auto magic = reader.bytes(4);
    if (!std::equal(magic.begin(), magic.end(), StreamHeader::magic.begin()))
        throw MalformedInputError("container", "bad magic; not a CAWL stream");
    StreamHeader h;
    h.version = reader.u8();
    if (h.version != StreamHeader::current_version)
        throw MalformedInputError("container", "unsupported container version " +
                                                   std::to_string(int(h.version)));
    h.width = static_cast<int>(reader.u32le());
    h.height = static_cast<int>(reader.u32le());
    h.frame_count = static_cast<int>(reader.u32le());
    h.gop_size = reader.u8();
    h.gop_size |= reader.u8() << 8;
    h.i_max = reader.u8();
    h.kept_levels = reader.u8();
    h.lambda_milli = reader.u32le();
    const std::uint8_t mode = reader.u8();
    if (mode > 1)
        throw DecodeError("container", "unknown mc mode " + std::to_string(int(mode)));
    h.mc_mode = static_cast<McMode>(mode);
    h.mc.block_size = reader.u8();
    h.mc.initial_search_range = reader.u8();
    h.mc.max_search_range = reader.u8();
    h.trailing_frame_count = reader.u8();
    h.validate();
    return h;
}

// Frame payloads are byte blobs from the spatial codec; they are framed with
// a byte length, unlike entropy streams which carry a bit length.
inline void write_framed_payload(std::vector<std::uint8_t>& out,
                                 const std::vector<std::uint8_t>& payload) {
    write_u32le(out, static_cast<std::uint32_t>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
}

inline std::vector<std::uint8_t> read_framed_payload(ByteReader& reader) {
    const std::uint32_t size = reader.u32le();
    return reader.bytes(size);
}

struct EncodedSequence {
    StreamHeader header;
    std::vector<GopEncoding> gops;
    std::vector<std::vector<std::uint8_t>> trailing_payloads;
};

// Serializes one GOP section body: coded v, then motion payloads deepest
// level first, then base-layer frames, then enhancement layers deepest
// first. Within a group, frames are in ascending temporal position.
inline std::vector<std::uint8_t> write_gop_section(const GopEncoding& gop, const StreamHeader& h) {
    std::vector<std::uint8_t> body;
    write_framed_stream(body, encode_depth_vector(gop.depth));
    if (h.mc_mode == McMode::Block) {
        for (int level = h.i_max; level >= h.i_max - h.kept_levels + 1; --level)
            for (const EnhancementFrame& el : gop.enhancement[static_cast<size_t>(level)]) {
                if (!el.motion)
                    throw InternalError("container", "missing motion payload in MC mode");
                write_framed_stream(body, *el.motion);
            }
    }
    for (const BaseLayerFrame& bl : gop.base_layer)
        write_framed_payload(body, bl.payload);
    for (int level = h.i_max; level >= h.i_max - h.kept_levels + 1; --level)
        for (const EnhancementFrame& el : gop.enhancement[static_cast<size_t>(level)])
            write_framed_payload(body, el.payload);
    return body;
}

inline std::vector<std::uint8_t> write_container(const EncodedSequence& seq) {
    const StreamHeader& h = seq.header;
    h.validate();
    if (static_cast<int>(seq.gops.size()) != h.full_gop_count() ||
        static_cast<int>(seq.trailing_payloads.size()) != h.trailing_frame_count)
        throw InternalError("container", "GOP structure does not match the header");

    std::vector<std::uint8_t> out;
    write_header(out, h);
    for (const GopEncoding& gop : seq.gops) {
        const std::vector<std::uint8_t> body = write_gop_section(gop, h);
        write_u32le(out, static_cast<std::uint32_t>(body.size()));
        out.insert(out.end(), body.begin(), body.end());
    }
    for (const auto& payload : seq.trailing_payloads)
        write_framed_payload(out, payload);
    return out;
}

// --- reading ---------------------------------------------------------------

struct ParsedEnhancement {
    int position = 0;
    int level = 0;
    std::vector<std::uint8_t> payload;
    std::optional<CodedStream> motion;
};

struct ParsedGop {
    DepthVector depth;
    std::vector<std::pair<int, std::vector<std::uint8_t>>> base_layer;  // (position, payload)
    std::vector<std::vector<ParsedEnhancement>> enhancement;            // [level]
};

struct ParsedContainer {
    StreamHeader header;
    std::vector<ParsedGop> gops;
    std::vector<std::vector<std::uint8_t>> trailing_payloads;
};

inline ParsedGop parse_gop_section(const std::vector<std::uint8_t>& body, const StreamHeader& h) {
    ByteReader reader(body);
    ParsedGop gop;
    gop.depth = decode_depth_vector(read_framed_stream(reader), h.gop_size, h.i_max);
    const std::vector<PositionRole> roles = parse_depth_vector(gop.depth);

    gop.enhancement.resize(static_cast<size_t>(h.i_max) + 1);
    for (int p = 0; p < h.gop_size; ++p)
        if (roles[static_cast<size_t>(p)].role == FrameRole::Hp) {
            ParsedEnhancement el;
            el.position = p;
            el.level = roles[static_cast<size_t>(p)].level;
            gop.enhancement[static_cast<size_t>(el.level)].push_back(std::move(el));
        }

    if (h.mc_mode == McMode::Block)
        for (int level = h.i_max; level >= h.i_max - h.kept_levels + 1; --level)
            for (ParsedEnhancement& el : gop.enhancement[static_cast<size_t>(level)])
                el.motion = read_framed_stream(reader);

    for (int p = 0; p < h.gop_size; ++p)
        if (roles[static_cast<size_t>(p)].role != FrameRole::Hp)
            gop.base_layer.emplace_back(p, read_framed_payload(reader));

    for (int level = h.i_max; level >= h.i_max - h.kept_levels + 1; --level)
        for (ParsedEnhancement& el : gop.enhancement[static_cast<size_t>(level)])
            el.payload = read_framed_payload(reader);

    // Dropped enhancement levels keep their (empty) slots so positions stay
    // interpretable; strip payload entries that were never read.
    for (int level = h.i_max - h.kept_levels; level >= 1; --level)
        gop.enhancement[static_cast<size_t>(level)].clear();

    if (!reader.at_end())
        throw DecodeError("container", "GOP section has " + std::to_string(reader.remaining()) +
                                           " unexpected trailing bytes");
    return gop;
}

inline ParsedContainer read_container(const std::vector<std::uint8_t>& bytes) {
    ByteReader reader(bytes);
    ParsedContainer parsed;
    parsed.header = read_header(reader);

    for (int g = 0; g < parsed.header.full_gop_count(); ++g) {
        const std::uint32_t section_length = reader.u32le();
        const std::vector<std::uint8_t> body = reader.bytes(section_length);
        parsed.gops.push_back(parse_gop_section(body, parsed.header));
    }
    for (int t = 0; t < parsed.header.trailing_frame_count; ++t)
        parsed.trailing_payloads.push_back(read_framed_payload(reader));

    if (!reader.at_end())
        throw DecodeError("container", "container has " + std::to_string(reader.remaining()) +
                                           " unexpected trailing bytes");
    return parsed;
}

// Byte-level temporal-layer extraction: keeps the base layer plus the
// deepest `keep_levels` enhancement layers and their motion payloads. No
// entropy payload is re-coded; only the header byte and section lengths
// change.
inline std::vector<std::uint8_t> extract_temporal_layers(const std::vector<std::uint8_t>& bytes,
                                                         int keep_levels) {
    ByteReader reader(bytes);
    StreamHeader header = read_header(reader);
    if (keep_levels < 0 || keep_levels > header.i_max)
        throw ArgumentError("container", "keep_levels " + std::to_string(keep_levels) +
                                             " outside [0," + std::to_string(header.i_max) + "]");
    if (keep_levels > header.kept_levels)
        throw ArgumentError("container", "stream retains only " +
                                             std::to_string(header.kept_levels) +
                                             " enhancement layers; cannot keep " +
                                             std::to_string(keep_levels));

    StreamHeader out_header = header;
    out_header.kept_levels = keep_levels;
    std::vector<std::uint8_t> out;
    write_header(out, out_header);

    for (int g = 0; g < header.full_gop_count(); ++g) {
        const std::uint32_t section_length = reader.u32le();
        const std::vector<std::uint8_t> body = reader.bytes(section_length);

        ByteReader section(body);
        std::vector<std::uint8_t> new_body;

        const size_t v_start = section.position();
        const CodedStream v_stream = read_framed_stream(section);
        new_body.insert(new_body.end(), body.begin() + v_start, body.begin() + section.position());

        const DepthVector depth = decode_depth_vector(v_stream, header.gop_size, header.i_max);
        const RoleCounts counts = count_roles(depth, parse_depth_vector(depth));

        // Motion payloads, deepest level first: keep a prefix of the groups.
        if (header.mc_mode == McMode::Block)
            for (int level = header.i_max; level >= header.i_max - header.kept_levels + 1; --level)
                for (int n = 0; n < counts.hp_per_level[static_cast<size_t>(level)]; ++n) {
                    const size_t start = section.position();
                    read_framed_stream(section);
                    if (level >= header.i_max - keep_levels + 1)
                        new_body.insert(new_body.end(), body.begin() + start,
                                        body.begin() + section.position());
                }

        // Base layer is always kept.
        for (int n = 0; n < counts.base_layer; ++n) {
            const size_t start = section.position();
            read_framed_payload(section);
            new_body.insert(new_body.end(), body.begin() + start, body.begin() + section.position());
        }

        // Enhancement groups, deepest first: keep a prefix.
        for (int level = header.i_max; level >= header.i_max - header.kept_levels + 1; --level)
            for (int n = 0; n < counts.hp_per_level[static_cast<size_t>(level)]; ++n) {
                const size_t start = section.position();
                read_framed_payload(section);
                if (level >= header.i_max - keep_levels + 1)
                    new_body.insert(new_body.end(), body.begin() + start,
                                    body.begin() + section.position());
            }

        if (!section.at_end())
            throw DecodeError("container", "GOP section has unexpected trailing bytes");

        write_u32le(out, static_cast<std::uint32_t>(new_body.size()));
        out.insert(out.end(), new_body.begin(), new_body.end());
    }

    // Trailing intra frames stay verbatim.
    while (!reader.at_end()) {
        const size_t start = reader.position();
        read_framed_payload(reader);
        out.insert(out.end(), bytes.begin() + static_cast<std::ptrdiff_t>(start),
                   bytes.begin() + static_cast<std::ptrdiff_t>(reader.position()));
    }
    return out;
}

}  // namespace cawl
