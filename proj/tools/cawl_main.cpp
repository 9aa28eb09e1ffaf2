// Command-line front end: encode, decode, extract, analyze.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cawl/cawl.hpp"

namespace {

int log_level() {
    static const int level = [] {
        const char* env = std::getenv("CAWL_LOG");
        if (!env)
            return 1;
        const std::string v(env);
        if (v == "quiet")
            return 0;
        if (v == "debug")
            return 2;
        return 1;
    }();
    return level;
}

void log_info(const std::string& message) {
    if (log_level() >= 1)
        std::cerr << "cawl: " << message << "\n";
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw cawl::IoError("cli", "cannot open '" + path + "' for reading");
    return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw cawl::IoError("cli", "cannot open '" + path + "' for writing");
    if (!out.write(reinterpret_cast<const char*>(bytes.data()),
                   static_cast<std::streamsize>(bytes.size())))
        throw cawl::IoError("cli", "short write to '" + path + "'");
}

cawl::McMode parse_mc_mode(const std::string& name) {
    if (name == "none")
        return cawl::McMode::None;
    if (name == "block")
        return cawl::McMode::Block;
    throw cawl::ArgumentError("cli", "mc mode must be 'none' or 'block', got '" + name + "'");
}

// Per-position decomposition depth histogram over the whole stream.
std::map<int, int> depth_histogram(const cawl::ParsedContainer& parsed) {
    std::map<int, int> histogram;
    for (const cawl::ParsedGop& gop : parsed.gops) {
        const auto roles = cawl::parse_depth_vector(gop.depth);
        for (int p = 0; p < gop.depth.size(); ++p) {
            int depth = 0;
            if (roles[static_cast<size_t>(p)].role == cawl::FrameRole::Lp)
                depth = roles[static_cast<size_t>(p)].level;
            else if (roles[static_cast<size_t>(p)].role == cawl::FrameRole::Hp)
                depth = gop.depth.v[static_cast<size_t>(
                    roles[static_cast<size_t>(p)].partner)];
            histogram[depth]++;
        }
    }
    histogram[0] += parsed.header.trailing_frame_count;
    return histogram;
}

void print_encode_summary(const std::vector<std::uint8_t>& bytes) {
    const cawl::RateReport report = cawl::rate_report(bytes);
    const cawl::ParsedContainer parsed = cawl::read_container(bytes);
    std::cout << "total_bytes " << report.total_bytes << "\n";
    std::cout << "header_bytes " << report.header_bytes << "\n";
    std::cout << "v_bytes " << report.v_bytes << "\n";
    std::cout << "motion_bytes " << report.motion_bytes << "\n";
    std::cout << "base_layer_bytes " << report.base_layer_bytes << "\n";
    for (int level = parsed.header.i_max; level >= 1; --level)
        std::cout << "enhancement_" << level << "_bytes "
                  << report.enhancement_bytes[static_cast<size_t>(level)] << "\n";
    std::cout << "depth_histogram";
    for (const auto& [depth, count] : depth_histogram(parsed))
        std::cout << ' ' << depth << ':' << count;
    std::cout << "\n";
}

cawl::sample_t clamp_to_pixel(cawl::sample_t v) {
    return std::clamp<cawl::sample_t>(v, 0, 255);
}

// Preview frames can leave [0,255] under motion compensation; clamp them
// for the raw 8-bit rendering.
void write_preview(const std::vector<cawl::PreviewFrame>& preview, const std::string& path,
                   bool hold) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw cawl::IoError("cli", "cannot open '" + path + "' for writing");
    std::vector<std::uint8_t> buffer;
    for (const cawl::PreviewFrame& frame : preview) {
        buffer.resize(frame.frame.samples.size());
        for (size_t i = 0; i < buffer.size(); ++i)
            buffer[i] = static_cast<std::uint8_t>(clamp_to_pixel(frame.frame.samples[i]));
        const int repeats = hold ? frame.span : 1;
        for (int r = 0; r < repeats; ++r)
            if (!out.write(reinterpret_cast<const char*>(buffer.data()),
                           static_cast<std::streamsize>(buffer.size())))
                throw cawl::IoError("cli", "short write to '" + path + "'");
    }
    if (!hold) {
        std::ofstream index(path + ".idx", std::ios::trunc);
        index << "frame,position,span\n";
        for (size_t i = 0; i < preview.size(); ++i)
            index << i << ',' << preview[i].position << ',' << preview[i].span << "\n";
    }
}

struct AnalyzeRow {
    int level;
    std::string mode;
    double lambda;
};

int run(int argc, char** argv) {
    CLI::App app{"Content-adaptive temporal wavelet lifting codec for lossless scalable video"};
    app.require_subcommand(1);

    // encode
    std::string in_path;
    std::string out_path;
    int width = 0;
    int height = 0;
    int levels = 3;
    double lambda = 3.0;
    std::string mc = "none";
    int block_size = 8;
    int search_init = 8;
    int search_max = 64;
    bool force_uniform = false;
    std::string hp_distortion = "energy";
    int threads = 0;

    CLI::App* encode = app.add_subcommand("encode", "Encode raw 8-bit grayscale video");
    encode->add_option("input", in_path, "Raw input file")->required();
    encode->add_option("-o,--output", out_path, "Output container")->required();
    encode->add_option("--width", width, "Frame width in pixels")->required();
    encode->add_option("--height", height, "Frame height in pixels")->required();
    encode->add_option("--levels", levels, "Maximum decomposition depth i_max (1..8)");
    encode->add_option("--lambda", lambda, "Rate-distortion trade-off (>= 0)");
    encode->add_option("--mc", mc, "Motion compensation: none or block");
    encode->add_option("--block-size", block_size, "MC block size");
    encode->add_option("--search-init", search_init, "MC search range at level 1");
    encode->add_option("--search-max", search_max, "MC search range cap");
    encode->add_flag("--force-uniform", force_uniform, "Disable pruning (uniform lifting)");
    encode->add_option("--hp-distortion", hp_distortion, "HP distortion policy: energy or zero");
    encode->add_option("--threads", threads, "Worker threads (0 = auto)");

    // decode
    std::string dec_in;
    std::string dec_out;
    int keep = -1;
    bool hold = false;
    int dec_threads = 0;
    CLI::App* decode = app.add_subcommand("decode", "Decode a container to raw video");
    decode->add_option("input", dec_in, "Container file")->required();
    decode->add_option("-o,--output", dec_out, "Output raw file")->required();
    decode->add_option("--keep", keep, "Enhancement layers to use (default: all retained)");
    decode->add_flag("--hold", hold, "Repeat preview frames across their spans");
    decode->add_option("--threads", dec_threads, "Worker threads (0 = auto)");

    // extract
    std::string ext_in;
    std::string ext_out;
    int ext_keep = 0;
    CLI::App* extract = app.add_subcommand("extract", "Drop enhancement layers byte-exactly");
    extract->add_option("input", ext_in, "Container file")->required();
    extract->add_option("-o,--output", ext_out, "Output container")->required();
    extract->add_option("--keep", ext_keep, "Enhancement layers to keep")->required();

    // analyze
    std::string ana_in;
    std::string ana_out;
    int ana_width = 0;
    int ana_height = 0;
    std::vector<int> ana_levels{1, 2, 3, 4, 5, 6};
    std::vector<double> ana_lambdas{1.0, 3.0, 5.0, 7.0};
    std::vector<std::string> ana_mc{"none", "block"};
    bool ana_uniform = false;
    int ana_threads = 0;
    CLI::App* analyze = app.add_subcommand("analyze", "Rate/PSNR sweep over levels, lambda, mc");
    analyze->add_option("input", ana_in, "Raw input file")->required();
    analyze->add_option("-o,--output", ana_out, "CSV output (default: stdout)");
    analyze->add_option("--width", ana_width, "Frame width in pixels")->required();
    analyze->add_option("--height", ana_height, "Frame height in pixels")->required();
    analyze->add_option("--levels", ana_levels, "Decomposition depths to sweep")->delimiter(',');
    analyze->add_option("--lambdas", ana_lambdas, "Lambda values to sweep")->delimiter(',');
    analyze->add_option("--mc", ana_mc, "MC modes to sweep")->delimiter(',');
    analyze->add_flag("--force-uniform", ana_uniform, "Sweep with pruning disabled");
    analyze->add_option("--threads", ana_threads, "Worker threads (0 = auto)");

    CLI11_PARSE(app, argc, argv);

    if (encode->parsed()) {
        cawl::EncodeConfig config;
        config.i_max = levels;
        config.lambda = lambda;
        config.mc_mode = parse_mc_mode(mc);
        config.mc.block_size = block_size;
        config.mc.initial_search_range = search_init;
        config.mc.max_search_range = search_max;
        config.force_uniform = force_uniform;
        config.threads = threads;
        if (hp_distortion == "zero")
            config.hp_distortion = cawl::HpDistortionPolicy::Zero;
        else if (hp_distortion != "energy")
            throw cawl::ArgumentError("cli", "hp-distortion must be 'energy' or 'zero'");

        const cawl::Sequence seq = cawl::load_raw_sequence(in_path, width, height);
        if (cawl::effective_spatial_levels(width, height, cawl::spatial_levels) <
            cawl::spatial_levels)
            log_info("frames are small; spatial transform depth reduced below " +
                     std::to_string(cawl::spatial_levels));
        const std::vector<std::uint8_t> bytes = cawl::encode_to_bytes(seq, config);
        write_file(out_path, bytes);
        print_encode_summary(bytes);
        return 0;
    }

    if (decode->parsed()) {
        const cawl::ParsedContainer parsed = cawl::read_container(read_file(dec_in));
        const int keep_levels = keep < 0 ? parsed.header.kept_levels : keep;
        if (keep_levels == parsed.header.i_max) {
            const cawl::Sequence seq = cawl::decode_full(parsed, dec_threads);
            cawl::save_raw_sequence(seq, dec_out);
            log_info("lossless decode: " + std::to_string(seq.frame_count()) + " frames");
        } else {
            const auto preview = cawl::decode_preview(parsed, keep_levels, dec_threads);
            write_preview(preview, dec_out, hold);
            log_info("preview decode: " + std::to_string(preview.size()) + " frames at level " +
                     std::to_string(parsed.header.i_max - keep_levels));
        }
        return 0;
    }

    if (extract->parsed()) {
        write_file(ext_out, cawl::extract_temporal_layers(read_file(ext_in), ext_keep));
        return 0;
    }

    if (analyze->parsed()) {
        const cawl::Sequence seq = cawl::load_raw_sequence(ana_in, ana_width, ana_height);
        std::ostringstream csv;
        csv << cawl::csv_header() << "\n";
        for (int level : ana_levels) {
            for (const std::string& mode : ana_mc) {
                for (double l : ana_lambdas) {
                    cawl::EncodeConfig config;
                    config.i_max = level;
                    config.lambda = l;
                    config.mc_mode = parse_mc_mode(mode);
                    config.force_uniform = ana_uniform;
                    config.threads = ana_threads;
                    const std::vector<std::uint8_t> bytes = cawl::encode_to_bytes(seq, config);
                    const auto preview = cawl::decode_preview(cawl::read_container(bytes), 0);
                    const cawl::PsnrResult psnr = cawl::psnr_lp_t(preview, seq);
                    csv << cawl::csv_row(level, mode, l, bytes.size(), psnr) << "\n";
                    log_info("analyzed level " + std::to_string(level) + " mc " + mode +
                             " lambda " + std::to_string(l));
                }
            }
        }
        if (ana_out.empty()) {
            std::cout << csv.str();
        } else {
            std::ofstream out(ana_out, std::ios::trunc);
            if (!out)
                throw cawl::IoError("cli", "cannot open '" + ana_out + "' for writing");
            out << csv.str();
        }
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const cawl::Error& e) {
        std::cerr << "cawl error " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "cawl error: " << e.what() << "\n";
        return 1;
    }
}
