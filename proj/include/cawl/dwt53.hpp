#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "cawl/error.hpp"
#include "cawl/frame.hpp"

namespace cawl {

namespace detail {

// Whole-sample symmetric reflection into [0, n).
inline int mirror_index(int t, int n) {
    if (t < 0)
        return -t;
    if (t >= n)
        return 2 * (n - 1) - t;
    return t;
}

// Reversible 5/3 lifting on one line, in place, then deinterleaved so the
// first ceil(n/2) entries are the lowpass half.
inline void dwt53_line_forward(std::vector<sample_t>& x, std::vector<sample_t>& scratch) {
    const int n = static_cast<int>(x.size());
    if (n < 2)
        return;
    for (int j = 1; j < n; j += 2)
        x[j] -= (x[j - 1] + x[static_cast<size_t>(mirror_index(j + 1, n))]) >> 1;
    for (int j = 0; j < n; j += 2)
        x[j] += (x[static_cast<size_t>(mirror_index(j - 1, n))] +
                 x[static_cast<size_t>(mirror_index(j + 1, n))] + 2) >> 2;

    scratch.resize(x.size());
    const int low_count = (n + 1) / 2;
    for (int j = 0; j < n; ++j)
        scratch[static_cast<size_t>(j % 2 == 0 ? j / 2 : low_count + j / 2)] = x[static_cast<size_t>(j)];
    x.swap(scratch);
}

inline void dwt53_line_inverse(std::vector<sample_t>& x, std::vector<sample_t>& scratch) {
    const int n = static_cast<int>(x.size());
    if (n < 2)
        return;
    scratch.resize(x.size());
    const int low_count = (n + 1) / 2;
    for (int j = 0; j < n; ++j)
        scratch[static_cast<size_t>(j)] = x[static_cast<size_t>(j % 2 == 0 ? j / 2 : low_count + j / 2)];
    x.swap(scratch);

    for (int j = 0; j < n; j += 2)
        x[j] -= (x[static_cast<size_t>(mirror_index(j - 1, n))] +
                 x[static_cast<size_t>(mirror_index(j + 1, n))] + 2) >> 2;
    for (int j = 1; j < n; j += 2)
        x[j] += (x[j - 1] + x[static_cast<size_t>(mirror_index(j + 1, n))]) >> 1;
}

}  // namespace detail

// How many levels actually apply: each level needs something left to split.
inline int effective_spatial_levels(int width, int height, int requested) {
    int levels = 0;
    int w = width;
    int h = height;
    while (levels < requested && (w >= 2 || h >= 2)) {
        w = (w + 1) / 2;
        h = (h + 1) / 2;
        ++levels;
    }
    return levels;
}

struct SubbandRect {
    int x0 = 0;
    int y0 = 0;
    int width = 0;
    int height = 0;

    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

// Multi-level 2-D decomposition in the packed (Mallat) layout: the deepest
// LL block sits top-left, each level's HL/LH/HH around it. Coefficient
// count always equals the pixel count.
struct SpatialDecomposition {
    int width = 0;
    int height = 0;
    int levels = 0;
    std::vector<sample_t> coeffs;  // row-major over the full width

    SubbandRect ll_rect() const {
        int w = width;
        int h = height;
        for (int l = 0; l < levels; ++l) {
            w = (w + 1) / 2;
            h = (h + 1) / 2;
        }
        return {0, 0, w, h};
    }

    // level runs 1 (shallowest) .. levels (deepest)
    SubbandRect detail_rect(int level, char which) const {
        int w = width;
        int h = height;
        for (int l = 0; l < level - 1; ++l) {
            w = (w + 1) / 2;
            h = (h + 1) / 2;
        }
        const int low_w = (w + 1) / 2;
        const int low_h = (h + 1) / 2;
        switch (which) {
            case 'H':  // HL: high in x, low in y
                return {low_w, 0, w - low_w, low_h};
            case 'L':  // LH: low in x, high in y
                return {0, low_h, low_w, h - low_h};
            default:   // HH
                return {low_w, low_h, w - low_w, h - low_h};
        }
    }

    std::vector<sample_t> gather(const SubbandRect& rect) const {
        std::vector<sample_t> out;
        out.reserve(rect.pixel_count());
        for (int y = rect.y0; y < rect.y0 + rect.height; ++y)
            for (int x = rect.x0; x < rect.x0 + rect.width; ++x)
                out.push_back(coeffs[static_cast<size_t>(y) * width + x]);
        return out;
    }

    void scatter(const SubbandRect& rect, const std::vector<sample_t>& values) {
        size_t i = 0;
        for (int y = rect.y0; y < rect.y0 + rect.height; ++y)
            for (int x = rect.x0; x < rect.x0 + rect.width; ++x)
                coeffs[static_cast<size_t>(y) * width + x] = values[i++];
    }
};

inline SpatialDecomposition dwt53_forward(const CoefficientFrame& frame, int requested_levels = 4) {
    if (frame.width <= 0 || frame.height <= 0 || frame.samples.empty())
        throw ArgumentError("spatial", "cannot transform an empty frame");
    if (requested_levels < 0)
        throw ArgumentError("spatial", "level count must be non-negative");

    SpatialDecomposition out;
    out.width = frame.width;
    out.height = frame.height;
    out.levels = effective_spatial_levels(frame.width, frame.height, requested_levels);
    out.coeffs = frame.samples;

    std::vector<sample_t> line;
    std::vector<sample_t> scratch;
    int w = frame.width;
    int h = frame.height;
    for (int level = 0; level < out.levels; ++level) {
        if (w >= 2) {
            line.resize(static_cast<size_t>(w));
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x)
                    line[static_cast<size_t>(x)] = out.coeffs[static_cast<size_t>(y) * out.width + x];
                detail::dwt53_line_forward(line, scratch);
                for (int x = 0; x < w; ++x)
                    out.coeffs[static_cast<size_t>(y) * out.width + x] = line[static_cast<size_t>(x)];
            }
        }
        if (h >= 2) {
            line.resize(static_cast<size_t>(h));
            for (int x = 0; x < w; ++x) {
                for (int y = 0; y < h; ++y)
                    line[static_cast<size_t>(y)] = out.coeffs[static_cast<size_t>(y) * out.width + x];
                detail::dwt53_line_forward(line, scratch);
                for (int y = 0; y < h; ++y)
                    out.coeffs[static_cast<size_t>(y) * out.width + x] = line[static_cast<size_t>(y)];
            }
        }
        w = (w + 1) / 2;
        h = (h + 1) / 2;
    }
    return out;
}

inline CoefficientFrame dwt53_inverse(const SpatialDecomposition& decomp, SubbandKind kind) {
    if (decomp.width <= 0 || decomp.height <= 0)
        throw ArgumentError("spatial", "cannot invert an empty decomposition");

    CoefficientFrame out(decomp.width, decomp.height, kind);
    out.samples = decomp.coeffs;

    // Region dimensions per level, deepest applied first on the way back.
    std::vector<std::pair<int, int>> dims;
    int w = decomp.width;
    int h = decomp.height;
    for (int level = 0; level < decomp.levels; ++level) {
        dims.emplace_back(w, h);
        w = (w + 1) / 2;
        h = (h + 1) / 2;
    }

    std::vector<sample_t> line;
    std::vector<sample_t> scratch;
    for (int level = decomp.levels - 1; level >= 0; --level) {
        const auto [cw, ch] = dims[static_cast<size_t>(level)];
        if (ch >= 2) {
            line.resize(static_cast<size_t>(ch));
            for (int x = 0; x < cw; ++x) {
                for (int y = 0; y < ch; ++y)
                    line[static_cast<size_t>(y)] = out.samples[static_cast<size_t>(y) * out.width + x];
                detail::dwt53_line_inverse(line, scratch);
                for (int y = 0; y < ch; ++y)
                    out.samples[static_cast<size_t>(y) * out.width + x] = line[static_cast<size_t>(y)];
            }
        }
        if (cw >= 2) {
            line.resize(static_cast<size_t>(cw));
            for (int y = 0; y < ch; ++y) {
                for (int x = 0; x < cw; ++x)
                    line[static_cast<size_t>(x)] = out.samples[static_cast<size_t>(y) * out.width + x];
                detail::dwt53_line_inverse(line, scratch);
                for (int x = 0; x < cw; ++x)
                    out.samples[static_cast<size_t>(y) * out.width + x] = line[static_cast<size_t>(x)];
            }
        }
    }
    return out;
}

}  // namespace cawl
