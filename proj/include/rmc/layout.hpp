#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rmc/error.hpp"
#include "rmc/geometry.hpp"

namespace rmc
{

struct Viewport
{
    double width = 950.0;
    double height = 950.0;
    double minContextExtent = 1.0;

    bool operator==(const Viewport&) const = default;
};

/// Per-index pixel extents along one matrix axis; offsets[i] is the start of
/// index i and offsets.back() the total.
struct AxisLayout
{
    std::vector<double> extents;
    std::vector<double> offsets;

    std::size_t count() const noexcept { return extents.size(); }
    double total() const noexcept { return offsets.empty() ? 0.0 : offsets.back(); }

    double span(std::size_t start, std::size_t length) const { return offsets[start + length] - offsets[start]; }
};

struct FocusSpan
{
    std::size_t start = 0;
    std::size_t length = 1;
    double requestedPixels = 0.0;
};

/// Bifocal solver: focus spans get their requested extent (split equally over
/// the covered indices), remaining indices share what is left uniformly. When
/// the context share would fall below `minContextExtent`, context indices are
/// pinned to it and focus requests are scaled proportionally into the rest.
inline AxisLayout solve_axis(std::size_t count, std::vector<FocusSpan> spans, double extent,
                             double minContextExtent = 1.0)
{
    if (count == 0)
        throw Error(ErrorCode::Bounds, "axis has no indices");
    if (!(extent > 0.0) || !(minContextExtent > 0.0))
        throw Error(ErrorCode::BadPayload, "viewport extent and context minimum must be positive");
    std::sort(spans.begin(), spans.end(), [](const FocusSpan& a, const FocusSpan& b) { return a.start < b.start; });

    std::size_t focusIndices = 0;
    double requested = 0.0;
    for (std::size_t s = 0; s < spans.size(); ++s) {
        const auto& sp = spans[s];
        if (sp.length == 0 || sp.start + sp.length > count)
            throw Error(ErrorCode::Bounds, "focus span outside axis");
        if (!(sp.requestedPixels > 0.0))
            throw Error(ErrorCode::BadPayload, "focus request must be positive");
        if (s > 0 && spans[s - 1].start + spans[s - 1].length > sp.start)
            throw Error(ErrorCode::Overlap, "focus spans overlap");
        focusIndices += sp.length;
        requested += sp.requestedPixels;
    }

    const std::size_t context = count - focusIndices;
    double contextExtent = 0.0;
    double focusScale = 1.0;
    if (spans.empty()) {
        contextExtent = extent / static_cast<double>(count);
    } else if (context == 0) {
        focusScale = extent / requested;
    } else {
        contextExtent = (extent - requested) / static_cast<double>(context);
        if (contextExtent < minContextExtent) {
            double available = extent - minContextExtent * static_cast<double>(context);
            if (available <= 0.0) {
                // Not even the context minimum fits: fall back to uniform.
                spans.clear();
                contextExtent = extent / static_cast<double>(count);
            } else {
                contextExtent = minContextExtent;
                focusScale = available / requested;
            }
        }
    }

    AxisLayout layout;
    layout.extents.assign(count, contextExtent);
    for (const auto& sp : spans) {
        double each = sp.requestedPixels * focusScale / static_cast<double>(sp.length);
        for (std::size_t i = sp.start; i < sp.start + sp.length; ++i)
            layout.extents[i] = each;
    }
    layout.offsets.resize(count + 1);
    layout.offsets[0] = 0.0;
    for (std::size_t i = 0; i < count; ++i)
        layout.offsets[i + 1] = layout.offsets[i] + layout.extents[i];
    return layout;
}

struct FocusRequest
{
    int id = 0;
    Region region;
    double width = 0.0;  // requested pixels along columns
    double height = 0.0; // requested pixels along rows
};

struct MatrixLayout
{
    AxisLayout rows;
    AxisLayout cols;
    std::map<int, Rect> rmcRects; // relative to the matrix origin

    Rect cell_rect(std::size_t r, std::size_t c) const
    {
        return {cols.offsets[c], rows.offsets[r], cols.extents[c], rows.extents[r]};
    }

    Rect region_rect(const Region& reg) const
    {
        return {cols.offsets[reg.col0], rows.offsets[reg.row0], cols.span(reg.col0, reg.cols),
                rows.span(reg.row0, reg.rows)};
    }
};

/// Solves both axes for an n x n matrix. Focus regions must be pairwise
/// disjoint in their row ranges and in their column ranges.
inline MatrixLayout solve_layout(std::size_t n, const std::vector<FocusRequest>& requests, const Viewport& vp)
{
    if (!(vp.width > 0.0) || !(vp.height > 0.0))
        throw Error(ErrorCode::BadPayload, "viewport must have positive size");
    std::vector<FocusSpan> rowSpans, colSpans;
    for (std::size_t a = 0; a < requests.size(); ++a) {
        const auto& ra = requests[a].region;
        if (ra.rows == 0 || ra.cols == 0 || ra.row_end() > n || ra.col_end() > n)
            throw Error(ErrorCode::Bounds, "region outside matrix");
        for (std::size_t b = 0; b < a; ++b) {
            const auto& rb = requests[b].region;
            if (ranges_overlap(ra.row0, ra.rows, rb.row0, rb.rows) || ranges_overlap(ra.col0, ra.cols, rb.col0, rb.cols))
                throw Error(ErrorCode::Overlap, "regions share rows or columns");
        }
        rowSpans.push_back({ra.row0, ra.rows, requests[a].height});
        colSpans.push_back({ra.col0, ra.cols, requests[a].width});
    }
    MatrixLayout out;
    out.rows = solve_axis(n, std::move(rowSpans), vp.height, vp.minContextExtent);
    out.cols = solve_axis(n, std::move(colSpans), vp.width, vp.minContextExtent);
    for (const auto& r : requests)
        out.rmcRects[r.id] = out.region_rect(r.region);
    return out;
}

enum class Lod
{
    Pixel,
    Miniature,
    Compact,
    Medium
};

inline constexpr double kMiniatureBreakpoint = 16.0;
inline constexpr double kCompactBreakpoint = 48.0;
inline constexpr double kMediumBreakpoint = 120.0;

inline Lod lod_for_size(double w, double h) noexcept
{
    double s = std::min(w, h);
    if (s < kMiniatureBreakpoint)
        return Lod::Pixel;
    if (s < kCompactBreakpoint)
        return Lod::Miniature;
    if (s < kMediumBreakpoint)
        return Lod::Compact;
    return Lod::Medium;
}

inline std::string_view to_string(Lod lod) noexcept
{
    switch (lod) {
    case Lod::Pixel: return "pixel";
    case Lod::Miniature: return "miniature";
    case Lod::Compact: return "compact";
    case Lod::Medium: return "medium";
    }
    return "pixel";
}

} // namespace rmc
