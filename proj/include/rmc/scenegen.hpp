#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rmc/color.hpp"
#include "rmc/error.hpp"
#include "rmc/graph.hpp"
#include "rmc/layout.hpp"
#include "rmc/ordering.hpp"
#include "rmc/render.hpp"
#include "rmc/rmc_state.hpp"
#include "rmc/scene.hpp"
#include "rmc/similarity.hpp"

namespace rmc
{

inline constexpr double kLabelMargin = 70.0;
inline constexpr double kMinLabelExtent = 7.0;

/// Ordered matrix over a graph: lower-left half shows edges, upper-right half
/// node similarity.
struct MatrixModel
{
    const MultivariateGraph* graph = nullptr;
    const SimilarityMatrix* similarity = nullptr;
    const Ordering* ordering = nullptr;
    ColorScheme scheme = ColorScheme::Default;

    std::size_t size() const noexcept { return ordering ? ordering->size() : 0; }

    ColorScale similarity_scale() const { return ColorScale::similarity(scheme); }
    ColorScale weight_scale() const { return ColorScale::edge_weight(scheme, graph->weight_def().observedMax); }

    Color cell_color(std::size_t r, std::size_t c) const
    {
        if (r == c)
            return kDiagonalColor;
        std::size_t a = ordering->node_at(r), b = ordering->node_at(c);
        if (r > c) {
            auto e = graph->find_edge(a, b);
            return weight_scale()(e ? std::optional<double>(graph->edges()[*e].weight) : std::nullopt);
        }
        return similarity_scale()(similarity->at(a, b));
    }

    ObjectRef cell_ref(std::size_t r, std::size_t c) const
    {
        const auto& nodes = graph->nodes();
        std::size_t a = ordering->node_at(r), b = ordering->node_at(c);
        if (r == c)
            return ObjectRef::node(nodes[a].id);
        if (r > c)
            if (auto e = graph->find_edge(a, b))
                return ObjectRef::edge(graph->edges()[*e].key);
        return ObjectRef::pair(nodes[a].id, nodes[b].id);
    }
};

struct HighlightSet
{
    std::set<std::string> nodes;
    std::set<EdgeKey> edges;

    bool empty() const noexcept { return nodes.empty() && edges.empty(); }

    bool contains(const ObjectRef& ref) const
    {
        switch (ref.kind) {
        case ObjectRef::Kind::Node: return nodes.count(ref.first) > 0;
        case ObjectRef::Kind::Edge: return edges.count(EdgeKey{ref.first, ref.second}) > 0;
        case ObjectRef::Kind::Pair: return nodes.count(ref.first) > 0 && nodes.count(ref.second) > 0;
        }
        return false;
    }

    bool operator==(const HighlightSet&) const = default;
};

/// Node: the node itself. Edge: the edge and both endpoints. Pair: both nodes
/// and the edge between them if there is one.
inline HighlightSet highlight_resolve(const MultivariateGraph& g, const ObjectRef& hovered)
{
    HighlightSet set;
    switch (hovered.kind) {
    case ObjectRef::Kind::Node:
        g.node_index(hovered.first);
        set.nodes.insert(hovered.first);
        break;
    case ObjectRef::Kind::Edge: {
        auto key = EdgeKey::of(hovered.first, hovered.second);
        g.edge_index(key);
        set.edges.insert(key);
        set.nodes.insert(key.first);
        set.nodes.insert(key.second);
        break;
    }
    case ObjectRef::Kind::Pair: {
        g.node_index(hovered.first);
        g.node_index(hovered.second);
        set.nodes.insert(hovered.first);
        set.nodes.insert(hovered.second);
        if (auto e = g.find_edge(EdgeKey::of(hovered.first, hovered.second)))
            set.edges.insert(g.edges()[*e].key);
        break;
    }
    }
    return set;
}

/// Matrix cell a hover target sits on: the diagonal for nodes, the adjacency
/// half for edges, and the given (row, column) for pairs.
inline std::pair<std::size_t, std::size_t> hover_cell(const MultivariateGraph& g, const Ordering& order,
                                                      const ObjectRef& hovered)
{
    auto pos = order.positions();
    std::size_t a = pos[g.node_index(hovered.first)];
    if (hovered.kind == ObjectRef::Kind::Node)
        return {a, a};
    std::size_t b = pos[g.node_index(hovered.second)];
    if (hovered.kind == ObjectRef::Kind::Edge)
        return {std::max(a, b), std::min(a, b)};
    return {a, b};
}

/// Global zoom lives in RmcState; pan offsets are in zoomed matrix pixels.
struct ViewTransform
{
    double panX = 0.0;
    double panY = 0.0;

    bool operator==(const ViewTransform&) const = default;
};

/// Screen placement of the zoomed matrix: matrix pixel (x, y) is drawn at
/// (originX + x, originY + y) and only the window is visible.
struct ScreenMap
{
    double originX = kLabelMargin;
    double originY = kLabelMargin;
    Rect window;

    Rect to_screen(const Rect& r) const { return {originX + r.x, originY + r.y, r.w, r.h}; }

    std::optional<Rect> clip(const Rect& r) const
    {
        double x0 = std::max(r.x, window.x), y0 = std::max(r.y, window.y);
        double x1 = std::min(r.right(), window.right()), y1 = std::min(r.bottom(), window.bottom());
        if (x1 - x0 <= 1e-9 || y1 - y0 <= 1e-9)
            return std::nullopt;
        return Rect{x0, y0, x1 - x0, y1 - y0};
    }

    bool fully_visible(const Rect& r) const { return window.contains(r, 1e-6); }
};

inline ScreenMap screen_map(const Viewport& vp, const ViewTransform& view, double zoom)
{
    double maxX = std::max(0.0, vp.width * zoom - vp.width);
    double maxY = std::max(0.0, vp.height * zoom - vp.height);
    ScreenMap m;
    m.originX = kLabelMargin - std::clamp(view.panX, 0.0, maxX);
    m.originY = kLabelMargin - std::clamp(view.panY, 0.0, maxY);
    m.window = {kLabelMargin, kLabelMargin, vp.width, vp.height};
    return m;
}

namespace detail
{

inline void emphasize(Mark& m, const HighlightSet& hl)
{
    if (hl.empty() || !m.objectRef || !hl.contains(*m.objectRef))
        return;
    if (m.kind() == MarkKind::Text) {
        m.style.fill = kHighlight.hex();
        return;
    }
    m.style.stroke = kHighlight.hex();
    m.style.strokeWidth = std::max(m.style.strokeWidth, 2.0);
    m.style.opacity = 1.0;
}

inline Color average_color(const MatrixModel& model, const Region& reg)
{
    double r = 0, g = 0, b = 0;
    for (std::size_t i = reg.row0; i < reg.row_end(); ++i)
        for (std::size_t j = reg.col0; j < reg.col_end(); ++j) {
            Color c = model.cell_color(i, j);
            r += c.r;
            g += c.g;
            b += c.b;
        }
    double n = static_cast<double>(reg.cell_count());
    auto q = [n](double v) { return static_cast<std::uint8_t>(std::lround(v / n)); };
    return {q(r), q(g), q(b)};
}

inline Mark cell_mark(const Rect& r, Color fill, ObjectRef ref)
{
    Mark m;
    m.geometry = RectGeom{r.x, r.y, r.w, r.h};
    m.style.fill = fill.hex();
    m.role = MarkRole::Cell;
    m.objectRef = std::move(ref);
    m.zOrder = zorder::kCell;
    return m;
}

} // namespace detail

/// Overview cells outside RMC regions, row and column labels, and cross-hair
/// guides for the hovered cell.
inline std::vector<Mark> base_matrix_scene(const MatrixModel& model, const MatrixLayout& layout, const RmcState& rmcs,
                                           const ScreenMap& screen, const HighlightSet& hl,
                                           std::optional<std::pair<std::size_t, std::size_t>> hoverCell)
{
    const std::size_t n = model.size();
    const auto& g = *model.graph;
    std::vector<Mark> out;
    out.reserve(n * n + 2 * n + 2);

    std::vector<bool> covered(n * n, false);
    for (const auto& rmc : rmcs.rmcs())
        for (std::size_t r = rmc.region.row0; r < rmc.region.row_end(); ++r)
            for (std::size_t c = rmc.region.col0; c < rmc.region.col_end(); ++c)
                covered[r * n + c] = true;

    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            if (covered[r * n + c])
                continue;
            auto rect = screen.clip(screen.to_screen(layout.cell_rect(r, c)));
            if (!rect)
                continue;
            out.push_back(detail::cell_mark(*rect, model.cell_color(r, c), model.cell_ref(r, c)));
        }

    // Labels for rows/columns wide enough to read, or highlighted.
    auto label = [&](std::size_t pos, bool row) {
        const auto& axis = row ? layout.rows : layout.cols;
        const auto& node = g.nodes()[model.ordering->node_at(pos)];
        bool lit = hl.nodes.count(node.id) > 0;
        double extent = axis.extents[pos];
        if (extent < kMinLabelExtent && !lit)
            return;
        double center = (row ? screen.originY : screen.originX) + axis.offsets[pos] + extent / 2.0;
        double lo = row ? screen.window.y : screen.window.x;
        double hi = lo + (row ? screen.window.h : screen.window.w);
        if (center < lo || center > hi)
            return;
        double fontSize = std::clamp(extent * 0.9, 6.0, 11.0);
        Mark m;
        if (row)
            m.geometry = TextGeom{kLabelMargin - 3.0, center + fontSize * 0.35, node.label, TextAnchor::End, 0.0};
        else
            m.geometry = TextGeom{center + fontSize * 0.35, kLabelMargin - 3.0, node.label, TextAnchor::Start, -90.0};
        m.style.fill = kDarkGray.hex();
        m.style.fontSize = fontSize;
        m.role = MarkRole::Label;
        m.objectRef = ObjectRef::node(node.id);
        m.zOrder = zorder::kMatrixLabel;
        out.push_back(std::move(m));
    };
    for (std::size_t p = 0; p < n; ++p)
        label(p, true);
    for (std::size_t p = 0; p < n; ++p)
        label(p, false);

    if (hoverCell) {
        auto [hr, hc] = *hoverCell;
        double y = screen.originY + layout.rows.offsets[hr] + layout.rows.extents[hr] / 2.0;
        double x = screen.originX + layout.cols.offsets[hc] + layout.cols.extents[hc] / 2.0;
        const auto& w = screen.window;
        auto guide = [&](LineGeom line) {
            Mark m;
            m.geometry = line;
            m.style.stroke = kHighlight.hex();
            m.style.strokeWidth = 1.0;
            m.style.opacity = 0.6;
            m.role = MarkRole::Guide;
            m.zOrder = zorder::kGuide;
            out.push_back(std::move(m));
        };
        if (y >= w.y && y <= w.bottom())
            guide({w.x, y, w.right(), y});
        if (x >= w.x && x <= w.right())
            guide({x, w.y, x, w.bottom()});
    }
    return out;
}

struct SceneInput
{
    MatrixModel model;
    const RmcState* rmcs = nullptr;
    ViewTransform view;
    std::optional<ObjectRef> hover;
    std::uint64_t seed = kDefaultLayoutSeed;
};

/// Marks of one RMC. Fully visible RMCs get their embedded visualizations;
/// partly visible ones fall back to clipped residue rects.
inline std::vector<Mark> rmc_marks(const SceneInput& in, const Rmc& rmc, const MatrixLayout& layout,
                                   const ScreenMap& screen)
{
    const auto& model = in.model;
    const auto& g = *model.graph;
    const auto& order = *model.ordering;
    std::vector<Mark> out;

    auto embed = [&](const Rect& rect, ObjectSet objects, Color residue, std::optional<ObjectRef> cellRef,
                     std::optional<ObjectSet> nodeLinkNodes) {
        if (!screen.fully_visible(rect)) {
            auto clipped = screen.clip(rect);
            if (!clipped)
                return;
            Mark m = detail::cell_mark(*clipped, residue, cellRef.value_or(ObjectRef{}));
            if (!cellRef) {
                m.objectRef.reset();
                m.role = MarkRole::Background;
            }
            m.zOrder = zorder::kBackground;
            out.push_back(std::move(m));
            return;
        }
        EmbeddedInput e;
        e.graph = &g;
        e.vis = rmc.vis;
        e.objects = std::move(objects);
        e.rect = rect;
        e.lod = lod_for_size(rect.w, rect.h);
        e.residue = residue;
        e.cellRef = std::move(cellRef);
        e.nodeLinkNodes = std::move(nodeLinkNodes);
        e.seed = in.seed;
        auto marks = render_embedded(e);
        out.insert(out.end(), std::make_move_iterator(marks.begin()), std::make_move_iterator(marks.end()));
    };

    if (rmc.where == Where::UnitGrid) {
        for (std::size_t r = rmc.region.row0; r < rmc.region.row_end(); ++r)
            for (std::size_t c = rmc.region.col0; c < rmc.region.col_end(); ++c) {
                Rect rect = screen.to_screen(layout.cell_rect(r, c));
                auto objects = unit_cell_objects(r, c, rmc.what, g, order);
                std::optional<ObjectSet> nl;
                if (rmc.vis.kind == VisKind::NodeLink)
                    nl = unit_cell_objects(r, c, What::Nodes, g, order);
                embed(rect, std::move(objects), model.cell_color(r, c), model.cell_ref(r, c), std::move(nl));
            }
    } else {
        Rect rect = screen.to_screen(layout.region_rect(rmc.region));
        std::optional<ObjectRef> ref;
        if (rmc.region.cell_count() == 1)
            ref = model.cell_ref(rmc.region.row0, rmc.region.col0);
        std::optional<ObjectSet> nl;
        if (rmc.vis.kind == VisKind::NodeLink)
            nl = collect_objects(rmc.region, What::Nodes, g, order);
        embed(rect, collect_objects(rmc, g, order), detail::average_color(model, rmc.region), std::move(ref),
              std::move(nl));
    }
    return out;
}

/// Full scene: overview matrix, every RMC, highlighting. Pure function of the
/// input; marks are ordered by z then construction order.
inline Scene compose_scene(const SceneInput& in)
{
    if (!in.model.graph || !in.model.similarity || !in.model.ordering || !in.rmcs)
        throw Error(ErrorCode::NoSession, "scene input incomplete");
    const auto& rmcs = *in.rmcs;
    const auto& vp = rmcs.viewport();
    Scene scene;
    scene.width = kLabelMargin + vp.width;
    scene.height = kLabelMargin + vp.height;
    if (in.model.size() == 0)
        return scene;

    MatrixLayout layout = rmcs.layout();
    ScreenMap screen = screen_map(vp, in.view, rmcs.zoom());
    HighlightSet hl;
    std::optional<std::pair<std::size_t, std::size_t>> hoverCell;
    if (in.hover) {
        hl = highlight_resolve(*in.model.graph, *in.hover);
        hoverCell = hover_cell(*in.model.graph, *in.model.ordering, *in.hover);
    }

    scene.marks = base_matrix_scene(in.model, layout, rmcs, screen, hl, hoverCell);
    for (const auto& rmc : rmcs.rmcs()) {
        auto marks = rmc_marks(in, rmc, layout, screen);
        scene.marks.insert(scene.marks.end(), std::make_move_iterator(marks.begin()),
                           std::make_move_iterator(marks.end()));
    }
    for (auto& m : scene.marks)
        detail::emphasize(m, hl);
    scene.finalize();
    return scene;
}

} // namespace rmc
