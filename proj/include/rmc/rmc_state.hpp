#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rmc/error.hpp"
#include "rmc/geometry.hpp"
#include "rmc/graph.hpp"
#include "rmc/layout.hpp"
#include "rmc/ordering.hpp"

namespace rmc
{

enum class Where
{
    UnitGrid,
    Meta
};

enum class What
{
    Nodes,
    Edges
};

enum class VisKind
{
    Bar,
    Star,
    GroupedBar,
    OverlaidStar,
    DiffBar,
    ParallelCoordinates,
    NodeLink
};

inline std::string_view to_string(VisKind k) noexcept
{
    switch (k) {
    case VisKind::Bar: return "bar";
    case VisKind::Star: return "star";
    case VisKind::GroupedBar: return "grouped-bar";
    case VisKind::OverlaidStar: return "overlaid-star";
    case VisKind::DiffBar: return "diff-bar";
    case VisKind::ParallelCoordinates: return "parallel-coordinates";
    case VisKind::NodeLink: return "node-link";
    }
    return "bar";
}

inline VisKind parse_vis_kind(std::string_view s)
{
    for (auto k : {VisKind::Bar, VisKind::Star, VisKind::GroupedBar, VisKind::OverlaidStar, VisKind::DiffBar,
                   VisKind::ParallelCoordinates, VisKind::NodeLink})
        if (to_string(k) == s)
            return k;
    throw Error(ErrorCode::BadPayload, "unknown visualization '" + std::string(s) + "'");
}

inline std::string_view to_string(Where w) noexcept { return w == Where::Meta ? "meta" : "unit-grid"; }
inline std::string_view to_string(What w) noexcept { return w == What::Nodes ? "nodes" : "edges"; }

struct VisSpec
{
    VisKind kind = VisKind::Bar;
    std::vector<std::string> shownAttributes;

    bool operator==(const VisSpec&) const = default;
};

/// Objects an RMC (or one of its unit cells) represents: node indices or edge
/// indices into the graph.
struct ObjectSet
{
    ObjectKind kind = ObjectKind::Node;
    std::vector<std::size_t> ids;

    std::size_t size() const noexcept { return ids.size(); }
    bool operator==(const ObjectSet&) const = default;
};

struct Rmc
{
    int id = 0;
    Region region;
    Where where = Where::Meta;
    What what = What::Nodes;
    VisSpec vis;
    double requestedWidth = 0.0;
    double requestedHeight = 0.0;
    // Shown attributes of the other object kind, restored by switch_what.
    std::vector<std::string> otherAttributes;

    ObjectKind object_kind() const noexcept { return what == What::Nodes ? ObjectKind::Node : ObjectKind::Edge; }
    bool operator==(const Rmc&) const = default;
};

/// Nodes: row nodes then column nodes in display order, deduplicated. Edges:
/// existing edges under the region's cells in row-major order, mirrored into
/// canonical form and deduplicated.
inline ObjectSet collect_objects(const Region& region, What what, const MultivariateGraph& g, const Ordering& order)
{
    ObjectSet set;
    if (what == What::Nodes) {
        set.kind = ObjectKind::Node;
        std::vector<bool> seen(g.node_count(), false);
        auto add = [&](std::size_t pos) {
            auto idx = order.node_at(pos);
            if (!seen[idx]) {
                seen[idx] = true;
                set.ids.push_back(idx);
            }
        };
        for (std::size_t r = region.row0; r < region.row_end(); ++r)
            add(r);
        for (std::size_t c = region.col0; c < region.col_end(); ++c)
            add(c);
        return set;
    }
    set.kind = ObjectKind::Edge;
    std::vector<bool> seen(g.edge_count(), false);
    for (std::size_t r = region.row0; r < region.row_end(); ++r)
        for (std::size_t c = region.col0; c < region.col_end(); ++c) {
            auto e = g.find_edge(order.node_at(r), order.node_at(c));
            if (e && !seen[*e]) {
                seen[*e] = true;
                set.ids.push_back(*e);
            }
        }
    return set;
}

inline ObjectSet collect_objects(const Rmc& rmc, const MultivariateGraph& g, const Ordering& order)
{
    return collect_objects(rmc.region, rmc.what, g, order);
}

/// Objects of a single unit cell: the (row, column) node pair, a single node
/// on the diagonal, or the edge under the cell (possibly none).
inline ObjectSet unit_cell_objects(std::size_t r, std::size_t c, What what, const MultivariateGraph& g,
                                   const Ordering& order)
{
    ObjectSet set;
    if (what == What::Nodes) {
        set.kind = ObjectKind::Node;
        set.ids.push_back(order.node_at(r));
        if (r != c)
            set.ids.push_back(order.node_at(c));
        return set;
    }
    set.kind = ObjectKind::Edge;
    if (auto e = g.find_edge(order.node_at(r), order.node_at(c)))
        set.ids.push_back(*e);
    return set;
}

namespace detail
{

inline bool needs_two_objects(VisKind k, Where where) noexcept
{
    switch (k) {
    case VisKind::DiffBar:
    case VisKind::OverlaidStar: return true;
    case VisKind::GroupedBar: return where == Where::UnitGrid;
    default: return false;
    }
}

} // namespace detail

/// Empty when `vis` can be shown by `rmc`, otherwise the reason.
inline std::optional<std::string> incompatibility(const VisSpec& vis, const Rmc& rmc, const MultivariateGraph& g,
                                                  const Ordering& order)
{
    if (vis.shownAttributes.empty())
        return std::string("no attributes shown");
    for (const auto& a : vis.shownAttributes)
        if (!g.has_attribute(rmc.object_kind(), a))
            return "attribute '" + a + "' does not exist for " + std::string(to_string(rmc.what));
    if ((vis.kind == VisKind::Star || vis.kind == VisKind::OverlaidStar) && vis.shownAttributes.size() < 3)
        return std::string(to_string(vis.kind)) + " needs at least 3 attributes, got " +
               std::to_string(vis.shownAttributes.size());
    if (detail::needs_two_objects(vis.kind, rmc.where)) {
        if (rmc.where == Where::Meta) {
            auto n = collect_objects(rmc, g, order).size();
            if (n != 2)
                return std::string(to_string(vis.kind)) + " needs exactly 2 objects, got " + std::to_string(n);
        } else {
            for (std::size_t r = rmc.region.row0; r < rmc.region.row_end(); ++r)
                for (std::size_t c = rmc.region.col0; c < rmc.region.col_end(); ++c) {
                    auto n = unit_cell_objects(r, c, rmc.what, g, order).size();
                    if (n != 2)
                        return std::string(to_string(vis.kind)) + " needs exactly 2 objects per unit cell, cell (" +
                               std::to_string(r) + "," + std::to_string(c) + ") has " + std::to_string(n);
                }
        }
    }
    return std::nullopt;
}

enum class AxisMode
{
    Both,
    XOnly,
    YOnly
};

enum class RegionEdge
{
    Top,
    Bottom,
    Left,
    Right
};

struct ScaleRequest
{
    enum class Mode
    {
        Absolute,
        Delta,
        Factor
    };
    Mode mode = Mode::Absolute;
    double width = 0.0;  // absolute/delta pixels, or factor (both axes use `width` for Factor)
    double height = 0.0;
    AxisMode axis = AxisMode::Both;
};

/// Lifecycle of all RMCs in one matrix. Mutators either complete or throw
/// before changing anything.
class RmcState
{
public:
    RmcState() = default;
    RmcState(std::size_t n, Viewport vp) : n_(n), viewport_(vp) {}

    std::size_t matrix_size() const noexcept { return n_; }
    const Viewport& viewport() const noexcept { return viewport_; }
    double zoom() const noexcept { return zoom_; }
    const std::vector<Rmc>& rmcs() const noexcept { return rmcs_; }

    // Matrix extents after global zoom.
    double axis_extent_x() const noexcept { return viewport_.width * zoom_; }
    double axis_extent_y() const noexcept { return viewport_.height * zoom_; }

    void set_zoom(double z)
    {
        if (!(z >= 1.0) || !std::isfinite(z))
            throw Error(ErrorCode::BadPayload, "zoom must be >= 1");
        zoom_ = z;
        for (auto& r : rmcs_)
            clamp_request(r);
    }

    const Rmc& get(int id) const { return rmcs_[index_of(id)]; }

    std::vector<FocusRequest> focus_requests() const
    {
        std::vector<FocusRequest> out;
        for (const auto& r : rmcs_)
            out.push_back({r.id, r.region, r.requestedWidth, r.requestedHeight});
        return out;
    }

    MatrixLayout layout() const
    {
        Viewport vp = viewport_;
        vp.width = axis_extent_x();
        vp.height = axis_extent_y();
        return solve_layout(n_, focus_requests(), vp);
    }

    /// `origin` is the cell where the drag started; it decides what the RMC
    /// shows (row < col: node pair, row > col: edges, diagonal: nodes).
    const Rmc& create(const Region& region, bool asUnitGrid, std::optional<std::pair<std::size_t, std::size_t>> origin,
                      const MultivariateGraph& g, std::vector<std::string> nodeAttributes)
    {
        check_region(region, -1);
        auto [or_, oc] = origin.value_or(std::pair{region.row0, region.col0});
        if (!region.contains(or_, oc))
            throw Error(ErrorCode::Bounds, "drag origin outside region");
        Rmc rmc;
        rmc.id = nextId_;
        rmc.region = region;
        rmc.where = asUnitGrid ? Where::UnitGrid : Where::Meta;
        rmc.what = or_ > oc ? What::Edges : What::Nodes;
        auto edgeAttributes = g.edge_attribute_names();
        if (rmc.what == What::Nodes) {
            rmc.vis.shownAttributes = std::move(nodeAttributes);
            rmc.otherAttributes = std::move(edgeAttributes);
        } else {
            rmc.vis.shownAttributes = std::move(edgeAttributes);
            rmc.otherAttributes = std::move(nodeAttributes);
        }
        rmc.vis.kind = VisKind::Bar;
        double cellX = std::max(kMiniatureBreakpoint, axis_extent_x() / static_cast<double>(n_));
        double cellY = std::max(kMiniatureBreakpoint, axis_extent_y() / static_cast<double>(n_));
        rmc.requestedWidth = cellX * static_cast<double>(region.cols);
        rmc.requestedHeight = cellY * static_cast<double>(region.rows);
        clamp_request(rmc);
        ++nextId_;
        rmcs_.push_back(std::move(rmc));
        return rmcs_.back();
    }

    void scale(int id, const ScaleRequest& req)
    {
        Rmc rmc = rmcs_[index_of(id)];
        bool x = req.axis != AxisMode::YOnly;
        bool y = req.axis != AxisMode::XOnly;
        switch (req.mode) {
        case ScaleRequest::Mode::Absolute:
            if (x)
                rmc.requestedWidth = req.width;
            if (y)
                rmc.requestedHeight = req.height;
            break;
        case ScaleRequest::Mode::Delta:
            if (x)
                rmc.requestedWidth += req.width;
            if (y)
                rmc.requestedHeight += req.height;
            break;
        case ScaleRequest::Mode::Factor:
            if (!(req.width > 0.0))
                throw Error(ErrorCode::BadPayload, "scale factor must be positive");
            if (x)
                rmc.requestedWidth *= req.width;
            if (y)
                rmc.requestedHeight *= req.width;
            break;
        }
        if (!std::isfinite(rmc.requestedWidth) || !std::isfinite(rmc.requestedHeight))
            throw Error(ErrorCode::NonFinite, "scale produced a non-finite size");
        clamp_request(rmc);
        rmcs_[index_of(id)] = std::move(rmc);
    }

    void resize_region(int id, RegionEdge edge, long deltaCells, const MultivariateGraph& g, const Ordering& order)
    {
        std::size_t i = index_of(id);
        Rmc rmc = rmcs_[i];
        long row0 = static_cast<long>(rmc.region.row0), col0 = static_cast<long>(rmc.region.col0);
        long rows = static_cast<long>(rmc.region.rows), cols = static_cast<long>(rmc.region.cols);
        switch (edge) {
        case RegionEdge::Top: row0 -= deltaCells; rows += deltaCells; break;
        case RegionEdge::Bottom: rows += deltaCells; break;
        case RegionEdge::Left: col0 -= deltaCells; cols += deltaCells; break;
        case RegionEdge::Right: cols += deltaCells; break;
        }
        if (rows < 1 || cols < 1)
            throw Error(ErrorCode::Bounds, "region would vanish");
        if (row0 < 0 || col0 < 0)
            throw Error(ErrorCode::Bounds, "region outside matrix");
        Region next{static_cast<std::size_t>(row0), static_cast<std::size_t>(col0), static_cast<std::size_t>(rows),
                    static_cast<std::size_t>(cols)};
        check_region(next, id);
        rmc.requestedWidth *= static_cast<double>(next.cols) / static_cast<double>(rmc.region.cols);
        rmc.requestedHeight *= static_cast<double>(next.rows) / static_cast<double>(rmc.region.rows);
        rmc.region = next;
        clamp_request(rmc);
        fallback_vis(rmc, g, order);
        rmcs_[i] = std::move(rmc);
    }

    /// Mirrors the region across the diagonal and toggles nodes/edges.
    void switch_what(int id, const MultivariateGraph& g, const Ordering& order)
    {
        std::size_t i = index_of(id);
        Rmc rmc = rmcs_[i];
        const auto& reg = rmc.region;
        if (reg.rows == 1 && reg.cols == 1 && reg.row0 == reg.col0)
            throw Error(ErrorCode::Diagonal, "a diagonal cell has no counterpart");
        Region mirrored = reg.transposed();
        check_region(mirrored, id);
        rmc.region = mirrored;
        rmc.what = rmc.what == What::Nodes ? What::Edges : What::Nodes;
        std::swap(rmc.requestedWidth, rmc.requestedHeight);
        std::swap(rmc.vis.shownAttributes, rmc.otherAttributes);
        clamp_request(rmc);
        fallback_vis(rmc, g, order);
        rmcs_[i] = std::move(rmc);
    }

    void toggle_where(int id, const MultivariateGraph& g, const Ordering& order)
    {
        std::size_t i = index_of(id);
        Rmc rmc = rmcs_[i];
        rmc.where = rmc.where == Where::Meta ? Where::UnitGrid : Where::Meta;
        fallback_vis(rmc, g, order);
        rmcs_[i] = std::move(rmc);
    }

    /// An empty attribute list keeps the current one.
    void set_vis(int id, VisSpec vis, const MultivariateGraph& g, const Ordering& order)
    {
        std::size_t i = index_of(id);
        if (vis.shownAttributes.empty())
            vis.shownAttributes = rmcs_[i].vis.shownAttributes;
        if (auto why = incompatibility(vis, rmcs_[i], g, order))
            throw Error(ErrorCode::IncompatibleVis, *why);
        rmcs_[i].vis = std::move(vis);
    }

    void add_shown_attribute(int id, const std::string& name, const MultivariateGraph& g, const Ordering& order)
    {
        std::size_t i = index_of(id);
        VisSpec vis = rmcs_[i].vis;
        if (!g.has_attribute(rmcs_[i].object_kind(), name))
            throw Error(ErrorCode::UnknownAttribute, "unknown attribute '" + name + "'");
        if (std::find(vis.shownAttributes.begin(), vis.shownAttributes.end(), name) != vis.shownAttributes.end())
            return;
        vis.shownAttributes.push_back(name);
        set_vis(id, std::move(vis), g, order);
    }

    void remove_shown_attribute(int id, const std::string& name, const MultivariateGraph& g, const Ordering& order)
    {
        std::size_t i = index_of(id);
        VisSpec vis = rmcs_[i].vis;
        auto it = std::find(vis.shownAttributes.begin(), vis.shownAttributes.end(), name);
        if (it == vis.shownAttributes.end())
            throw Error(ErrorCode::UnknownAttribute, "attribute '" + name + "' is not shown");
        vis.shownAttributes.erase(it);
        if (vis.shownAttributes.empty())
            throw Error(ErrorCode::IncompatibleVis, "cannot remove the last shown attribute");
        set_vis(id, std::move(vis), g, order);
    }

    // After an ordering change the objects under each region differ.
    void revalidate(const MultivariateGraph& g, const Ordering& order)
    {
        for (auto& r : rmcs_)
            fallback_vis(r, g, order);
    }

    void dismiss(int id) { rmcs_.erase(rmcs_.begin() + static_cast<long>(index_of(id))); }

    void reset() { rmcs_.clear(); }

    // Matrix size changes invalidate every region.
    void reset_matrix(std::size_t n)
    {
        n_ = n;
        rmcs_.clear();
    }

    bool operator==(const RmcState&) const = default;

private:
    std::size_t index_of(int id) const
    {
        for (std::size_t i = 0; i < rmcs_.size(); ++i)
            if (rmcs_[i].id == id)
                return i;
        throw Error(ErrorCode::UnknownId, "unknown rmc " + std::to_string(id));
    }

    void check_region(const Region& region, int ignoreId) const
    {
        if (region.rows == 0 || region.cols == 0 || region.row_end() > n_ || region.col_end() > n_)
            throw Error(ErrorCode::Bounds, "region outside the " + std::to_string(n_) + "x" + std::to_string(n_) + " matrix");
        for (const auto& r : rmcs_) {
            if (r.id == ignoreId)
                continue;
            if (ranges_overlap(region.row0, region.rows, r.region.row0, r.region.rows) ||
                ranges_overlap(region.col0, region.cols, r.region.col0, r.region.cols))
                throw Error(ErrorCode::Overlap, "region shares rows or columns with rmc " + std::to_string(r.id));
        }
    }

    // [base cell share, extent - context minimum for every other index]
    void clamp_request(Rmc& rmc) const
    {
        auto clampAxis = [&](double req, double extent, std::size_t span) {
            double base = extent / static_cast<double>(n_) * static_cast<double>(span);
            double upper = extent - viewport_.minContextExtent * static_cast<double>(n_ - span);
            upper = std::max(upper, base);
            return std::clamp(req, base, upper);
        };
        rmc.requestedWidth = clampAxis(rmc.requestedWidth, axis_extent_x(), rmc.region.cols);
        rmc.requestedHeight = clampAxis(rmc.requestedHeight, axis_extent_y(), rmc.region.rows);
    }

    static void fallback_vis(Rmc& rmc, const MultivariateGraph& g, const Ordering& order)
    {
        if (incompatibility(rmc.vis, rmc, g, order))
            rmc.vis.kind = VisKind::Bar;
    }

    std::size_t n_ = 0;
    Viewport viewport_;
    double zoom_ = 1.0;
    std::vector<Rmc> rmcs_;
    int nextId_ = 1;
};

} // namespace rmc
