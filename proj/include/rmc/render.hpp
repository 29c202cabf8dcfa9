#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rmc/color.hpp"
#include "rmc/error.hpp"
#include "rmc/geometry.hpp"
#include "rmc/graph.hpp"
#include "rmc/layout.hpp"
#include "rmc/rmc_state.hpp"
#include "rmc/scene.hpp"

namespace rmc
{

inline constexpr int kNodeLinkIterations = 300;
inline constexpr std::uint64_t kDefaultLayoutSeed = 42;

/// Fruchterman-Reingold layout over `count` nodes: seeded initial placement,
/// fixed iteration count with linear cooling, re-centered on the rect center
/// after every step and kept inside `rect` inset by `inset`.
inline std::vector<Point> layout_nodelink(std::size_t count, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                          const Rect& rect, std::uint64_t seed = kDefaultLayoutSeed, double inset = 0.0)
{
    if (count == 0)
        throw Error(ErrorCode::BadPayload, "node-link layout needs at least one node");
    Rect box = rect.inset(inset);
    Point c = box.center();
    std::vector<Point> pos(count);
    if (count == 1) {
        pos[0] = c;
        return pos;
    }

    // mt19937_64 output is fully specified; map it to [0,1) without relying
    // on distribution implementations.
    std::mt19937_64 rng(seed);
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (auto& p : pos)
        p = {box.x + unit() * box.w, box.y + unit() * box.h};

    const double area = std::max(box.w * box.h, 1.0);
    const double k = std::sqrt(area / static_cast<double>(count));
    const double t0 = std::max(box.w, box.h) / 10.0 + 1e-9;
    std::vector<Point> disp(count);

    auto recenter = [&] {
        Point mean{};
        for (const auto& p : pos) {
            mean.x += p.x;
            mean.y += p.y;
        }
        mean.x /= static_cast<double>(count);
        mean.y /= static_cast<double>(count);
        for (auto& p : pos) {
            p.x = std::clamp(p.x + c.x - mean.x, box.x, box.right());
            p.y = std::clamp(p.y + c.y - mean.y, box.y, box.bottom());
        }
    };

    for (int it = 0; it < kNodeLinkIterations; ++it) {
        std::fill(disp.begin(), disp.end(), Point{});
        for (std::size_t i = 0; i < count; ++i) {
            for (std::size_t j = i + 1; j < count; ++j) {
                double dx = pos[i].x - pos[j].x;
                double dy = pos[i].y - pos[j].y;
                double d2 = dx * dx + dy * dy;
                if (d2 < 1e-18) {
                    // Coincident nodes: separate along a fixed direction.
                    double a = 2.0 * std::numbers::pi * static_cast<double>((i * 7 + j * 13) % 16) / 16.0;
                    dx = std::cos(a) * 1e-3;
                    dy = std::sin(a) * 1e-3;
                    d2 = dx * dx + dy * dy;
                }
                double d = std::sqrt(d2);
                double f = k * k / d;
                disp[i].x += dx / d * f;
                disp[i].y += dy / d * f;
                disp[j].x -= dx / d * f;
                disp[j].y -= dy / d * f;
            }
        }
        for (auto [a, b] : edges) {
            if (a == b)
                continue;
            double dx = pos[a].x - pos[b].x;
            double dy = pos[a].y - pos[b].y;
            double d = std::sqrt(dx * dx + dy * dy);
            if (d < 1e-12)
                continue;
            double f = d * d / k;
            disp[a].x -= dx / d * f;
            disp[a].y -= dy / d * f;
            disp[b].x += dx / d * f;
            disp[b].y += dy / d * f;
        }
        double t = t0 * (1.0 - static_cast<double>(it) / kNodeLinkIterations);
        for (std::size_t i = 0; i < count; ++i) {
            double len = std::sqrt(disp[i].x * disp[i].x + disp[i].y * disp[i].y);
            if (len < 1e-12)
                continue;
            double step = std::min(len, t);
            pos[i].x += disp[i].x / len * step;
            pos[i].y += disp[i].y / len * step;
        }
        recenter();
    }
    return pos;
}

/// Short human-readable rendering of a data value for labels.
inline std::string format_value(double v)
{
    char buf[64];
    std::to_chars_result res;
    if (std::abs(v) >= 100.0 || v == std::round(v))
        res = std::to_chars(buf, buf + sizeof buf, std::round(v), std::chars_format::fixed, 0);
    else
        res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    std::string s(buf, res.ptr);
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0')
            s.pop_back();
        if (s.back() == '.')
            s.pop_back();
    }
    if (s == "-0")
        s = "0";
    return s;
}

inline constexpr Color kPalette[] = {{78, 121, 167}, {242, 142, 43}, {89, 161, 79},  {176, 122, 161}, {118, 183, 178},
                                     {237, 201, 72}, {255, 157, 167}, {156, 117, 95}, {186, 176, 172}, {225, 87, 89}};

namespace zorder
{
inline constexpr int kCell = 0;
inline constexpr int kMatrixLabel = 5;
inline constexpr int kBackground = 10;
inline constexpr int kAxis = 11;
inline constexpr int kContext = 12;
inline constexpr int kData = 13;
inline constexpr int kDataTop = 14;
inline constexpr int kHandle = 15;
inline constexpr int kLabel = 16;
inline constexpr int kGuide = 20;
} // namespace zorder

/// Everything one embedded visualization needs.
struct EmbeddedInput
{
    const MultivariateGraph* graph = nullptr;
    VisSpec vis;
    ObjectSet objects;
    Rect rect;
    Lod lod = Lod::Pixel;
    Color residue = kWhite;
    std::optional<ObjectRef> cellRef;       // reference for the Pixel-level cell
    std::optional<ObjectSet> nodeLinkNodes; // node set of the region, for node-link
    std::uint64_t seed = kDefaultLayoutSeed;
};

namespace detail
{

inline double font_size(Lod lod, const Rect& r)
{
    double s = std::min(r.w, r.h);
    if (lod == Lod::Medium)
        return std::clamp(s / 12.0, 8.0, 12.0);
    return std::clamp(s / 9.0, 6.0, 10.0);
}

inline Rect text_box(const TextGeom& t, double fontSize)
{
    double w = 0.6 * fontSize * static_cast<double>(t.content.size());
    double h = fontSize;
    double x = t.x;
    if (t.anchor == TextAnchor::Middle)
        x -= w / 2.0;
    else if (t.anchor == TextAnchor::End)
        x -= w;
    if (t.rotation != 0.0)
        return {t.x - h, t.y - w, h, w};
    return {x, t.y - 0.8 * h, w, h};
}

inline std::optional<Rect> mark_box(const Mark& m)
{
    if (const auto* r = std::get_if<RectGeom>(&m.geometry))
        return Rect{r->x, r->y, r->w, r->h};
    if (const auto* c = std::get_if<CircleGeom>(&m.geometry))
        return Rect{c->cx - c->r, c->cy - c->r, 2 * c->r, 2 * c->r};
    return std::nullopt;
}

class Builder
{
public:
    Builder(const EmbeddedInput& in) : in_(in), g_(*in.graph)
    {
        fontSize_ = font_size(in.lod, in.rect);
        bool mini = in.lod == Lod::Miniature;
        background_ = mini ? in.residue : kWhite;
        ink_ = contrast_color(background_);
    }

    std::vector<Mark> run()
    {
        const auto& r = in_.rect;
        if (in_.lod == Lod::Pixel) {
            Mark m;
            m.geometry = RectGeom{r.x, r.y, r.w, r.h};
            m.style.fill = in_.residue.hex();
            m.role = in_.cellRef ? MarkRole::Cell : MarkRole::Background;
            m.objectRef = in_.cellRef;
            m.zOrder = zorder::kBackground;
            out_.push_back(std::move(m));
            return std::move(out_);
        }

        Mark bg;
        bg.geometry = RectGeom{r.x, r.y, r.w, r.h};
        bg.role = MarkRole::Background;
        bg.zOrder = zorder::kBackground;
        bg.style.fill = background_.hex();
        if (in_.lod != Lod::Miniature) {
            // Residue as a border from Compact upward.
            double bw = std::clamp(0.03 * std::min(r.w, r.h), 1.5, 4.0);
            bg.geometry = RectGeom{r.x + bw / 2, r.y + bw / 2, r.w - bw, r.h - bw};
            bg.style.stroke = in_.residue.hex();
            bg.style.strokeWidth = bw;
        }
        out_.push_back(std::move(bg));

        double pad = std::max(1.0, 0.06 * std::min(r.w, r.h));
        plot_ = r.inset(pad);
        if (in_.objects.ids.empty() && in_.vis.kind != VisKind::NodeLink)
            return std::move(out_);
        if (in_.vis.shownAttributes.empty() && in_.vis.kind != VisKind::NodeLink)
            return std::move(out_);

        switch (in_.vis.kind) {
        case VisKind::Bar: bars(false); break;
        case VisKind::GroupedBar: bars(true); break;
        case VisKind::DiffBar: diff_bars(); break;
        case VisKind::Star: star(false); break;
        case VisKind::OverlaidStar: star(true); break;
        case VisKind::ParallelCoordinates: parallel_coordinates(); break;
        case VisKind::NodeLink: node_link(); break;
        }
        drop_colliding_labels();
        return std::move(out_);
    }

private:
    bool labels() const { return in_.lod >= Lod::Compact; }
    bool medium() const { return in_.lod == Lod::Medium; }
    bool editable() const { return in_.lod >= Lod::Compact; }

    ObjectKind kind() const { return in_.objects.kind; }

    ObjectRef ref(std::size_t obj) const
    {
        if (kind() == ObjectKind::Node)
            return ObjectRef::node(g_.nodes()[obj].id);
        return ObjectRef::edge(g_.edges()[obj].key);
    }

    Value value(std::size_t obj, const std::string& attr) const { return g_.value(kind(), obj, attr); }
    const AttributeDef& def(const std::string& attr) const { return g_.attribute_def(kind(), attr); }

    double value_per_pixel(const std::string& attr, double pixels) const
    {
        const auto& d = def(attr);
        double range = d.observedMax - d.observedMin;
        if (!(range > 0.0))
            range = std::max(std::abs(d.observedMax), 1.0);
        return pixels > 0.0 ? range / pixels : 0.0;
    }

    // Single-object charts use the contrast ink; multi-object ones shade by
    // object (Miniature) or use the categorical palette.
    Color object_color(std::size_t o, bool categorical) const
    {
        if (!categorical || in_.lod == Lod::Miniature)
            return ink_;
        return kPalette[o % std::size(kPalette)];
    }

    double object_opacity(std::size_t o, std::size_t k, bool categorical) const
    {
        if (k <= 1 || (categorical && in_.lod != Lod::Miniature))
            return 1.0;
        return 1.0 - 0.5 * static_cast<double>(o) / static_cast<double>(k - 1);
    }

    void text(double x, double y, std::string content, TextAnchor anchor, std::optional<ObjectRef> ref = {},
              std::optional<std::string> attr = {}, double rotation = 0.0)
    {
        Mark m;
        m.geometry = TextGeom{x, y, std::move(content), anchor, rotation};
        m.style.fill = ink_.hex();
        m.style.fontSize = fontSize_;
        m.role = ref ? MarkRole::Label : MarkRole::Annotation;
        m.objectRef = std::move(ref);
        m.attribute = std::move(attr);
        m.zOrder = zorder::kLabel;
        out_.push_back(std::move(m));
    }

    void axis_line(Point a, Point b)
    {
        Mark m;
        m.geometry = LineGeom{a.x, a.y, b.x, b.y};
        m.style.stroke = ink_.hex();
        m.style.strokeWidth = 0.5;
        m.style.opacity = 0.5;
        m.role = MarkRole::Axis;
        m.zOrder = zorder::kAxis;
        out_.push_back(std::move(m));
    }

    // Outline plus diagonal hatching for a missing value.
    void placeholder(const Rect& box, std::size_t obj, const std::string& attr, std::optional<EditHandle> handle)
    {
        Mark outline;
        outline.geometry = RectGeom{box.x, box.y, box.w, box.h};
        outline.style.stroke = ink_.hex();
        outline.style.strokeWidth = 0.5;
        outline.style.opacity = 0.8;
        outline.role = MarkRole::Data;
        outline.objectRef = ref(obj);
        outline.attribute = attr;
        outline.editHandle = std::move(handle);
        outline.zOrder = zorder::kData;
        out_.push_back(outline);

        Mark hatch;
        PathGeom path;
        double step = std::max(3.0, box.w / 2.0);
        for (double s = step; s < box.w + box.h; s += step) {
            // Segment of the line x + y = const clipped to the box.
            double x0 = box.x + std::max(0.0, s - box.h), y0 = box.bottom() - std::min(s, box.h);
            double x1 = box.x + std::min(s, box.w), y1 = box.bottom() - std::max(0.0, s - box.w);
            path.subpaths.push_back({{x0, y0}, {x1, y1}});
        }
        if (path.subpaths.empty())
            return;
        hatch.geometry = std::move(path);
        hatch.style.stroke = ink_.hex();
        hatch.style.strokeWidth = 0.5;
        hatch.style.opacity = 0.6;
        hatch.role = MarkRole::Data;
        hatch.objectRef = ref(obj);
        hatch.attribute = attr;
        hatch.zOrder = zorder::kData;
        out_.push_back(std::move(hatch));
    }

    void bars(bool grouped)
    {
        const auto& attrs = in_.vis.shownAttributes;
        const auto& objs = in_.objects.ids;
        const std::size_t K = attrs.size();
        const std::size_t k = objs.size();
        Rect area = plot_;
        if (labels()) {
            area.y += fontSize_ + 1.0;
            area.h -= fontSize_ + 1.0;
        }
        if (medium())
            area.h -= fontSize_ + 2.0;
        if (area.h <= 0.0 || area.w <= 0.0)
            return;
        double slot = area.w / static_cast<double>(K);
        double barW = 0.8 * slot / static_cast<double>(k);
        for (std::size_t a = 0; a < K; ++a) {
            double slotX = area.x + static_cast<double>(a) * slot;
            if (grouped && medium())
                axis_line({slotX + 0.05 * slot, area.bottom()}, {slotX + 0.95 * slot, area.bottom()});
            for (std::size_t o = 0; o < k; ++o) {
                double x = slotX + 0.1 * slot + static_cast<double>(o) * barW;
                auto v = value(objs[o], attrs[a]);
                std::optional<EditHandle> handle;
                if (editable())
                    handle = EditHandle{ref(objs[o]), attrs[a], value_per_pixel(attrs[a], area.h)};
                if (!v) {
                    placeholder({x, area.y, barW, area.h}, objs[o], attrs[a], handle);
                    continue;
                }
                double h = normalize_value(*v, def(attrs[a])) * area.h;
                Mark m;
                m.geometry = RectGeom{x, area.bottom() - h, barW, h};
                m.style.fill = object_color(o, grouped).hex();
                m.style.opacity = object_opacity(o, k, grouped);
                m.role = MarkRole::Data;
                m.objectRef = ref(objs[o]);
                m.attribute = attrs[a];
                m.editHandle = handle;
                m.zOrder = zorder::kData;
                out_.push_back(std::move(m));
                if (labels())
                    text(x + barW / 2, area.bottom() - h - 1.0, format_value(*v), TextAnchor::Middle, ref(objs[o]), attrs[a]);
            }
            if (medium())
                text(slotX + slot / 2, area.bottom() + fontSize_ + 1.0, attrs[a], TextAnchor::Middle);
        }
    }

    void diff_bars()
    {
        const auto& attrs = in_.vis.shownAttributes;
        const auto& objs = in_.objects.ids;
        if (objs.size() != 2)
            throw Error(ErrorCode::IncompatibleVis, "diff-bar needs exactly 2 objects");
        Rect area = plot_;
        if (labels()) {
            area.y += fontSize_ + 1.0;
            area.h -= 2.0 * (fontSize_ + 1.0);
        }
        if (medium())
            area.h -= fontSize_ + 2.0;
        if (area.h <= 0.0 || area.w <= 0.0)
            return;
        const std::size_t K = attrs.size();
        double zero = area.y + area.h / 2.0;
        double slot = area.w / static_cast<double>(K);
        axis_line({area.x, zero}, {area.right(), zero});
        ObjectRef pairRef = kind() == ObjectKind::Node
                                ? ObjectRef::pair(g_.nodes()[objs[0]].id, g_.nodes()[objs[1]].id)
                                : ref(objs[0]);
        for (std::size_t a = 0; a < K; ++a) {
            double x = area.x + static_cast<double>(a) * slot + 0.1 * slot;
            double w = 0.8 * slot;
            auto va = value(objs[0], attrs[a]);
            auto vb = value(objs[1], attrs[a]);
            if (!va || !vb) {
                placeholder({x, area.y, w, area.h}, !va ? objs[0] : objs[1], attrs[a], std::nullopt);
                continue;
            }
            double d = normalize_value(*va, def(attrs[a])) - normalize_value(*vb, def(attrs[a]));
            double h = std::abs(d) * area.h / 2.0;
            Mark m;
            m.geometry = RectGeom{x, d >= 0.0 ? zero - h : zero, w, h};
            m.style.fill = ink_.hex();
            m.role = MarkRole::Data;
            m.objectRef = pairRef;
            m.attribute = attrs[a];
            m.zOrder = zorder::kData;
            out_.push_back(std::move(m));
            if (labels()) {
                double y = d >= 0.0 ? zero - h - 1.0 : zero + h + fontSize_;
                std::string s = format_value(*va - *vb);
                if (*va - *vb > 0.0)
                    s = "+" + s;
                text(x + w / 2, y, s, TextAnchor::Middle, pairRef, attrs[a]);
            }
            if (medium())
                text(x + w / 2, area.bottom() + fontSize_ + 1.0, attrs[a], TextAnchor::Middle);
        }
    }

    void handle_circle(Point p, std::size_t obj, const std::string& attr, double pixels, int z = zorder::kHandle)
    {
        Mark m;
        m.geometry = CircleGeom{p.x, p.y, std::clamp(fontSize_ / 3.0, 2.0, 4.0)};
        m.style.fill = kWhite.hex();
        m.style.stroke = ink_.hex();
        m.style.strokeWidth = 1.0;
        m.role = MarkRole::Handle;
        m.objectRef = ref(obj);
        m.attribute = attr;
        m.editHandle = EditHandle{ref(obj), attr, value_per_pixel(attr, pixels)};
        m.zOrder = z;
        out_.push_back(std::move(m));
    }

    void star(bool overlaid)
    {
        const auto& attrs = in_.vis.shownAttributes;
        const auto& objs = in_.objects.ids;
        const std::size_t K = attrs.size();
        if (K < 3)
            throw Error(ErrorCode::IncompatibleVis, "star plots need at least 3 attributes");
        if (overlaid && objs.size() != 2)
            throw Error(ErrorCode::IncompatibleVis, "overlaid-star needs exactly 2 objects");
        Point c = plot_.center();
        double R = 0.5 * std::min(plot_.w, plot_.h);
        if (medium())
            R -= fontSize_ * 1.2;
        if (R <= 0.0)
            return;
        std::vector<Point> dir(K);
        for (std::size_t a = 0; a < K; ++a) {
            double th = 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(K);
            dir[a] = {std::sin(th), -std::cos(th)};
            axis_line(c, {c.x + dir[a].x * R, c.y + dir[a].y * R});
        }
        const std::size_t k = objs.size();
        // Draw back to front so the row object (index 0) ends up on top.
        for (std::size_t step = 0; step < k; ++step) {
            std::size_t o = k - 1 - step;
            std::vector<std::optional<Point>> verts(K);
            for (std::size_t a = 0; a < K; ++a) {
                auto v = value(objs[o], attrs[a]);
                if (!v)
                    continue;
                double t = normalize_value(*v, def(attrs[a])) * R;
                verts[a] = Point{c.x + dir[a].x * t, c.y + dir[a].y * t};
            }
            PathGeom path;
            bool complete = std::all_of(verts.begin(), verts.end(), [](const auto& p) { return p.has_value(); });
            if (complete) {
                std::vector<Point> ring;
                for (const auto& p : verts)
                    ring.push_back(*p);
                path.subpaths.push_back(std::move(ring));
                path.closed = true;
            } else {
                // Runs of present vertices, wrapping around; missing axes are gaps.
                std::size_t startAt = 0;
                while (verts[startAt])
                    ++startAt;
                std::vector<Point> run;
                for (std::size_t s = 1; s <= K; ++s) {
                    const auto& p = verts[(startAt + s) % K];
                    if (p) {
                        run.push_back(*p);
                    } else if (!run.empty()) {
                        path.subpaths.push_back(std::move(run));
                        run.clear();
                    }
                }
                if (!run.empty())
                    path.subpaths.push_back(std::move(run));
            }
            bool categorical = k > 1;
            Color col = object_color(o, categorical);
            Mark m;
            m.role = MarkRole::Data;
            m.objectRef = ref(objs[o]);
            m.zOrder = o == 0 ? zorder::kDataTop : zorder::kData;
            m.style.stroke = col.hex();
            m.style.strokeWidth = in_.lod == Lod::Miniature ? 1.0 : 1.5;
            m.style.opacity = object_opacity(o, k, categorical);
            if (path.closed && (k == 1 || (overlaid && o == 1)))
                m.style.fill = col.hex();
            if (path.closed && m.style.fill != "none")
                m.style.opacity = k == 1 ? 0.6 : 0.45;
            if (!path.subpaths.empty()) {
                m.geometry = std::move(path);
                out_.push_back(std::move(m));
            }
            for (std::size_t a = 0; a < K; ++a) {
                if (editable()) {
                    Point p = verts[a].value_or(c);
                    handle_circle(p, objs[o], attrs[a], R, o == 0 ? zorder::kHandle + 1 : zorder::kHandle);
                }
                if (labels() && k == 1 && verts[a]) {
                    auto v = value(objs[o], attrs[a]);
                    text(verts[a]->x + dir[a].x * 3.0, verts[a]->y + dir[a].y * 3.0, format_value(*v),
                         TextAnchor::Middle, ref(objs[o]), attrs[a]);
                }
            }
        }
        if (medium())
            for (std::size_t a = 0; a < K; ++a)
                text(c.x + dir[a].x * (R + 2.0), c.y + dir[a].y * (R + 2.0) + fontSize_ * 0.35, attrs[a],
                     TextAnchor::Middle);
    }

    void parallel_coordinates()
    {
        const auto& attrs = in_.vis.shownAttributes;
        const auto& objs = in_.objects.ids;
        const std::size_t K = attrs.size();
        const bool portrait = in_.rect.h > in_.rect.w;
        Rect area = plot_;
        if (labels()) {
            // Room for min/max labels at both axis ends.
            if (portrait) {
                area.x += fontSize_ * 2.0;
                area.w -= fontSize_ * 4.0;
            } else {
                area.y += fontSize_ + 1.0;
                area.h -= 2.0 * (fontSize_ + 1.0);
            }
        }
        if (medium()) {
            if (portrait) {
                area.y += fontSize_ + 1.0;
                area.h -= fontSize_ + 1.0;
            } else {
                area.h -= fontSize_ + 2.0;
            }
        }
        if (area.w <= 0.0 || area.h <= 0.0)
            return;

        // Axis a at position along the layout direction; values along the other.
        auto axisPos = [&](std::size_t a) {
            double frac = K == 1 ? 0.5 : static_cast<double>(a) / static_cast<double>(K - 1);
            return portrait ? area.y + frac * area.h : area.x + frac * area.w;
        };
        auto point = [&](std::size_t a, double t) {
            return portrait ? Point{area.x + t * area.w, axisPos(a)} : Point{axisPos(a), area.bottom() - t * area.h};
        };
        double valuePixels = portrait ? area.w : area.h;

        for (std::size_t a = 0; a < K; ++a) {
            axis_line(point(a, 0.0), point(a, 1.0));
            if (labels()) {
                const auto& d = def(attrs[a]);
                Point lo = point(a, 0.0), hi = point(a, 1.0);
                if (portrait) {
                    text(lo.x - 2.0, lo.y + fontSize_ * 0.35, format_value(d.observedMin), TextAnchor::End);
                    text(hi.x + 2.0, hi.y + fontSize_ * 0.35, format_value(d.observedMax), TextAnchor::Start);
                } else {
                    text(lo.x, lo.y + fontSize_ + 0.5, format_value(d.observedMin), TextAnchor::Middle);
                    text(hi.x, hi.y - 1.0, format_value(d.observedMax), TextAnchor::Middle);
                }
            }
            if (medium()) {
                Point lo = point(a, 0.0);
                if (portrait)
                    text(area.x + area.w / 2, lo.y - 2.0, attrs[a], TextAnchor::Middle);
                else
                    text(lo.x, area.bottom() + 2.0 * fontSize_ + 1.5, attrs[a], TextAnchor::Middle);
            }
        }

        auto polylines = [&](std::size_t obj, MarkRole role, Color col, double opacity, int z) {
            std::vector<Point> run;
            auto flush = [&] {
                if (run.size() >= 2) {
                    Mark m;
                    m.geometry = PolylineGeom{run};
                    m.style.stroke = col.hex();
                    m.style.strokeWidth = role == MarkRole::Context ? 0.5 : 1.2;
                    m.style.opacity = opacity;
                    m.role = role;
                    m.objectRef = ref(obj);
                    m.zOrder = z;
                    out_.push_back(std::move(m));
                }
                run.clear();
            };
            for (std::size_t a = 0; a < K; ++a) {
                auto v = value(obj, attrs[a]);
                if (!v) {
                    flush();
                    continue;
                }
                run.push_back(point(a, normalize_value(*v, def(attrs[a]))));
            }
            flush();
        };

        if (medium()) {
            std::size_t total = kind() == ObjectKind::Node ? g_.node_count() : g_.edge_count();
            for (std::size_t obj = 0; obj < total; ++obj)
                polylines(obj, MarkRole::Context, ink_, 0.12, zorder::kContext);
        }
        const std::size_t k = objs.size();
        for (std::size_t o = 0; o < k; ++o) {
            polylines(objs[o], MarkRole::Data, object_color(o, k > 1), object_opacity(o, k, k > 1),
                      o == 0 ? zorder::kDataTop : zorder::kData);
            if (editable())
                for (std::size_t a = 0; a < K; ++a) {
                    auto v = value(objs[o], attrs[a]);
                    handle_circle(point(a, v ? normalize_value(*v, def(attrs[a])) : 0.0), objs[o], attrs[a], valuePixels);
                }
        }
    }

    void node_link()
    {
        ObjectSet nodes = in_.nodeLinkNodes.value_or(in_.objects);
        if (nodes.kind != ObjectKind::Node) {
            // Endpoints of the edge set.
            std::vector<std::size_t> ids;
            for (auto e : nodes.ids) {
                ids.push_back(g_.node_index(g_.edges()[e].key.first));
                ids.push_back(g_.node_index(g_.edges()[e].key.second));
            }
            std::sort(ids.begin(), ids.end());
            ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
            nodes = ObjectSet{ObjectKind::Node, std::move(ids)};
        }
        if (nodes.ids.empty())
            return;
        std::vector<std::size_t> local(g_.node_count(), SIZE_MAX);
        for (std::size_t i = 0; i < nodes.ids.size(); ++i)
            local[nodes.ids[i]] = i;
        std::vector<std::pair<std::size_t, std::size_t>> links;
        std::vector<std::size_t> linkEdges;
        for (std::size_t i = 0; i < nodes.ids.size(); ++i)
            for (const auto& adj : g_.neighbors(nodes.ids[i]))
                if (local[adj.node] != SIZE_MAX && local[adj.node] > i) {
                    links.emplace_back(i, local[adj.node]);
                    linkEdges.push_back(adj.edge);
                }

        Rect area = plot_;
        double s = std::min(area.w, area.h);
        double rMin = std::max(1.5, 0.02 * s);
        double rMax = std::max(rMin + 1.0, 0.06 * s);
        auto pos = layout_nodelink(nodes.ids.size(), links, area, in_.seed, rMax);

        // Radius encodes the first shown node attribute when showing nodes.
        std::optional<std::string> radiusAttr;
        if (in_.objects.kind == ObjectKind::Node && !in_.vis.shownAttributes.empty())
            radiusAttr = in_.vis.shownAttributes.front();
        double maxW = g_.weight_def().observedMax > 0.0 ? g_.weight_def().observedMax : 1.0;

        for (std::size_t l = 0; l < links.size(); ++l) {
            const auto& e = g_.edges()[linkEdges[l]];
            Point a = pos[links[l].first], b = pos[links[l].second];
            Mark m;
            m.geometry = LineGeom{a.x, a.y, b.x, b.y};
            m.style.stroke = ink_.hex();
            m.style.strokeWidth = 0.5 + 2.5 * std::clamp(e.weight / maxW, 0.0, 1.0);
            m.style.opacity = 0.7;
            m.role = MarkRole::Data;
            m.objectRef = ObjectRef::edge(e.key);
            m.attribute = std::string(kWeightAttribute);
            m.zOrder = zorder::kData;
            out_.push_back(std::move(m));
        }
        for (std::size_t i = 0; i < nodes.ids.size(); ++i) {
            std::size_t node = nodes.ids[i];
            Value v;
            if (radiusAttr)
                v = g_.value(ObjectKind::Node, node, *radiusAttr);
            double rad = v ? rMin + normalize_value(*v, g_.attribute_def(ObjectKind::Node, *radiusAttr)) * (rMax - rMin) : rMin;
            Mark m;
            m.geometry = CircleGeom{pos[i].x, pos[i].y, rad};
            m.style.fill = v || !radiusAttr ? kPalette[0].hex() : std::string("none");
            m.style.stroke = ink_.hex();
            m.style.strokeWidth = 0.8;
            m.role = MarkRole::Data;
            m.objectRef = ObjectRef::node(g_.nodes()[node].id);
            m.attribute = radiusAttr;
            m.zOrder = zorder::kDataTop;
            out_.push_back(std::move(m));
            if (labels())
                text(pos[i].x, pos[i].y - rad - 1.0, g_.nodes()[node].label, TextAnchor::Middle,
                     ObjectRef::node(g_.nodes()[node].id));
        }
    }

    // A label is dropped when it leaves the cell or more than 30% of its box
    // is covered by an earlier kept label or a solid data mark.
    void drop_colliding_labels()
    {
        std::vector<Rect> solid;
        for (const auto& m : out_)
            if ((m.role == MarkRole::Data || m.role == MarkRole::Handle) && m.kind() != MarkKind::Text)
                if (auto b = mark_box(m))
                    solid.push_back(*b);
        std::vector<Rect> kept;
        std::vector<Mark> result;
        result.reserve(out_.size());
        for (auto& m : out_) {
            const auto* t = std::get_if<TextGeom>(&m.geometry);
            if (!t) {
                result.push_back(std::move(m));
                continue;
            }
            Rect box = text_box(*t, m.style.fontSize);
            double area = box.w * box.h;
            bool drop = !in_.rect.contains(box, 0.5);
            for (const auto& k : kept)
                drop = drop || k.intersection_area(box) > 0.3 * area;
            for (const auto& s : solid)
                drop = drop || s.intersection_area(box) > 0.3 * area;
            if (!drop) {
                kept.push_back(box);
                result.push_back(std::move(m));
            }
        }
        out_ = std::move(result);
    }

    const EmbeddedInput& in_;
    const MultivariateGraph& g_;
    double fontSize_ = 8.0;
    Color background_;
    Color ink_;
    Rect plot_;
    std::vector<Mark> out_;
};

} // namespace detail

/// Marks for one embedded visualization at the given level of detail. The
/// Pixel level keeps only the residue color; Miniature draws marks on the
/// residue background; Compact adds value labels and edit handles; Medium
/// adds attribute labels and context.
inline std::vector<Mark> render_embedded(const EmbeddedInput& in)
{
    if (!in.graph)
        throw Error(ErrorCode::BadPayload, "render_embedded needs a graph");
    return detail::Builder(in).run();
}

} // namespace rmc
