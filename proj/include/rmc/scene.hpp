#pragma once

#include <algorithm>
#include <charconv>
#include <numeric>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "rmc/geometry.hpp"
#include "rmc/graph.hpp"

namespace rmc
{

struct RectGeom
{
    double x = 0, y = 0, w = 0, h = 0;
    bool operator==(const RectGeom&) const = default;
};

struct LineGeom
{
    double x1 = 0, y1 = 0, x2 = 0, y2 = 0;
    bool operator==(const LineGeom&) const = default;
};

struct PolylineGeom
{
    std::vector<Point> points;
    bool operator==(const PolylineGeom&) const = default;
};

struct CircleGeom
{
    double cx = 0, cy = 0, r = 0;
    bool operator==(const CircleGeom&) const = default;
};

enum class TextAnchor
{
    Start,
    Middle,
    End
};

struct TextGeom
{
    double x = 0, y = 0;
    std::string content;
    TextAnchor anchor = TextAnchor::Start;
    double rotation = 0.0; // degrees about (x, y)
    bool operator==(const TextGeom&) const = default;
};

/// One or more subpaths; `closed` closes every subpath.
struct PathGeom
{
    std::vector<std::vector<Point>> subpaths;
    bool closed = false;
    bool operator==(const PathGeom&) const = default;
};

using Geometry = std::variant<RectGeom, LineGeom, PolylineGeom, CircleGeom, TextGeom, PathGeom>;

enum class MarkKind
{
    Rect,
    Line,
    Polyline,
    Circle,
    Text,
    Path
};

inline std::string_view to_string(MarkKind k) noexcept
{
    static constexpr std::string_view names[] = {"rect", "line", "polyline", "circle", "text", "path"};
    return names[static_cast<int>(k)];
}

/// What a mark is for. Cell, Data, Context, Handle and Label marks encode data
/// and always carry an object reference.
enum class MarkRole
{
    Cell,
    Label,
    Guide,
    Background,
    Axis,
    Data,
    Context,
    Handle,
    Annotation
};

inline std::string_view to_string(MarkRole r) noexcept
{
    static constexpr std::string_view names[] = {"cell", "label", "guide", "background", "axis",
                                                 "data", "context", "handle", "annotation"};
    return names[static_cast<int>(r)];
}

inline bool encodes_data(MarkRole r) noexcept
{
    return r == MarkRole::Cell || r == MarkRole::Data || r == MarkRole::Context || r == MarkRole::Handle ||
           r == MarkRole::Label;
}

struct Style
{
    std::string fill = "none";
    std::string stroke = "none";
    double strokeWidth = 0.0;
    double fontSize = 0.0;
    double opacity = 1.0;

    bool operator==(const Style&) const = default;
};

/// Node, edge, or node pair (similarity cells) a mark stands for.
struct ObjectRef
{
    enum class Kind
    {
        Node,
        Edge,
        Pair
    };
    Kind kind = Kind::Node;
    std::string first;
    std::string second; // edges: canonical second endpoint; pairs: column node

    static ObjectRef node(std::string id) { return {Kind::Node, std::move(id), {}}; }
    static ObjectRef edge(const EdgeKey& k) { return {Kind::Edge, k.first, k.second}; }
    static ObjectRef pair(std::string row, std::string col) { return {Kind::Pair, std::move(row), std::move(col)}; }

    std::string str() const
    {
        switch (kind) {
        case Kind::Node: return "n:" + first;
        case Kind::Edge: return "e:" + first + "|" + second;
        case Kind::Pair: return "p:" + first + "|" + second;
        }
        return {};
    }

    auto operator<=>(const ObjectRef&) const = default;
    bool operator==(const ObjectRef&) const = default;
};

/// Drag target attached to a data mark: which value moves and how many value
/// units one pixel of upward (outward) movement represents.
struct EditHandle
{
    ObjectRef object; // Node or Edge
    std::string attribute;
    double valuePerPixel = 0.0;

    bool operator==(const EditHandle&) const = default;
};

struct Mark
{
    Geometry geometry;
    Style style;
    MarkRole role = MarkRole::Data;
    std::optional<ObjectRef> objectRef;
    std::optional<std::string> attribute;
    std::optional<EditHandle> editHandle;
    int zOrder = 0;

    MarkKind kind() const noexcept { return static_cast<MarkKind>(geometry.index()); }
    bool operator==(const Mark&) const = default;
};

struct Scene
{
    std::vector<Mark> marks;
    double width = 0.0;
    double height = 0.0;

    // Stable by zOrder, then construction order.
    void finalize()
    {
        auto byZ = [](const Mark& a, const Mark& b) { return a.zOrder < b.zOrder; };
        if (std::is_sorted(marks.begin(), marks.end(), byZ))
            return;
        // Sort indices, then move each mark once; marks are heavy to swap.
        std::vector<std::size_t> idx(marks.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return byZ(marks[a], marks[b]); });
        std::vector<Mark> sorted;
        sorted.reserve(marks.size());
        for (std::size_t i : idx)
            sorted.push_back(std::move(marks[i]));
        marks = std::move(sorted);
    }

    bool operator==(const Scene&) const = default;
};

inline constexpr std::uint64_t kDigestSeed = 0x524d43u;

// ---------------------------------------------------------------------------
// Canonical serialization: sorted keys, numbers rounded to 3 decimals.

namespace canonical
{

inline void number(std::string& out, double v)
{
    if (!std::isfinite(v)) {
        out += "null";
        return;
    }
    char buf[64];
    if (v == std::trunc(v) && std::abs(v) < 1e15) {
        // Integral: same text as the fixed path after trimming, much cheaper.
        auto res = std::to_chars(buf, buf + sizeof buf, v == 0.0 ? 0LL : static_cast<long long>(v));
        out.append(buf, static_cast<std::size_t>(res.ptr - buf));
        return;
    }
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 3);
    std::string_view s(buf, static_cast<std::size_t>(res.ptr - buf));
    auto dot = s.find('.');
    if (dot != std::string_view::npos) {
        while (s.back() == '0')
            s.remove_suffix(1);
        if (s.back() == '.')
            s.remove_suffix(1);
    }
    if (s == "-0")
        s = "0";
    out += s;
}

inline void string(std::string& out, std::string_view s)
{
    auto plain = [](char c) { return c != '"' && c != '\\' && static_cast<unsigned char>(c) >= 0x20; };
    if (std::all_of(s.begin(), s.end(), plain)) {
        out.push_back('"');
        out.append(s);
        out.push_back('"');
        return;
    }
    out.push_back('"');
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                static constexpr char hex[] = "0123456789abcdef";
                out += "\\u00";
                out.push_back(hex[(c >> 4) & 0xf]);
                out.push_back(hex[c & 0xf]);
            } else {
                out.push_back(c);
            }
        }
    }
    out.push_back('"');
}

inline void points(std::string& out, const std::vector<Point>& pts)
{
    out.push_back('[');
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i)
            out.push_back(',');
        out.push_back('[');
        number(out, pts[i].x);
        out.push_back(',');
        number(out, pts[i].y);
        out.push_back(']');
    }
    out.push_back(']');
}

struct Fields
{
    std::string& out;
    bool first = true;

    // Keys are fixed identifiers and never need escaping.
    Fields& key(std::string_view k)
    {
        out.push_back(first ? '{' : ',');
        first = false;
        out.push_back('"');
        out.append(k);
        out += "\":";
        return *this;
    }
    Fields& num(std::string_view k, double v)
    {
        key(k);
        number(out, v);
        return *this;
    }
    Fields& str(std::string_view k, std::string_view v)
    {
        key(k);
        string(out, v);
        return *this;
    }
    void close()
    {
        if (first)
            out.push_back('{');
        out.push_back('}');
    }
};

inline void geometry(std::string& out, const Geometry& g)
{
    Fields f{out};
    std::visit(
        [&](const auto& geo) {
            using T = std::decay_t<decltype(geo)>;
            if constexpr (std::is_same_v<T, RectGeom>) {
                f.num("h", geo.h).num("w", geo.w).num("x", geo.x).num("y", geo.y);
            } else if constexpr (std::is_same_v<T, LineGeom>) {
                f.num("x1", geo.x1).num("x2", geo.x2).num("y1", geo.y1).num("y2", geo.y2);
            } else if constexpr (std::is_same_v<T, PolylineGeom>) {
                f.key("pts");
                points(out, geo.points);
            } else if constexpr (std::is_same_v<T, CircleGeom>) {
                f.num("cx", geo.cx).num("cy", geo.cy).num("r", geo.r);
            } else if constexpr (std::is_same_v<T, TextGeom>) {
                static constexpr std::string_view anchors[] = {"start", "middle", "end"};
                f.str("anchor", anchors[static_cast<int>(geo.anchor)]);
                if (geo.rotation != 0.0)
                    f.num("rot", geo.rotation);
                f.str("text", geo.content).num("x", geo.x).num("y", geo.y);
            } else {
                f.key("closed");
                out += geo.closed ? "true" : "false";
                f.key("d");
                out.push_back('[');
                for (std::size_t i = 0; i < geo.subpaths.size(); ++i) {
                    if (i)
                        out.push_back(',');
                    points(out, geo.subpaths[i]);
                }
                out.push_back(']');
            }
        },
        g);
    f.close();
}

inline void mark(std::string& out, const Mark& m)
{
    Fields f{out};
    if (m.attribute)
        f.str("attr", *m.attribute);
    if (m.editHandle) {
        f.key("edit");
        Fields e{out};
        e.str("attr", m.editHandle->attribute).str("ref", m.editHandle->object.str()).num("vpp", m.editHandle->valuePerPixel);
        e.close();
    }
    f.key("geom");
    geometry(out, m.geometry);
    f.str("kind", to_string(m.kind()));
    if (m.objectRef)
        f.str("ref", m.objectRef->str());
    f.str("role", to_string(m.role));
    f.key("style");
    {
        Fields s{out};
        s.str("fill", m.style.fill).num("fontSize", m.style.fontSize).num("opacity", m.style.opacity);
        s.str("stroke", m.style.stroke).num("strokeWidth", m.style.strokeWidth);
        s.close();
    }
    f.num("z", m.zOrder);
    f.close();
}

inline std::string mark(const Mark& m)
{
    std::string out;
    mark(out, m);
    return out;
}

inline std::string marks(const std::vector<Mark>& ms)
{
    std::string out;
    out.reserve(ms.size() * 160);
    out.push_back('[');
    for (std::size_t i = 0; i < ms.size(); ++i) {
        if (i)
            out.push_back(',');
        mark(out, ms[i]);
    }
    out.push_back(']');
    return out;
}

/// `marksText` must be marks(s.marks); lets callers reuse a serialization.
inline std::string scene(const Scene& s, std::string_view marksText)
{
    std::string out = "{\"height\":";
    number(out, s.height);
    out += ",\"marks\":";
    out += marksText;
    out += ",\"width\":";
    number(out, s.width);
    out += "}";
    return out;
}

inline std::string scene(const Scene& s) { return scene(s, marks(s.marks)); }

} // namespace canonical

inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = kDigestSeed) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ull ^ seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string to_hex64(std::uint64_t v)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

/// Order-sensitive 64-bit hash of the canonically serialized marks.
inline std::string scene_digest(const Scene& scene) { return to_hex64(fnv1a64(canonical::marks(scene.marks))); }

} // namespace rmc
