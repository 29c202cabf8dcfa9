#pragma once

#include <fstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "rmc/error.hpp"
#include "rmc/scene.hpp"

namespace rmc
{

namespace detail
{

inline std::string svg_num(double v)
{
    std::string s;
    canonical::number(s, v);
    return s;
}

inline void svg_escape(std::string& out, std::string_view s)
{
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
}

inline void svg_points(std::string& out, const std::vector<Point>& pts)
{
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i)
            out.push_back(' ');
        out += svg_num(pts[i].x);
        out.push_back(',');
        out += svg_num(pts[i].y);
    }
}

inline void svg_style(std::string& out, const Mark& m)
{
    out += " fill=\"" + m.style.fill + "\"";
    if (m.style.stroke != "none") {
        out += " stroke=\"" + m.style.stroke + "\"";
        out += " stroke-width=\"" + svg_num(m.style.strokeWidth) + "\"";
    }
    if (m.style.opacity != 1.0)
        out += " opacity=\"" + svg_num(m.style.opacity) + "\"";
    if (m.objectRef) {
        out += " data-ref=\"";
        svg_escape(out, m.objectRef->str());
        out.push_back('"');
    }
    if (m.attribute) {
        out += " data-attr=\"";
        svg_escape(out, *m.attribute);
        out.push_back('"');
    }
}

} // namespace detail

/// Standalone SVG document with exactly one shape element per mark, in scene
/// order. Output bytes depend only on the scene.
inline std::string to_svg(const Scene& scene)
{
    using detail::svg_num;
    std::string out;
    out.reserve(scene.marks.size() * 120 + 256);
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg_num(scene.width) + "\" height=\"" +
           svg_num(scene.height) + "\" viewBox=\"0 0 " + svg_num(scene.width) + " " + svg_num(scene.height) + "\">\n";
    for (const auto& m : scene.marks) {
        std::visit(
            [&](const auto& g) {
                using T = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<T, RectGeom>) {
                    out += "<rect x=\"" + svg_num(g.x) + "\" y=\"" + svg_num(g.y) + "\" width=\"" + svg_num(g.w) +
                           "\" height=\"" + svg_num(g.h) + "\"";
                    detail::svg_style(out, m);
                    out += "/>\n";
                } else if constexpr (std::is_same_v<T, LineGeom>) {
                    out += "<line x1=\"" + svg_num(g.x1) + "\" y1=\"" + svg_num(g.y1) + "\" x2=\"" + svg_num(g.x2) +
                           "\" y2=\"" + svg_num(g.y2) + "\"";
                    detail::svg_style(out, m);
                    out += "/>\n";
                } else if constexpr (std::is_same_v<T, PolylineGeom>) {
                    out += "<polyline points=\"";
                    detail::svg_points(out, g.points);
                    out += "\"";
                    detail::svg_style(out, m);
                    out += "/>\n";
                } else if constexpr (std::is_same_v<T, CircleGeom>) {
                    out += "<circle cx=\"" + svg_num(g.cx) + "\" cy=\"" + svg_num(g.cy) + "\" r=\"" + svg_num(g.r) +
                           "\"";
                    detail::svg_style(out, m);
                    out += "/>\n";
                } else if constexpr (std::is_same_v<T, TextGeom>) {
                    static constexpr std::string_view anchors[] = {"start", "middle", "end"};
                    out += "<text x=\"" + svg_num(g.x) + "\" y=\"" + svg_num(g.y) + "\" font-size=\"" +
                           svg_num(m.style.fontSize) + "\" text-anchor=\"" +
                           std::string(anchors[static_cast<int>(g.anchor)]) + "\"";
                    if (g.rotation != 0.0)
                        out += " transform=\"rotate(" + svg_num(g.rotation) + " " + svg_num(g.x) + " " + svg_num(g.y) +
                               ")\"";
                    detail::svg_style(out, m);
                    out += ">";
                    detail::svg_escape(out, g.content);
                    out += "</text>\n";
                } else {
                    out += "<path d=\"";
                    for (const auto& sub : g.subpaths) {
                        for (std::size_t i = 0; i < sub.size(); ++i) {
                            out += i ? " L" : (out.back() == '"' ? "M" : " M");
                            out += svg_num(sub[i].x) + "," + svg_num(sub[i].y);
                        }
                        if (g.closed && !sub.empty())
                            out += " Z";
                    }
                    out += "\"";
                    detail::svg_style(out, m);
                    out += "/>\n";
                }
            },
            m.geometry);
    }
    out += "</svg>\n";
    return out;
}

inline void write_svg(const Scene& scene, const std::string& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
    auto text = to_svg(scene);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f)
        throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

} // namespace rmc
