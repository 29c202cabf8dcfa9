#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "rmc/error.hpp"

namespace rmc
{

struct Color
{
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Color&) const = default;

    std::string hex() const
    {
        static constexpr char digits[] = "0123456789abcdef";
        std::string s = "#";
        for (auto c : {r, g, b}) {
            s.push_back(digits[c >> 4]);
            s.push_back(digits[c & 0xf]);
        }
        return s;
    }

    static Color parse(std::string_view s)
    {
        auto nibble = [&](char c) -> int {
            if (c >= '0' && c <= '9')
                return c - '0';
            if (c >= 'a' && c <= 'f')
                return c - 'a' + 10;
            if (c >= 'A' && c <= 'F')
                return c - 'A' + 10;
            throw Error(ErrorCode::BadPayload, "bad color '" + std::string(s) + "'");
        };
        if (s.size() != 7 || s[0] != '#')
            throw Error(ErrorCode::BadPayload, "bad color '" + std::string(s) + "'");
        auto byte = [&](std::size_t i) { return static_cast<std::uint8_t>(nibble(s[i]) * 16 + nibble(s[i + 1])); };
        return {byte(1), byte(3), byte(5)};
    }
};

inline constexpr Color kWhite{255, 255, 255};
inline constexpr Color kDarkGray{64, 64, 64};
inline constexpr Color kHighlight{228, 26, 28};

inline Color lerp(Color a, Color b, double t)
{
    t = std::clamp(t, 0.0, 1.0);
    auto mix = [t](std::uint8_t x, std::uint8_t y) {
        return static_cast<std::uint8_t>(std::lround(x + (static_cast<double>(y) - x) * t));
    };
    return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

/// Relative luminance of an sRGB color with BT.709 primaries.
inline double relative_luminance(Color c)
{
    auto lin = [](std::uint8_t v) {
        double s = v / 255.0;
        return s <= 0.04045 ? s / 12.92 : std::pow((s + 0.055) / 1.055, 2.4);
    };
    return 0.2126 * lin(c.r) + 0.7152 * lin(c.g) + 0.0722 * lin(c.b);
}

inline constexpr double kContrastThreshold = 0.45;

/// White marks on dark backgrounds, dark gray on light ones.
inline Color contrast_color(Color background)
{
    return relative_luminance(background) < kContrastThreshold ? kWhite : kDarkGray;
}

enum class ColorScheme
{
    Default,
    Colorblind
};

inline ColorScheme parse_color_scheme(std::string_view s)
{
    if (s == "default")
        return ColorScheme::Default;
    if (s == "colorblind")
        return ColorScheme::Colorblind;
    throw Error(ErrorCode::BadPayload, "unknown color scheme '" + std::string(s) + "'");
}

inline std::string_view to_string(ColorScheme s) noexcept { return s == ColorScheme::Default ? "default" : "colorblind"; }

struct ColorScale
{
    enum class Kind
    {
        SequentialEdgeWeight,
        DivergingSimilarity
    };

    Kind kind = Kind::DivergingSimilarity;
    double domainMin = 0.0;
    double domainMax = 1.0;
    std::array<Color, 3> stops{}; // low, mid, high; sequential ignores mid
    Color missingColor{};

    static ColorScale similarity(ColorScheme scheme)
    {
        ColorScale s;
        s.kind = Kind::DivergingSimilarity;
        if (scheme == ColorScheme::Default) {
            s.stops = {Color{215, 48, 39}, Color{255, 255, 191}, Color{26, 152, 80}}; // red, yellow, green
            s.missingColor = Color{150, 150, 150};
        } else {
            s.stops = {Color{140, 81, 10}, Color{245, 245, 245}, Color{1, 102, 94}}; // brown, white, teal
            s.missingColor = Color{190, 170, 220};
        }
        return s;
    }

    static ColorScale edge_weight(ColorScheme scheme, double maxWeight)
    {
        ColorScale s;
        s.kind = Kind::SequentialEdgeWeight;
        s.domainMin = 0.0;
        s.domainMax = maxWeight > 0.0 ? maxWeight : 1.0;
        if (scheme == ColorScheme::Default)
            s.stops = {Color{198, 219, 239}, Color{}, Color{8, 48, 107}};
        else
            s.stops = {Color{252, 224, 200}, Color{}, Color{127, 39, 4}};
        s.missingColor = kWhite;
        return s;
    }

    Color operator()(std::optional<double> v) const
    {
        if (!v)
            return missingColor;
        double t = (*v - domainMin) / (domainMax - domainMin);
        t = std::clamp(t, 0.0, 1.0);
        if (kind == Kind::SequentialEdgeWeight)
            return lerp(stops[0], stops[2], t);
        return t < 0.5 ? lerp(stops[0], stops[1], t * 2.0) : lerp(stops[1], stops[2], (t - 0.5) * 2.0);
    }
};

inline constexpr Color kDiagonalColor{224, 224, 224};

} // namespace rmc
