#pragma once

#include <algorithm>
#include <cstddef>

namespace rmc
{

struct Point
{
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

struct Rect
{
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    double right() const noexcept { return x + w; }
    double bottom() const noexcept { return y + h; }
    Point center() const noexcept { return {x + w / 2.0, y + h / 2.0}; }

    Rect inset(double d) const noexcept
    {
        double dx = std::min(d, w / 2.0);
        double dy = std::min(d, h / 2.0);
        return {x + dx, y + dy, w - 2.0 * dx, h - 2.0 * dy};
    }

    bool contains(Point p, double eps = 1e-6) const noexcept
    {
        return p.x >= x - eps && p.x <= right() + eps && p.y >= y - eps && p.y <= bottom() + eps;
    }

    bool contains(const Rect& r, double eps = 1e-6) const noexcept
    {
        return contains(Point{r.x, r.y}, eps) && contains(Point{r.right(), r.bottom()}, eps);
    }

    double intersection_area(const Rect& o) const noexcept
    {
        double w0 = std::min(right(), o.right()) - std::max(x, o.x);
        double h0 = std::min(bottom(), o.bottom()) - std::max(y, o.y);
        return w0 > 0.0 && h0 > 0.0 ? w0 * h0 : 0.0;
    }

    bool operator==(const Rect&) const = default;
};

/// An i x j block of matrix cells: rows [row0, row0+rows), cols [col0, col0+cols).
struct Region
{
    std::size_t row0 = 0;
    std::size_t col0 = 0;
    std::size_t rows = 1;
    std::size_t cols = 1;

    std::size_t cell_count() const noexcept { return rows * cols; }
    std::size_t row_end() const noexcept { return row0 + rows; }
    std::size_t col_end() const noexcept { return col0 + cols; }

    bool contains(std::size_t r, std::size_t c) const noexcept
    {
        return r >= row0 && r < row_end() && c >= col0 && c < col_end();
    }

    Region transposed() const noexcept { return {col0, row0, cols, rows}; }

    bool operator==(const Region&) const = default;
};

inline bool ranges_overlap(std::size_t a0, std::size_t alen, std::size_t b0, std::size_t blen) noexcept
{
    return a0 < b0 + blen && b0 < a0 + alen;
}

} // namespace rmc
