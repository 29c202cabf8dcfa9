#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"

using namespace rmc;
using namespace rmc::testing;

namespace
{

double independent_sum(const std::vector<double>& xs)
{
    // Kahan summation so the check does not share rounding with offsets.
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

} // namespace

TEST(Layout, UniformWithoutSpans)
{
    auto a = solve_axis(9, {}, 900.0);
    for (double e : a.extents)
        EXPECT_EQ(e, 100.0);
    EXPECT_EQ(a.total(), 900.0);
}

TEST(Layout, SingleFocusSpan)
{
    auto a = solve_axis(9, {{4, 1, 300.0}}, 900.0);
    EXPECT_EQ(a.extents[4], 300.0);
    for (std::size_t i = 0; i < 9; ++i)
        if (i != 4) {
            EXPECT_EQ(a.extents[i], 75.0);
        }
}

TEST(Layout, FocusClampedByContextMinimum)
{
    auto a = solve_axis(10, {{0, 1, 95.0}}, 100.0, 1.0);
    EXPECT_EQ(a.extents[0], 91.0);
    for (std::size_t i = 1; i < 10; ++i)
        EXPECT_EQ(a.extents[i], 1.0);
}

TEST(Layout, SpanSplitsEvenly)
{
    auto a = solve_axis(6, {{1, 3, 450.0}}, 600.0);
    for (std::size_t i = 1; i < 4; ++i)
        EXPECT_EQ(a.extents[i], 150.0);
    EXPECT_EQ(a.extents[0], 50.0);
}

TEST(Layout, AxisErrors)
{
    auto code = [](auto f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Io;
    };
    EXPECT_EQ(code([] { solve_axis(0, {}, 100.0); }), ErrorCode::Bounds);
    EXPECT_EQ(code([] { solve_axis(5, {{0, 2, 50.0}, {1, 2, 50.0}}, 100.0); }), ErrorCode::Overlap);
    EXPECT_EQ(code([] { solve_axis(5, {{4, 2, 50.0}}, 100.0); }), ErrorCode::Bounds);
    EXPECT_EQ(code([] { solve_axis(5, {{0, 1, 0.0}}, 100.0); }), ErrorCode::BadPayload);
}

TEST(Layout, MatrixExamples)
{
    auto uniform = solve_layout(95, {}, Viewport{950.0, 950.0, 1.0});
    for (std::size_t i = 0; i < 95; ++i) {
        EXPECT_NEAR(uniform.rows.extents[i], 10.0, 1e-12);
        EXPECT_NEAR(uniform.cols.extents[i], 10.0, 1e-12);
    }

    FocusRequest req{1, Region{3, 3, 3, 3}, 300.0, 300.0};
    auto l = solve_layout(9, {req}, Viewport{900.0, 900.0, 1.0});
    Rect r = l.rmcRects.at(1);
    EXPECT_EQ(r.w, 300.0);
    EXPECT_EQ(r.h, 300.0);
    EXPECT_EQ(l.cell_rect(0, 0).w, 100.0);
    EXPECT_EQ(l.cell_rect(8, 0).h, 100.0);

    EXPECT_THROW(solve_layout(9, {req, FocusRequest{2, Region{5, 0, 2, 2}, 50.0, 50.0}}, Viewport{}), Error);
}

TEST(Layout, LodThresholds)
{
    EXPECT_EQ(lod_for_size(10, 10), Lod::Pixel);
    EXPECT_EQ(lod_for_size(60, 300), Lod::Compact);
    EXPECT_EQ(lod_for_size(200, 200), Lod::Medium);
    EXPECT_EQ(lod_for_size(15.999, 100), Lod::Pixel);
    EXPECT_EQ(lod_for_size(16, 16), Lod::Miniature);
    EXPECT_EQ(lod_for_size(48, 48), Lod::Compact);
    EXPECT_EQ(lod_for_size(120, 500), Lod::Medium);
    double prev = 0.0;
    Lod last = Lod::Pixel;
    for (double s = 0.0; s < 300.0; s += 0.25) {
        Lod l = lod_for_size(s, s + 7);
        EXPECT_GE(static_cast<int>(l), static_cast<int>(last)) << s << " after " << prev;
        last = l;
        prev = s;
    }
}

TEST(Layout, RandomizedConservationAndMonotonicity)
{
    std::mt19937_64 rng(41);
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int t = 0; t < 2000; ++t) {
        std::size_t count = 1 + rng() % 200;
        double extent = 50.0 + unit() * 2000.0;
        double minCtx = 0.25 + unit() * 2.0;
        std::vector<FocusSpan> spans;
        std::size_t pos = rng() % 4;
        while (pos < count && spans.size() < 4) {
            std::size_t len = 1 + rng() % std::min<std::size_t>(5, count - pos);
            spans.push_back({pos, len, 1.0 + unit() * extent});
            pos += len + rng() % 20;
        }
        auto a = solve_axis(count, spans, extent, minCtx);
        ASSERT_NEAR(independent_sum(a.extents), extent, 0.5);
        for (double e : a.extents)
            ASSERT_GE(e, 0.0);
        if (spans.empty())
            continue;

        // Growing one request never grows a context index.
        auto grown = spans;
        grown[rng() % grown.size()].requestedPixels *= 1.0 + unit();
        auto b = solve_axis(count, grown, extent, minCtx);
        std::vector<bool> focus(count, false);
        for (const auto& sp : spans)
            for (std::size_t i = sp.start; i < sp.start + sp.length; ++i)
                focus[i] = true;
        for (std::size_t i = 0; i < count; ++i)
            if (!focus[i]) {
                ASSERT_LE(b.extents[i], a.extents[i] + 1e-9);
            }
    }
}
