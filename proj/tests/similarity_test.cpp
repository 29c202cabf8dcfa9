#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "test_util.hpp"

using namespace rmc;
using namespace rmc::testing;

namespace
{

// Schema whose attributes span [0,1] so raw values are already normalized.
Schema unit_schema(std::size_t d)
{
    Schema s;
    for (std::size_t a = 0; a < d; ++a) {
        auto def = AttributeDef::named("u" + std::to_string(a));
        def.observedMin = 0.0;
        def.observedMax = 1.0;
        s.add(def);
    }
    return s;
}

// Straight transcription of the metric, written independently of the engine:
// look every value up by name and normalize on the spot.
Value brute_similarity(const MultivariateGraph& g, std::size_t i, std::size_t j, const std::vector<std::string>& attrs)
{
    double sum = 0.0;
    int shared = 0;
    for (const auto& a : attrs) {
        auto u = g.value(ObjectKind::Node, i, a);
        auto v = g.value(ObjectKind::Node, j, a);
        if (!u || !v)
            continue;
        const auto& def = g.attribute_def(ObjectKind::Node, a);
        double span = def.observedMax - def.observedMin;
        double nu = span > 0 ? (*u - def.observedMin) / span : 0.5;
        double nv = span > 0 ? (*v - def.observedMin) / span : 0.5;
        sum += std::fabs(nu - nv);
        ++shared;
    }
    if (shared == 0)
        return std::nullopt;
    return 1.0 - sum / shared;
}

} // namespace

TEST(Similarity, HandComputedPair)
{
    auto s = unit_schema(2);
    Node u{"u", "u", {0.2, 0.8}};
    Node v{"v", "v", {0.4, 0.4}};
    SimilarityConfig cfg{{"u0", "u1"}, MissingPolicy::PairwiseComplete};
    // 1 - (0.2 + 0.4) / 2
    EXPECT_NEAR(*similarity(u, v, cfg, s), 0.7, 1e-12);
    EXPECT_EQ(*similarity(u, u, cfg, s), 1.0);

    Node zero{"z", "z", {0.0, 0.0}};
    Node one{"o", "o", {1.0, 1.0}};
    EXPECT_EQ(*similarity(zero, one, cfg, s), 0.0);
}

TEST(Similarity, PairwiseCompleteSkipsMissing)
{
    auto s = unit_schema(3);
    SimilarityConfig cfg{{"u0", "u1", "u2"}, MissingPolicy::PairwiseComplete};
    Node u{"u", "u", {0.2, std::nullopt, 1.0}};
    Node v{"v", "v", {0.6, 0.9, std::nullopt}};
    // Only u0 is shared.
    EXPECT_NEAR(*similarity(u, v, cfg, s), 0.6, 1e-12);
    Node w{"w", "w", {std::nullopt, 0.3, std::nullopt}};
    EXPECT_FALSE(similarity(u, w, cfg, s).has_value());
}

TEST(Similarity, ConfigValidation)
{
    auto g = small_graph();
    EXPECT_THROW(build_similarity_matrix(g, SimilarityConfig{}), Error);
    try {
        build_similarity_matrix(g, SimilarityConfig{{"nope"}, MissingPolicy::PairwiseComplete});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownAttribute);
    }
    try {
        build_similarity_matrix(g, SimilarityConfig{{"x", "x"}, MissingPolicy::PairwiseComplete});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BadPayload);
    }
}

TEST(Similarity, IdenticalNodesAreFullySimilar)
{
    Schema s;
    s.add(AttributeDef::named("x"));
    s.add(AttributeDef::named("y"));
    std::vector<Node> nodes{{"a", "a", {1.0, 2.0}}, {"b", "b", {1.0, 2.0}}, {"c", "c", {1.0, 2.0}}};
    MultivariateGraph g(nodes, {}, s, Schema{});
    auto m = build_similarity_matrix(g, all_attributes(g));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            EXPECT_EQ(m.at(i, j), 1.0);
}

TEST(Similarity, NodeWithoutValuesHasUndefinedRow)
{
    auto g = small_graph();
    SimilarityConfig cfg{{"y"}, MissingPolicy::PairwiseComplete};
    auto m = build_similarity_matrix(g, cfg);
    std::size_t b = g.node_index("b");
    for (std::size_t j = 0; j < g.node_count(); ++j) {
        if (j == b)
            EXPECT_EQ(m.at(b, j), 1.0);
        else
            EXPECT_FALSE(m.at(b, j).has_value());
    }
}

TEST(Similarity, MatchesBruteForceOnTwentyNodes)
{
    std::mt19937_64 rng(2024);
    RandomGraphSpec spec;
    spec.minNodes = spec.maxNodes = 20;
    for (int t = 0; t < 25; ++t) {
        auto g = random_graph(rng, spec);
        auto cfg = all_attributes(g);
        auto m = build_similarity_matrix(g, cfg);
        for (std::size_t i = 0; i < 20; ++i)
            for (std::size_t j = 0; j < 20; ++j) {
                if (i == j) {
                    ASSERT_EQ(m.at(i, j), 1.0);
                    continue;
                }
                auto expected = brute_similarity(g, i, j, cfg.selectedAttributes);
                ASSERT_EQ(m.at(i, j).has_value(), expected.has_value());
                if (expected) {
                    ASSERT_NEAR(*m.at(i, j), *expected, 1e-12);
                }
            }
    }
}

TEST(Similarity, MatrixProperties)
{
    std::mt19937_64 rng(99);
    for (int t = 0; t < 300; ++t) {
        auto g = random_graph(rng);
        auto cfg = all_attributes(g);
        auto m = build_similarity_matrix(g, cfg);
        for (std::size_t i = 0; i < m.size(); ++i) {
            ASSERT_EQ(m.at(i, i), 1.0);
            for (std::size_t j = 0; j < m.size(); ++j) {
                ASSERT_EQ(m.at(i, j), m.at(j, i));
                if (m.at(i, j)) {
                    ASSERT_GE(*m.at(i, j), 0.0);
                    ASSERT_LE(*m.at(i, j), 1.0);
                }
            }
        }
        // Any attribute order gives the same matrix, bit for bit.
        auto shuffled = cfg;
        std::shuffle(shuffled.selectedAttributes.begin(), shuffled.selectedAttributes.end(), rng);
        ASSERT_EQ(build_similarity_matrix(g, shuffled), m);
    }
}

TEST(Similarity, RowUpdateEqualsRebuild)
{
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        auto g = random_graph(rng);
        auto cfg = all_attributes(g);
        auto m = build_similarity_matrix(g, cfg);
        for (int step = 0; step < 5; ++step) {
            std::size_t node = rng() % g.node_count();
            const auto& def = g.node_schema()[rng() % g.node_schema().size()];
            // Stay inside the observed range so ranges do not move.
            double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            Value v = (rng() % 6 == 0) ? Value{} : Value{def.observedMin + u * (def.observedMax - def.observedMin)};
            g.set_value(ObjectKind::Node, node, def.name, v);
            m = update_similarity_row(std::move(m), g, cfg, g.nodes()[node].id);
            ASSERT_EQ(m, build_similarity_matrix(g, cfg)) << "graph " << t << " step " << step;
        }
    }
}

TEST(Similarity, RowUpdateCasesAndErrors)
{
    auto g = small_graph();
    auto cfg = all_attributes(g);
    auto m = build_similarity_matrix(g, cfg);
    EXPECT_EQ(update_similarity_row(m, g, cfg, "c"), m);

    // Make d equal to c on the attributes they share.
    std::size_t d = g.node_index("d"), c = g.node_index("c");
    g.set_value(ObjectKind::Node, d, "x", 4.0);
    g.set_value(ObjectKind::Node, d, "y", 0.0);
    auto updated = update_similarity_row(m, g, cfg, "d");
    EXPECT_EQ(updated.at(c, d), 1.0);

    try {
        update_similarity_row(m, g, cfg, "missing");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownId);
    }
}
