#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rmc/error.hpp"
#include "rmc/graph.hpp"
#include "rmc/similarity.hpp"

namespace rmc
{

struct OrderingStrategy
{
    enum class Kind
    {
        Input,
        DegreeDesc,
        Attribute,
        Cluster,
        SimilarityClustering
    };

    Kind kind = Kind::Input;
    std::string attribute;  // Attribute and Cluster
    bool descending = true; // Attribute only

    bool operator==(const OrderingStrategy&) const = default;

    /// Parses `input`, `degree`, `attr:<name>[:asc|:desc]`, `cluster:<name>`
    /// or `simclust`.
    static OrderingStrategy parse(std::string_view text)
    {
        OrderingStrategy s;
        if (text == "input")
            return s;
        if (text == "degree") {
            s.kind = Kind::DegreeDesc;
            return s;
        }
        if (text == "simclust") {
            s.kind = Kind::SimilarityClustering;
            return s;
        }
        auto colon = text.find(':');
        if (colon != std::string_view::npos && colon + 1 < text.size()) {
            auto head = text.substr(0, colon);
            auto rest = text.substr(colon + 1);
            if (head == "cluster") {
                s.kind = Kind::Cluster;
                s.attribute = std::string(rest);
                return s;
            }
            if (head == "attr") {
                s.kind = Kind::Attribute;
                auto dir = rest.rfind(':');
                if (dir != std::string_view::npos &&
                    (rest.substr(dir + 1) == "asc" || rest.substr(dir + 1) == "desc")) {
                    s.descending = rest.substr(dir + 1) == "desc";
                    rest = rest.substr(0, dir);
                }
                s.attribute = std::string(rest);
                return s;
            }
        }
        throw Error(ErrorCode::BadPayload, "unknown ordering '" + std::string(text) + "'");
    }

    std::string to_string() const
    {
        switch (kind) {
        case Kind::Input: return "input";
        case Kind::DegreeDesc: return "degree";
        case Kind::Attribute: return "attr:" + attribute + (descending ? ":desc" : ":asc");
        case Kind::Cluster: return "cluster:" + attribute;
        case Kind::SimilarityClustering: return "simclust";
        }
        return "input";
    }
};

/// Matrix row/column order: position -> node index.
struct Ordering
{
    std::vector<std::size_t> permutation;
    OrderingStrategy strategy;

    std::size_t size() const noexcept { return permutation.size(); }
    std::size_t node_at(std::size_t position) const { return permutation[position]; }

    std::vector<std::size_t> positions() const
    {
        std::vector<std::size_t> pos(permutation.size());
        for (std::size_t p = 0; p < permutation.size(); ++p)
            pos[permutation[p]] = p;
        return pos;
    }

    std::vector<std::string> ids(const MultivariateGraph& g) const
    {
        std::vector<std::string> out;
        out.reserve(permutation.size());
        for (auto i : permutation)
            out.push_back(g.nodes()[i].id);
        return out;
    }

    bool operator==(const Ordering&) const = default;
};

inline Ordering identity_ordering(std::size_t n)
{
    Ordering o;
    o.permutation.resize(n);
    std::iota(o.permutation.begin(), o.permutation.end(), std::size_t{0});
    return o;
}

namespace detail
{

// Average-linkage agglomerative clustering on (1 - similarity), undefined
// distances treated as 1. Returns the dendrogram leaves left to right, with the
// child holding the smaller node id placed first at every merge.
inline std::vector<std::size_t> average_linkage_leaves(const MultivariateGraph& g, const SimilarityMatrix& sim)
{
    const std::size_t n = g.node_count();
    struct Cluster
    {
        std::vector<std::size_t> leaves;
        const std::string* minId;
        bool active = true;
    };
    std::vector<Cluster> clusters(n);
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        clusters[i].leaves = {i};
        clusters[i].minId = &g.nodes()[i].id;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            const auto& s = sim.at(i, j);
            dist[i * n + j] = s ? 1.0 - *s : 1.0;
        }
    }

    for (std::size_t remaining = n; remaining > 1; --remaining) {
        std::size_t bestA = n, bestB = n;
        double best = std::numeric_limits<double>::infinity();
        auto idsLess = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
            // Compare unordered id pairs {a,b} < {c,d}.
            const std::string* x1 = clusters[a].minId;
            const std::string* x2 = clusters[b].minId;
            if (*x2 < *x1)
                std::swap(x1, x2);
            const std::string* y1 = clusters[c].minId;
            const std::string* y2 = clusters[d].minId;
            if (*y2 < *y1)
                std::swap(y1, y2);
            if (*x1 != *y1)
                return *x1 < *y1;
            return *x2 < *y2;
        };
        for (std::size_t a = 0; a < n; ++a) {
            if (!clusters[a].active)
                continue;
            for (std::size_t b = a + 1; b < n; ++b) {
                if (!clusters[b].active)
                    continue;
                double d = dist[a * n + b];
                if (d < best || (d == best && idsLess(a, b, bestA, bestB))) {
                    best = d;
                    bestA = a;
                    bestB = b;
                }
            }
        }

        auto& A = clusters[bestA];
        auto& B = clusters[bestB];
        double sa = static_cast<double>(A.leaves.size());
        double sb = static_cast<double>(B.leaves.size());
        for (std::size_t x = 0; x < n; ++x) {
            if (!clusters[x].active || x == bestA || x == bestB)
                continue;
            double d = (sa * dist[bestA * n + x] + sb * dist[bestB * n + x]) / (sa + sb);
            dist[bestA * n + x] = dist[x * n + bestA] = d;
        }
        std::vector<std::size_t> merged;
        merged.reserve(A.leaves.size() + B.leaves.size());
        bool aFirst = *A.minId < *B.minId;
        const auto& first = aFirst ? A.leaves : B.leaves;
        const auto& second = aFirst ? B.leaves : A.leaves;
        merged.insert(merged.end(), first.begin(), first.end());
        merged.insert(merged.end(), second.begin(), second.end());
        A.minId = aFirst ? A.minId : B.minId;
        A.leaves = std::move(merged);
        B.active = false;
        B.leaves.clear();
    }
    for (auto& c : clusters)
        if (c.active)
            return c.leaves;
    return {};
}

} // namespace detail

/// Deterministic row/column permutation. Ties always fall back to ascending
/// node id.
inline Ordering order_nodes(const MultivariateGraph& g, const OrderingStrategy& strategy,
                            const SimilarityMatrix* sim = nullptr)
{
    const auto& nodes = g.nodes();
    Ordering o = identity_ordering(g.node_count());
    o.strategy = strategy;
    auto& perm = o.permutation;
    auto byId = [&](std::size_t a, std::size_t b) { return nodes[a].id < nodes[b].id; };

    switch (strategy.kind) {
    case OrderingStrategy::Kind::Input:
        break;
    case OrderingStrategy::Kind::DegreeDesc:
        std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
            if (g.degree(a) != g.degree(b))
                return g.degree(a) > g.degree(b);
            return byId(a, b);
        });
        break;
    case OrderingStrategy::Kind::Attribute:
    case OrderingStrategy::Kind::Cluster: {
        std::size_t attr = g.node_schema().index_of(strategy.attribute);
        bool desc = strategy.kind == OrderingStrategy::Kind::Attribute && strategy.descending;
        std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
            const auto& va = nodes[a].values[attr];
            const auto& vb = nodes[b].values[attr];
            if (va.has_value() != vb.has_value())
                return va.has_value(); // missing last
            if (va && *va != *vb)
                return desc ? *va > *vb : *va < *vb;
            return byId(a, b);
        });
        break;
    }
    case OrderingStrategy::Kind::SimilarityClustering:
        if (!sim || sim->size() != g.node_count())
            throw Error(ErrorCode::MissingSimilarity, "similarity clustering needs a similarity matrix");
        perm = detail::average_linkage_leaves(g, *sim);
        break;
    }
    return o;
}

} // namespace rmc
