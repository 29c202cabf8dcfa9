#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rmc/error.hpp"
#include "rmc/graph.hpp"

namespace rmc
{

enum class MissingPolicy
{
    PairwiseComplete
};

struct SimilarityConfig
{
    std::vector<std::string> selectedAttributes;
    MissingPolicy missingPolicy = MissingPolicy::PairwiseComplete;

    bool operator==(const SimilarityConfig&) const = default;
};

inline void validate(const SimilarityConfig& cfg, const Schema& schema)
{
    if (cfg.selectedAttributes.empty())
        throw Error(ErrorCode::BadPayload, "similarity needs at least one attribute");
    std::set<std::string> seen;
    for (const auto& name : cfg.selectedAttributes) {
        schema.index_of(name);
        if (!seen.insert(name).second)
            throw Error(ErrorCode::BadPayload, "attribute '" + name + "' selected twice");
    }
}

/// Symmetric n x n matrix of optional similarities; nullopt means the pair
/// shares no selected attribute with values on both sides.
class SimilarityMatrix
{
public:
    SimilarityMatrix() = default;
    explicit SimilarityMatrix(std::size_t n) : n_(n), cells_(n * n) {}

    std::size_t size() const noexcept { return n_; }
    const Value& at(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }

    void set(std::size_t i, std::size_t j, Value v)
    {
        cells_[i * n_ + j] = v;
        cells_[j * n_ + i] = v;
    }

    bool operator==(const SimilarityMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<Value> cells_;
};

namespace detail
{

// Attribute indices in schema order. Summing in a fixed order makes results
// independent of the order the caller listed the attributes in.
inline std::vector<std::size_t> canonical_indices(const SimilarityConfig& cfg, const Schema& schema)
{
    std::vector<std::size_t> idx;
    idx.reserve(cfg.selectedAttributes.size());
    for (const auto& name : cfg.selectedAttributes)
        idx.push_back(schema.index_of(name));
    std::sort(idx.begin(), idx.end());
    return idx;
}

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline void normalized_row(const Node& node, const Schema& schema, const std::vector<std::size_t>& idx,
                           double* out)
{
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto& v = node.values[idx[k]];
        out[k] = v ? normalize_value(*v, schema[idx[k]]) : kMissing;
    }
}

inline Value pair_similarity(const double* u, const double* v, std::size_t k)
{
    double sum = 0.0;
    std::size_t shared = 0;
    for (std::size_t a = 0; a < k; ++a) {
        if (std::isnan(u[a]) || std::isnan(v[a]))
            continue;
        sum += std::abs(u[a] - v[a]);
        ++shared;
    }
    if (shared == 0)
        return std::nullopt;
    return 1.0 - sum / static_cast<double>(shared);
}

inline std::vector<double> normalized_table(const MultivariateGraph& g, const std::vector<std::size_t>& idx)
{
    std::vector<double> table(g.node_count() * idx.size());
    for (std::size_t i = 0; i < g.node_count(); ++i)
        normalized_row(g.nodes()[i], g.node_schema(), idx, table.data() + i * idx.size());
    return table;
}

} // namespace detail

/// 1 - mean absolute difference of normalized values over the selected
/// attributes present in both nodes.
inline Value similarity(const Node& u, const Node& v, const SimilarityConfig& cfg, const Schema& schema)
{
    validate(cfg, schema);
    auto idx = detail::canonical_indices(cfg, schema);
    std::vector<double> nu(idx.size()), nv(idx.size());
    detail::normalized_row(u, schema, idx, nu.data());
    detail::normalized_row(v, schema, idx, nv.data());
    return detail::pair_similarity(nu.data(), nv.data(), idx.size());
}

inline SimilarityMatrix build_similarity_matrix(const MultivariateGraph& g, const SimilarityConfig& cfg)
{
    validate(cfg, g.node_schema());
    auto idx = detail::canonical_indices(cfg, g.node_schema());
    auto table = detail::normalized_table(g, idx);
    const std::size_t n = g.node_count();
    const std::size_t k = idx.size();
    SimilarityMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.set(i, i, 1.0);
        for (std::size_t j = i + 1; j < n; ++j)
            m.set(i, j, detail::pair_similarity(table.data() + i * k, table.data() + j * k, k));
    }
    return m;
}

/// Recomputes the row and column of `changedNode`; every other cell is copied
/// unchanged. Only valid while attribute ranges are unchanged.
inline SimilarityMatrix update_similarity_row(SimilarityMatrix m, const MultivariateGraph& g,
                                              const SimilarityConfig& cfg, std::string_view changedNode)
{
    validate(cfg, g.node_schema());
    std::size_t c = g.node_index(changedNode);
    auto idx = detail::canonical_indices(cfg, g.node_schema());
    const std::size_t k = idx.size();
    std::vector<double> changed(k), other(k);
    detail::normalized_row(g.nodes()[c], g.node_schema(), idx, changed.data());
    for (std::size_t j = 0; j < g.node_count(); ++j) {
        if (j == c) {
            m.set(c, c, 1.0);
            continue;
        }
        detail::normalized_row(g.nodes()[j], g.node_schema(), idx, other.data());
        // Argument order mirrors the full build (lower index first).
        m.set(c, j, j < c ? detail::pair_similarity(other.data(), changed.data(), k)
                          : detail::pair_similarity(changed.data(), other.data(), k));
    }
    return m;
}

} // namespace rmc
