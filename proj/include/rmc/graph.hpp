#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rmc/csv.hpp"
#include "rmc/error.hpp"

namespace rmc
{

using Value = std::optional<double>;

struct AttributeDef
{
    std::string name;
    std::optional<std::string> unit;
    // Default is the empty range; a graph normalizes ranges that saw no
    // values to [0,0].
    double observedMin = std::numeric_limits<double>::infinity();
    double observedMax = -std::numeric_limits<double>::infinity();

    static AttributeDef named(std::string n)
    {
        AttributeDef d;
        d.name = std::move(n);
        return d;
    }

    bool operator==(const AttributeDef&) const = default;

    // Monotone widening only.
    void include(double v)
    {
        observedMin = std::min(observedMin, v);
        observedMax = std::max(observedMax, v);
    }
};

/// Maps v into [0,1] against the observed range of `def`, clamping outside
/// values. A constant attribute (min == max) maps to 0.5.
inline double normalize_value(double v, const AttributeDef& def) noexcept
{
    double lo = def.observedMin;
    double hi = def.observedMax;
    if (!(hi > lo))
        return 0.5;
    double c = std::clamp(v, lo, hi);
    return (c - lo) / (hi - lo);
}

/// Ordered attribute list with name lookup.
class Schema
{
public:
    Schema() = default;

    std::size_t size() const noexcept { return defs_.size(); }
    bool empty() const noexcept { return defs_.empty(); }
    const AttributeDef& operator[](std::size_t i) const { return defs_[i]; }
    AttributeDef& operator[](std::size_t i) { return defs_[i]; }
    auto begin() const noexcept { return defs_.begin(); }
    auto end() const noexcept { return defs_.end(); }

    std::optional<std::size_t> find(std::string_view name) const
    {
        auto it = index_.find(std::string(name));
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    std::size_t index_of(std::string_view name) const
    {
        auto idx = find(name);
        if (!idx)
            throw Error(ErrorCode::UnknownAttribute, "unknown attribute '" + std::string(name) + "'");
        return *idx;
    }

    std::size_t add(AttributeDef def)
    {
        if (find(def.name))
            throw Error(ErrorCode::Validation, "duplicate attribute '" + def.name + "'");
        index_.emplace(def.name, defs_.size());
        defs_.push_back(std::move(def));
        return defs_.size() - 1;
    }

    std::vector<std::string> names() const
    {
        std::vector<std::string> out;
        out.reserve(defs_.size());
        for (const auto& d : defs_)
            out.push_back(d.name);
        return out;
    }

    bool operator==(const Schema& other) const { return defs_ == other.defs_; }

private:
    std::vector<AttributeDef> defs_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct Node
{
    std::string id;
    std::string label;
    std::vector<Value> values; // aligned with the node schema; nullopt = missing

    bool operator==(const Node&) const = default;
};

/// Canonical unordered endpoint pair (first < second).
struct EdgeKey
{
    std::string first;
    std::string second;

    static EdgeKey of(std::string a, std::string b)
    {
        if (b < a)
            std::swap(a, b);
        return EdgeKey{std::move(a), std::move(b)};
    }

    auto operator<=>(const EdgeKey&) const = default;
    bool operator==(const EdgeKey&) const = default;
};

struct Edge
{
    EdgeKey key;
    double weight = 1.0;
    std::vector<Value> values; // aligned with the edge schema

    bool operator==(const Edge&) const = default;
};

enum class ObjectKind
{
    Node,
    Edge
};

inline constexpr std::string_view kWeightAttribute = "weight";

struct GraphStats
{
    std::size_t nodeCount = 0;
    std::size_t edgeCount = 0;
    std::size_t total = 0;
    std::size_t adjacency = 0;
    std::size_t similarity = 0;
    std::size_t diagonal = 0;

    bool operator==(const GraphStats&) const = default;
};

/// Undirected graph with quantitative node and edge attributes. Edge weight
/// is carried separately but is addressable as the edge attribute "weight".
class MultivariateGraph
{
public:
    struct Adjacent
    {
        std::size_t node;
        std::size_t edge;
    };

    MultivariateGraph() = default;

    // Validates the input and populates observed ranges. Ranges already set
    // in the schemas are widened by the data, never narrowed.
    MultivariateGraph(std::vector<Node> nodes, std::vector<Edge> edges, Schema nodeSchema,
                      Schema edgeSchema, std::optional<std::pair<double, double>> weightRange = {})
        : nodes_(std::move(nodes)), edges_(std::move(edges)), nodeSchema_(std::move(nodeSchema)),
          edgeSchema_(std::move(edgeSchema))
    {
        if (edgeSchema_.find(kWeightAttribute))
            throw Error(ErrorCode::Validation, "edge attribute name 'weight' is reserved");
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            auto& node = nodes_[i];
            if (node.id.empty())
                throw Error(ErrorCode::Validation, "node #" + std::to_string(i) + ": empty id");
            if (!nodeIndex_.emplace(node.id, i).second)
                throw Error(ErrorCode::Validation,
                            "node #" + std::to_string(i) + ": duplicate id '" + node.id + "'");
            if (node.values.size() > nodeSchema_.size())
                throw Error(ErrorCode::Validation, "node '" + node.id + "': values exceed schema");
            node.values.resize(nodeSchema_.size());
        }
        adjacency_.resize(nodes_.size());
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            auto& edge = edges_[e];
            edge.key = EdgeKey::of(edge.key.first, edge.key.second);
            std::string where = "edge #" + std::to_string(e) + " (" + edge.key.first + "," +
                                edge.key.second + ")";
            if (edge.key.first == edge.key.second)
                throw Error(ErrorCode::Validation, where + ": self-loop");
            auto a = nodeIndex_.find(edge.key.first);
            auto b = nodeIndex_.find(edge.key.second);
            if (a == nodeIndex_.end())
                throw Error(ErrorCode::Validation, where + ": unknown endpoint '" + edge.key.first + "'");
            if (b == nodeIndex_.end())
                throw Error(ErrorCode::Validation, where + ": unknown endpoint '" + edge.key.second + "'");
            if (!std::isfinite(edge.weight) || edge.weight < 0.0)
                throw Error(ErrorCode::Validation, where + ": weight must be finite and >= 0");
            if (!edgeIndex_.emplace(edge.key, e).second)
                throw Error(ErrorCode::Validation, where + ": duplicate edge");
            if (edge.values.size() > edgeSchema_.size())
                throw Error(ErrorCode::Validation, where + ": values exceed schema");
            edge.values.resize(edgeSchema_.size());
            adjacency_[a->second].push_back({b->second, e});
            adjacency_[b->second].push_back({a->second, e});
        }
        for (auto& list : adjacency_)
            std::sort(list.begin(), list.end(),
                      [](const Adjacent& x, const Adjacent& y) { return x.node < y.node; });

        observe(nodeSchema_, [&](auto&& fn) {
            for (const auto& n : nodes_)
                fn(n.values);
        });
        observe(edgeSchema_, [&](auto&& fn) {
            for (const auto& ed : edges_)
                fn(ed.values);
        });

        weightDef_.name = std::string(kWeightAttribute);
        if (weightRange) {
            weightDef_.observedMin = weightRange->first;
            weightDef_.observedMax = weightRange->second;
        }
        for (const auto& ed : edges_)
            weightDef_.include(ed.weight);
        if (weightDef_.observedMin > weightDef_.observedMax)
            weightDef_.observedMin = weightDef_.observedMax = 0.0;
    }

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Schema& node_schema() const noexcept { return nodeSchema_; }
    const Schema& edge_schema() const noexcept { return edgeSchema_; }
    const AttributeDef& weight_def() const noexcept { return weightDef_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    std::optional<std::size_t> find_node(std::string_view id) const
    {
        auto it = nodeIndex_.find(std::string(id));
        if (it == nodeIndex_.end())
            return std::nullopt;
        return it->second;
    }

    std::size_t node_index(std::string_view id) const
    {
        auto idx = find_node(id);
        if (!idx)
            throw Error(ErrorCode::UnknownId, "unknown node '" + std::string(id) + "'");
        return *idx;
    }

    std::optional<std::size_t> find_edge(const EdgeKey& key) const
    {
        auto it = edgeIndex_.find(key);
        if (it == edgeIndex_.end())
            return std::nullopt;
        return it->second;
    }

    std::optional<std::size_t> find_edge(std::size_t a, std::size_t b) const
    {
        if (a == b)
            return std::nullopt;
        return find_edge(EdgeKey::of(nodes_[a].id, nodes_[b].id));
    }

    std::size_t edge_index(const EdgeKey& key) const
    {
        auto idx = find_edge(key);
        if (!idx)
            throw Error(ErrorCode::UnknownId, "unknown edge (" + key.first + "," + key.second + ")");
        return *idx;
    }

    const std::vector<Adjacent>& neighbors(std::size_t node) const { return adjacency_[node]; }
    std::size_t degree(std::size_t node) const { return adjacency_[node].size(); }

    // Edge attributes: "weight" first, then the edge schema.
    std::vector<std::string> edge_attribute_names() const
    {
        std::vector<std::string> out{std::string(kWeightAttribute)};
        for (const auto& d : edgeSchema_)
            out.push_back(d.name);
        return out;
    }

    const AttributeDef& attribute_def(ObjectKind kind, std::string_view name) const
    {
        if (kind == ObjectKind::Node)
            return nodeSchema_[nodeSchema_.index_of(name)];
        if (name == kWeightAttribute)
            return weightDef_;
        return edgeSchema_[edgeSchema_.index_of(name)];
    }

    bool has_attribute(ObjectKind kind, std::string_view name) const
    {
        if (kind == ObjectKind::Node)
            return nodeSchema_.find(name).has_value();
        return name == kWeightAttribute || edgeSchema_.find(name).has_value();
    }

    Value value(ObjectKind kind, std::size_t index, std::string_view name) const
    {
        if (kind == ObjectKind::Node)
            return nodes_[index].values[nodeSchema_.index_of(name)];
        if (name == kWeightAttribute)
            return edges_[index].weight;
        return edges_[index].values[edgeSchema_.index_of(name)];
    }

    // Raw write used by the editing commit/preview path. Does not touch ranges.
    void set_value(ObjectKind kind, std::size_t index, std::string_view name, Value v)
    {
        if (kind == ObjectKind::Node) {
            nodes_[index].values[nodeSchema_.index_of(name)] = v;
        } else if (name == kWeightAttribute) {
            if (!v || !std::isfinite(*v) || *v < 0.0)
                throw Error(ErrorCode::Validation, "edge weight must be a finite number >= 0");
            edges_[index].weight = *v;
        } else {
            edges_[index].values[edgeSchema_.index_of(name)] = v;
        }
    }

    AttributeDef& mutable_attribute_def(ObjectKind kind, std::string_view name)
    {
        return const_cast<AttributeDef&>(std::as_const(*this).attribute_def(kind, name));
    }

    bool operator==(const MultivariateGraph& o) const
    {
        return nodes_ == o.nodes_ && edges_ == o.edges_ && nodeSchema_ == o.nodeSchema_ &&
               edgeSchema_ == o.edgeSchema_ && weightDef_ == o.weightDef_;
    }

private:
    template <typename ForEach>
    static void observe(Schema& schema, ForEach&& forEach)
    {
        forEach([&](const std::vector<Value>& values) {
            for (std::size_t a = 0; a < values.size(); ++a) {
                if (!values[a])
                    continue;
                if (!std::isfinite(*values[a]))
                    throw Error(ErrorCode::Validation,
                                "attribute '" + schema[a].name + "': non-finite value");
                schema[a].include(*values[a]);
            }
        });
        for (std::size_t a = 0; a < schema.size(); ++a)
            if (schema[a].observedMin > schema[a].observedMax)
                schema[a].observedMin = schema[a].observedMax = 0.0;
    }

    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    Schema nodeSchema_;
    Schema edgeSchema_;
    AttributeDef weightDef_;
    std::unordered_map<std::string, std::size_t> nodeIndex_;
    std::map<EdgeKey, std::size_t> edgeIndex_;
    std::vector<std::vector<Adjacent>> adjacency_;
};

inline GraphStats graph_stats(const MultivariateGraph& g) noexcept
{
    GraphStats s;
    std::size_t n = g.node_count();
    s.nodeCount = n;
    s.edgeCount = g.edge_count();
    s.total = n * n;
    s.adjacency = n * (n == 0 ? 0 : n - 1) / 2;
    s.similarity = s.adjacency;
    s.diagonal = n;
    return s;
}

// ---------------------------------------------------------------------------
// Ingestion

enum class DatasetFormat
{
    Json,
    CsvPair
};

namespace detail
{

inline double require_number(const nlohmann::json& v, const std::string& where)
{
    if (!v.is_number())
        throw Error(ErrorCode::Parse, where + ": expected a number");
    return v.get<double>();
}

inline std::string require_string(const nlohmann::json& obj, const char* key, const std::string& where)
{
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string())
        throw Error(ErrorCode::Parse, where + ": missing string field '" + key + "'");
    return it->get<std::string>();
}

// Declared schema entries (name, optional unit, optional min/max).
inline Schema declared_schema(const nlohmann::json* declared, const std::string& what)
{
    Schema schema;
    if (!declared)
        return schema;
    if (!declared->is_array())
        throw Error(ErrorCode::Parse, what + " schema must be an array");
    for (const auto& d : *declared) {
        if (!d.is_object())
            throw Error(ErrorCode::Parse, what + " schema entries must be objects");
        AttributeDef def;
        def.name = require_string(d, "name", what + " schema");
        if (auto u = d.find("unit"); u != d.end() && u->is_string())
            def.unit = u->get<std::string>();
        if (d.contains("min") && d.contains("max")) {
            def.observedMin = require_number(d["min"], what + " schema '" + def.name + "'");
            def.observedMax = require_number(d["max"], what + " schema '" + def.name + "'");
            if (def.observedMin > def.observedMax)
                throw Error(ErrorCode::Validation, what + " schema '" + def.name + "': min > max");
        }
        schema.add(std::move(def));
    }
    return schema;
}

inline std::vector<Value> values_from(const nlohmann::json& record, const Schema& schema,
                                      const std::string& where)
{
    std::vector<Value> values(schema.size());
    auto attrs = record.find("attrs");
    if (attrs == record.end() || attrs->is_null())
        return values;
    for (auto it = attrs->begin(); it != attrs->end(); ++it) {
        if (it->is_null())
            continue;
        values[schema.index_of(it.key())] = require_number(*it, where + " attribute '" + it.key() + "'");
    }
    return values;
}

// Undeclared attributes are discovered in file order, so the document is read
// with the insertion-ordered json type.
using ordered_json = nlohmann::ordered_json;

} // namespace detail

inline MultivariateGraph parse_json_dataset(std::string_view text)
{
    detail::ordered_json doc;
    try {
        doc = detail::ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("dataset json: ") + e.what());
    }
    if (!doc.is_object())
        throw Error(ErrorCode::Parse, "dataset json: top level must be an object");

    auto nodesIt = doc.find("nodes");
    auto edgesIt = doc.find("edges");
    detail::ordered_json emptyArray = detail::ordered_json::array();
    const auto& nodesJ = nodesIt == doc.end() ? emptyArray : *nodesIt;
    const auto& edgesJ = edgesIt == doc.end() ? emptyArray : *edgesIt;
    if (!nodesJ.is_array() || !edgesJ.is_array())
        throw Error(ErrorCode::Parse, "dataset json: 'nodes' and 'edges' must be arrays");

    auto toJson = [](const detail::ordered_json& o) { return nlohmann::json::parse(o.dump()); };
    nlohmann::json nodeDecl, edgeDecl;
    if (auto it = doc.find("nodeSchema"); it != doc.end())
        nodeDecl = toJson(*it);
    if (auto it = doc.find("edgeSchema"); it != doc.end())
        edgeDecl = toJson(*it);

    auto discover = [](const detail::ordered_json& records, const nlohmann::json* declared,
                       const std::string& what) {
        Schema schema = detail::declared_schema(declared, what);
        for (const auto& r : records) {
            if (!r.is_object())
                throw Error(ErrorCode::Parse, what + ": records must be objects");
            auto attrs = r.find("attrs");
            if (attrs == r.end() || attrs->is_null())
                continue;
            if (!attrs->is_object())
                throw Error(ErrorCode::Parse, what + ": 'attrs' must be an object");
            for (auto it = attrs->begin(); it != attrs->end(); ++it)
                if (!schema.find(it.key()))
                    schema.add(AttributeDef::named(it.key()));
        }
        return schema;
    };
    Schema nodeSchema = discover(nodesJ, nodeDecl.is_null() ? nullptr : &nodeDecl, "nodes");
    Schema edgeSchema = discover(edgesJ, edgeDecl.is_null() ? nullptr : &edgeDecl, "edges");

    std::vector<Node> nodes;
    nodes.reserve(nodesJ.size());
    for (std::size_t i = 0; i < nodesJ.size(); ++i) {
        auto rec = toJson(nodesJ[i]);
        std::string where = "node #" + std::to_string(i);
        Node node;
        if (auto it = rec.find("id"); it != rec.end() && it->is_number_integer())
            node.id = std::to_string(it->get<long long>());
        else
            node.id = detail::require_string(rec, "id", where);
        if (auto it = rec.find("label"); it != rec.end() && it->is_string())
            node.label = it->get<std::string>();
        else
            node.label = node.id;
        node.values = detail::values_from(rec, nodeSchema, where + " '" + node.id + "'");
        nodes.push_back(std::move(node));
    }

    std::vector<Edge> edges;
    edges.reserve(edgesJ.size());
    for (std::size_t i = 0; i < edgesJ.size(); ++i) {
        auto rec = toJson(edgesJ[i]);
        std::string where = "edge #" + std::to_string(i);
        auto endpoint = [&](const char* key) {
            auto it = rec.find(key);
            if (it != rec.end() && it->is_number_integer())
                return std::to_string(it->get<long long>());
            return detail::require_string(rec, key, where);
        };
        Edge edge;
        edge.key = EdgeKey{endpoint("source"), endpoint("target")};
        if (auto it = rec.find("weight"); it != rec.end() && !it->is_null())
            edge.weight = detail::require_number(*it, where + " weight");
        edge.values = detail::values_from(rec, edgeSchema, where);
        edges.push_back(std::move(edge));
    }

    std::optional<std::pair<double, double>> weightRange;
    if (auto it = doc.find("weightRange"); it != doc.end()) {
        if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number())
            throw Error(ErrorCode::Parse, "dataset json: 'weightRange' must be [min,max]");
        weightRange = std::pair{(*it)[0].get<double>(), (*it)[1].get<double>()};
    }
    return MultivariateGraph(std::move(nodes), std::move(edges), std::move(nodeSchema),
                             std::move(edgeSchema), weightRange);
}

namespace detail
{

inline Value parse_cell(const std::string& cell, const std::string& where)
{
    std::string_view s = cell;
    while (!s.empty() && s.front() == ' ')
        s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ')
        s.remove_suffix(1);
    if (s.empty())
        return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error(ErrorCode::Parse, where + ": not a number: '" + cell + "'");
    return v;
}

inline std::size_t column(const csv::Row& header, std::string_view name, const std::string& table)
{
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw Error(ErrorCode::Parse, table + ": missing column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
}

} // namespace detail

/// Node table (id,label,attr...) plus edge list (source,target,weight[,attr...]).
inline MultivariateGraph parse_csv_dataset(std::string_view nodeTable, std::string_view edgeList)
{
    auto nodeRows = csv::parse(nodeTable);
    auto edgeRows = csv::parse(edgeList);
    if (nodeRows.empty())
        throw Error(ErrorCode::Parse, "node table: missing header");

    const auto& nh = nodeRows.front();
    std::size_t idCol = detail::column(nh, "id", "node table");
    std::optional<std::size_t> labelCol;
    if (auto it = std::find(nh.begin(), nh.end(), "label"); it != nh.end())
        labelCol = static_cast<std::size_t>(it - nh.begin());
    Schema nodeSchema;
    std::vector<std::size_t> nodeAttrCols;
    for (std::size_t c = 0; c < nh.size(); ++c) {
        if (c == idCol || (labelCol && c == *labelCol))
            continue;
        nodeSchema.add(AttributeDef::named(nh[c]));
        nodeAttrCols.push_back(c);
    }
    std::vector<Node> nodes;
    for (std::size_t r = 1; r < nodeRows.size(); ++r) {
        const auto& row = nodeRows[r];
        std::string where = "node table line " + std::to_string(r + 1);
        if (row.size() != nh.size())
            throw Error(ErrorCode::Parse, where + ": expected " + std::to_string(nh.size()) + " fields");
        Node node;
        node.id = row[idCol];
        node.label = labelCol ? row[*labelCol] : node.id;
        node.values.resize(nodeSchema.size());
        for (std::size_t a = 0; a < nodeAttrCols.size(); ++a)
            node.values[a] = detail::parse_cell(row[nodeAttrCols[a]], where + " column '" + nodeSchema[a].name + "'");
        nodes.push_back(std::move(node));
    }

    Schema edgeSchema;
    std::vector<Edge> edges;
    if (!edgeRows.empty()) {
        const auto& eh = edgeRows.front();
        std::size_t sCol = detail::column(eh, "source", "edge list");
        std::size_t tCol = detail::column(eh, "target", "edge list");
        std::optional<std::size_t> wCol;
        if (auto it = std::find(eh.begin(), eh.end(), "weight"); it != eh.end())
            wCol = static_cast<std::size_t>(it - eh.begin());
        std::vector<std::size_t> edgeAttrCols;
        for (std::size_t c = 0; c < eh.size(); ++c) {
            if (c == sCol || c == tCol || (wCol && c == *wCol))
                continue;
            edgeSchema.add(AttributeDef::named(eh[c]));
            edgeAttrCols.push_back(c);
        }
        for (std::size_t r = 1; r < edgeRows.size(); ++r) {
            const auto& row = edgeRows[r];
            std::string where = "edge list line " + std::to_string(r + 1);
            if (row.size() != eh.size())
                throw Error(ErrorCode::Parse, where + ": expected " + std::to_string(eh.size()) + " fields");
            Edge edge;
            edge.key = EdgeKey{row[sCol], row[tCol]};
            if (wCol) {
                auto w = detail::parse_cell(row[*wCol], where + " weight");
                edge.weight = w.value_or(1.0);
            }
            edge.values.resize(edgeSchema.size());
            for (std::size_t a = 0; a < edgeAttrCols.size(); ++a)
                edge.values[a] = detail::parse_cell(row[edgeAttrCols[a]], where + " column '" + edgeSchema[a].name + "'");
            edges.push_back(std::move(edge));
        }
    }
    return MultivariateGraph(std::move(nodes), std::move(edges), std::move(nodeSchema), std::move(edgeSchema));
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail
{

inline nlohmann::ordered_json schema_json(const Schema& schema)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto& d : schema) {
        nlohmann::ordered_json e;
        e["name"] = d.name;
        if (d.unit)
            e["unit"] = *d.unit;
        e["min"] = d.observedMin;
        e["max"] = d.observedMax;
        arr.push_back(std::move(e));
    }
    return arr;
}

inline nlohmann::ordered_json attrs_json(const Schema& schema, const std::vector<Value>& values)
{
    nlohmann::ordered_json attrs = nlohmann::ordered_json::object();
    for (std::size_t a = 0; a < schema.size(); ++a)
        if (values[a])
            attrs[schema[a].name] = *values[a];
    return attrs;
}

} // namespace detail

inline std::string serialize_json_dataset(const MultivariateGraph& g)
{
    nlohmann::ordered_json doc;
    doc["nodeSchema"] = detail::schema_json(g.node_schema());
    doc["edgeSchema"] = detail::schema_json(g.edge_schema());
    if (g.edge_count() > 0)
        doc["weightRange"] = {g.weight_def().observedMin, g.weight_def().observedMax};
    auto nodes = nlohmann::ordered_json::array();
    for (const auto& n : g.nodes()) {
        nlohmann::ordered_json j;
        j["id"] = n.id;
        j["label"] = n.label;
        j["attrs"] = detail::attrs_json(g.node_schema(), n.values);
        nodes.push_back(std::move(j));
    }
    auto edges = nlohmann::ordered_json::array();
    for (const auto& e : g.edges()) {
        nlohmann::ordered_json j;
        j["source"] = e.key.first;
        j["target"] = e.key.second;
        j["weight"] = e.weight;
        j["attrs"] = detail::attrs_json(g.edge_schema(), e.values);
        edges.push_back(std::move(j));
    }
    doc["nodes"] = std::move(nodes);
    doc["edges"] = std::move(edges);
    return doc.dump();
}

} // namespace rmc
