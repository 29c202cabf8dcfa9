#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "rmc/error.hpp"
#include "rmc/graph.hpp"
#include "rmc/scene.hpp"

namespace rmc
{

inline constexpr double kSnapTolerancePx = 4.0;
inline constexpr double kPreviewRangeSlack = 0.1;

enum class EditSource
{
    Drag,
    NumericEntry
};

inline EditSource parse_edit_source(std::string_view s)
{
    if (s == "drag")
        return EditSource::Drag;
    if (s == "numeric-entry")
        return EditSource::NumericEntry;
    throw Error(ErrorCode::BadPayload, "unknown edit source '" + std::string(s) + "'");
}

struct EditTarget
{
    ObjectKind kind = ObjectKind::Node;
    std::string id;     // node id, or first endpoint for edges
    std::string second; // edges only
    std::string attribute;
    double valuePerPixel = 0.0;

    EdgeKey edge_key() const { return EdgeKey::of(id, second); }

    ObjectRef ref() const
    {
        return kind == ObjectKind::Node ? ObjectRef::node(id) : ObjectRef::edge(edge_key());
    }

    static EditTarget from_ref(const ObjectRef& r, std::string attribute, double vpp = 0.0)
    {
        if (r.kind == ObjectRef::Kind::Pair)
            throw Error(ErrorCode::NotEditable, "node pairs have no editable values");
        EditTarget t;
        t.kind = r.kind == ObjectRef::Kind::Node ? ObjectKind::Node : ObjectKind::Edge;
        t.id = r.first;
        t.second = r.second;
        t.attribute = std::move(attribute);
        t.valuePerPixel = vpp;
        return t;
    }

    bool operator==(const EditTarget&) const = default;
};

inline std::size_t target_index(const MultivariateGraph& g, const EditTarget& t)
{
    std::size_t idx = t.kind == ObjectKind::Node ? g.node_index(t.id) : g.edge_index(t.edge_key());
    if (!g.has_attribute(t.kind, t.attribute))
        throw Error(ErrorCode::UnknownAttribute, "unknown attribute '" + t.attribute + "'");
    return idx;
}

/// A committed edit. `priorDef` is the attribute definition before the commit
/// widened it, so undo restores normalization exactly.
struct EditOp
{
    EditTarget target;
    Value oldValue;
    Value newValue;
    AttributeDef priorDef;
    long long timestamp = 0; // command sequence number of the commit

    bool operator==(const EditOp&) const = default;
};

struct History
{
    std::vector<EditOp> undoStack;
    std::vector<EditOp> redoStack;

    void push(EditOp op)
    {
        undoStack.push_back(std::move(op));
        redoStack.clear();
    }

    bool operator==(const History&) const = default;
};

/// Nearest other value within `tolerancePx` pixels of `candidate`, where one
/// pixel spans `valuePerPixel` value units; ties go to the smaller value.
inline double snap_value(double candidate, const std::vector<double>& others, double valuePerPixel,
                         double tolerancePx = kSnapTolerancePx)
{
    if (!(valuePerPixel > 0.0))
        return candidate;
    std::optional<double> best;
    double bestDist = 0.0;
    for (double v : others) {
        double px = std::abs(v - candidate) / valuePerPixel;
        if (px > tolerancePx)
            continue;
        if (!best || px < bestDist || (px == bestDist && v < *best)) {
            best = v;
            bestDist = px;
        }
    }
    return best.value_or(candidate);
}

/// Observed range widened by 10% of its width on both sides.
inline double clamp_preview(double v, const AttributeDef& def)
{
    double width = def.observedMax - def.observedMin;
    double slack = kPreviewRangeSlack * (width > 0.0 ? width : std::max(std::abs(def.observedMax), 1.0));
    return std::clamp(v, def.observedMin - slack, def.observedMax + slack);
}

/// Writes a committed value and widens the attribute range to include it.
/// Returns the definition as it was before.
inline AttributeDef write_committed(MultivariateGraph& g, const EditTarget& t, Value v)
{
    std::size_t idx = target_index(g, t);
    if (v && !std::isfinite(*v))
        throw Error(ErrorCode::NonFinite, "edit value must be finite");
    AttributeDef& def = g.mutable_attribute_def(t.kind, t.attribute);
    AttributeDef prior = def;
    g.set_value(t.kind, idx, t.attribute, v);
    if (v)
        def.include(*v);
    return prior;
}

/// Reverts a committed op: old value and the prior attribute range.
inline void revert(MultivariateGraph& g, const EditOp& op)
{
    std::size_t idx = target_index(g, op.target);
    g.set_value(op.target.kind, idx, op.target.attribute, op.oldValue);
    g.mutable_attribute_def(op.target.kind, op.target.attribute) = op.priorDef;
}

/// Re-applies a committed op after undo.
inline void reapply(MultivariateGraph& g, const EditOp& op) { write_committed(g, op.target, op.newValue); }

} // namespace rmc
