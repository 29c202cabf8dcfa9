#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rmc/color.hpp"
#include "rmc/editing.hpp"
#include "rmc/error.hpp"
#include "rmc/graph.hpp"
#include "rmc/layout.hpp"
#include "rmc/ordering.hpp"
#include "rmc/rmc_state.hpp"
#include "rmc/scene.hpp"
#include "rmc/scenegen.hpp"
#include "rmc/similarity.hpp"
#include "rmc/svg.hpp"

namespace rmc
{

inline constexpr std::size_t kFullSceneMarkLimit = 5000;

inline std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw Error(ErrorCode::Io, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline DatasetFormat parse_dataset_format(std::string_view s)
{
    if (s == "json")
        return DatasetFormat::Json;
    if (s == "csv" || s == "csv-pair")
        return DatasetFormat::CsvPair;
    throw Error(ErrorCode::BadPayload, "unknown dataset format '" + std::string(s) + "'");
}

/// JSON: one file. CSV: a directory holding nodes.csv and edges.csv, or
/// "nodes.csv,edges.csv".
inline MultivariateGraph load_dataset_file(const std::string& path, DatasetFormat format)
{
    if (format == DatasetFormat::Json)
        return parse_json_dataset(read_file(path));
    std::string nodesPath, edgesPath;
    if (auto comma = path.find(','); comma != std::string::npos) {
        nodesPath = path.substr(0, comma);
        edgesPath = path.substr(comma + 1);
    } else {
        nodesPath = (std::filesystem::path(path) / "nodes.csv").string();
        edgesPath = (std::filesystem::path(path) / "edges.csv").string();
    }
    return parse_csv_dataset(read_file(nodesPath), read_file(edgesPath));
}

enum class EventKind
{
    Ack,
    Error,
    SceneUpdate,
    HighlightUpdate,
    Stats
};

inline std::string_view to_string(EventKind k) noexcept
{
    switch (k) {
    case EventKind::Ack: return "ack";
    case EventKind::Error: return "error";
    case EventKind::SceneUpdate: return "scene_update";
    case EventKind::HighlightUpdate: return "highlight_update";
    case EventKind::Stats: return "stats";
    }
    return "ack";
}

struct Event
{
    long long inReplyTo = 0;
    EventKind kind = EventKind::Ack;
    nlohmann::json payload = nlohmann::json::object();
    // Pre-serialized canonical JSON spliced into the payload under this key.
    std::string rawKey;
    std::string rawValue;

    /// One protocol frame, keys sorted, no trailing newline.
    std::string to_line() const
    {
        std::string body = payload.dump();
        if (!rawKey.empty()) {
            // Insert the raw member at its sorted position.
            nlohmann::json probe = payload;
            probe[rawKey] = nullptr;
            std::string withNull = probe.dump();
            std::string needle = nlohmann::json(rawKey).dump() + ":null";
            auto at = withNull.find(needle);
            body = withNull.substr(0, at) + nlohmann::json(rawKey).dump() + ":" + rawValue +
                   withNull.substr(at + needle.size());
        }
        std::string out = "{\"inReplyTo\":" + std::to_string(inReplyTo) + ",\"kind\":\"";
        out += to_string(kind);
        out += "\",\"payload\":" + body + "}";
        return out;
    }
};

struct SessionOptions
{
    Viewport viewport;
    std::uint64_t seed = kDefaultLayoutSeed;
};

namespace detail
{

struct ActiveEdit
{
    EditTarget target;
    Value oldValue;
    double baseline = 0.0; // pixel deltas are measured from here
    std::vector<double> snapValues;
    std::optional<double> preview;
};

struct SessionState
{
    std::optional<MultivariateGraph> graph;
    SimilarityConfig simConfig;
    SimilarityMatrix similarity;
    Ordering ordering;
    ColorScheme scheme = ColorScheme::Default;
    RmcState rmcs;
    ViewTransform view;
    std::optional<ObjectRef> hover;
    History history;
    std::optional<ActiveEdit> edit;
};

inline const nlohmann::json& field(const nlohmann::json& p, const char* key)
{
    auto it = p.find(key);
    if (it == p.end())
        throw Error(ErrorCode::BadPayload, std::string("missing field '") + key + "'");
    return *it;
}

inline double number_field(const nlohmann::json& p, const char* key)
{
    const auto& v = field(p, key);
    if (!v.is_number())
        throw Error(ErrorCode::BadPayload, std::string("field '") + key + "' must be a number");
    double d = v.get<double>();
    if (!std::isfinite(d))
        throw Error(ErrorCode::NonFinite, std::string("field '") + key + "' must be finite");
    return d;
}

inline std::optional<double> optional_number(const nlohmann::json& p, const char* key)
{
    if (!p.contains(key))
        return std::nullopt;
    return number_field(p, key);
}

inline long long int_field(const nlohmann::json& p, const char* key)
{
    const auto& v = field(p, key);
    if (!v.is_number_integer())
        throw Error(ErrorCode::BadPayload, std::string("field '") + key + "' must be an integer");
    return v.get<long long>();
}

inline std::size_t index_field(const nlohmann::json& p, const char* key)
{
    auto v = int_field(p, key);
    if (v < 0)
        throw Error(ErrorCode::Bounds, std::string("field '") + key + "' must be >= 0");
    return static_cast<std::size_t>(v);
}

inline std::string string_field(const nlohmann::json& p, const char* key)
{
    const auto& v = field(p, key);
    if (!v.is_string())
        throw Error(ErrorCode::BadPayload, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

inline std::vector<std::string> string_list(const nlohmann::json& v, const char* key)
{
    if (!v.is_array())
        throw Error(ErrorCode::BadPayload, std::string("field '") + key + "' must be a list of strings");
    std::vector<std::string> out;
    for (const auto& s : v) {
        if (!s.is_string())
            throw Error(ErrorCode::BadPayload, std::string("field '") + key + "' must be a list of strings");
        out.push_back(s.get<std::string>());
    }
    return out;
}

inline std::string id_string(const nlohmann::json& v)
{
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_number_integer())
        return std::to_string(v.get<long long>());
    throw Error(ErrorCode::BadPayload, "ids must be strings");
}

/// {"node": id} | {"edge": [a, b]} | {"pair": [row, col]} inside `p`.
inline std::optional<ObjectRef> object_ref(const nlohmann::json& p)
{
    if (auto it = p.find("node"); it != p.end())
        return ObjectRef::node(id_string(*it));
    for (const char* key : {"edge", "pair"}) {
        auto it = p.find(key);
        if (it == p.end())
            continue;
        if (!it->is_array() || it->size() != 2)
            throw Error(ErrorCode::BadPayload, std::string("field '") + key + "' must be a pair of ids");
        auto a = id_string((*it)[0]), b = id_string((*it)[1]);
        return key[0] == 'e' ? ObjectRef::edge(EdgeKey::of(a, b)) : ObjectRef::pair(a, b);
    }
    return std::nullopt;
}

inline nlohmann::json ref_json(const ObjectRef& r)
{
    switch (r.kind) {
    case ObjectRef::Kind::Node: return {{"node", r.first}};
    case ObjectRef::Kind::Edge: return {{"edge", {r.first, r.second}}};
    case ObjectRef::Kind::Pair: return {{"pair", {r.first, r.second}}};
    }
    return nullptr;
}

inline nlohmann::json rmc_json(const Rmc& r)
{
    return {{"id", r.id},
            {"region", {{"row0", r.region.row0}, {"col0", r.region.col0}, {"rows", r.region.rows}, {"cols", r.region.cols}}},
            {"where", std::string(to_string(r.where))},
            {"what", std::string(to_string(r.what))},
            {"vis", std::string(to_string(r.vis.kind))},
            {"shownAttributes", r.vis.shownAttributes},
            {"requested", {r.requestedWidth, r.requestedHeight}}};
}

inline bool cancels_edit(std::string_view kind)
{
    static constexpr std::string_view keep[] = {"preview_edit", "commit_edit", "hover", "clear_hover", "query_stats",
                                                "export_svg"};
    return std::find(std::begin(keep), std::end(keep), kind) == std::end(keep);
}

} // namespace detail

/// One analyst session: applies commands strictly in sequence. Every command
/// runs against a copy of the state which replaces the live state only on
/// success, so failed commands leave no trace.
class Session
{
public:
    explicit Session(SessionOptions options = {}) : options_(options) {}

    bool loaded() const noexcept { return state_.graph.has_value(); }
    const MultivariateGraph& graph() const { return require(state_).graph.value(); }
    const SimilarityMatrix& similarity() const { return state_.similarity; }
    const SimilarityConfig& similarity_config() const { return state_.simConfig; }
    const Ordering& ordering() const { return state_.ordering; }
    const RmcState& rmcs() const { return state_.rmcs; }
    const History& history() const { return state_.history; }
    bool editing() const noexcept { return state_.edit.has_value(); }
    const Scene& scene() const noexcept { return scene_; }
    const std::string& digest() const noexcept { return digest_; }
    long long last_seq() const noexcept { return lastSeq_; }

    /// Parses and applies one protocol frame.
    std::vector<Event> handle_line(std::string_view line)
    {
        nlohmann::json cmd;
        try {
            cmd = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            return {error_event(0, ErrorCode::Parse, std::string("malformed frame: ") + e.what())};
        }
        return handle(cmd);
    }

    std::vector<Event> handle(const nlohmann::json& cmd)
    {
        long long seq = 0;
        if (cmd.is_object()) {
            auto it = cmd.find("seq");
            if (it != cmd.end() && it->is_number_integer())
                seq = it->get<long long>();
        }
        try {
            if (!cmd.is_object())
                throw Error(ErrorCode::Parse, "command must be an object");
            if (!cmd.contains("seq") || !cmd["seq"].is_number_integer())
                throw Error(ErrorCode::Parse, "command needs an integer seq");
            if (seq <= lastSeq_)
                throw Error(ErrorCode::Sequence,
                            "seq " + std::to_string(seq) + " not greater than " + std::to_string(lastSeq_));
            if (!cmd.contains("kind") || !cmd["kind"].is_string())
                throw Error(ErrorCode::Parse, "command needs a string kind");
            static const nlohmann::json emptyPayload = nlohmann::json::object();
            const auto& payload = cmd.contains("payload") ? cmd["payload"] : emptyPayload;
            if (!payload.is_object())
                throw Error(ErrorCode::BadPayload, "payload must be an object");
            lastSeq_ = seq;
            return apply(seq, cmd["kind"].get<std::string>(), payload);
        } catch (const Error& e) {
            return {error_event(seq, e.code(), e.what())};
        } catch (const nlohmann::json::exception& e) {
            return {error_event(seq, ErrorCode::BadPayload, e.what())};
        }
    }

    /// Answers a command that was superseded before being applied (a drag
    /// preview followed by a newer one). Only the sequence number is consumed.
    std::vector<Event> skip_superseded(long long seq, std::string_view kind)
    {
        if (seq <= lastSeq_)
            return {error_event(seq, ErrorCode::Sequence,
                                "seq " + std::to_string(seq) + " not greater than " + std::to_string(lastSeq_))};
        lastSeq_ = seq;
        Event a;
        a.inReplyTo = seq;
        a.payload = {{"command", std::string(kind)}, {"coalesced", true}};
        return {std::move(a)};
    }

    /// Loads a graph directly (CLI path), same effects as load_dataset.
    void load(MultivariateGraph g)
    {
        detail::SessionState next;
        install_graph(next, std::move(g));
        commit_state(std::move(next));
    }

private:
    static const detail::SessionState& require(const detail::SessionState& s)
    {
        if (!s.graph)
            throw Error(ErrorCode::NoSession, "no dataset loaded");
        return s;
    }

    static Event error_event(long long seq, ErrorCode code, const std::string& message)
    {
        Event e;
        e.inReplyTo = seq;
        e.kind = EventKind::Error;
        e.payload = {{"code", std::string(to_string(code))}, {"message", message}};
        return e;
    }

    void install_graph(detail::SessionState& s, MultivariateGraph g) const
    {
        std::size_t n = g.node_count();
        s.graph = std::move(g);
        s.simConfig = SimilarityConfig{};
        s.simConfig.selectedAttributes = s.graph->node_schema().names();
        rebuild_similarity(s);
        s.ordering = identity_ordering(n);
        s.rmcs = RmcState(n, options_.viewport);
        s.view = {};
        s.hover.reset();
        s.history = {};
        s.edit.reset();
    }

    static void rebuild_similarity(detail::SessionState& s)
    {
        if (s.simConfig.selectedAttributes.empty()) {
            // No attributes: only the diagonal is defined.
            SimilarityMatrix m(s.graph->node_count());
            for (std::size_t i = 0; i < m.size(); ++i)
                m.set(i, i, 1.0);
            s.similarity = std::move(m);
            return;
        }
        s.similarity = build_similarity_matrix(*s.graph, s.simConfig);
    }

    // Similarity after a single value change. A node edit that keeps the
    // attribute range needs only its row; anything else rebuilds.
    static void refresh_after_value_change(detail::SessionState& s, const EditTarget& t, bool rangeChanged)
    {
        if (t.kind != ObjectKind::Node || s.simConfig.selectedAttributes.empty())
            return;
        const auto& sel = s.simConfig.selectedAttributes;
        if (std::find(sel.begin(), sel.end(), t.attribute) == sel.end())
            return;
        if (rangeChanged)
            rebuild_similarity(s);
        else
            s.similarity = update_similarity_row(std::move(s.similarity), *s.graph, s.simConfig, t.id);
    }

    static void cancel_edit(detail::SessionState& s)
    {
        if (!s.edit)
            return;
        const auto& e = *s.edit;
        if (e.preview) {
            s.graph->set_value(e.target.kind, target_index(*s.graph, e.target), e.target.attribute, e.oldValue);
            refresh_after_value_change(s, e.target, false);
        }
        s.edit.reset();
    }

    Scene render(const detail::SessionState& s) const
    {
        if (!s.graph)
            return {};
        SceneInput in;
        in.model = MatrixModel{&*s.graph, &s.similarity, &s.ordering, s.scheme};
        in.rmcs = &s.rmcs;
        in.view = s.view;
        in.hover = s.hover;
        in.seed = options_.seed;
        return compose_scene(in);
    }

    void commit_state(detail::SessionState next)
    {
        Scene scene = render(next);
        state_ = std::move(next);
        scene_ = std::move(scene);
        std::string text = canonical::marks(scene_.marks);
        digest_ = to_hex64(fnv1a64(text));
        // Kept only when a full scene would be sent; large scenes go out as diffs.
        marksText_ = scene_.marks.size() < kFullSceneMarkLimit ? std::move(text) : std::string();
    }

    Event scene_event(long long seq, const Scene& previous) const
    {
        Event e;
        e.inReplyTo = seq;
        e.kind = EventKind::SceneUpdate;
        e.payload = {{"digest", digest_}, {"markCount", scene_.marks.size()}};
        if (scene_.marks.size() < kFullSceneMarkLimit || previous.marks.empty()) {
            e.payload["full"] = true;
            e.rawKey = "scene";
            e.rawValue = scene_.marks.size() < kFullSceneMarkLimit ? canonical::scene(scene_, marksText_)
                                                                   : canonical::scene(scene_);
            return e;
        }
        e.payload["full"] = false;
        std::string diff = "{\"length\":" + std::to_string(scene_.marks.size()) + ",\"set\":[";
        bool first = true;
        for (std::size_t i = 0; i < scene_.marks.size(); ++i) {
            if (i < previous.marks.size() && previous.marks[i] == scene_.marks[i])
                continue;
            if (!first)
                diff.push_back(',');
            first = false;
            diff += "[" + std::to_string(i) + ",";
            canonical::mark(diff, scene_.marks[i]);
            diff.push_back(']');
        }
        diff += "]}";
        e.rawKey = "diff";
        e.rawValue = std::move(diff);
        return e;
    }

    nlohmann::json stats_json() const
    {
        const auto& s = require(state_);
        auto st = graph_stats(*s.graph);
        nlohmann::json rmcs = nlohmann::json::array();
        auto layout = s.rmcs.layout();
        for (const auto& r : s.rmcs.rmcs()) {
            auto j = detail::rmc_json(r);
            const auto& rect = layout.rmcRects.at(r.id);
            Rect cell = r.where == Where::UnitGrid ? layout.cell_rect(r.region.row0, r.region.col0) : rect;
            j["rect"] = {rect.x, rect.y, rect.w, rect.h};
            j["lod"] = std::string(to_string(lod_for_size(cell.w, cell.h)));
            rmcs.push_back(std::move(j));
        }
        return {{"nodeCount", st.nodeCount},
                {"edgeCount", st.edgeCount},
                {"cellCounts",
                 {{"total", st.total}, {"adjacency", st.adjacency}, {"similarity", st.similarity}, {"diagonal", st.diagonal}}},
                {"ordering", s.ordering.strategy.to_string()},
                {"similarityAttributes", s.simConfig.selectedAttributes},
                {"colorScheme", std::string(to_string(s.scheme))},
                {"zoom", s.rmcs.zoom()},
                {"rmcs", rmcs},
                {"undoDepth", s.history.undoStack.size()},
                {"redoDepth", s.history.redoStack.size()},
                {"editing", s.edit.has_value()},
                {"markCount", scene_.marks.size()},
                {"digest", digest_}};
    }

    static ScaleRequest scale_request(const nlohmann::json& p)
    {
        ScaleRequest req;
        std::string mode = p.contains("mode") ? detail::string_field(p, "mode") : "absolute";
        if (mode == "absolute")
            req.mode = ScaleRequest::Mode::Absolute;
        else if (mode == "delta")
            req.mode = ScaleRequest::Mode::Delta;
        else if (mode == "factor")
            req.mode = ScaleRequest::Mode::Factor;
        else
            throw Error(ErrorCode::BadPayload, "unknown scale mode '" + mode + "'");
        std::string axis = p.contains("axis") ? detail::string_field(p, "axis") : "both";
        if (axis == "both")
            req.axis = AxisMode::Both;
        else if (axis == "x" || axis == "x-only")
            req.axis = AxisMode::XOnly;
        else if (axis == "y" || axis == "y-only")
            req.axis = AxisMode::YOnly;
        else
            throw Error(ErrorCode::BadPayload, "unknown axis mode '" + axis + "'");
        if (req.mode == ScaleRequest::Mode::Factor) {
            req.width = detail::number_field(p, "factor");
        } else {
            bool needW = req.axis != AxisMode::YOnly, needH = req.axis != AxisMode::XOnly;
            req.width = needW ? detail::number_field(p, "width") : 0.0;
            req.height = needH ? detail::number_field(p, "height") : 0.0;
        }
        return req;
    }

    static RegionEdge region_edge(const std::string& s)
    {
        if (s == "top")
            return RegionEdge::Top;
        if (s == "bottom")
            return RegionEdge::Bottom;
        if (s == "left")
            return RegionEdge::Left;
        if (s == "right")
            return RegionEdge::Right;
        throw Error(ErrorCode::BadPayload, "unknown region edge '" + s + "'");
    }

    // Editable means the current scene carries an edit handle for the target.
    std::optional<EditHandle> find_handle(const EditTarget& t) const
    {
        auto ref = t.ref();
        for (const auto& m : scene_.marks)
            if (m.editHandle && m.editHandle->object == ref && m.editHandle->attribute == t.attribute)
                return m.editHandle;
        return std::nullopt;
    }

    // Values of other objects drawn for the same attribute, for snapping.
    std::vector<double> snap_candidates(const detail::SessionState& s, const EditTarget& t) const
    {
        std::vector<double> out;
        auto ref = t.ref();
        std::set<ObjectRef> seen;
        for (const auto& m : scene_.marks) {
            if (!m.editHandle || m.editHandle->attribute != t.attribute || m.editHandle->object == ref)
                continue;
            const auto& o = m.editHandle->object;
            if (!seen.insert(o).second)
                continue;
            auto other = EditTarget::from_ref(o, t.attribute);
            if (auto v = s.graph->value(other.kind, target_index(*s.graph, other), t.attribute))
                out.push_back(*v);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    EditTarget target_from(const nlohmann::json& p) const
    {
        auto ref = detail::object_ref(p);
        if (!ref)
            throw Error(ErrorCode::BadPayload, "edit needs a node or edge");
        auto t = EditTarget::from_ref(*ref, detail::string_field(p, "attribute"));
        target_index(*state_.graph, t);
        return t;
    }

    std::vector<Event> apply(long long seq, const std::string& kind, const nlohmann::json& p)
    {
        detail::SessionState s = state_;
        nlohmann::json ack = {{"command", kind}};
        std::vector<Event> extra;

        if (kind != "load_dataset")
            require(s);
        if (kind != "load_dataset" && detail::cancels_edit(kind))
            cancel_edit(s);

        auto rmcId = [&] { return static_cast<int>(detail::int_field(p, "id")); };

        if (kind == "load_dataset") {
            MultivariateGraph g;
            if (p.contains("dataset")) {
                g = parse_json_dataset(p["dataset"].dump());
            } else {
                auto fmt = p.contains("format") ? parse_dataset_format(detail::string_field(p, "format"))
                                                : DatasetFormat::Json;
                g = load_dataset_file(detail::string_field(p, "path"), fmt);
            }
            install_graph(s, std::move(g));
            ack["nodeCount"] = s.graph->node_count();
            ack["edgeCount"] = s.graph->edge_count();
        } else if (kind == "set_similarity_attributes") {
            SimilarityConfig cfg;
            cfg.selectedAttributes = detail::string_list(detail::field(p, "attributes"), "attributes");
            validate(cfg, s.graph->node_schema());
            s.simConfig = std::move(cfg);
            rebuild_similarity(s);
        } else if (kind == "set_ordering") {
            auto strategy = OrderingStrategy::parse(detail::string_field(p, "strategy"));
            s.ordering = order_nodes(*s.graph, strategy, &s.similarity);
            s.rmcs.revalidate(*s.graph, s.ordering);
            ack["order"] = s.ordering.ids(*s.graph);
        } else if (kind == "set_color_scale") {
            s.scheme = parse_color_scheme(detail::string_field(p, "scheme"));
        } else if (kind == "global_zoom_pan") {
            if (auto z = detail::optional_number(p, "zoom"))
                s.rmcs.set_zoom(*z);
            if (auto x = detail::optional_number(p, "panX"))
                s.view.panX = *x;
            if (auto y = detail::optional_number(p, "panY"))
                s.view.panY = *y;
            double maxX = std::max(0.0, s.rmcs.viewport().width * (s.rmcs.zoom() - 1.0));
            double maxY = std::max(0.0, s.rmcs.viewport().height * (s.rmcs.zoom() - 1.0));
            s.view.panX = std::clamp(s.view.panX, 0.0, maxX);
            s.view.panY = std::clamp(s.view.panY, 0.0, maxY);
        } else if (kind == "create_rmc") {
            Region reg{detail::index_field(p, "row0"), detail::index_field(p, "col0"),
                       p.contains("rows") ? detail::index_field(p, "rows") : 1,
                       p.contains("cols") ? detail::index_field(p, "cols") : 1};
            std::optional<std::pair<std::size_t, std::size_t>> origin;
            if (p.contains("originRow") || p.contains("originCol"))
                origin = std::pair{detail::index_field(p, "originRow"), detail::index_field(p, "originCol")};
            bool unit = p.contains("asUnitGrid") && detail::field(p, "asUnitGrid").get<bool>();
            const auto& rmc = s.rmcs.create(reg, unit, origin, *s.graph, s.simConfig.selectedAttributes);
            ack["id"] = rmc.id;
            ack["rmc"] = detail::rmc_json(rmc);
        } else if (kind == "scale_rmc") {
            s.rmcs.scale(rmcId(), scale_request(p));
            ack["rmc"] = detail::rmc_json(s.rmcs.get(rmcId()));
        } else if (kind == "resize_region") {
            s.rmcs.resize_region(rmcId(), region_edge(detail::string_field(p, "edge")),
                                 static_cast<long>(detail::int_field(p, "delta")), *s.graph, s.ordering);
            ack["rmc"] = detail::rmc_json(s.rmcs.get(rmcId()));
        } else if (kind == "switch_what") {
            s.rmcs.switch_what(rmcId(), *s.graph, s.ordering);
            ack["rmc"] = detail::rmc_json(s.rmcs.get(rmcId()));
        } else if (kind == "toggle_where") {
            s.rmcs.toggle_where(rmcId(), *s.graph, s.ordering);
            ack["rmc"] = detail::rmc_json(s.rmcs.get(rmcId()));
        } else if (kind == "set_vis") {
            VisSpec vis;
            vis.kind = parse_vis_kind(detail::string_field(p, "kind"));
            if (p.contains("attributes"))
                vis.shownAttributes = detail::string_list(p["attributes"], "attributes");
            s.rmcs.set_vis(rmcId(), std::move(vis), *s.graph, s.ordering);
            ack["rmc"] = detail::rmc_json(s.rmcs.get(rmcId()));
        } else if (kind == "add_shown_attribute") {
            s.rmcs.add_shown_attribute(rmcId(), detail::string_field(p, "attribute"), *s.graph, s.ordering);
            ack["rmc"] = detail::rmc_json(s.rmcs.get(rmcId()));
        } else if (kind == "remove_shown_attribute") {
            s.rmcs.remove_shown_attribute(rmcId(), detail::string_field(p, "attribute"), *s.graph, s.ordering);
            ack["rmc"] = detail::rmc_json(s.rmcs.get(rmcId()));
        } else if (kind == "hover") {
            std::optional<ObjectRef> ref;
            if (p.contains("cell")) {
                const auto& c = p["cell"];
                if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() || !c[1].is_number_integer())
                    throw Error(ErrorCode::BadPayload, "cell must be [row, col]");
                long long r = c[0].get<long long>(), col = c[1].get<long long>();
                auto n = static_cast<long long>(s.graph->node_count());
                if (r < 0 || col < 0 || r >= n || col >= n)
                    throw Error(ErrorCode::Bounds, "cell outside matrix");
                MatrixModel model{&*s.graph, &s.similarity, &s.ordering, s.scheme};
                ref = model.cell_ref(static_cast<std::size_t>(r), static_cast<std::size_t>(col));
            } else {
                ref = detail::object_ref(p);
            }
            if (!ref)
                throw Error(ErrorCode::BadPayload, "hover needs a node, edge, pair or cell");
            auto hl = highlight_resolve(*s.graph, *ref);
            s.hover = ref;
            Event h;
            h.inReplyTo = seq;
            h.kind = EventKind::HighlightUpdate;
            nlohmann::json edges = nlohmann::json::array();
            for (const auto& e : hl.edges)
                edges.push_back({e.first, e.second});
            h.payload = {{"hovered", detail::ref_json(*ref)}, {"nodes", hl.nodes}, {"edges", edges}};
            extra.push_back(std::move(h));
        } else if (kind == "clear_hover") {
            s.hover.reset();
            Event h;
            h.inReplyTo = seq;
            h.kind = EventKind::HighlightUpdate;
            h.payload = {{"hovered", nullptr}, {"nodes", nlohmann::json::array()}, {"edges", nlohmann::json::array()}};
            extra.push_back(std::move(h));
        } else if (kind == "begin_edit") {
            auto t = target_from(p);
            auto handle = find_handle(t);
            if (!handle)
                throw Error(ErrorCode::NotEditable, "no edit handle for " + t.ref().str() + " '" + t.attribute +
                                                        "' at the current level of detail");
            t.valuePerPixel = handle->valuePerPixel;
            detail::ActiveEdit e;
            e.oldValue = s.graph->value(t.kind, target_index(*s.graph, t), t.attribute);
            e.baseline = e.oldValue.value_or(s.graph->attribute_def(t.kind, t.attribute).observedMin);
            e.snapValues = snap_candidates(s, t);
            e.target = std::move(t);
            ack["valuePerPixel"] = e.target.valuePerPixel;
            ack["value"] = e.oldValue ? nlohmann::json(*e.oldValue) : nlohmann::json(nullptr);
            s.edit = std::move(e);
        } else if (kind == "preview_edit") {
            if (!s.edit)
                throw Error(ErrorCode::NoActiveEdit, "preview_edit without begin_edit");
            auto& e = *s.edit;
            const auto& def = s.graph->attribute_def(e.target.kind, e.target.attribute);
            double v;
            if (p.contains("value")) {
                v = detail::number_field(p, "value");
            } else {
                v = e.baseline + detail::number_field(p, "pixelDelta") * e.target.valuePerPixel;
                bool snap = !p.contains("snap") || detail::field(p, "snap").get<bool>();
                if (snap)
                    v = snap_value(v, e.snapValues, e.target.valuePerPixel);
            }
            v = clamp_preview(v, def);
            if (e.target.kind == ObjectKind::Edge && e.target.attribute == kWeightAttribute)
                v = std::max(v, 0.0);
            e.preview = v;
            s.graph->set_value(e.target.kind, target_index(*s.graph, e.target), e.target.attribute, v);
            refresh_after_value_change(s, e.target, false);
            ack["value"] = v;
        } else if (kind == "commit_edit") {
            auto source = p.contains("source") ? parse_edit_source(detail::string_field(p, "source")) : EditSource::Drag;
            EditTarget t;
            Value oldValue;
            std::optional<double> value = detail::optional_number(p, "value");
            if (source == EditSource::Drag) {
                if (!s.edit)
                    throw Error(ErrorCode::NoActiveEdit, "commit_edit without begin_edit");
                t = s.edit->target;
                oldValue = s.edit->oldValue;
                if (!value)
                    value = s.edit->preview;
                if (!value)
                    throw Error(ErrorCode::BadPayload, "commit_edit needs a value or a preview");
                // Restore the committed value so the range widening below
                // starts from the pre-edit state.
                s.graph->set_value(t.kind, target_index(*s.graph, t), t.attribute, oldValue);
                s.edit.reset();
            } else {
                if (s.edit)
                    cancel_edit(s);
                t = target_from(p);
                oldValue = s.graph->value(t.kind, target_index(*s.graph, t), t.attribute);
                if (!value)
                    throw Error(ErrorCode::BadPayload, "numeric entry needs a value");
            }
            if (t.kind == ObjectKind::Edge && t.attribute == kWeightAttribute && *value < 0.0)
                throw Error(ErrorCode::Validation, "edge weight must be >= 0");
            AttributeDef prior = write_committed(*s.graph, t, value);
            bool widened = !(prior == s.graph->attribute_def(t.kind, t.attribute));
            refresh_after_value_change(s, t, widened);
            s.history.push(EditOp{t, oldValue, value, prior, seq});
            ack["value"] = *value;
            ack["previous"] = oldValue ? nlohmann::json(*oldValue) : nlohmann::json(nullptr);
        } else if (kind == "undo" || kind == "redo") {
            bool undo = kind == "undo";
            auto& from = undo ? s.history.undoStack : s.history.redoStack;
            auto& to = undo ? s.history.redoStack : s.history.undoStack;
            if (from.empty()) {
                ack["noop"] = true;
                Event a;
                a.inReplyTo = seq;
                a.payload = std::move(ack);
                return {std::move(a)};
            }
            EditOp op = std::move(from.back());
            from.pop_back();
            if (undo)
                revert(*s.graph, op);
            else
                reapply(*s.graph, op);
            rebuild_similarity(s);
            ack["target"] = detail::ref_json(op.target.ref());
            ack["attribute"] = op.target.attribute;
            to.push_back(std::move(op));
        } else if (kind == "dismiss_rmc") {
            s.rmcs.dismiss(rmcId());
        } else if (kind == "reset") {
            s.rmcs.reset();
        } else if (kind == "export_svg") {
            std::string svg = to_svg(scene_);
            if (p.contains("path")) {
                write_svg(scene_, detail::string_field(p, "path"));
                ack["path"] = p["path"];
            } else {
                ack["svg"] = svg;
            }
            ack["bytes"] = svg.size();
            ack["markCount"] = scene_.marks.size();
        } else if (kind == "query_stats") {
            Event st;
            st.inReplyTo = seq;
            st.kind = EventKind::Stats;
            st.payload = stats_json();
            return {std::move(st)};
        } else {
            throw Error(ErrorCode::UnknownCommand, "unknown command '" + kind + "'");
        }

        Scene previous = std::move(scene_);
        std::string previousDigest = digest_;
        try {
            commit_state(std::move(s));
        } catch (...) {
            scene_ = std::move(previous);
            throw;
        }
        std::vector<Event> events;
        Event a;
        a.inReplyTo = seq;
        a.payload = std::move(ack);
        events.push_back(std::move(a));
        for (auto& e : extra)
            events.push_back(std::move(e));
        if (digest_ != previousDigest || kind == "load_dataset")
            events.push_back(scene_event(seq, previous));
        return events;
    }

    SessionOptions options_;
    detail::SessionState state_;
    Scene scene_;
    std::string digest_ = scene_digest(Scene{});
    std::string marksText_ = "[]";
    long long lastSeq_ = 0;
};

struct ReplayResult
{
    std::string finalDigest;
    std::vector<std::string> perStepDigests; // [post-load, after command 1, ...]
};

/// Replays newline-delimited commands; blank lines and lines starting with
/// '#' are skipped and a missing seq is assigned as previous + 1. The first
/// digest is the state before the script (e.g. right after loading).
inline ReplayResult replay_script(Session& session, std::istream& script,
                                  const std::function<void(const Event&)>& onEvent = {})
{
    ReplayResult out;
    out.perStepDigests.push_back(session.digest());
    std::string line;
    std::size_t step = 0;
    while (std::getline(script, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        ++step;
        nlohmann::json cmd;
        try {
            cmd = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::Parse, "step " + std::to_string(step) + ": malformed command: " + e.what());
        }
        if (cmd.is_object() && !cmd.contains("seq"))
            cmd["seq"] = session.last_seq() + 1;
        for (const auto& ev : session.handle(cmd)) {
            if (onEvent)
                onEvent(ev);
            if (ev.kind == EventKind::Error)
                throw Error(parse_error_code(ev.payload["code"].get<std::string>()).value_or(ErrorCode::Parse),
                            "step " + std::to_string(step) + ": " +
                                                  ev.payload["code"].get<std::string>() + ": " +
                                                  ev.payload["message"].get<std::string>());
        }
        out.perStepDigests.push_back(session.digest());
    }
    out.finalDigest = session.digest();
    return out;
}

inline ReplayResult replay_script(Session& session, const std::string& path,
                                  const std::function<void(const Event&)>& onEvent = {})
{
    std::ifstream f(path);
    if (!f)
        throw Error(ErrorCode::Io, "cannot read script '" + path + "'");
    return replay_script(session, f, onEvent);
}

} // namespace rmc
