// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Run with --cli <path to rmc> for the cross-process checks.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>

#include "../test_util.hpp"

using namespace rmc;
using namespace rmc::testing;

namespace
{

using Clock = std::chrono::steady_clock;

struct Outcome
{
    bool ok = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (ok)
            detail = why;
        ok = false;
    }
};

double ms_since(Clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 1)
{
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << v;
    return s.str();
}

// Throws on any error event.
std::vector<Event> must(Session& s, long long& seq, const std::string& kind, nlohmann::json payload = nlohmann::json::object())
{
    auto ev = s.handle(command(++seq, kind, std::move(payload)));
    for (const auto& e : ev)
        if (e.kind == EventKind::Error)
            throw std::runtime_error(kind + " failed: " + e.payload.dump());
    return ev;
}

double kahan(const std::vector<double>& xs)
{
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

// ---------------------------------------------------------------------------

Outcome cell_counts()
{
    Outcome out;
    auto t0 = Clock::now();
    Session s;
    long long seq = 0;
    must(s, seq, "load_dataset", {{"path", data_path("walkthrough.json")}});
    auto stats = must(s, seq, "query_stats")[0].payload["cellCounts"];
    double took = ms_since(t0);
    std::array<long long, 4> got{stats["total"], stats["adjacency"], stats["similarity"], stats["diagonal"]};
    std::array<long long, 4> want{9025, 4465, 4465, 95};
    if (got != want)
        out.fail("got " + stats.dump());
    if (took >= 1000.0)
        out.fail("took " + fmt(took) + " ms");
    out.detail = out.ok ? "9025/4465/4465/95 in " + fmt(took) + " ms" : out.detail;
    return out;
}

Outcome walkthrough()
{
    Outcome out;
    auto t0 = Clock::now();
    Session s;
    long long seq = 0;
    must(s, seq, "load_dataset", {{"path", data_path("walkthrough.json")}});
    std::vector<std::string> digests{s.digest()};

    std::ifstream script(data_path("walkthrough.ndjson"));
    std::optional<SimilarityMatrix> preEdit;
    std::optional<MultivariateGraph> preGraph;
    std::set<std::string> edited;
    std::string line;
    while (std::getline(script, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        auto cmd = nlohmann::json::parse(line);
        std::string kind = cmd["kind"];
        if ((kind == "begin_edit" || kind == "commit_edit") && !preEdit) {
            preEdit = s.similarity();
            preGraph = s.graph();
        }
        if (cmd.contains("payload") && cmd["payload"].contains("node") &&
            (kind == "begin_edit" || kind == "commit_edit"))
            edited.insert(cmd["payload"]["node"].get<std::string>());
        cmd["seq"] = ++seq;
        for (const auto& e : s.handle(cmd))
            if (e.kind == EventKind::Error) {
                out.fail("step " + std::to_string(digests.size()) + " " + kind + ": " + e.payload.dump());
                return out;
            }
        digests.push_back(s.digest());
    }
    double took = ms_since(t0);

    std::vector<std::string> golden;
    std::ifstream g(data_path("walkthrough.golden"));
    for (std::string d; g >> d;)
        golden.push_back(d);
    if (golden.size() != digests.size()) {
        out.fail("golden has " + std::to_string(golden.size()) + " digests, replay produced " +
                 std::to_string(digests.size()));
    } else {
        for (std::size_t i = 0; i < golden.size(); ++i)
            if (golden[i] != digests[i]) {
                out.fail("digest " + std::to_string(i) + " is " + digests[i] + ", golden " + golden[i]);
                break;
            }
    }

    if (!preEdit || edited.empty()) {
        out.fail("script contains no edits");
        return out;
    }
    // Oracle: full rebuilds before and after, independent of the incremental path.
    auto before = build_similarity_matrix(*preGraph, s.similarity_config());
    auto after = build_similarity_matrix(s.graph(), s.similarity_config());
    if (!(before == *preEdit))
        out.fail("pre-edit similarity differs from a full rebuild");
    if (!(after == s.similarity()))
        out.fail("post-edit similarity differs from a full rebuild");
    for (const auto& id : edited) {
        std::size_t k = s.graph().node_index(id);
        bool differs = false;
        for (std::size_t j = 0; j < after.size(); ++j)
            differs |= j != k && before.at(k, j) != after.at(k, j);
        if (!differs)
            out.fail("similarity row of edited node " + id + " did not change");
    }
    if (took >= 5000.0)
        out.fail("took " + fmt(took) + " ms");
    if (out.ok)
        out.detail = std::to_string(digests.size()) + " digests match, " + std::to_string(edited.size()) +
                     " edited rows differ, " + fmt(took) + " ms";
    return out;
}

Outcome layout_conservation()
{
    Outcome out;
    std::mt19937_64 rng(2024);
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::size_t configs = 0;
    for (; configs < 10000 && out.ok; ++configs) {
        std::size_t n = 1 + rng() % 150;
        Viewport vp{100.0 + unit() * 1900.0, 100.0 + unit() * 1900.0, 0.5 + unit() * 1.5};
        // Up to three RMCs with disjoint row spans and disjoint column spans.
        std::vector<FocusRequest> reqs;
        std::vector<bool> rowUsed(n, false), colUsed(n, false);
        std::size_t want = rng() % 4;
        for (std::size_t a = 0; a < 20 && reqs.size() < want; ++a) {
            Region r{rng() % n, rng() % n, 1 + rng() % 4, 1 + rng() % 4};
            if (r.row_end() > n || r.col_end() > n)
                continue;
            bool clash = false;
            for (std::size_t i = r.row0; i < r.row_end(); ++i)
                clash |= rowUsed[i];
            for (std::size_t j = r.col0; j < r.col_end(); ++j)
                clash |= colUsed[j];
            if (clash)
                continue;
            for (std::size_t i = r.row0; i < r.row_end(); ++i)
                rowUsed[i] = true;
            for (std::size_t j = r.col0; j < r.col_end(); ++j)
                colUsed[j] = true;
            reqs.push_back({static_cast<int>(reqs.size() + 1), r, 1.0 + unit() * vp.width, 1.0 + unit() * vp.height});
        }
        auto l = solve_layout(n, reqs, vp);
        if (std::abs(kahan(l.rows.extents) - vp.height) > 0.5 || std::abs(kahan(l.cols.extents) - vp.width) > 0.5) {
            out.fail("extents do not sum to the viewport in config " + std::to_string(configs));
            break;
        }
        for (double e : l.rows.extents)
            if (!(e >= 0.0))
                out.fail("negative row extent in config " + std::to_string(configs));
        for (double e : l.cols.extents)
            if (!(e >= 0.0))
                out.fail("negative column extent in config " + std::to_string(configs));
        if (reqs.empty())
            continue;
        auto grown = reqs;
        auto& g = grown[rng() % grown.size()];
        g.width *= 1.0 + unit();
        g.height *= 1.0 + unit();
        auto l2 = solve_layout(n, grown, vp);
        for (std::size_t i = 0; i < n; ++i) {
            if (!rowUsed[i] && l2.rows.extents[i] > l.rows.extents[i] + 1e-9)
                out.fail("context row grew in config " + std::to_string(configs));
            if (!colUsed[i] && l2.cols.extents[i] > l.cols.extents[i] + 1e-9)
                out.fail("context column grew in config " + std::to_string(configs));
        }
    }
    if (out.ok)
        out.detail = std::to_string(configs) + " configurations";
    return out;
}

// Independent similarity: by-name lookups and a fresh min/max scan.
Value oracle_similarity(const MultivariateGraph& g, const std::vector<std::string>& attrs, std::size_t a, std::size_t b)
{
    double sum = 0.0;
    std::size_t shared = 0;
    for (const auto& name : attrs) {
        std::size_t k = g.node_schema().index_of(name);
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& n : g.nodes())
            if (n.values[k]) {
                lo = std::min(lo, *n.values[k]);
                hi = std::max(hi, *n.values[k]);
            }
        auto va = g.nodes()[a].values[k], vb = g.nodes()[b].values[k];
        if (!va || !vb)
            continue;
        auto norm = [&](double v) { return hi > lo ? (v - lo) / (hi - lo) : 0.5; };
        sum += std::abs(norm(*va) - norm(*vb));
        ++shared;
    }
    if (!shared)
        return std::nullopt;
    return 1.0 - sum / static_cast<double>(shared);
}

Outcome similarity_properties()
{
    Outcome out;
    std::mt19937_64 rng(77);
    for (int t = 0; t < 1000 && out.ok; ++t) {
        RandomGraphSpec spec;
        spec.maxNodes = 50;
        spec.maxAttrs = 10;
        spec.missing = 0.2;
        spec.integerValues = t % 4 == 0;
        auto g = random_graph(rng, spec);
        auto names = g.node_schema().names();
        std::shuffle(names.begin(), names.end(), rng);
        SimilarityConfig cfg;
        cfg.selectedAttributes.assign(names.begin(), names.begin() + 1 + rng() % names.size());
        auto m = build_similarity_matrix(g, cfg);
        std::size_t n = g.node_count();
        std::string where = "graph " + std::to_string(t);
        for (std::size_t i = 0; i < n && out.ok; ++i) {
            // The diagonal is 1 even for a node with no values at all.
            if (m.at(i, i) != Value(1.0))
                out.fail(where + ": diagonal " + std::to_string(i));
            for (std::size_t j = 0; j < n; ++j) {
                if (m.at(i, j) != m.at(j, i))
                    out.fail(where + ": asymmetric");
                if (m.at(i, j) && !(*m.at(i, j) >= 0.0 && *m.at(i, j) <= 1.0))
                    out.fail(where + ": out of [0,1]");
                if (i < j && t % 10 == 0) {
                    auto want = oracle_similarity(g, cfg.selectedAttributes, i, j);
                    if (want.has_value() != m.at(i, j).has_value() ||
                        (want && std::abs(*want - *m.at(i, j)) > 1e-12))
                        out.fail(where + ": differs from brute force");
                }
            }
        }
        // Attribute order does not matter, bit for bit.
        auto shuffled = cfg;
        std::shuffle(shuffled.selectedAttributes.begin(), shuffled.selectedAttributes.end(), rng);
        if (!(build_similarity_matrix(g, shuffled) == m))
            out.fail(where + ": depends on attribute order");
        // Incremental row update equals a rebuild exactly, for in-range edits.
        for (int step = 0; step < 3; ++step) {
            std::size_t node = rng() % n;
            const auto& attr = cfg.selectedAttributes[rng() % cfg.selectedAttributes.size()];
            const auto& def = g.attribute_def(ObjectKind::Node, attr);
            Value v;
            if (rng() % 5 && def.observedMax >= def.observedMin)
                v = def.observedMin + (def.observedMax - def.observedMin) * (static_cast<double>(rng() % 1001) / 1000.0);
            g.set_value(ObjectKind::Node, node, attr, v);
            m = update_similarity_row(std::move(m), g, cfg, g.nodes()[node].id);
            if (!(m == build_similarity_matrix(g, cfg)))
                out.fail(where + ": incremental update differs from rebuild");
        }
    }
    if (out.ok)
        out.detail = "1000 graphs: symmetric, unit diagonal, in [0,1], order-invariant, incremental == rebuild";
    return out;
}

Outcome editing_roundtrip()
{
    Outcome out;
    std::mt19937_64 rng(500);
    std::size_t commits = 0, drags = 0, aborts = 0, undos = 0, redos = 0;
    for (int t = 0; t < 500 && out.ok; ++t) {
        RandomGraphSpec spec;
        spec.minNodes = 3;
        spec.maxNodes = 40;
        spec.minAttrs = 2;
        spec.maxAttrs = 8;
        auto g = random_graph(rng, spec);
        Session s;
        long long seq = 0;
        must(s, seq, "load_dataset", {{"dataset", nlohmann::json::parse(serialize_json_dataset(g))}});
        auto g0 = s.graph();
        auto s0 = s.similarity();
        auto d0 = s.digest();
        std::size_t n = g0.node_count();
        auto attrs = g0.node_schema().names();

        // A bar chart on one diagonal cell makes that node draggable.
        std::size_t row = rng() % n;
        std::string focus = s.ordering().ids(s.graph())[row];
        must(s, seq, "create_rmc", {{"row0", row}, {"col0", row}});
        must(s, seq, "set_vis", {{"id", 1}, {"kind", "bar"}, {"attributes", attrs}});
        must(s, seq, "scale_rmc", {{"id", 1}, {"width", 240}, {"height", 240}});

        int ops = 1 + static_cast<int>(rng() % 12);
        for (int k = 0; k < ops; ++k) {
            const auto& attr = attrs[rng() % attrs.size()];
            switch (rng() % 6) {
            case 0:
            case 1: {
                auto node = g0.nodes()[rng() % n].id;
                double v = static_cast<double>(static_cast<long long>(rng() % 4000)) / 10.0 - 100.0;
                must(s, seq, "commit_edit",
                     {{"source", "numeric-entry"}, {"node", node}, {"attribute", attr}, {"value", v}});
                ++commits;
                break;
            }
            case 2:
            case 3: {
                must(s, seq, "begin_edit", {{"node", focus}, {"attribute", attr}});
                for (int p = 0, m = 1 + static_cast<int>(rng() % 3); p < m; ++p)
                    must(s, seq, "preview_edit",
                         {{"pixelDelta", static_cast<int>(rng() % 81) - 40}, {"snap", rng() % 2 == 0}});
                if (rng() % 3) {
                    must(s, seq, "commit_edit", {{"source", "drag"}});
                    ++drags;
                } else {
                    must(s, seq, "set_color_scale", {{"scheme", "default"}});
                    ++aborts;
                }
                break;
            }
            case 4:
                must(s, seq, "undo");
                ++undos;
                break;
            default:
                must(s, seq, "redo");
                ++redos;
                break;
            }
        }
        while (!s.history().undoStack.empty())
            must(s, seq, "undo");
        must(s, seq, "dismiss_rmc", {{"id", 1}});
        std::string where = "sequence " + std::to_string(t);
        if (!(s.graph() == g0))
            out.fail(where + ": graph not restored");
        if (!(s.similarity() == s0))
            out.fail(where + ": similarity not restored");
        if (s.digest() != d0)
            out.fail(where + ": digest " + s.digest() + " != " + d0);
    }
    if (out.ok)
        out.detail = "500 sequences (" + std::to_string(commits) + " numeric, " + std::to_string(drags) + " drag, " +
                     std::to_string(aborts) + " aborted, " + std::to_string(undos) + " undo, " +
                     std::to_string(redos) + " redo) restored exactly";
    return out;
}

struct Run
{
    int status = -1;
    std::string output;
};

Run run_cli(const std::string& commandLine)
{
    Run r;
    FILE* p = ::popen(commandLine.c_str(), "r");
    if (!p)
        return r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0)
        r.output.append(buf, n);
    r.status = ::pclose(p);
    return r;
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

// Random command stream; invalid commands are part of it on purpose.
std::vector<nlohmann::json> random_script(std::mt19937_64& rng, std::size_t n)
{
    std::vector<nlohmann::json> cmds;
    const char* vis[] = {"bar", "grouped-bar", "star", "parallel-coordinates", "node-link", "diff-bar"};
    const char* attrs[] = {"minutes", "shots", "goals", "touches", "passes"};
    for (int i = 0; i < 30; ++i) {
        int id = 1 + static_cast<int>(rng() % 3);
        switch (rng() % 8) {
        case 0:
        case 1: {
            std::size_t r0 = rng() % n, c0 = rng() % n;
            cmds.push_back({{"kind", "create_rmc"},
                            {"payload",
                             {{"row0", r0}, {"col0", c0}, {"rows", 1 + rng() % 4}, {"cols", 1 + rng() % 4},
                              {"asUnitGrid", rng() % 2 == 0}}}});
            break;
        }
        case 2:
            cmds.push_back({{"kind", "set_vis"}, {"payload", {{"id", id}, {"kind", vis[rng() % 6]}}}});
            break;
        case 3:
            cmds.push_back({{"kind", "scale_rmc"},
                            {"payload", {{"id", id}, {"width", 50 + rng() % 400}, {"height", 50 + rng() % 400}}}});
            break;
        case 4:
            cmds.push_back({{"kind", "hover"}, {"payload", {{"cell", {rng() % n, rng() % n}}}}});
            break;
        case 5:
            cmds.push_back({{"kind", "switch_what"}, {"payload", {{"id", id}}}});
            break;
        case 6:
            cmds.push_back({{"kind", "commit_edit"},
                            {"payload",
                             {{"source", "numeric-entry"},
                              {"node", "p" + std::string(rng() % 10 < 5 ? "0" : "1") + std::to_string(rng() % 10)},
                              {"attribute", attrs[rng() % 5]},
                              {"value", static_cast<double>(rng() % 300)}}}});
            break;
        default:
            cmds.push_back({{"kind", "set_ordering"}, {"payload", {{"strategy", rng() % 2 ? "degree" : "simclust"}}}});
            break;
        }
    }
    return cmds;
}

Outcome determinism(const std::string& cli)
{
    Outcome out;
    std::mt19937_64 rng(6);
    // In-process: two independent sessions over random scripts, errors included.
    std::size_t steps = 0;
    for (int t = 0; t < 40 && out.ok; ++t) {
        auto cmds = random_script(rng, 95);
        auto replay = [&] {
            Session s(SessionOptions{Viewport{}, 7});
            long long seq = 0;
            must(s, seq, "load_dataset", {{"path", data_path("walkthrough.json")}});
            std::vector<std::string> digests{s.digest()};
            for (auto c : cmds) {
                c["seq"] = ++seq;
                s.handle(c);
                digests.push_back(s.digest());
            }
            return digests;
        };
        auto a = replay(), b = replay();
        steps += a.size();
        if (a != b)
            out.fail("in-process replay " + std::to_string(t) + " diverged");
    }
    if (!out.ok)
        return out;
    if (cli.empty()) {
        out.fail("no --cli given");
        return out;
    }

    // Cross-process: the walkthrough and a node-link heavy script, each twice.
    auto tmp = std::filesystem::temp_directory_path() / ("rmc_accept_" + std::to_string(::getpid()) + ".ndjson");
    {
        std::ofstream f(tmp);
        f << R"({"kind":"create_rmc","payload":{"row0":2,"col0":30,"rows":6,"cols":6}})" << "\n"
          << R"({"kind":"switch_what","payload":{"id":1}})" << "\n"
          << R"({"kind":"set_vis","payload":{"id":1,"kind":"node-link"}})" << "\n"
          << R"({"kind":"scale_rmc","payload":{"id":1,"width":400,"height":400}})" << "\n"
          << R"({"kind":"create_rmc","payload":{"row0":60,"col0":10,"rows":5,"cols":5}})" << "\n"
          << R"({"kind":"set_vis","payload":{"id":2,"kind":"node-link"}})" << "\n"
          << R"({"kind":"scale_rmc","payload":{"id":2,"width":250,"height":250}})" << "\n"
          << R"({"kind":"hover","payload":{"node":"p40"}})" << "\n";
    }
    std::vector<std::string> scripts{data_path("walkthrough.ndjson"), tmp.string()};
    for (const auto& script : scripts) {
        std::string line = "RMC_SEED=7 " + quote(cli) + " --data " + quote(data_path("walkthrough.json")) +
                           " --script " + quote(script) + " --step-digests";
        auto a = run_cli(line), b = run_cli(line);
        if (a.status != 0 || b.status != 0)
            out.fail("cli exited with " + std::to_string(a.status) + "/" + std::to_string(b.status) + " on " + script);
        else if (a.output.empty() || a.output != b.output)
            out.fail("cli digest lists differ on " + script);
    }
    std::filesystem::remove(tmp);
    if (out.ok)
        out.detail = "40 random scripts (" + std::to_string(steps) + " digests) in-process, 2 scripts x 2 cli runs";
    return out;
}

Outcome object_count_law()
{
    Outcome out;
    std::mt19937_64 rng(45);
    for (int t = 0; t < 1000 && out.ok; ++t) {
        RandomGraphSpec spec;
        spec.minNodes = 2;
        spec.maxNodes = 40;
        spec.density = static_cast<double>(rng() % 101) / 100.0;
        auto g = random_graph(rng, spec);
        std::size_t n = g.node_count();
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        Ordering o;
        o.permutation = perm;
        Region r{rng() % n, rng() % n, 1, 1};
        r.rows = 1 + rng() % (n - r.row0);
        r.cols = 1 + rng() % (n - r.col0);

        std::set<std::size_t> nodes, edges;
        for (std::size_t i = r.row0; i < r.row_end(); ++i)
            nodes.insert(perm[i]);
        for (std::size_t j = r.col0; j < r.col_end(); ++j)
            nodes.insert(perm[j]);
        for (std::size_t i = r.row0; i < r.row_end(); ++i)
            for (std::size_t j = r.col0; j < r.col_end(); ++j)
                if (auto e = g.find_edge(EdgeKey::of(g.nodes()[perm[i]].id, g.nodes()[perm[j]].id)))
                    edges.insert(*e);

        auto gotNodes = collect_objects(r, What::Nodes, g, o);
        auto gotEdges = collect_objects(r, What::Edges, g, o);
        std::string where = "region " + std::to_string(t);
        if (gotNodes.size() > r.rows + r.cols || gotEdges.size() > r.rows * r.cols)
            out.fail(where + ": count bound violated");
        if (std::set<std::size_t>(gotNodes.ids.begin(), gotNodes.ids.end()) != nodes || gotNodes.size() != nodes.size())
            out.fail(where + ": nodes differ from brute force");
        if (std::set<std::size_t>(gotEdges.ids.begin(), gotEdges.ids.end()) != edges || gotEdges.size() != edges.size())
            out.fail(where + ": edges differ from brute force");
    }
    RandomGraphSpec clique;
    clique.minNodes = clique.maxNodes = 10;
    clique.density = 1.0;
    std::mt19937_64 crng(1);
    auto g = random_graph(crng, clique);
    auto o = identity_ordering(10);
    auto four = collect_objects(Region{1, 4, 1, 4}, What::Nodes, g, o).size();
    auto square = collect_objects(Region{1, 4, 2, 2}, What::Nodes, g, o).size();
    if (four != 5 || square != 4)
        out.fail("figure cases gave " + std::to_string(four) + " and " + std::to_string(square));
    if (out.ok)
        out.detail = "1000 regions match brute force; 4x1 -> 5 nodes, 2x2 -> 4 nodes";
    return out;
}

Outcome performance()
{
    Outcome out;
    std::mt19937_64 rng(150);
    RandomGraphSpec spec;
    spec.minNodes = spec.maxNodes = 150;
    spec.minAttrs = spec.maxAttrs = 10;
    auto g = random_graph(rng, spec);
    Session s;
    long long seq = 0;
    std::vector<double> times;
    std::string slowest;
    auto timed = [&](const std::string& kind, nlohmann::json payload = nlohmann::json::object()) {
        auto t0 = Clock::now();
        must(s, seq, kind, std::move(payload));
        times.push_back(ms_since(t0));
        if (times.back() >= *std::max_element(times.begin(), times.end()))
            slowest = kind;
    };
    try {
        timed("load_dataset", {{"dataset", nlohmann::json::parse(serialize_json_dataset(g))}});
        timed("set_ordering", {{"strategy", "simclust"}});
        timed("create_rmc", {{"row0", 10}, {"col0", 40}, {"rows", 3}, {"cols", 3}, {"asUnitGrid", true}});
        timed("set_vis", {{"id", 1}, {"kind", "grouped-bar"}, {"attributes", {"a0", "a1", "a2", "a3"}}});
        timed("scale_rmc", {{"id", 1}, {"width", 450}, {"height", 450}});
        timed("create_rmc", {{"row0", 90}, {"col0", 60}, {"rows", 6}, {"cols", 6}});
        timed("set_vis", {{"id", 2}, {"kind", "node-link"}});
        timed("scale_rmc", {{"id", 2}, {"width", 300}, {"height", 300}});
        timed("create_rmc", {{"row0", 20}, {"col0", 110}, {"rows", 1}, {"cols", 3}, {"asUnitGrid", true}});
        timed("set_vis", {{"id", 3}, {"kind", "star"}, {"attributes", {"a0", "a1", "a2", "a3", "a4"}}});
        timed("scale_rmc", {{"id", 3}, {"width", 300}, {"height", 100}});
        for (int i = 0; i < 20; ++i) {
            timed("hover", {{"cell", {rng() % 150, rng() % 150}}});
            timed("scale_rmc", {{"id", 1 + static_cast<int>(rng() % 3)}, {"mode", "factor"}, {"factor", 1.05}});
            timed("global_zoom_pan", {{"zoom", 1.0 + (rng() % 10) / 10.0}, {"panX", rng() % 300}, {"panY", rng() % 300}});
        }
        timed("global_zoom_pan", {{"zoom", 1.0}});
        timed("begin_edit", {{"node", s.ordering().ids(s.graph())[10]}, {"attribute", "a0"}});
        for (int i = 0; i < 10; ++i)
            timed("preview_edit", {{"pixelDelta", i * 3}});
        timed("commit_edit");
        timed("undo");
        timed("redo");
        timed("set_similarity_attributes", {{"attributes", {"a0", "a3", "a5"}}});
        timed("export_svg");
    } catch (const std::exception& e) {
        out.fail(e.what());
        return out;
    }
    auto sorted = times;
    std::sort(sorted.begin(), sorted.end());
    double worst = sorted.back(), median = sorted[sorted.size() / 2];
    if (worst >= 100.0)
        out.fail("slowest command (" + slowest + ") took " + fmt(worst) + " ms");
    out.detail = (out.ok ? "" : out.detail + "; ") + std::to_string(times.size()) + " commands, median " +
                 fmt(median, 2) + " ms, max " + fmt(worst, 2) + " ms (" + slowest + "), " +
                 std::to_string(s.scene().marks.size()) + " marks";
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance checks"};
    std::string cli;
    app.add_option("--cli", cli, "Path to the rmc command-line tool");
    CLI11_PARSE(app, argc, argv);

    struct Criterion
    {
        const char* name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria{
        {"cell-count reproduction", cell_counts},
        {"walkthrough script", walkthrough},
        {"layout conservation", layout_conservation},
        {"similarity properties", similarity_properties},
        {"editing roundtrip", editing_roundtrip},
        {"determinism", [&] { return determinism(cli); }},
        {"object-count law", object_count_law},
        {"performance at n=150", performance},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        failed += !o.ok;
        std::cout << (o.ok ? "PASS " : "FAIL ") << c.name << ": " << o.detail << std::endl;
    }
    return failed ? 1 : 0;
}
