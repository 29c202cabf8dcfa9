// Command-line front end: load a dataset, replay a command script, print
// digests, write an SVG snapshot, or serve sessions over TCP.

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rmc/rmc.hpp"
#include "rmc/server.hpp"

namespace
{

std::uint64_t seed_from_env()
{
    const char* env = std::getenv("RMC_SEED");
    if (!env || !*env)
        return rmc::kDefaultLayoutSeed;
    try {
        std::size_t used = 0;
        auto v = std::stoull(env, &used, 0);
        if (used != std::string(env).size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw rmc::Error(rmc::ErrorCode::BadPayload, std::string("RMC_SEED must be an unsigned integer, got '") + env + "'");
    }
}

void apply_or_throw(rmc::Session& session, const nlohmann::json& cmd)
{
    for (const auto& ev : session.handle(cmd))
        if (ev.kind == rmc::EventKind::Error)
            throw rmc::Error(rmc::parse_error_code(ev.payload["code"].get<std::string>()).value_or(rmc::ErrorCode::Parse),
                             ev.payload["message"].get<std::string>());
}

rmc::Server* g_server = nullptr;

void on_signal(int)
{
    if (g_server)
        g_server->stop();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Responsive matrix cells engine"};
    std::string data, format = "json", order, simAttrs, script, snapshot;
    bool digest = false, stepDigests = false, events = false, serve = false;
    int port = 7878;
    double width = 950.0, height = 950.0;

    app.add_option("--data", data, "Dataset path (JSON file, or CSV directory / \"nodes.csv,edges.csv\")");
    app.add_option("--format", format, "Dataset format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--order", order, "input | degree | attr:<name>[:asc|:desc] | cluster:<name> | simclust");
    app.add_option("--sim-attrs", simAttrs, "Comma-separated similarity attributes");
    app.add_option("--script", script, "Newline-delimited command script to replay");
    app.add_option("--snapshot", snapshot, "Write the final scene as SVG");
    app.add_flag("--digest", digest, "Print the final scene digest");
    app.add_flag("--step-digests", stepDigests, "Print the digest after loading and after every script command");
    app.add_flag("--events", events, "Print protocol events of the script to stdout");
    app.add_option("--width", width, "Matrix viewport width in pixels")->check(CLI::PositiveNumber);
    app.add_option("--height", height, "Matrix viewport height in pixels")->check(CLI::PositiveNumber);
    app.add_flag("--serve", serve, "Serve sessions over TCP (newline-delimited JSON)");
    app.add_option("--port", port, "Port for --serve (0 picks a free port)")->check(CLI::Range(0, 65535));
    CLI11_PARSE(app, argc, argv);

    try {
        rmc::SessionOptions options;
        options.seed = seed_from_env();
        options.viewport.width = width;
        options.viewport.height = height;

        if (serve) {
            rmc::Server server(options);
            int bound = server.listen(port);
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cout << "listening on 127.0.0.1:" << bound << std::endl;
            server.run();
            server.stop();
            return 0;
        }

        rmc::Session session(options);
        long long seq = 0;
        if (!data.empty()) {
            apply_or_throw(session, {{"seq", ++seq}, {"kind", "load_dataset"}, {"payload", {{"path", data}, {"format", format}}}});
            if (!simAttrs.empty()) {
                nlohmann::json attrs = nlohmann::json::array();
                std::size_t start = 0;
                while (start <= simAttrs.size()) {
                    auto comma = simAttrs.find(',', start);
                    auto end = comma == std::string::npos ? simAttrs.size() : comma;
                    if (end > start)
                        attrs.push_back(simAttrs.substr(start, end - start));
                    start = end + 1;
                }
                apply_or_throw(session, {{"seq", ++seq}, {"kind", "set_similarity_attributes"}, {"payload", {{"attributes", attrs}}}});
            }
            if (!order.empty())
                apply_or_throw(session, {{"seq", ++seq}, {"kind", "set_ordering"}, {"payload", {{"strategy", order}}}});
        } else if (!simAttrs.empty() || !order.empty()) {
            throw rmc::Error(rmc::ErrorCode::NoSession, "--sim-attrs and --order need --data");
        }

        rmc::ReplayResult result{session.digest(), {session.digest()}};
        if (!script.empty()) {
            std::function<void(const rmc::Event&)> print;
            if (events)
                print = [](const rmc::Event& e) { std::cout << e.to_line() << '\n'; };
            result = rmc::replay_script(session, script, print);
        }
        if (stepDigests)
            for (const auto& d : result.perStepDigests)
                std::cout << d << '\n';
        if (digest)
            std::cout << result.finalDigest << '\n';
        if (!snapshot.empty())
            rmc::write_svg(session.scene(), snapshot);
    } catch (const rmc::Error& e) {
        std::cerr << "error: " << rmc::to_string(e.code()) << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
