#include <csignal>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "airsketch/mesh.hpp"
#include "airsketch/replay.hpp"
#include "airsketch/scene_io.hpp"
#include "airsketch/session.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

airsketch::SessionServer* g_server = nullptr;

void on_signal(int) {
    if (g_server != nullptr) g_server->stop();
}

int fail(const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic immersive-sketching engine: trace replay, export, live sessions"};
    app.require_subcommand(1);

    std::string trace_path, out_path, scene_path, format = "obj", host = "127.0.0.1", record_path;
    bool print_hash = false;
    int port = -1;

    auto* replay_cmd = app.add_subcommand("replay", "Replay a trace and report the resulting scene");
    replay_cmd->add_option("--trace", trace_path, "Input .trace.jsonl")->required();
    replay_cmd->add_option("--out", out_path, "Write the canonical scene here");
    replay_cmd->add_flag("--print-hash", print_hash, "Print the SHA-256 scene hash");

    auto* export_cmd = app.add_subcommand("export", "Export a scene as a mesh");
    export_cmd->add_option("--scene", scene_path, "Input .scene.json")->required();
    export_cmd->add_option("--format", format, "Mesh format")->check(CLI::IsMember({"obj"}));
    export_cmd->add_option("--out", out_path, "Output mesh file")->required();

    auto* validate_cmd = app.add_subcommand("validate", "Check that a trace parses");
    validate_cmd->add_option("--trace", trace_path, "Input .trace.jsonl")->required();

    auto* serve_cmd = app.add_subcommand("serve", "Run a live session endpoint");
    serve_cmd->add_option("--port", port, "TCP port (default 7440 or $AIRSKETCH_PORT)")->check(CLI::Range(0, 65535));
    serve_cmd->add_option("--host", host, "IPv4 address to bind");
    serve_cmd->add_option("--record-path", record_path, "Default path for recorded traces");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (replay_cmd->parsed()) {
        try {
            const auto trace = airsketch::parse_trace(airsketch::read_file(trace_path));
            const auto result = airsketch::replay(trace);
            if (!out_path.empty()) airsketch::write_file(out_path, airsketch::canonical_serialize(result.scene));
            if (print_hash) std::cout << result.hash << '\n';
        } catch (const std::exception& e) {
            return fail(e);
        }
        return kExitOk;
    }

    if (export_cmd->parsed()) {
        try {
            const auto scene = airsketch::deserialize_scene(airsketch::read_file(scene_path));
            airsketch::write_file(out_path, airsketch::export_mesh(scene, airsketch::parse_mesh_format(format)));
        } catch (const std::exception& e) {
            return fail(e);
        }
        return kExitOk;
    }

    if (validate_cmd->parsed()) {
        try {
            const auto trace = airsketch::parse_trace(airsketch::read_file(trace_path));
            std::cout << "ok: " << trace.frames.size() << " frames\n";
        } catch (const std::exception& e) {
            return fail(e);
        }
        return kExitOk;
    }

    try {
        airsketch::SessionOptions options;
        if (!record_path.empty()) options.default_record_path = record_path;
        airsketch::Session session(options);
        const auto actual_port = port >= 0 ? static_cast<std::uint16_t>(port) : airsketch::port_from_env();
        airsketch::SessionServer server(session, actual_port, host);
        g_server = &server;
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        std::cout << "listening on " << host << ":" << server.port() << std::endl;
        server.run();
        g_server = nullptr;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}
