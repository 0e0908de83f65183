#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "airsketch/engine.hpp"
#include "airsketch/replay.hpp"

namespace airsketch {

inline constexpr std::uint16_t kDefaultPort = 7440;
inline constexpr const char* kPortEnvVar = "AIRSKETCH_PORT";

// Port from AIRSKETCH_PORT if set and valid, otherwise `fallback`.
std::uint16_t port_from_env(std::uint16_t fallback = kDefaultPort);

nlohmann::json feedback_to_json(const FeedbackState& fb);
// {"type":"delta","ops":[...]} describing `delta` against the post-step scene.
nlohmann::json delta_to_json(const SceneDelta& delta, const Scene& scene);
// Client-side reconstruction; throws SceneFormatError on a malformed op.
void apply_delta(Scene& scene, const nlohmann::json& message);

struct SessionOptions {
    std::string default_record_path = "session.trace.jsonl";
    std::string description = "recorded session";
};

/// One live engine driven by newline-delimited JSON messages.
class Session {
public:
    explicit Session(SessionOptions options = {});

    // Responses to one message, each a compact JSON object without newline.
    std::vector<std::string> handle_line(std::string_view line);

    const Scene& scene() const { return state_.scene; }
    std::string hash() const;
    bool recording() const { return recording_.has_value(); }

private:
    struct Recording {
        std::string path;
        Trace trace;
    };

    std::vector<std::string> handle_frame(const nlohmann::json& msg);
    std::vector<std::string> handle_record(const nlohmann::json& msg);

    SessionOptions options_;
    EngineState state_;
    std::optional<Recording> recording_;
};

/// Single-threaded TCP endpoint serving one client at a time; extra clients
/// receive an error message and are disconnected.
class SessionServer {
public:
    SessionServer(Session& session, std::uint16_t port, const std::string& host = "127.0.0.1");
    ~SessionServer();
    SessionServer(const SessionServer&) = delete;
    SessionServer& operator=(const SessionServer&) = delete;

    std::uint16_t port() const { return port_; }  // actual port when constructed with 0
    void run();                                   // returns after stop()
    void stop();                                  // safe from another thread or a signal handler

private:
    void handle_client_input();
    void close_client();
    bool send_line(const std::string& line);

    Session& session_;
    int listen_fd_ = -1;
    int client_fd_ = -1;
    int wake_pipe_[2] = {-1, -1};
    std::uint16_t port_ = 0;
    std::string buffer_;
    std::atomic<bool> stopping_{false};
};

}  // namespace airsketch
