#include "airsketch/session.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "airsketch/scene_io.hpp"

namespace airsketch {

using nlohmann::json;

std::uint16_t port_from_env(std::uint16_t fallback) {
    const char* value = std::getenv(kPortEnvVar);
    if (value == nullptr || *value == '\0') return fallback;
    char* end = nullptr;
    const long port = std::strtol(value, &end, 10);
    if (*end != '\0' || port < 1 || port > 65535) return fallback;
    return static_cast<std::uint16_t>(port);
}

// ---------------------------------------------------------------------------
// Message encoding

namespace {

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
json quat_json(const Quat& q) { return json::array({q.x, q.y, q.z, q.w}); }
json color_json(const Rgba8& c) { return json::array({c.r, c.g, c.b, c.a}); }
json pose_json(const Pose& p) { return {{"position", vec_json(p.position)}, {"rotation", quat_json(p.rotation)}}; }

json error_message(const std::string& msg) { return {{"type", "error"}, {"msg", msg}}; }

}  // namespace

json feedback_to_json(const FeedbackState& fb) {
    json j = {
        {"type", "feedback"},
        {"t", fb.t},
        {"mode", std::string(to_string(fb.mode))},
        {"plane_tool", fb.plane_tool},
        {"primitive_kind", std::string(to_string(fb.primitive_kind))},
        {"palm", std::string(to_string(fb.palm))},
        {"head_phys", pose_json(fb.head_phys)},
        {"tip_phys", vec_json(fb.tip_phys)},
        {"tip_color", color_json(fb.tip_color)},
        {"tip_radius_world", fb.tip_radius_world},
        {"tip_radius_phys", fb.tip_radius_phys},
        {"arrow", fb.arrow},
        {"ink_drop", fb.ink_drop},
        {"laser_hit", fb.laser_hit},
        {"selected_ids", fb.selected_ids},
        {"wire_cube_center_phys", vec_json(fb.wire_cube_center_phys)},
        {"wire_cube_extents", vec_json(fb.wire_cube_extents)},
        {"menu", std::string(to_string(fb.menu))},
        {"center_swatch", color_json(fb.center_swatch)},
        {"bin", fb.bin},
        {"world", {{"scale", fb.world.scale}, {"offset", vec_json(fb.world.offset)}}},
    };
    j["laser_world"] = fb.laser_world ? json::array({vec_json((*fb.laser_world)[0]), vec_json((*fb.laser_world)[1])})
                                      : json(nullptr);
    j["hover_id"] = fb.hover_id ? json(*fb.hover_id) : json(nullptr);
    j["hovered_slot"] = fb.hovered_slot ? json(*fb.hovered_slot) : json(nullptr);

    if (fb.draft) {
        j["draft"] = {{"kind", std::string(to_string(fb.draft->kind))},
                      {"variant", std::string(to_string(fb.draft->variant))},
                      {"pose", pose_json(fb.draft->pose)},
                      {"extents", vec_json(fb.draft->extents)},
                      {"color", color_json(fb.draft->color)},
                      {"gold", fb.draft->gold}};
    } else {
        j["draft"] = nullptr;
    }
    if (fb.active_stroke) {
        json samples = json::array();
        for (const auto& p : fb.active_stroke->samples) samples.push_back(vec_json(p));
        j["active_stroke"] = {{"kind", std::string(to_string(fb.active_stroke->kind))},
                              {"samples", std::move(samples)},
                              {"radius", fb.active_stroke->radius},
                              {"color", color_json(fb.active_stroke->color)}};
    } else {
        j["active_stroke"] = nullptr;
    }

    json buttons = json::array();
    for (const auto& b : fb.menu_layout.buttons) {
        buttons.push_back({{"slot", b.slot},
                           {"action", std::string(to_string(b.action))},
                           {"value", b.value},
                           {"position", vec_json(b.position)}});
    }
    j["menu_layout"] = {{"center", vec_json(fb.menu_layout.center)},
                        {"normal", vec_json(fb.menu_layout.normal)},
                        {"buttons", std::move(buttons)}};
    return j;
}

json delta_to_json(const SceneDelta& delta, const Scene& scene) {
    json ops = json::array();
    auto entity_op = [&](const char* op, EntityId id) {
        if (const auto* s = scene.find_stroke(id)) {
            ops.push_back({{"op", op}, {"entity", "stroke"}, {"data", stroke_to_json(*s)}});
        } else if (const auto* p = scene.find_primitive(id)) {
            ops.push_back({{"op", op}, {"entity", "primitive"}, {"data", primitive_to_json(*p)}});
        }
    };
    for (EntityId id : delta.removed) ops.push_back({{"op", "remove"}, {"id", id}});
    for (EntityId id : delta.added) entity_op("add", id);
    for (EntityId id : delta.updated) entity_op("update", id);
    if (delta.world) ops.push_back({{"op", "world"}, {"data", world_to_json(scene.world)}});
    if (delta.style) ops.push_back({{"op", "style"}, {"data", style_to_json(scene.style)}});
    if (delta.plane) ops.push_back({{"op", "plane"}, {"data", plane_to_json(scene.plane)}});
    if (delta.next_id) ops.push_back({{"op", "next_id"}, {"value", scene.next_id}});
    return {{"type", "delta"}, {"ops", std::move(ops)}};
}

void apply_delta(Scene& scene, const json& message) {
    try {
        if (!message.is_object() || message.value("type", "") != "delta" || !message.contains("ops") ||
            !message["ops"].is_array()) {
            throw SceneFormatError("not a delta message");
        }
        for (const json& op : message["ops"]) {
            const std::string name = op.at("op").get<std::string>();
            if (name == "remove") {
                if (!scene.remove_entity(op.at("id").get<EntityId>())) throw SceneFormatError("remove of unknown id");
            } else if (name == "add" || name == "update") {
                const std::string entity = op.at("entity").get<std::string>();
                if (entity == "stroke") {
                    StrokeRecord s = stroke_from_json(op.at("data"));
                    if (name == "update") scene.remove_entity(s.id);
                    scene.add_stroke(std::move(s));
                } else if (entity == "primitive") {
                    PrimitiveRecord p = primitive_from_json(op.at("data"));
                    if (name == "update") scene.remove_entity(p.id);
                    scene.add_primitive(p);
                } else {
                    throw SceneFormatError("unknown entity '" + entity + "'");
                }
            } else if (name == "world") {
                scene.world = world_from_json(op.at("data"));
            } else if (name == "style") {
                scene.style = style_from_json(op.at("data"));
            } else if (name == "plane") {
                scene.plane = plane_from_json(op.at("data"));
            } else if (name == "next_id") {
                scene.next_id = op.at("value").get<EntityId>();
            } else {
                throw SceneFormatError("unknown op '" + name + "'");
            }
        }
    } catch (const json::exception& e) {
        throw SceneFormatError(std::string("malformed delta: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Session

Session::Session(SessionOptions options) : options_(std::move(options)) {}

std::string Session::hash() const { return scene_hash(state_.scene); }

std::vector<std::string> Session::handle_line(std::string_view line) {
    json msg;
    try {
        msg = json::parse(line);
    } catch (const json::exception& e) {
        return {error_message(std::string("malformed JSON: ") + e.what()).dump()};
    }
    if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
        return {error_message("message needs a string 'type'").dump()};
    }
    const std::string type = msg["type"].get<std::string>();
    try {
        if (type == "frame") return handle_frame(msg);
        if (type == "record") return handle_record(msg);
        if (type == "save_scene") {
            return {json{{"type", "scene"}, {"data", scene_to_json(state_.scene)}}.dump()};
        }
        if (type == "load_scene") {
            if (recording_) return {error_message("cannot load a scene while recording").dump()};
            if (!msg.contains("data")) return {error_message("load_scene needs 'data'").dump()};
            Scene scene = scene_from_json(msg["data"]);
            state_ = EngineState{};
            state_.scene = std::move(scene);
            return {json{{"type", "scene"}, {"data", scene_to_json(state_.scene)}}.dump()};
        }
        return {error_message("unknown message type '" + type + "'").dump()};
    } catch (const std::exception& e) {
        return {error_message(e.what()).dump()};
    }
}

std::vector<std::string> Session::handle_frame(const json& msg) {
    InputFrame frame;
    try {
        frame = frame_from_json(msg, {"type"});
    } catch (const std::exception& e) {
        return {error_message(std::string("bad frame: ") + e.what()).dump()};
    }
    const StepResult r = step(state_, frame);
    if (!r.accepted) return {error_message("frame rejected: " + r.error).dump()};
    if (recording_) recording_->trace.frames.push_back(frame);

    std::vector<std::string> out;
    if (!r.delta.empty()) out.push_back(delta_to_json(r.delta, state_.scene).dump());
    out.push_back(feedback_to_json(r.feedback).dump());
    return out;
}

std::vector<std::string> Session::handle_record(const json& msg) {
    if (!msg.contains("on") || !msg["on"].is_boolean()) return {error_message("record needs boolean 'on'").dump()};
    const bool on = msg["on"].get<bool>();
    std::string path = options_.default_record_path;
    if (msg.contains("path")) {
        if (!msg["path"].is_string()) return {error_message("record 'path' must be a string").dump()};
        path = msg["path"].get<std::string>();
    }

    if (on) {
        if (recording_) return {error_message("already recording").dump()};
        // A trace replays from a fresh state, so recording starts from one.
        state_ = EngineState{};
        Recording rec;
        rec.path = path;
        rec.trace.header.description = options_.description;
        rec.trace.header.tracked_volume = state_.scene.tracked_volume;
        recording_ = std::move(rec);
        return {json{{"type", "scene"}, {"data", scene_to_json(state_.scene)}}.dump()};
    }

    if (!recording_) return {error_message("not recording").dump()};
    Recording rec = std::move(*recording_);
    recording_.reset();
    write_file(rec.path, serialize_trace(rec.trace));
    return {json{{"type", "recorded"},
                 {"path", rec.path},
                 {"frames", rec.trace.frames.size()},
                 {"hash", hash()}}
                .dump()};
}

// ---------------------------------------------------------------------------
// TCP server

namespace {

constexpr std::size_t kMaxLineBytes = 16u << 20;

[[noreturn]] void throw_errno(const std::string& what) {
    throw std::runtime_error(what + ": " + std::strerror(errno));
}

}  // namespace

SessionServer::SessionServer(Session& session, std::uint16_t port, const std::string& host) : session_(session) {
    if (::pipe(wake_pipe_) != 0) throw_errno("pipe");
    for (int fd : wake_pipe_) ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK);

    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw_errno("socket");
    const int yes = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(listen_fd_);
        throw std::runtime_error("invalid IPv4 address '" + host + "'");
    }
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 || ::listen(listen_fd_, 4) != 0) {
        const int err = errno;
        ::close(listen_fd_);
        errno = err;
        throw_errno("bind " + host + ":" + std::to_string(port));
    }
    socklen_t len = sizeof(addr);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
}

SessionServer::~SessionServer() {
    close_client();
    if (listen_fd_ >= 0) ::close(listen_fd_);
    for (int fd : wake_pipe_) {
        if (fd >= 0) ::close(fd);
    }
}

void SessionServer::stop() {
    stopping_.store(true);
    const char byte = 1;
    [[maybe_unused]] const auto n = ::write(wake_pipe_[1], &byte, 1);
}

void SessionServer::close_client() {
    if (client_fd_ >= 0) ::close(client_fd_);
    client_fd_ = -1;
    buffer_.clear();
}

bool SessionServer::send_line(const std::string& line) {
    std::string data = line + "\n";
    std::size_t sent = 0;
    while (sent < data.size()) {
        const ssize_t n = ::send(client_fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) return false;
        sent += static_cast<std::size_t>(n);
    }
    return true;
}

void SessionServer::handle_client_input() {
    char chunk[65536];
    const ssize_t n = ::recv(client_fd_, chunk, sizeof(chunk), 0);
    if (n < 0 && errno == EINTR) return;
    if (n <= 0) {
        close_client();
        return;
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
    std::size_t start = 0;
    for (std::size_t nl; (nl = buffer_.find('\n', start)) != std::string::npos; start = nl + 1) {
        std::string_view line(buffer_.data() + start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
        for (const auto& response : session_.handle_line(line)) {
            if (!send_line(response)) {
                close_client();
                return;
            }
        }
    }
    buffer_.erase(0, start);
    if (buffer_.size() > kMaxLineBytes) {
        send_line(json{{"type", "error"}, {"msg", "line too long"}}.dump());
        close_client();
    }
}

void SessionServer::run() {
    while (!stopping_.load()) {
        pollfd fds[3];
        nfds_t count = 0;
        fds[count++] = {wake_pipe_[0], POLLIN, 0};
        fds[count++] = {listen_fd_, POLLIN, 0};
        if (client_fd_ >= 0) fds[count++] = {client_fd_, POLLIN, 0};

        if (::poll(fds, count, -1) < 0) {
            if (errno == EINTR) continue;
            throw_errno("poll");
        }
        if (fds[0].revents != 0) {
            char drain[64];
            while (::read(wake_pipe_[0], drain, sizeof(drain)) > 0) {
            }
            continue;
        }
        if (fds[1].revents & POLLIN) {
            const int fd = ::accept(listen_fd_, nullptr, nullptr);
            if (fd >= 0) {
                if (client_fd_ >= 0) {
                    const std::string refusal =
                        json{{"type", "error"}, {"msg", "session busy: one client at a time"}}.dump() + "\n";
                    ::send(fd, refusal.data(), refusal.size(), MSG_NOSIGNAL);
                    ::close(fd);
                } else {
                    // Replies are small and latency-bound.
                    const int one = 1;
                    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
                    client_fd_ = fd;
                    buffer_.clear();
                }
            }
        }
        if (count == 3 && (fds[2].revents & (POLLIN | POLLHUP | POLLERR))) handle_client_input();
    }
}

}  // namespace airsketch
