#include "airsketch/replay.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "airsketch/scene_io.hpp"

namespace airsketch {

using nlohmann::json;

std::string format_number(double v) {
    char buf[512];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
    if (res.ec != std::errc{}) throw std::invalid_argument("number not representable");
    return std::string(buf, res.ptr);
}

namespace {

double number_at(const json& arr, std::size_t i, const char* field) {
    const json& v = arr[i];
    if (!v.is_number()) throw std::invalid_argument(std::string(field) + " must contain numbers");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw std::invalid_argument(std::string(field) + " must be finite");
    return d;
}

Pose pose_from_json(const json& j, const char* field) {
    if (!j.is_array() || j.size() != 7) throw std::invalid_argument(std::string(field) + " must be 7 numbers");
    Pose p;
    p.position = {number_at(j, 0, field), number_at(j, 1, field), number_at(j, 2, field)};
    Quat q{number_at(j, 3, field), number_at(j, 4, field), number_at(j, 5, field), number_at(j, 6, field)};
    const double n = q.norm();
    if (std::abs(n - 1.0) > kQuatRenormTolerance) {
        throw std::invalid_argument(std::string(field) + " quaternion norm " + format_number(n) + " is not unit");
    }
    if (std::abs(n - 1.0) > 1e-12) q = q.normalized();
    p.rotation = q;
    return p;
}

void append_pose(std::string& out, const Pose& p) {
    const double v[7] = {p.position.x, p.position.y, p.position.z, p.rotation.x,
                         p.rotation.y, p.rotation.z, p.rotation.w};
    out += '[';
    for (int i = 0; i < 7; ++i) {
        if (i > 0) out += ',';
        out += format_number(v[i]);
    }
    out += ']';
}

std::int64_t integer_field(const json& j, const char* field) {
    if (!j.is_number_integer()) throw std::invalid_argument(std::string(field) + " must be an integer");
    return j.is_number_unsigned() ? static_cast<std::int64_t>(j.get<std::uint64_t>()) : j.get<std::int64_t>();
}

TraceHeader header_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("header must be an object");
    for (const auto& [key, value] : j.items()) {
        if (key != "version" && key != "tracked_volume" && key != "description") {
            throw std::invalid_argument("unknown header key '" + key + "'");
        }
    }
    TraceHeader h;
    if (!j.contains("version")) throw std::invalid_argument("header missing version");
    if (integer_field(j["version"], "version") != kTraceVersion) {
        throw std::invalid_argument("unsupported trace version");
    }
    if (j.contains("tracked_volume")) {
        const json& tv = j["tracked_volume"];
        if (!tv.is_array() || tv.size() != 3) throw std::invalid_argument("tracked_volume must be 3 numbers");
        h.tracked_volume = {number_at(tv, 0, "tracked_volume"), number_at(tv, 1, "tracked_volume"),
                            number_at(tv, 2, "tracked_volume")};
        if (h.tracked_volume.x <= 0.0 || h.tracked_volume.y <= 0.0 || h.tracked_volume.z <= 0.0) {
            throw std::invalid_argument("tracked_volume must be positive");
        }
    }
    if (j.contains("description")) {
        if (!j["description"].is_string()) throw std::invalid_argument("description must be a string");
        h.description = j["description"].get<std::string>();
    }
    return h;
}

}  // namespace

InputFrame frame_from_json(const json& j, std::initializer_list<std::string_view> extra_keys) {
    if (!j.is_object()) throw std::invalid_argument("frame must be an object");
    for (const auto& [key, value] : j.items()) {
        const bool known = key == "t" || key == "head" || key == "pen" || key == "off" || key == "btn" ||
                           std::find(extra_keys.begin(), extra_keys.end(), key) != extra_keys.end();
        if (!known) throw std::invalid_argument("unknown frame key '" + key + "'");
    }
    for (const char* key : {"t", "head", "pen", "off", "btn"}) {
        if (!j.contains(key)) throw std::invalid_argument(std::string("frame missing ") + key);
    }
    InputFrame f;
    f.t = integer_field(j["t"], "t");
    f.head = pose_from_json(j["head"], "head");
    f.pen = pose_from_json(j["pen"], "pen");
    f.offhand = pose_from_json(j["off"], "off");
    const std::int64_t btn = integer_field(j["btn"], "btn");
    if (btn < 0 || btn > 15) throw std::invalid_argument("btn must be in 0..15");
    f.buttons = static_cast<std::uint8_t>(btn);
    return f;
}

std::string frame_to_line(const InputFrame& f) {
    std::string out = "{\"t\":" + std::to_string(f.t) + ",\"head\":";
    append_pose(out, f.head);
    out += ",\"pen\":";
    append_pose(out, f.pen);
    out += ",\"off\":";
    append_pose(out, f.offhand);
    out += ",\"btn\":" + std::to_string(f.buttons) + "}";
    return out;
}

Trace parse_trace(std::string_view text) {
    Trace trace;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

        try {
            const json j = json::parse(line);
            if (!have_header) {
                trace.header = header_from_json(j);
                have_header = true;
                continue;
            }
            InputFrame f = frame_from_json(j);
            if (!trace.frames.empty() && f.t <= trace.frames.back().t) {
                throw std::invalid_argument("timestamp " + std::to_string(f.t) + " does not increase");
            }
            trace.frames.push_back(f);
        } catch (const json::exception& e) {
            throw TraceError(line_no, std::string("malformed JSON: ") + e.what());
        } catch (const std::invalid_argument& e) {
            throw TraceError(line_no, e.what());
        }
    }
    if (!have_header) throw TraceError(line_no == 0 ? 1 : line_no, "missing header");
    return trace;
}

std::string serialize_trace(const Trace& trace) {
    const TraceHeader& h = trace.header;
    std::string out = "{\"version\":" + std::to_string(h.version) + ",\"tracked_volume\":[" +
                      format_number(h.tracked_volume.x) + "," + format_number(h.tracked_volume.y) + "," +
                      format_number(h.tracked_volume.z) + "],\"description\":" + json(h.description).dump() + "}\n";
    for (const auto& f : trace.frames) {
        out += frame_to_line(f);
        out += '\n';
    }
    return out;
}

EngineState initial_state(const TraceHeader& header) {
    EngineState s;
    s.scene.tracked_volume = header.tracked_volume;
    return s;
}

ReplayResult replay(const Trace& trace, const ReplayObserver& observer) {
    EngineState state = initial_state(trace.header);
    ReplayResult out;
    for (const auto& f : trace.frames) {
        const StepResult r = step(state, f);
        if (!r.accepted) throw std::runtime_error("frame rejected: " + r.error);
        ++out.frames;
        if (observer) observer(f, state, r);
    }
    out.hash = scene_hash(state.scene);
    out.scene = std::move(state.scene);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace airsketch
