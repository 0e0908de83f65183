#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "airsketch/engine.hpp"
#include <json.hpp>

namespace airsketch {

inline constexpr int kTraceVersion = 1;
inline constexpr double kQuatRenormTolerance = 1e-3;

class TraceError : public std::runtime_error {
public:
    TraceError(std::size_t line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct TraceHeader {
    int version = kTraceVersion;
    Vec3 tracked_volume = kDefaultTrackedVolume;
    std::string description;
};

struct Trace {
    TraceHeader header;
    std::vector<InputFrame> frames;
};

// Throws TraceError naming the offending line (1-based).
Trace parse_trace(std::string_view text);
std::string serialize_trace(const Trace& trace);

// Frame fields t/head/pen/off/btn. `extra_keys` lists keys tolerated besides those.
InputFrame frame_from_json(const nlohmann::json& j, std::initializer_list<std::string_view> extra_keys = {});
std::string frame_to_line(const InputFrame& frame);

// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

struct ReplayResult {
    Scene scene;
    std::string hash;
    std::size_t frames = 0;
};

using ReplayObserver =
    std::function<void(const InputFrame& frame, const EngineState& after, const StepResult& result)>;

EngineState initial_state(const TraceHeader& header);
ReplayResult replay(const Trace& trace, const ReplayObserver& observer = {});

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

}  // namespace airsketch
