#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "airsketch/scene.hpp"

// Canonical scene encoding. All lengths are integer micrometers, rotations are
// quaternions in units of 1e-7, world scale in units of 1e-9. Integers only,
// keys sorted, no whitespace, so the bytes are stable across platforms.

namespace airsketch {

class SceneFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kSceneFormatName = "airsketch-scene";
inline constexpr int kSceneFormatVersion = 1;

std::int64_t to_micrometers(double meters);
double from_micrometers(std::int64_t um);

nlohmann::json scene_to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::json& j);

std::string canonical_serialize(const Scene& scene);
Scene deserialize_scene(std::string_view text);

std::string sha256_hex(std::string_view bytes);
std::string scene_hash(const Scene& scene);

// Per-entity encoders, shared with the session delta protocol.
nlohmann::json stroke_to_json(const StrokeRecord& s);
nlohmann::json primitive_to_json(const PrimitiveRecord& p);
nlohmann::json environment_to_json(const EnvironmentMesh& m);
nlohmann::json plane_to_json(const ProxyPlane& p);
nlohmann::json world_to_json(const WorldTransform& w);
nlohmann::json style_to_json(const StyleState& s);

StrokeRecord stroke_from_json(const nlohmann::json& j);
PrimitiveRecord primitive_from_json(const nlohmann::json& j);
EnvironmentMesh environment_from_json(const nlohmann::json& j);
ProxyPlane plane_from_json(const nlohmann::json& j);
WorldTransform world_from_json(const nlohmann::json& j);
StyleState style_from_json(const nlohmann::json& j);

}  // namespace airsketch
