#include "airsketch/scene_io.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

namespace airsketch {

using nlohmann::json;

namespace {

constexpr double kQuatUnit = 1e7;
constexpr double kScaleUnit = 1e9;

std::int64_t round_half_even(double v) {
    // std::nearbyint honours the current rounding mode, which is
    // round-to-nearest-even unless someone changed it.
    return static_cast<std::int64_t>(std::nearbyint(v));
}

json vec_um(const Vec3& v) {
    return json::array({to_micrometers(v.x), to_micrometers(v.y), to_micrometers(v.z)});
}

json color_json(const Rgba8& c) { return json::array({c.r, c.g, c.b, c.a}); }

std::array<std::int64_t, 4> quantize_quat(const Quat& q) {
    auto quantize = [](const Quat& u) {
        return std::array<std::int64_t, 4>{round_half_even(u.x * kQuatUnit), round_half_even(u.y * kQuatUnit),
                                           round_half_even(u.z * kQuatUnit), round_half_even(u.w * kQuatUnit)};
    };
    auto dequantize = [](const std::array<std::int64_t, 4>& i) {
        return Quat{i[0] / kQuatUnit, i[1] / kQuatUnit, i[2] / kQuatUnit, i[3] / kQuatUnit};
    };
    // Iterate to a fixed point of quantize(normalize(.)) so that a loaded
    // (normalized) rotation re-serializes to the same integers.
    auto ints = quantize(q.normalized());
    for (int i = 0; i < 8; ++i) {
        const auto next = quantize(dequantize(ints).normalized());
        if (next == ints) break;
        ints = next;
    }
    const std::int64_t lead = ints[3] != 0 ? ints[3] : (ints[0] != 0 ? ints[0] : (ints[1] != 0 ? ints[1] : ints[2]));
    if (lead < 0) {
        for (auto& v : ints) v = -v;
    }
    return ints;
}

json quat_json(const Quat& q) {
    const auto i = quantize_quat(q);
    return json::array({i[0], i[1], i[2], i[3]});
}

void require(bool ok, const char* what) {
    if (!ok) throw SceneFormatError(what);
}

const json& field(const json& j, const char* key) {
    require(j.is_object(), "expected object");
    auto it = j.find(key);
    if (it == j.end()) throw SceneFormatError(std::string("missing field '") + key + "'");
    return *it;
}

std::int64_t get_int(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number_integer()) throw SceneFormatError(std::string("field '") + key + "' must be an integer");
    return v.get<std::int64_t>();
}

std::int64_t as_int(const json& v) {
    require(v.is_number_integer(), "expected integer");
    return v.get<std::int64_t>();
}

Vec3 vec_from_um(const json& v) {
    require(v.is_array() && v.size() == 3, "expected [x,y,z] micrometers");
    return {from_micrometers(as_int(v[0])), from_micrometers(as_int(v[1])), from_micrometers(as_int(v[2]))};
}

Quat quat_from_json(const json& v) {
    require(v.is_array() && v.size() == 4, "expected [qx,qy,qz,qw]");
    const Quat q{as_int(v[0]) / kQuatUnit, as_int(v[1]) / kQuatUnit, as_int(v[2]) / kQuatUnit,
                 as_int(v[3]) / kQuatUnit};
    require(std::abs(q.norm() - 1.0) < 1e-5, "rotation is not a unit quaternion");
    return q.normalized();
}

Rgba8 color_from_json(const json& v) {
    require(v.is_array() && v.size() == 4, "expected [r,g,b,a]");
    std::array<std::uint8_t, 4> c{};
    for (std::size_t i = 0; i < 4; ++i) {
        const auto x = as_int(v[i]);
        require(x >= 0 && x <= 255, "color component out of range");
        c[i] = static_cast<std::uint8_t>(x);
    }
    return {c[0], c[1], c[2], c[3]};
}

StrokeKind stroke_kind_from(const std::string& s) {
    if (s == "air") return StrokeKind::air;
    if (s == "plane") return StrokeKind::plane;
    if (s == "laser") return StrokeKind::laser;
    throw SceneFormatError("unknown stroke kind '" + s + "'");
}

PrimitiveKind primitive_kind_from(const std::string& s) {
    if (s == "box") return PrimitiveKind::box;
    if (s == "sphere") return PrimitiveKind::sphere;
    if (s == "cylinder") return PrimitiveKind::cylinder;
    throw SceneFormatError("unknown primitive kind '" + s + "'");
}

std::string get_string(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_string()) throw SceneFormatError(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

EntityId get_id(const json& j) {
    const auto id = get_int(j, "id");
    require(id > 0, "entity ids must be positive");
    return static_cast<EntityId>(id);
}

}  // namespace

std::int64_t to_micrometers(double meters) { return round_half_even(meters * 1e6); }

double from_micrometers(std::int64_t um) { return static_cast<double>(um) / 1e6; }

json stroke_to_json(const StrokeRecord& s) {
    json samples = json::array();
    for (const auto& p : s.samples) samples.push_back(vec_um(p));
    return {{"color", color_json(s.color)},
            {"id", s.id},
            {"kind", std::string(to_string(s.kind))},
            {"radius_um", to_micrometers(s.radius)},
            {"samples_um", std::move(samples)}};
}

json primitive_to_json(const PrimitiveRecord& p) {
    return {{"color", color_json(p.color)},
            {"extents_um", vec_um(p.extents)},
            {"id", p.id},
            {"kind", std::string(to_string(p.kind))},
            {"position_um", vec_um(p.pose.position)},
            {"rotation_q7", quat_json(p.pose.rotation)}};
}

json environment_to_json(const EnvironmentMesh& m) {
    json vertices = json::array();
    for (const auto& v : m.vertices) vertices.push_back(vec_um(v));
    json triangles = json::array();
    for (const auto& t : m.triangles) triangles.push_back(json::array({t[0], t[1], t[2]}));
    return {{"color", color_json(m.color)},
            {"id", m.id},
            {"triangles", std::move(triangles)},
            {"vertices_um", std::move(vertices)}};
}

json plane_to_json(const ProxyPlane& p) {
    if (!p.present) return {{"present", false}};
    return {{"grid_cell_um", to_micrometers(p.grid_cell)},
            {"half_u_um", to_micrometers(p.half_extent_u)},
            {"half_v_um", to_micrometers(p.half_extent_v)},
            {"position_um", vec_um(p.pose.position)},
            {"present", true},
            {"rotation_q7", quat_json(p.pose.rotation)}};
}

json world_to_json(const WorldTransform& w) {
    return {{"offset_um", vec_um(w.offset)}, {"scale_e9", round_half_even(w.scale * kScaleUnit)}};
}

json style_to_json(const StyleState& s) {
    return {{"color", color_json(s.current_color)}, {"radius_um", to_micrometers(s.current_radius)}};
}

StrokeRecord stroke_from_json(const json& j) {
    StrokeRecord s;
    s.id = get_id(j);
    s.color = color_from_json(field(j, "color"));
    s.kind = stroke_kind_from(get_string(j, "kind"));
    s.radius = from_micrometers(get_int(j, "radius_um"));
    require(s.radius > 0.0, "stroke radius must be positive");
    const json& samples = field(j, "samples_um");
    require(samples.is_array() && samples.size() >= 2, "stroke needs at least two samples");
    s.samples.reserve(samples.size());
    for (const auto& p : samples) s.samples.push_back(vec_from_um(p));
    return s;
}

PrimitiveRecord primitive_from_json(const json& j) {
    PrimitiveRecord p;
    p.id = get_id(j);
    p.color = color_from_json(field(j, "color"));
    p.kind = primitive_kind_from(get_string(j, "kind"));
    p.extents = vec_from_um(field(j, "extents_um"));
    require(p.extents.x > 0.0 && p.extents.y > 0.0 && p.extents.z > 0.0, "primitive extents must be positive");
    if (p.kind == PrimitiveKind::sphere) {
        require(p.extents.x == p.extents.y && p.extents.y == p.extents.z, "sphere extents must be equal");
    }
    p.pose.position = vec_from_um(field(j, "position_um"));
    p.pose.rotation = quat_from_json(field(j, "rotation_q7"));
    return p;
}

EnvironmentMesh environment_from_json(const json& j) {
    EnvironmentMesh m;
    m.id = get_id(j);
    m.color = color_from_json(field(j, "color"));
    const json& vertices = field(j, "vertices_um");
    require(vertices.is_array(), "vertices_um must be an array");
    for (const auto& v : vertices) m.vertices.push_back(vec_from_um(v));
    const json& triangles = field(j, "triangles");
    require(triangles.is_array(), "triangles must be an array");
    for (const auto& t : triangles) {
        require(t.is_array() && t.size() == 3, "triangle must have three indices");
        std::array<std::uint32_t, 3> tri{};
        for (std::size_t i = 0; i < 3; ++i) {
            const auto idx = as_int(t[i]);
            require(idx >= 0 && static_cast<std::size_t>(idx) < m.vertices.size(), "triangle index out of range");
            tri[i] = static_cast<std::uint32_t>(idx);
        }
        m.triangles.push_back(tri);
    }
    return m;
}

ProxyPlane plane_from_json(const json& j) {
    ProxyPlane p;
    const json& present = field(j, "present");
    require(present.is_boolean(), "plane.present must be a boolean");
    if (!present.get<bool>()) return p;
    p.present = true;
    p.grid_cell = from_micrometers(get_int(j, "grid_cell_um"));
    p.half_extent_u = from_micrometers(get_int(j, "half_u_um"));
    p.half_extent_v = from_micrometers(get_int(j, "half_v_um"));
    require(p.grid_cell > 0.0 && p.half_extent_u > 0.0 && p.half_extent_v > 0.0, "plane sizes must be positive");
    p.pose.position = vec_from_um(field(j, "position_um"));
    p.pose.rotation = quat_from_json(field(j, "rotation_q7"));
    return p;
}

WorldTransform world_from_json(const json& j) {
    WorldTransform w;
    w.offset = vec_from_um(field(j, "offset_um"));
    w.scale = static_cast<double>(get_int(j, "scale_e9")) / kScaleUnit;
    require(w.scale >= kMinWorldScale && w.scale <= kMaxWorldScale, "world scale out of range");
    return w;
}

StyleState style_from_json(const json& j) {
    StyleState s;
    s.current_color = color_from_json(field(j, "color"));
    s.current_radius = from_micrometers(get_int(j, "radius_um"));
    require(s.current_radius > 0.0, "style radius must be positive");
    return s;
}

json scene_to_json(const Scene& scene) {
    json strokes = json::array();
    for (const auto& s : scene.strokes) strokes.push_back(stroke_to_json(s));
    json primitives = json::array();
    for (const auto& p : scene.primitives) primitives.push_back(primitive_to_json(p));
    json environment = json::array();
    for (const auto& m : scene.environment) environment.push_back(environment_to_json(m));
    return {{"environment", std::move(environment)},
            {"format", std::string(kSceneFormatName)},
            {"next_id", scene.next_id},
            {"plane", plane_to_json(scene.plane)},
            {"primitives", std::move(primitives)},
            {"strokes", std::move(strokes)},
            {"style", style_to_json(scene.style)},
            {"tracked_volume_um", vec_um(scene.tracked_volume)},
            {"version", kSceneFormatVersion},
            {"world", world_to_json(scene.world)}};
}

Scene scene_from_json(const json& j) {
    try {
        require(j.is_object(), "scene must be a JSON object");
        require(get_string(j, "format") == kSceneFormatName, "not an airsketch scene");
        require(get_int(j, "version") == kSceneFormatVersion, "unsupported scene version");

        Scene scene;
        const auto next_id = get_int(j, "next_id");
        require(next_id >= 1, "next_id must be positive");
        scene.next_id = static_cast<EntityId>(next_id);
        scene.tracked_volume = vec_from_um(field(j, "tracked_volume_um"));
        scene.world = world_from_json(field(j, "world"));
        scene.style = style_from_json(field(j, "style"));
        scene.plane = plane_from_json(field(j, "plane"));

        std::vector<EntityId> ids;
        auto load_list = [&](const char* key, auto&& decode, auto& out) {
            const json& list = field(j, key);
            require(list.is_array(), "entity list must be an array");
            EntityId last = 0;
            for (const auto& item : list) {
                auto record = decode(item);
                require(record.id > last, "entity ids must be strictly increasing");
                require(record.id < scene.next_id, "entity id not below next_id");
                last = record.id;
                ids.push_back(record.id);
                out.push_back(std::move(record));
            }
        };
        load_list("strokes", stroke_from_json, scene.strokes);
        load_list("primitives", primitive_from_json, scene.primitives);
        load_list("environment", environment_from_json, scene.environment);

        std::sort(ids.begin(), ids.end());
        require(std::adjacent_find(ids.begin(), ids.end()) == ids.end(), "duplicate entity id");
        return scene;
    } catch (const nlohmann::json::exception& e) {
        throw SceneFormatError(e.what());
    }
}

std::string canonical_serialize(const Scene& scene) { return scene_to_json(scene).dump(); }

Scene deserialize_scene(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SceneFormatError(std::string("invalid JSON: ") + e.what());
    }
    return scene_from_json(j);
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    std::string hex;
    hex.reserve(len * 2);
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

std::string scene_hash(const Scene& scene) { return sha256_hex(canonical_serialize(scene)); }

}  // namespace airsketch
