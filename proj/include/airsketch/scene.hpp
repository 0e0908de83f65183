#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "airsketch/spatial.hpp"

namespace airsketch {

using EntityId = std::uint64_t;

struct Rgba8 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    std::uint8_t a = 255;

    constexpr bool operator==(const Rgba8&) const = default;
};

inline constexpr std::array<Rgba8, 8> kColorPalette{{
    {0, 0, 0, 255},        // black
    {255, 255, 255, 255},  // white
    {220, 40, 40, 255},    // red
    {245, 140, 30, 255},   // orange
    {240, 210, 40, 255},   // yellow
    {50, 170, 70, 255},    // green
    {40, 90, 220, 255},    // blue
    {140, 60, 190, 255},   // purple
}};

// Stroke radii in meters (world frame).
inline constexpr std::array<double, 4> kSizePalette{0.002, 0.004, 0.008, 0.016};

inline constexpr Vec3 kDefaultTrackedVolume{4.0, 2.0, 3.0};  // width (x), height (y), depth (z)
inline constexpr double kMinWorldScale = 0.01;
inline constexpr double kMaxWorldScale = 100.0;

enum class StrokeKind { air, plane, laser };
enum class PrimitiveKind { box, sphere, cylinder };

std::string_view to_string(StrokeKind k);
std::string_view to_string(PrimitiveKind k);

/// Uniform scale + offset: p_physical = scale * p_world + offset.
struct WorldTransform {
    double scale = 1.0;
    Vec3 offset;

    Vec3 world_from_physical(const Vec3& p) const { return (p - offset) / scale; }
    Vec3 physical_from_world(const Vec3& p) const { return p * scale + offset; }
    Pose world_from_physical(const Pose& p) const { return {world_from_physical(p.position), p.rotation}; }
};

struct StrokeRecord {
    EntityId id = 0;
    std::vector<Vec3> samples;  // world frame
    double radius = 0.004;
    Rgba8 color;
    StrokeKind kind = StrokeKind::air;
};

/// Axis-aligned in its own frame; extents are full side lengths. Cylinders
/// run along local Y with extents (diameter, height, diameter).
struct PrimitiveRecord {
    EntityId id = 0;
    PrimitiveKind kind = PrimitiveKind::box;
    Pose pose;
    Vec3 extents{1.0, 1.0, 1.0};
    Rgba8 color;
};

/// Imported static geometry. Placement and laser surface, never manipulated.
struct EnvironmentMesh {
    EntityId id = 0;
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;
    Rgba8 color{200, 200, 200, 255};
};

/// Grid plane. Local +Z is the normal, local +X and +Y span the grid.
struct ProxyPlane {
    bool present = false;
    Pose pose;
    double grid_cell = 0.05;
    double half_extent_u = 1.0;
    double half_extent_v = 1.0;

    Vec3 u_axis() const { return pose.rotation.rotate({1.0, 0.0, 0.0}); }
    Vec3 v_axis() const { return pose.rotation.rotate({0.0, 1.0, 0.0}); }
    Vec3 normal() const { return pose.rotation.rotate({0.0, 0.0, 1.0}); }
    PlaneEq equation() const { return PlaneEq::through(pose.position, normal()); }

    std::array<double, 2> to_plane_coords(const Vec3& p) const;
    Vec3 from_plane_coords(double u, double v) const;
};

struct StyleState {
    Rgba8 current_color = kColorPalette[0];
    double current_radius = kSizePalette[1];
};

struct Scene {
    std::vector<StrokeRecord> strokes;        // ascending id
    std::vector<PrimitiveRecord> primitives;  // ascending id
    std::vector<EnvironmentMesh> environment; // ascending id
    ProxyPlane plane;
    WorldTransform world;
    StyleState style;
    EntityId next_id = 1;
    Vec3 tracked_volume = kDefaultTrackedVolume;

    EntityId allocate_id() { return next_id++; }

    Vec3 world_from_physical(const Vec3& p) const { return world.world_from_physical(p); }
    Vec3 physical_from_world(const Vec3& p) const { return world.physical_from_world(p); }

    const PrimitiveRecord* find_primitive(EntityId id) const;
    PrimitiveRecord* find_primitive(EntityId id);
    const StrokeRecord* find_stroke(EntityId id) const;
    bool remove_entity(EntityId id);

    // Inserts keeping id order. Ids must come from allocate_id().
    void add_stroke(StrokeRecord s);
    void add_primitive(PrimitiveRecord p);
    void add_environment(EnvironmentMesh m);
};

}  // namespace airsketch
