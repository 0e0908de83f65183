#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "airsketch/mesh.hpp"
#include "airsketch/scene.hpp"

namespace airsketch {

struct Hit {
    EntityId entity = 0;
    double t = 0.0;
    Vec3 point;
    Vec3 normal;  // geometric normal of the hit triangle (outward for primitives)
    std::uint32_t face = 0;
    std::uint32_t triangle = 0;
};

// Strict ordering used to pick among hits: t, then entity id, face id, triangle index.
bool hit_precedes(const Hit& a, const Hit& b);

/// World-space meshes of every ray-castable entity (primitives and
/// environment meshes; stroke tubes are not surfaces), in id order.
struct SceneGeometry {
    std::vector<EntityMesh> meshes;

    const EntityMesh* find(EntityId id) const;
};

SceneGeometry build_scene_geometry(const Scene& scene);

// Brute force over every triangle. This is the reference behaviour.
std::optional<Hit> raycast_geometry(const Ray& r, const SceneGeometry& geometry);
std::optional<Hit> raycast_scene(const Ray& r, const Scene& scene);

/// Bounding-volume hierarchy over a SceneGeometry snapshot. Returns exactly
/// the hit raycast_geometry would.
class RaycastAccelerator {
public:
    explicit RaycastAccelerator(SceneGeometry geometry);

    std::optional<Hit> raycast(const Ray& r) const;
    const SceneGeometry& geometry() const { return geometry_; }
    std::size_t node_count() const { return nodes_.size(); }

private:
    struct TriRef {
        std::uint32_t mesh;
        std::uint32_t triangle;
    };
    struct Node {
        Aabb bounds;
        std::uint32_t left = 0;
        std::uint32_t right = 0;
        std::uint32_t first = 0;  // leaves only
        std::uint32_t count = 0;  // 0 for inner nodes
    };

    std::uint32_t build(std::uint32_t begin, std::uint32_t end, std::vector<Vec3>& centroids);

    SceneGeometry geometry_;
    std::vector<TriRef> refs_;
    std::vector<Node> nodes_;
};

// Primitive whose closed volume contains p (lowest id on ties). Strokes are not pickable.
std::optional<EntityId> point_pick(const Vec3& p, const Scene& scene);
bool primitive_contains(const PrimitiveRecord& prim, const Vec3& p);

inline constexpr double kSnapAngleToleranceDeg = 20.0;
inline constexpr double kSnapGapTolerance = 0.03;

/// Rigid correction that makes a moving face flush with a static face:
/// rotate by `rotation` about `pivot`, then translate by `translation`.
struct SnapAdjustment {
    Quat rotation;
    Vec3 pivot;
    Vec3 translation;
    EntityId static_entity = 0;
    std::uint32_t moving_face = 0;
    std::uint32_t static_face = 0;
    double gap = 0.0;  // perpendicular gap after the rotation, before the translation

    Pose apply(const Pose& pose) const;
};

/// Closest-gap pair of (moving face, static face) with anti-parallel normals
/// within `angle_tol_deg`, |gap| <= `gap_tol` and overlapping footprints.
/// Only boxes and cylinders take part. Entities in `exclude` are ignored.
std::optional<SnapAdjustment> detect_face_snap(const PrimitiveRecord& moving, const Scene& scene,
                                               double angle_tol_deg = kSnapAngleToleranceDeg,
                                               double gap_tol = kSnapGapTolerance,
                                               std::span<const EntityId> exclude = {});

}  // namespace airsketch
