#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "airsketch/scene.hpp"
#include "airsketch/stroke.hpp"

namespace airsketch {

/// A flat face of an entity mesh, as an oriented rectangle in world space.
/// u_axis x v_axis == normal; the normal points out of the solid.
struct MeshFace {
    Vec3 center;
    Vec3 normal;
    Vec3 u_axis;
    Vec3 v_axis;
    double half_u = 0.0;
    double half_v = 0.0;

    std::array<Vec3, 4> corners() const;
};

/// World-space triangles of one entity plus the face each triangle belongs to.
struct EntityMesh {
    EntityId id = 0;
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;
    std::vector<std::uint32_t> triangle_face;
    std::vector<MeshFace> faces;
};

inline constexpr int kSphereSlices = 12;
inline constexpr int kSphereStacks = 8;

// Box: 8 vertices, 12 triangles, faces +X,-X,+Y,-Y,+Z,-Z.
// Sphere: UV sphere, one face per triangle.
// Cylinder: rings at -h/2 and +h/2 plus two cap centers; faces top, bottom, then sides.
EntityMesh primitive_mesh(const PrimitiveRecord& p, int radial_segments = kDefaultRadialSegments);

// One face per triangle.
EntityMesh environment_entity_mesh(const EnvironmentMesh& m);

MeshFace face_from_polygon(std::span<const Vec3> corners);

enum class MeshFormat { obj };

// Throws std::invalid_argument for anything but "obj".
MeshFormat parse_mesh_format(std::string_view name);

/// Stroke tubes, primitives and environment meshes in entity-id order.
std::string export_mesh(const Scene& scene, MeshFormat format, int radial_segments = kDefaultRadialSegments);

}  // namespace airsketch
