#include "airsketch/constraints.hpp"

namespace airsketch {

ProxyPlane place_plane_freehand(const Pose& pen_world, double grid_cell) {
    ProxyPlane plane;
    plane.present = true;
    plane.pose.position = pen_world.position;
    plane.pose.rotation = rotation_from_euler(quantize_euler_15(euler_from_rotation(pen_world.rotation)));
    plane.grid_cell = grid_cell;
    plane.half_extent_u = kDefaultPlaneHalfExtent;
    plane.half_extent_v = kDefaultPlaneHalfExtent;
    return plane;
}

std::optional<ProxyPlane> place_plane_on_surface(const Ray& pen_ray, const SceneGeometry& geometry,
                                                 double grid_cell) {
    const auto hit = raycast_geometry(pen_ray, geometry);
    if (!hit) return std::nullopt;
    const EntityMesh* mesh = geometry.find(hit->entity);
    if (mesh == nullptr) return std::nullopt;
    const MeshFace& face = mesh->faces[hit->face];

    ProxyPlane plane;
    plane.present = true;
    plane.pose.position = face.center;
    plane.pose.rotation = Quat::from_basis(face.u_axis, face.v_axis, face.normal);
    plane.grid_cell = grid_cell;
    plane.half_extent_u = face.half_u;
    plane.half_extent_v = face.half_v;
    return plane;
}

std::optional<ProxyPlane> place_plane_on_surface(const Ray& pen_ray, const Scene& scene, double grid_cell) {
    return place_plane_on_surface(pen_ray, build_scene_geometry(scene), grid_cell);
}

std::optional<Vec3> snap_pen_to_plane(const Vec3& pen_tip, const ProxyPlane& plane, double snap_distance) {
    if (!plane.present) return std::nullopt;
    const PlaneEq eq = plane.equation();
    if (std::abs(eq.signed_distance(pen_tip)) > snap_distance) return std::nullopt;
    return project_point_plane(pen_tip, eq);
}

PlanarMode planar_mode_for(double hand_distance) {
    return hand_distance < kHandDistanceThreshold ? PlanarMode::grid_line : PlanarMode::free_planar;
}

Vec3 grid_point(const Vec3& pen_tip, const ProxyPlane& plane) {
    const auto uv = plane.to_plane_coords(pen_tip);
    const auto snapped = snap_to_grid2d(uv[0], uv[1], plane.grid_cell);
    return plane.from_plane_coords(snapped[0], snapped[1]);
}

ConstrainedSample constrained_sample(const Vec3& pen_tip, const ProxyPlane& plane, double hand_distance) {
    const PlanarMode mode = planar_mode_for(hand_distance);
    if (mode == PlanarMode::grid_line) return {grid_point(pen_tip, plane), mode};
    return {project_point_plane(pen_tip, plane.equation()), mode};
}

std::optional<LaserSample> laser_project_sample(const Ray& pen_ray, const SceneGeometry& geometry) {
    const auto hit = raycast_geometry(pen_ray, geometry);
    if (!hit) return std::nullopt;
    const Vec3 facing = dot(hit->normal, pen_ray.direction) > 0.0 ? -hit->normal : hit->normal;
    return LaserSample{hit->point + facing * kLaserOffset, *hit};
}

std::optional<LaserSample> laser_project_sample(const Ray& pen_ray, const Scene& scene) {
    return laser_project_sample(pen_ray, build_scene_geometry(scene));
}

}  // namespace airsketch
