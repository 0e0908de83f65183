#pragma once

#include <optional>

#include "airsketch/picking.hpp"
#include "airsketch/scene.hpp"

namespace airsketch {

inline constexpr double kHandDistanceThreshold = 0.25;  // physical meters, strict <
inline constexpr double kPlaneSnapDistance = 0.05;      // world meters
inline constexpr double kLaserOffset = 0.002;           // world meters
inline constexpr double kDefaultGridCell = 0.05;
inline constexpr double kDefaultPlaneHalfExtent = 1.0;

// Centered at the pen tip, orientation snapped to 15 degree Euler steps.
ProxyPlane place_plane_freehand(const Pose& pen_world, double grid_cell = kDefaultGridCell);

// Coplanar with the face the ray hits, sized to it. Strokes are never hit.
std::optional<ProxyPlane> place_plane_on_surface(const Ray& pen_ray, const Scene& scene,
                                                 double grid_cell = kDefaultGridCell);
std::optional<ProxyPlane> place_plane_on_surface(const Ray& pen_ray, const SceneGeometry& geometry,
                                                 double grid_cell = kDefaultGridCell);

std::optional<Vec3> snap_pen_to_plane(const Vec3& pen_tip, const ProxyPlane& plane,
                                      double snap_distance = kPlaneSnapDistance);

enum class PlanarMode { grid_line, free_planar };

struct ConstrainedSample {
    Vec3 point;
    PlanarMode mode;
};

PlanarMode planar_mode_for(double hand_distance);

// grid_line: projection snapped to the grid; free_planar: plain projection.
ConstrainedSample constrained_sample(const Vec3& pen_tip, const ProxyPlane& plane, double hand_distance);
Vec3 grid_point(const Vec3& pen_tip, const ProxyPlane& plane);

struct LaserSample {
    Vec3 point;  // hit point lifted kLaserOffset along the normal facing the pen
    Hit hit;
};

std::optional<LaserSample> laser_project_sample(const Ray& pen_ray, const Scene& scene);
std::optional<LaserSample> laser_project_sample(const Ray& pen_ray, const SceneGeometry& geometry);

}  // namespace airsketch
