#include <gtest/gtest.h>

#include "airsketch/constraints.hpp"
#include "support/oracles.hpp"
#include "support/trace_builder.hpp"

namespace airsketch {
namespace {

using testing::Rng;

Pose pen_with_euler(const EulerDeg& e) { return {{0.1, 1.2, -0.3}, rotation_from_euler(e)}; }

TEST(FreehandPlane, YawSnapsTo15) {
    const ProxyPlane p = place_plane_freehand(pen_with_euler({17, 0, 0}));
    EXPECT_TRUE(p.present);
    EXPECT_EQ(p.pose.position, (Vec3{0.1, 1.2, -0.3}));
    EXPECT_NEAR(euler_from_rotation(p.pose.rotation).yaw, 15.0, 1e-9);
    EXPECT_EQ(p.half_extent_u, 1.0);
    EXPECT_EQ(p.half_extent_v, 1.0);
    EXPECT_EQ(p.grid_cell, 0.05);
}

TEST(FreehandPlane, AxisAlignedIsFixedPoint) {
    const ProxyPlane p = place_plane_freehand(pen_with_euler({90, 0, 0}));
    EXPECT_LT(quat_distance(p.pose.rotation, rotation_from_euler({90, 0, 0})), 1e-15);
}

TEST(FreehandPlane, TieRoundsAwayFromZero) {
    const ProxyPlane p = place_plane_freehand(pen_with_euler({7.5, 0, 0}));
    EXPECT_NEAR(euler_from_rotation(p.pose.rotation).yaw, 15.0, 1e-9);
}

TEST(FreehandPlane, AnglesAreMultiplesOf15) {
    Rng rng(51);
    for (int i = 0; i < 2000; ++i) {
        const ProxyPlane p = place_plane_freehand({rng.in_box({-1, 0, -1}, {1, 2, 1}), rng.rotation()});
        const EulerDeg e = euler_from_rotation(p.pose.rotation);
        // Gimbal-locked poses fold roll into yaw; both remain multiples of 15.
        EXPECT_TRUE(oracle::is_multiple(e.yaw, 15.0, 1e-9)) << e.yaw;
        EXPECT_TRUE(oracle::is_multiple(e.pitch, 15.0, 1e-9)) << e.pitch;
        EXPECT_TRUE(oracle::is_multiple(e.roll, 15.0, 1e-9)) << e.roll;
    }
}

Scene scene_with_box(const Vec3& center, const Vec3& extents) {
    Scene s;
    PrimitiveRecord p;
    p.id = s.allocate_id();
    p.pose.position = center;
    p.extents = extents;
    s.add_primitive(p);
    return s;
}

TEST(SurfacePlane, BoxFaceGivesCoplanarPlane) {
    const Scene s = scene_with_box({0, 1, -3}, {2, 2, 2});
    const auto plane = place_plane_on_surface(Ray::make({0.3, 1.2, 0}, {0, 0, -1}), s);
    ASSERT_TRUE(plane);
    EXPECT_NEAR(plane->normal().z, 1.0, 1e-12);
    EXPECT_EQ(plane->half_extent_u, 1.0);
    EXPECT_EQ(plane->half_extent_v, 1.0);
    EXPECT_NEAR(plane->pose.position.z, -2.0, 1e-12);
    EXPECT_EQ(plane->grid_cell, kDefaultGridCell);
}

TEST(SurfacePlane, MissAndStrokesGiveNone) {
    Scene s = scene_with_box({0, 1, -3}, {2, 2, 2});
    EXPECT_FALSE(place_plane_on_surface(Ray::make({0, 1, 0}, {0, 0, 1}), s));
    StrokeRecord st;
    st.id = s.allocate_id();
    st.samples = {{-1, 5, -2}, {1, 5, -2}};
    st.radius = 0.1;
    s.add_stroke(st);
    EXPECT_FALSE(place_plane_on_surface(Ray::make({0, 5, 0}, {0, 0, -1}), s));
}

TEST(SurfacePlane, PenAtHitIsWithinSnapDistance) {
    Rng rng(52);
    const Scene s = scene_with_box({0, 1, -2}, {0.6, 0.4, 0.8});
    for (int i = 0; i < 500; ++i) {
        const Vec3 o = rng.in_box({-2, -1, -4}, {2, 3, 0});
        const Ray r = Ray::make(o, Vec3{0, 1, -2} + rng.in_box({-0.2, -0.2, -0.2}, {0.2, 0.2, 0.2}) - o);
        const auto hit = raycast_scene(r, s);
        const auto plane = place_plane_on_surface(r, s);
        ASSERT_EQ(hit.has_value(), plane.has_value());
        if (!hit) continue;
        const auto snapped = snap_pen_to_plane(hit->point, *plane);
        ASSERT_TRUE(snapped);
        EXPECT_LT(distance(*snapped, hit->point), 1e-9);
    }
}

TEST(SnapPen, Examples) {
    ProxyPlane plane;
    plane.present = true;
    plane.pose.position = {0, 1, 0};
    const auto near = snap_pen_to_plane({0.3, 1.2, 0.02}, plane);
    ASSERT_TRUE(near);
    EXPECT_NEAR(near->z, 0.0, 1e-15);
    EXPECT_FALSE(snap_pen_to_plane({0.3, 1.2, 0.10}, plane));
    plane.pose.position = {0, 0, 0};
    const Vec3 on{0.3, 0.2, 0.0};
    EXPECT_EQ(snap_pen_to_plane(on, plane), on);
    EXPECT_FALSE(snap_pen_to_plane(on, ProxyPlane{}));
}

TEST(ConstrainedSample, GridLineNearHands) {
    ProxyPlane plane;
    plane.present = true;
    const auto s = constrained_sample(plane.from_plane_coords(0.26, 0.26) + plane.normal() * 0.01, plane, 0.10);
    EXPECT_EQ(s.mode, PlanarMode::grid_line);
    const auto uv = plane.to_plane_coords(s.point);
    EXPECT_NEAR(uv[0], 0.25, 1e-12);
    EXPECT_NEAR(uv[1], 0.25, 1e-12);
}

TEST(ConstrainedSample, FreePlanarAwayFromHandsAndAtThreshold) {
    ProxyPlane plane;
    plane.present = true;
    plane.pose = {{0, 1, 0}, rotation_from_euler({30, 45, 0})};
    const Vec3 tip = plane.from_plane_coords(0.26, 0.13) + plane.normal() * 0.02;
    const auto far = constrained_sample(tip, plane, 0.60);
    EXPECT_EQ(far.mode, PlanarMode::free_planar);
    EXPECT_LT(distance(far.point, project_point_plane(tip, plane.equation())), 1e-15);
    EXPECT_EQ(constrained_sample(tip, plane, 0.25).mode, PlanarMode::free_planar);
    EXPECT_EQ(constrained_sample(tip, plane, std::nextafter(0.25, 0.0)).mode, PlanarMode::grid_line);
}

TEST(Laser, OffsetAlongNormal) {
    Scene s;
    EnvironmentMesh wall;
    wall.id = s.allocate_id();
    wall.vertices = {{-5, -5, 0}, {5, -5, 0}, {5, 5, 0}, {-5, 5, 0}};
    wall.triangles = {{0, 1, 2}, {0, 2, 3}};
    s.add_environment(wall);
    const auto sample = laser_project_sample(Ray::make({0.3, 0.4, 2}, {0, 0, -1}), s);
    ASSERT_TRUE(sample);
    EXPECT_NEAR(sample->point.z, 0.002, 1e-15);
    // From behind the wall the offset still faces the pen.
    const auto back = laser_project_sample(Ray::make({0.3, 0.4, -2}, {0, 0, 1}), s);
    ASSERT_TRUE(back);
    EXPECT_NEAR(back->point.z, -0.002, 1e-15);
    EXPECT_FALSE(laser_project_sample(Ray::make({0, 0, 2}, {0, 0, 1}), s));
}

TEST(Laser, NearestOfTwoBoxes) {
    Scene s = scene_with_box({0, 0, -3}, {1, 1, 1});
    PrimitiveRecord near;
    near.id = s.allocate_id();
    near.pose.position = {0.45, 0, -1.5};
    near.extents = {0.2, 0.2, 0.2};
    s.add_primitive(near);
    const Ray grazing = Ray::make({0.4, 0, 0}, {0, 0, -1});
    const auto sample = laser_project_sample(grazing, s);
    ASSERT_TRUE(sample);
    EXPECT_EQ(sample->hit.entity, near.id);
    EXPECT_NEAR(sample->point.z, -1.4 + 0.002, 1e-12);
}

}  // namespace
}  // namespace airsketch
