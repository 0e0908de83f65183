#include <gtest/gtest.h>

#include <cmath>

#include "airsketch/spatial.hpp"
#include "support/oracles.hpp"
#include "support/trace_builder.hpp"

namespace airsketch {
namespace {

using testing::Rng;

void expect_vec_near(const Vec3& a, const Vec3& b, double tol) {
    EXPECT_NEAR(a.x, b.x, tol);
    EXPECT_NEAR(a.y, b.y, tol);
    EXPECT_NEAR(a.z, b.z, tol);
}

TEST(QuantizeEuler, NearestMultipleOf15) {
    EXPECT_EQ(quantize_euler_15(Vec3{17, 0, 0}), (Vec3{15, 0, 0}));
    EXPECT_EQ(quantize_euler_15(Vec3{0, 0, 0}), (Vec3{0, 0, 0}));
}

TEST(QuantizeEuler, TiesRoundAwayFromZero) {
    EXPECT_EQ(quantize_euler_15(Vec3{7.5, -7.5, 52.4}), (Vec3{15, -15, 45}));
    EXPECT_EQ(quantize_euler_15(Vec3{22.5, -22.5, 172.5}), (Vec3{30, -30, 180}));
}

TEST(QuantizeEuler, OutputWrapsIntoRange) {
    const Vec3 q = quantize_euler_15(Vec3{350, -200, 181});
    EXPECT_EQ(q, (Vec3{-15, 165, 180}));
}

TEST(QuantizeEuler, IdempotentAndExactMultiples) {
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const Vec3 in{rng.uniform(-720, 720), rng.uniform(-720, 720), rng.uniform(-720, 720)};
        const Vec3 q = quantize_euler_15(in);
        EXPECT_EQ(quantize_euler_15(q), q);
        for (int k = 0; k < 3; ++k) {
            EXPECT_EQ(std::fmod(q[k], 15.0), 0.0);
            EXPECT_LE(std::abs(q[k]), 180.0);
        }
    }
}

TEST(Euler, RoundTripAwayFromGimbalLock) {
    Rng rng(12);
    for (int i = 0; i < 1000; ++i) {
        const EulerDeg e{rng.uniform(-179, 179), rng.uniform(-85, 85), rng.uniform(-179, 179)};
        const EulerDeg back = euler_from_rotation(rotation_from_euler(e));
        EXPECT_NEAR(back.yaw, e.yaw, 1e-8);
        EXPECT_NEAR(back.pitch, e.pitch, 1e-8);
        EXPECT_NEAR(back.roll, e.roll, 1e-8);
    }
}

TEST(Euler, OrderIsYawPitchRollIntrinsic) {
    const EulerDeg e{30, 20, 10};
    const Quat expected = Quat::from_axis_angle({0, 1, 0}, deg_to_rad(30)) *
                          Quat::from_axis_angle({1, 0, 0}, deg_to_rad(20)) *
                          Quat::from_axis_angle({0, 0, 1}, deg_to_rad(10));
    EXPECT_LT(quat_distance(rotation_from_euler(e), expected), 1e-12);
}

TEST(Euler, GimbalLockStillReconstructsRotation) {
    const Quat q = rotation_from_euler({40, 90, 25});
    EXPECT_LT(quat_distance(rotation_from_euler(euler_from_rotation(q)), q), 1e-9);
}

TEST(ProjectPointPlane, Examples) {
    EXPECT_EQ(project_point_plane({1, 2, 3}, PlaneEq::through({0, 0, 0}, {0, 1, 0})), (Vec3{1, 0, 3}));
    EXPECT_EQ(project_point_plane({4, 0, 2}, PlaneEq::through({0, 0, 0}, {0, 1, 0})), (Vec3{4, 0, 2}));
    EXPECT_EQ(project_point_plane({0, 0, 5}, PlaneEq::through({0, 0, 1}, {0, 0, 1})), (Vec3{0, 0, 1}));
}

TEST(ProjectPointPlane, IdempotentAndOnPlane) {
    Rng rng(13);
    for (int i = 0; i < 2000; ++i) {
        const PlaneEq plane = PlaneEq::through(rng.in_box({-5, -5, -5}, {5, 5, 5}), rng.unit_vector());
        const Vec3 p = rng.in_box({-10, -10, -10}, {10, 10, 10});
        const Vec3 q = project_point_plane(p, plane);
        EXPECT_LT(std::abs(plane.signed_distance(q)), 1e-9);
        expect_vec_near(project_point_plane(q, plane), q, 1e-12);
        EXPECT_LT(length(cross(p - q, plane.normal)), 1e-9);
    }
}

TEST(RayPlane, Examples) {
    const auto hit = ray_plane(Ray::make({0, 0, 0}, {0, 0, -1}), PlaneEq::through({0, 0, -2}, {0, 0, 1}));
    ASSERT_TRUE(hit);
    EXPECT_DOUBLE_EQ(hit->t, 2.0);
    EXPECT_EQ(hit->point, (Vec3{0, 0, -2}));
    EXPECT_FALSE(ray_plane(Ray::make({0, 0, 0}, {1, 0, 0}), PlaneEq::through({0, 0, -2}, {0, 0, 1})));
    EXPECT_FALSE(ray_plane(Ray::make({0, 0, 0}, {0, 0, 1}), PlaneEq::through({0, 0, -2}, {0, 0, 1})));
}

TEST(Ray, ZeroDirectionRejected) { EXPECT_THROW(Ray::make({0, 0, 0}, {0, 0, 0}), std::invalid_argument); }

TEST(RayTriangle, HitAtDistanceTwo) {
    const auto hit = ray_triangle(Ray::make({0, 0, 0}, {0, 0, -1}), {-1, -1, -2}, {1, -1, -2}, {0, 1, -2});
    ASSERT_TRUE(hit);
    EXPECT_DOUBLE_EQ(hit->t, 2.0);
    EXPECT_NEAR(length(hit->normal), 1.0, 1e-15);
    EXPECT_NEAR(hit->normal.z, 1.0, 1e-15);
    EXPECT_NEAR(hit->barycentric[0] + hit->barycentric[1] + hit->barycentric[2], 1.0, 1e-15);
}

TEST(RayTriangle, ThroughVertexHasUnitBarycentric) {
    const auto hit = ray_triangle(Ray::make({1, -1, 0}, {0, 0, -1}), {-1, -1, -2}, {1, -1, -2}, {0, 1, -2});
    ASSERT_TRUE(hit);
    EXPECT_NEAR(*std::max_element(hit->barycentric.begin(), hit->barycentric.end()), 1.0, 1e-12);
}

TEST(RayTriangle, DegenerateAndBehind) {
    EXPECT_FALSE(ray_triangle(Ray::make({0, 0, 0}, {0, 0, -1}), {0, 0, -2}, {1, 0, -2}, {2, 0, -2}));
    EXPECT_FALSE(ray_triangle(Ray::make({0, 0, 0}, {0, 0, 1}), {-1, -1, -2}, {1, -1, -2}, {0, 1, -2}));
    EXPECT_FALSE(ray_triangle(Ray::make({0, 0, 0}, {1, 0, 0}), {-1, -1, -2}, {1, -1, -2}, {0, 1, -2}));
}

TEST(RayTriangle, AgreesWithHalfSpaceOracle) {
    Rng rng(2024);
    std::vector<std::array<Vec3, 3>> tris;
    for (int i = 0; i < 100; ++i) {
        tris.push_back({rng.in_box({-1, -1, -1}, {1, 1, 1}), rng.in_box({-1, -1, -1}, {1, 1, 1}),
                        rng.in_box({-1, -1, -1}, {1, 1, 1})});
    }
    int disagreements = 0, hits = 0, compared = 0;
    for (int i = 0; i < 10000; ++i) {
        const auto& tri = tris[static_cast<std::size_t>(i % 100)];
        const Vec3 origin = rng.in_box({-3, -3, -3}, {3, 3, 3});
        const Vec3 target = (tri[0] + tri[1] + tri[2]) / 3.0 + rng.in_box({-0.6, -0.6, -0.6}, {0.6, 0.6, 0.6});
        if (length(target - origin) < 1e-6) continue;
        const Ray r = Ray::make(origin, target - origin);
        const auto got = ray_triangle(r, tri[0], tri[1], tri[2]);
        const auto want = oracle::ray_triangle(r.origin, r.direction, tri[0], tri[1], tri[2]);
        // Boundary cases are compared with slack: skip rays within 1e-9 of an edge or grazing the plane.
        if (want && (std::abs(want->edge_margin) < 1e-9 || want->parallel < 1e-9)) continue;
        ++compared;
        const bool want_hit = want && want->inside;
        if (got.has_value() != want_hit) {
            ++disagreements;
        } else if (got) {
            ++hits;
            if (std::abs(got->t - want->t) > 1e-9 * (1.0 + want->t)) ++disagreements;
        }
    }
    EXPECT_EQ(disagreements, 0);
    EXPECT_GT(hits, 1000);
    EXPECT_GT(compared, 9900);
}

TEST(SnapToGrid, Examples) {
    EXPECT_EQ(snap_to_grid2d(0.26, 0.26, 0.05)[0], 0.25);
    const auto a = snap_to_grid2d(0.26, 0.26, 0.05);
    EXPECT_NEAR(a[0], 0.25, 1e-15);
    EXPECT_NEAR(a[1], 0.25, 1e-15);
    const auto z = snap_to_grid2d(0.0, 0.0, 0.3);
    EXPECT_EQ(z[0], 0.0);
    EXPECT_EQ(z[1], 0.0);
    const auto t = snap_to_grid2d(0.075, -0.075, 0.05);
    EXPECT_NEAR(t[0], 0.10, 1e-15);
    EXPECT_NEAR(t[1], -0.10, 1e-15);
}

TEST(SnapToGrid, RejectsNonPositiveCell) {
    EXPECT_THROW(snap_to_grid2d(1, 1, 0.0), std::invalid_argument);
    EXPECT_THROW(snap_to_grid2d(1, 1, -0.1), std::invalid_argument);
}

TEST(Pose, ComposeInverseRoundTrip) {
    Rng rng(14);
    for (int i = 0; i < 1000; ++i) {
        const Pose p{rng.in_box({-10, -10, -10}, {10, 10, 10}), rng.rotation()};
        const Pose id = compose(p, inverse(p));
        EXPECT_LT(length(id.position), 1e-9);
        EXPECT_LT(quat_distance(id.rotation, Quat::identity()), 1e-9);
        const Pose id2 = compose(inverse(p), p);
        EXPECT_LT(length(id2.position), 1e-9);
        EXPECT_LT(quat_distance(id2.rotation, Quat::identity()), 1e-9);
    }
}

TEST(Quat, FromTwoVectorsMapsExactly) {
    Rng rng(15);
    for (int i = 0; i < 500; ++i) {
        const Vec3 a = rng.unit_vector();
        const Vec3 b = i % 10 == 0 ? -a : rng.unit_vector();
        expect_vec_near(Quat::from_two_vectors(a, b).rotate(a), b, 1e-12);
    }
}

TEST(Aabb, SlabTestHandlesAxisParallelRays) {
    Aabb box = Aabb::empty();
    box.expand(Vec3{-1, -1, -1});
    box.expand(Vec3{1, 1, 1});
    EXPECT_TRUE(box.intersect(Ray::make({0, 0, 5}, {0, 0, -1}), 100.0));
    EXPECT_FALSE(box.intersect(Ray::make({2, 0, 5}, {0, 0, -1}), 100.0));
    EXPECT_FALSE(box.intersect(Ray::make({0, 0, 5}, {0, 0, -1}), 3.0));
}

}  // namespace
}  // namespace airsketch
