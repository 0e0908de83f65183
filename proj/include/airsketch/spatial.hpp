#pragma once

#include <array>
#include <cmath>
#include <optional>

// Pose, transform, ray and plane math shared by the whole engine.
// Right-handed, +Y up, meters everywhere.

namespace airsketch {

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr bool operator==(const Vec3&) const = default;

    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double length(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double distance(const Vec3& a, const Vec3& b) { return length(a - b); }

// Returns the zero vector for (near) zero input.
inline Vec3 normalize(const Vec3& v) {
    const double len = length(v);
    return len > 0.0 ? v / len : Vec3{};
}

// Any unit vector perpendicular to `v` (v must be non-zero). Deterministic.
Vec3 any_perpendicular(const Vec3& v);

/// Unit quaternion. Components are stored (x, y, z, w).
struct Quat {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double w = 1.0;

    constexpr bool operator==(const Quat&) const = default;

    static constexpr Quat identity() { return {}; }
    static Quat from_axis_angle(const Vec3& axis, double radians);
    // Shortest-arc rotation taking unit vector `from` onto unit vector `to`.
    static Quat from_two_vectors(const Vec3& from, const Vec3& to);
    // Rotation whose columns are the given orthonormal basis.
    static Quat from_basis(const Vec3& x_axis, const Vec3& y_axis, const Vec3& z_axis);

    double norm() const { return std::sqrt(x * x + y * y + z * z + w * w); }
    Quat normalized() const;
    constexpr Quat conjugate() const { return {-x, -y, -z, w}; }

    Vec3 rotate(const Vec3& v) const;
    std::array<std::array<double, 3>, 3> to_matrix() const;
};

Quat operator*(const Quat& a, const Quat& b);

// Distance between rotations that treats q and -q as the same rotation.
double quat_distance(const Quat& a, const Quat& b);

// Angle of the relative rotation between a and b, in radians.
double rotation_angle_between(const Quat& a, const Quat& b);

/// Yaw (about Y), pitch (about X), roll (about Z) in degrees, applied
/// intrinsically: R = Ry(yaw) * Rx(pitch) * Rz(roll).
struct EulerDeg {
    double yaw = 0.0;
    double pitch = 0.0;
    double roll = 0.0;
};

Quat rotation_from_euler(const EulerDeg& e);
// Inverse of rotation_from_euler. At pitch = +-90 deg the roll is folded into yaw.
EulerDeg euler_from_rotation(const Quat& q);

struct Pose {
    Vec3 position;
    Quat rotation;

    static Pose identity() { return {}; }
    static Pose translation(const Vec3& t) { return {t, Quat::identity()}; }

    Vec3 transform_point(const Vec3& p) const { return position + rotation.rotate(p); }
    Vec3 transform_direction(const Vec3& d) const { return rotation.rotate(d); }
};

// parent * child: child is expressed in the parent frame.
Pose compose(const Pose& parent, const Pose& child);
Pose inverse(const Pose& p);

struct Ray {
    Vec3 origin;
    Vec3 direction;  // unit length

    // Normalizes `direction`; throws std::invalid_argument for a zero direction.
    static Ray make(const Vec3& origin, const Vec3& direction);
    Vec3 at(double t) const { return origin + direction * t; }
};

struct PlaneEq {
    Vec3 normal{0.0, 1.0, 0.0};  // unit length
    double offset = 0.0;          // dot(normal, p) == offset on the plane

    static PlaneEq through(const Vec3& point, const Vec3& normal);
    double signed_distance(const Vec3& p) const { return dot(normal, p) - offset; }
};

struct Aabb {
    Vec3 min;
    Vec3 max;

    static Aabb empty();
    void expand(const Vec3& p);
    void expand(const Aabb& b);
    Vec3 center() const { return (min + max) * 0.5; }
    bool contains(const Vec3& p) const;
    bool is_empty() const { return min.x > max.x; }
    // Slab test; returns the entry distance if the ray meets the box within [0, t_max].
    std::optional<double> intersect(const Ray& r, double t_max) const;
};

inline constexpr double kParallelEpsilon = 1e-9;
inline constexpr double kDegenerateArea = 1e-12;
inline constexpr double kAngleSnapStepDeg = 15.0;

// Nearest multiple of 15 degrees per component, ties away from zero, wrapped into [-180, 180].
Vec3 quantize_euler_15(const Vec3& angles_deg);
EulerDeg quantize_euler_15(const EulerDeg& e);

Vec3 project_point_plane(const Vec3& p, const PlaneEq& plane);

struct RayPlaneHit {
    double t;
    Vec3 point;
};
std::optional<RayPlaneHit> ray_plane(const Ray& r, const PlaneEq& plane);

struct RayTriangleHit {
    double t;
    // Weights of (a, b, c); point == u*a + v*b + w*c.
    std::array<double, 3> barycentric;
    Vec3 normal;  // geometric, unit length, (b - a) x (c - a) orientation
};
// Moller-Trumbore. Edges and vertices count as inside.
std::optional<RayTriangleHit> ray_triangle(const Ray& r, const Vec3& a, const Vec3& b, const Vec3& c);

// Nearest multiple of `cell`, ties away from zero. Throws std::invalid_argument if cell <= 0.
std::array<double, 2> snap_to_grid2d(double u, double v, double cell);

}  // namespace airsketch
