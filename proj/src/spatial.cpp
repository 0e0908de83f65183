#include "airsketch/spatial.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace airsketch {

namespace {

// Round to nearest integer, halves away from zero. Values within 1e-9 of a
// half are treated as exact halves so that decimal inputs such as 0.075/0.05
// behave as written.
double round_half_away(double q) {
    const double fl = std::floor(q);
    const double frac = q - fl;
    if (std::abs(frac - 0.5) < 1e-9) {
        return q >= 0.0 ? fl + 1.0 : fl;
    }
    return std::round(q);
}

double wrap_degrees(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r > 180.0) r -= 360.0;
    if (r < -180.0) r += 360.0;
    return r;
}

double snap_angle(double deg) {
    const double snapped = round_half_away(deg / kAngleSnapStepDeg) * kAngleSnapStepDeg;
    const double wrapped = wrap_degrees(snapped);
    // -0.0 is kept out of serialized output.
    return wrapped == 0.0 ? 0.0 : wrapped;
}

}  // namespace

Vec3 any_perpendicular(const Vec3& v) {
    const Vec3 n = normalize(v);
    const double ax = std::abs(n.x);
    const double ay = std::abs(n.y);
    const double az = std::abs(n.z);
    Vec3 helper;
    if (ax <= ay && ax <= az) {
        helper = {1.0, 0.0, 0.0};
    } else if (ay <= az) {
        helper = {0.0, 1.0, 0.0};
    } else {
        helper = {0.0, 0.0, 1.0};
    }
    return normalize(cross(n, helper));
}

Quat Quat::from_axis_angle(const Vec3& axis, double radians) {
    const Vec3 a = normalize(axis);
    const double s = std::sin(radians * 0.5);
    return {a.x * s, a.y * s, a.z * s, std::cos(radians * 0.5)};
}

Quat Quat::from_two_vectors(const Vec3& from, const Vec3& to) {
    const Vec3 f = normalize(from);
    const Vec3 t = normalize(to);
    const double d = dot(f, t);
    if (d < -1.0 + 1e-12) {
        const Vec3 axis = any_perpendicular(f);
        return {axis.x, axis.y, axis.z, 0.0};
    }
    const Vec3 c = cross(f, t);
    return Quat{c.x, c.y, c.z, 1.0 + d}.normalized();
}

Quat Quat::from_basis(const Vec3& xa, const Vec3& ya, const Vec3& za) {
    // Columns of the rotation matrix are xa, ya, za.
    const double m00 = xa.x, m01 = ya.x, m02 = za.x;
    const double m10 = xa.y, m11 = ya.y, m12 = za.y;
    const double m20 = xa.z, m21 = ya.z, m22 = za.z;
    const double trace = m00 + m11 + m22;
    Quat q;
    if (trace > 0.0) {
        const double s = std::sqrt(trace + 1.0) * 2.0;
        q = {(m21 - m12) / s, (m02 - m20) / s, (m10 - m01) / s, 0.25 * s};
    } else if (m00 > m11 && m00 > m22) {
        const double s = std::sqrt(1.0 + m00 - m11 - m22) * 2.0;
        q = {0.25 * s, (m01 + m10) / s, (m02 + m20) / s, (m21 - m12) / s};
    } else if (m11 > m22) {
        const double s = std::sqrt(1.0 + m11 - m00 - m22) * 2.0;
        q = {(m01 + m10) / s, 0.25 * s, (m12 + m21) / s, (m02 - m20) / s};
    } else {
        const double s = std::sqrt(1.0 + m22 - m00 - m11) * 2.0;
        q = {(m02 + m20) / s, (m12 + m21) / s, 0.25 * s, (m10 - m01) / s};
    }
    return q.normalized();
}

Quat Quat::normalized() const {
    const double n = norm();
    if (n == 0.0) return identity();
    return {x / n, y / n, z / n, w / n};
}

Vec3 Quat::rotate(const Vec3& v) const {
    // v' = v + 2w (q x v) + 2 q x (q x v)
    const Vec3 q{x, y, z};
    const Vec3 t = cross(q, v) * 2.0;
    return v + t * w + cross(q, t);
}

std::array<std::array<double, 3>, 3> Quat::to_matrix() const {
    const double xx = x * x, yy = y * y, zz = z * z;
    const double xy = x * y, xz = x * z, yz = y * z;
    const double wx = w * x, wy = w * y, wz = w * z;
    return {{{1.0 - 2.0 * (yy + zz), 2.0 * (xy - wz), 2.0 * (xz + wy)},
             {2.0 * (xy + wz), 1.0 - 2.0 * (xx + zz), 2.0 * (yz - wx)},
             {2.0 * (xz - wy), 2.0 * (yz + wx), 1.0 - 2.0 * (xx + yy)}}};
}

Quat operator*(const Quat& a, const Quat& b) {
    return {a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z};
}

double quat_distance(const Quat& a, const Quat& b) {
    const double plus = std::sqrt((a.x + b.x) * (a.x + b.x) + (a.y + b.y) * (a.y + b.y) +
                                  (a.z + b.z) * (a.z + b.z) + (a.w + b.w) * (a.w + b.w));
    const double minus = std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                                   (a.z - b.z) * (a.z - b.z) + (a.w - b.w) * (a.w - b.w));
    return std::min(plus, minus);
}

double rotation_angle_between(const Quat& a, const Quat& b) {
    const Quat rel = a.conjugate() * b;
    const double v = std::sqrt(rel.x * rel.x + rel.y * rel.y + rel.z * rel.z);
    return 2.0 * std::atan2(v, std::abs(rel.w));
}

Quat rotation_from_euler(const EulerDeg& e) {
    const Quat yaw = Quat::from_axis_angle({0.0, 1.0, 0.0}, deg_to_rad(e.yaw));
    const Quat pitch = Quat::from_axis_angle({1.0, 0.0, 0.0}, deg_to_rad(e.pitch));
    const Quat roll = Quat::from_axis_angle({0.0, 0.0, 1.0}, deg_to_rad(e.roll));
    return (yaw * pitch * roll).normalized();
}

EulerDeg euler_from_rotation(const Quat& q) {
    const auto m = q.normalized().to_matrix();
    const double cos_pitch = std::hypot(m[0][2], m[2][2]);
    EulerDeg e;
    e.pitch = rad_to_deg(std::atan2(-m[1][2], cos_pitch));
    if (cos_pitch > 1e-7) {
        e.yaw = rad_to_deg(std::atan2(m[0][2], m[2][2]));
        e.roll = rad_to_deg(std::atan2(m[1][0], m[1][1]));
    } else if (-m[1][2] > 0.0) {
        e.yaw = rad_to_deg(std::atan2(m[0][1], m[0][0]));
        e.roll = 0.0;
    } else {
        e.yaw = rad_to_deg(std::atan2(-m[0][1], m[0][0]));
        e.roll = 0.0;
    }
    return e;
}

Pose compose(const Pose& parent, const Pose& child) {
    return {parent.position + parent.rotation.rotate(child.position),
            (parent.rotation * child.rotation).normalized()};
}

Pose inverse(const Pose& p) {
    const Quat inv = p.rotation.conjugate();
    return {inv.rotate(-p.position), inv};
}

Ray Ray::make(const Vec3& origin, const Vec3& direction) {
    const double len = length(direction);
    if (!(len > 0.0) || !std::isfinite(len)) {
        throw std::invalid_argument("ray direction must be non-zero and finite");
    }
    return {origin, direction / len};
}

PlaneEq PlaneEq::through(const Vec3& point, const Vec3& normal) {
    const Vec3 n = normalize(normal);
    return {n, dot(n, point)};
}

Aabb Aabb::empty() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {{inf, inf, inf}, {-inf, -inf, -inf}};
}

void Aabb::expand(const Vec3& p) {
    min = {std::min(min.x, p.x), std::min(min.y, p.y), std::min(min.z, p.z)};
    max = {std::max(max.x, p.x), std::max(max.y, p.y), std::max(max.z, p.z)};
}

void Aabb::expand(const Aabb& b) {
    expand(b.min);
    expand(b.max);
}

bool Aabb::contains(const Vec3& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z &&
           p.z <= max.z;
}

std::optional<double> Aabb::intersect(const Ray& r, double t_max) const {
    double t0 = 0.0;
    double t1 = t_max;
    for (int axis = 0; axis < 3; ++axis) {
        const double o = r.origin[axis];
        const double d = r.direction[axis];
        const double lo = min[axis];
        const double hi = max[axis];
        if (d == 0.0) {
            if (o < lo || o > hi) return std::nullopt;
            continue;
        }
        double near = (lo - o) / d;
        double far = (hi - o) / d;
        if (near > far) std::swap(near, far);
        t0 = std::max(t0, near);
        t1 = std::min(t1, far);
        if (t0 > t1) return std::nullopt;
    }
    return t0;
}

Vec3 quantize_euler_15(const Vec3& angles_deg) {
    return {snap_angle(angles_deg.x), snap_angle(angles_deg.y), snap_angle(angles_deg.z)};
}

EulerDeg quantize_euler_15(const EulerDeg& e) {
    return {snap_angle(e.yaw), snap_angle(e.pitch), snap_angle(e.roll)};
}

Vec3 project_point_plane(const Vec3& p, const PlaneEq& plane) {
    return p - plane.normal * plane.signed_distance(p);
}

std::optional<RayPlaneHit> ray_plane(const Ray& r, const PlaneEq& plane) {
    const double denom = dot(plane.normal, r.direction);
    if (std::abs(denom) < kParallelEpsilon) return std::nullopt;
    const double t = -plane.signed_distance(r.origin) / denom;
    if (t < 0.0) return std::nullopt;
    // Land exactly on the plane rather than at origin + t*dir, which can be off by an ulp.
    return RayPlaneHit{t, project_point_plane(r.at(t), plane)};
}

std::optional<RayTriangleHit> ray_triangle(const Ray& r, const Vec3& a, const Vec3& b,
                                           const Vec3& c) {
    const Vec3 e1 = b - a;
    const Vec3 e2 = c - a;
    const Vec3 n = cross(e1, e2);
    const double n_len = length(n);
    if (0.5 * n_len <= kDegenerateArea) return std::nullopt;
    const Vec3 unit_n = n / n_len;
    if (std::abs(dot(unit_n, r.direction)) < kParallelEpsilon) return std::nullopt;

    const Vec3 p = cross(r.direction, e2);
    const double det = dot(e1, p);
    const double inv_det = 1.0 / det;

    const Vec3 s = r.origin - a;
    const double u = dot(s, p) * inv_det;
    if (u < 0.0 || u > 1.0) return std::nullopt;

    const Vec3 q = cross(s, e1);
    const double v = dot(r.direction, q) * inv_det;
    if (v < 0.0 || u + v > 1.0) return std::nullopt;

    const double t = dot(e2, q) * inv_det;
    if (t < 0.0) return std::nullopt;

    return RayTriangleHit{t, {1.0 - u - v, u, v}, unit_n};
}

std::array<double, 2> snap_to_grid2d(double u, double v, double cell) {
    if (!(cell > 0.0)) throw std::invalid_argument("grid cell must be positive");
    const double su = round_half_away(u / cell) * cell;
    const double sv = round_half_away(v / cell) * cell;
    return {su == 0.0 ? 0.0 : su, sv == 0.0 ? 0.0 : sv};
}

}  // namespace airsketch
