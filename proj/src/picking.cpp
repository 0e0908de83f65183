#include "airsketch/picking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace airsketch {

bool hit_precedes(const Hit& a, const Hit& b) {
    return std::tie(a.t, a.entity, a.face, a.triangle) < std::tie(b.t, b.entity, b.face, b.triangle);
}

const EntityMesh* SceneGeometry::find(EntityId id) const {
    auto it = std::lower_bound(meshes.begin(), meshes.end(), id,
                               [](const EntityMesh& m, EntityId key) { return m.id < key; });
    return (it != meshes.end() && it->id == id) ? &*it : nullptr;
}

SceneGeometry build_scene_geometry(const Scene& scene) {
    SceneGeometry g;
    g.meshes.reserve(scene.primitives.size() + scene.environment.size());
    for (const auto& p : scene.primitives) g.meshes.push_back(primitive_mesh(p));
    for (const auto& e : scene.environment) g.meshes.push_back(environment_entity_mesh(e));
    std::sort(g.meshes.begin(), g.meshes.end(), [](const EntityMesh& a, const EntityMesh& b) { return a.id < b.id; });
    return g;
}

namespace {

std::optional<Hit> test_triangle(const Ray& r, const EntityMesh& mesh, std::uint32_t tri) {
    const auto& t = mesh.triangles[tri];
    const auto hit = ray_triangle(r, mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    if (!hit) return std::nullopt;
    Hit h;
    h.entity = mesh.id;
    h.t = hit->t;
    h.point = r.at(hit->t);
    h.normal = hit->normal;
    h.face = mesh.triangle_face[tri];
    h.triangle = tri;
    return h;
}

}  // namespace

std::optional<Hit> raycast_geometry(const Ray& r, const SceneGeometry& geometry) {
    std::optional<Hit> best;
    for (const auto& mesh : geometry.meshes) {
        for (std::uint32_t tri = 0; tri < mesh.triangles.size(); ++tri) {
            const auto h = test_triangle(r, mesh, tri);
            if (h && (!best || hit_precedes(*h, *best))) best = h;
        }
    }
    return best;
}

std::optional<Hit> raycast_scene(const Ray& r, const Scene& scene) {
    return raycast_geometry(r, build_scene_geometry(scene));
}

RaycastAccelerator::RaycastAccelerator(SceneGeometry geometry) : geometry_(std::move(geometry)) {
    std::vector<Vec3> centroids;
    for (std::uint32_t m = 0; m < geometry_.meshes.size(); ++m) {
        const auto& mesh = geometry_.meshes[m];
        for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) {
            refs_.push_back({m, t});
            const auto& tri = mesh.triangles[t];
            centroids.push_back((mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]) / 3.0);
        }
    }
    if (refs_.empty()) return;
    nodes_.reserve(2 * refs_.size());
    build(0, static_cast<std::uint32_t>(refs_.size()), centroids);
}

std::uint32_t RaycastAccelerator::build(std::uint32_t begin, std::uint32_t end, std::vector<Vec3>& centroids) {
    const auto index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();

    Aabb bounds = Aabb::empty();
    Aabb centroid_bounds = Aabb::empty();
    double magnitude = 0.0;
    for (std::uint32_t i = begin; i < end; ++i) {
        const auto& mesh = geometry_.meshes[refs_[i].mesh];
        for (auto v : mesh.triangles[refs_[i].triangle]) {
            const Vec3& p = mesh.vertices[v];
            bounds.expand(p);
            magnitude = std::max({magnitude, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
        }
        centroid_bounds.expand(centroids[i]);
    }
    // Pad so that rounding in the slab test never rejects a box whose triangle is hit.
    const double pad = 1e-9 * (1.0 + magnitude);
    bounds.min -= Vec3{pad, pad, pad};
    bounds.max += Vec3{pad, pad, pad};
    nodes_[index].bounds = bounds;

    constexpr std::uint32_t kLeafSize = 4;
    if (end - begin <= kLeafSize) {
        nodes_[index].first = begin;
        nodes_[index].count = end - begin;
        return index;
    }

    const Vec3 extent = centroid_bounds.max - centroid_bounds.min;
    const int axis = extent.x >= extent.y && extent.x >= extent.z ? 0 : (extent.y >= extent.z ? 1 : 2);
    std::vector<std::uint32_t> order(end - begin);
    std::iota(order.begin(), order.end(), begin);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const double ca = centroids[a][axis];
        const double cb = centroids[b][axis];
        return ca < cb || (ca == cb && a < b);
    });
    std::vector<TriRef> refs;
    std::vector<Vec3> cents;
    refs.reserve(order.size());
    cents.reserve(order.size());
    for (auto i : order) {
        refs.push_back(refs_[i]);
        cents.push_back(centroids[i]);
    }
    std::copy(refs.begin(), refs.end(), refs_.begin() + begin);
    std::copy(cents.begin(), cents.end(), centroids.begin() + begin);

    const std::uint32_t mid = begin + (end - begin) / 2;
    const std::uint32_t left = build(begin, mid, centroids);
    const std::uint32_t right = build(mid, end, centroids);
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
}

std::optional<Hit> RaycastAccelerator::raycast(const Ray& r) const {
    std::optional<Hit> best;
    if (nodes_.empty()) return best;
    std::vector<std::uint32_t> stack{0};
    while (!stack.empty()) {
        const std::uint32_t ni = stack.back();
        stack.pop_back();
        const Node& node = nodes_[ni];
        const double limit = best ? best->t * (1.0 + 1e-12) + 1e-12 : std::numeric_limits<double>::infinity();
        if (!node.bounds.intersect(r, limit)) continue;
        if (node.count > 0) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                const auto h = test_triangle(r, geometry_.meshes[refs_[i].mesh], refs_[i].triangle);
                if (h && (!best || hit_precedes(*h, *best))) best = h;
            }
        } else {
            stack.push_back(node.right);
            stack.push_back(node.left);
        }
    }
    return best;
}

bool primitive_contains(const PrimitiveRecord& prim, const Vec3& p) {
    constexpr double slack = 1e-9;
    const Vec3 local = prim.pose.rotation.conjugate().rotate(p - prim.pose.position);
    const Vec3 h = prim.extents * 0.5;
    switch (prim.kind) {
        case PrimitiveKind::box:
            return std::abs(local.x) <= h.x + slack && std::abs(local.y) <= h.y + slack &&
                   std::abs(local.z) <= h.z + slack;
        case PrimitiveKind::sphere: {
            const Vec3 n{local.x / h.x, local.y / h.y, local.z / h.z};
            return length(n) <= 1.0 + slack / std::min({h.x, h.y, h.z});
        }
        case PrimitiveKind::cylinder: {
            const double radial = std::hypot(local.x / h.x, local.z / h.z);
            return std::abs(local.y) <= h.y + slack && radial <= 1.0 + slack / std::min(h.x, h.z);
        }
    }
    return false;
}

std::optional<EntityId> point_pick(const Vec3& p, const Scene& scene) {
    for (const auto& prim : scene.primitives) {
        if (primitive_contains(prim, p)) return prim.id;
    }
    return std::nullopt;
}

Pose SnapAdjustment::apply(const Pose& pose) const {
    return {pivot + rotation.rotate(pose.position - pivot) + translation, (rotation * pose.rotation).normalized()};
}

std::optional<SnapAdjustment> detect_face_snap(const PrimitiveRecord& moving, const Scene& scene, double angle_tol_deg,
                                               double gap_tol, std::span<const EntityId> exclude) {
    auto has_flat_faces = [](PrimitiveKind k) { return k == PrimitiveKind::box || k == PrimitiveKind::cylinder; };
    if (!has_flat_faces(moving.kind)) return std::nullopt;

    const double cos_tol = std::cos(deg_to_rad(angle_tol_deg));
    const EntityMesh moving_mesh = primitive_mesh(moving);
    const Vec3 pivot = moving.pose.position;

    std::optional<SnapAdjustment> best;
    for (const auto& other : scene.primitives) {
        if (other.id == moving.id || !has_flat_faces(other.kind)) continue;
        if (std::find(exclude.begin(), exclude.end(), other.id) != exclude.end()) continue;
        const EntityMesh static_mesh = primitive_mesh(other);
        for (std::uint32_t mf = 0; mf < moving_mesh.faces.size(); ++mf) {
            const MeshFace& fm = moving_mesh.faces[mf];
            for (std::uint32_t sf = 0; sf < static_mesh.faces.size(); ++sf) {
                const MeshFace& fs = static_mesh.faces[sf];
                const Vec3 target = -fs.normal;
                if (dot(fm.normal, target) < cos_tol) continue;

                const Quat rot = Quat::from_two_vectors(fm.normal, target);
                const Vec3 center = pivot + rot.rotate(fm.center - pivot);
                const double gap = dot(center - fs.center, fs.normal);
                if (std::abs(gap) > gap_tol) continue;
                if (best && std::abs(gap) >= std::abs(best->gap)) continue;

                double u_lo = std::numeric_limits<double>::infinity(), u_hi = -u_lo;
                double v_lo = u_lo, v_hi = -u_lo;
                for (const auto& c : fm.corners()) {
                    const Vec3 rc = pivot + rot.rotate(c - pivot) - fs.center;
                    const double u = dot(rc, fs.u_axis);
                    const double v = dot(rc, fs.v_axis);
                    u_lo = std::min(u_lo, u);
                    u_hi = std::max(u_hi, u);
                    v_lo = std::min(v_lo, v);
                    v_hi = std::max(v_hi, v);
                }
                const bool overlaps = u_lo < fs.half_u && u_hi > -fs.half_u && v_lo < fs.half_v && v_hi > -fs.half_v;
                if (!overlaps) continue;

                SnapAdjustment adj;
                adj.rotation = rot;
                adj.pivot = pivot;
                adj.translation = fs.normal * -gap;
                adj.static_entity = other.id;
                adj.moving_face = mf;
                adj.static_face = sf;
                adj.gap = gap;
                best = adj;
            }
        }
    }
    return best;
}

}  // namespace airsketch
