#include "airsketch/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace airsketch {

std::array<Vec3, 4> MeshFace::corners() const {
    const Vec3 du = u_axis * half_u;
    const Vec3 dv = v_axis * half_v;
    return {center - du - dv, center + du - dv, center + du + dv, center - du + dv};
}

MeshFace face_from_polygon(std::span<const Vec3> corners) {
    MeshFace f;
    const Vec3& origin = corners[0];
    f.normal = normalize(cross(corners[1] - origin, corners[2] - origin));
    f.u_axis = normalize(corners[1] - origin);
    f.v_axis = cross(f.normal, f.u_axis);
    double u_lo = 0.0, u_hi = 0.0, v_lo = 0.0, v_hi = 0.0;
    for (const auto& c : corners) {
        const double u = dot(c - origin, f.u_axis);
        const double v = dot(c - origin, f.v_axis);
        u_lo = std::min(u_lo, u);
        u_hi = std::max(u_hi, u);
        v_lo = std::min(v_lo, v);
        v_hi = std::max(v_hi, v);
    }
    f.center = origin + f.u_axis * (0.5 * (u_lo + u_hi)) + f.v_axis * (0.5 * (v_lo + v_hi));
    f.half_u = 0.5 * (u_hi - u_lo);
    f.half_v = 0.5 * (v_hi - v_lo);
    return f;
}

namespace {

MeshFace transform_face(const Pose& pose, MeshFace f) {
    f.center = pose.transform_point(f.center);
    f.normal = pose.transform_direction(f.normal);
    f.u_axis = pose.transform_direction(f.u_axis);
    f.v_axis = pose.transform_direction(f.v_axis);
    return f;
}

EntityMesh box_mesh(const PrimitiveRecord& p) {
    const Vec3 h = p.extents * 0.5;
    EntityMesh m;
    m.id = p.id;
    // Vertex index bits: 1 = +x, 2 = +y, 4 = +z.
    for (int i = 0; i < 8; ++i) {
        const Vec3 local{(i & 1) ? h.x : -h.x, (i & 2) ? h.y : -h.y, (i & 4) ? h.z : -h.z};
        m.vertices.push_back(p.pose.transform_point(local));
    }
    auto index_of = [&](const Vec3& local) {
        return static_cast<std::uint32_t>((local.x > 0 ? 1 : 0) | (local.y > 0 ? 2 : 0) | (local.z > 0 ? 4 : 0));
    };
    struct Axes {
        Vec3 n, u, v;
    };
    const std::array<Axes, 6> axes{{
        {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
        {{-1, 0, 0}, {0, 0, 1}, {0, 1, 0}},
        {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}},
        {{0, -1, 0}, {1, 0, 0}, {0, 0, 1}},
        {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}},
        {{0, 0, -1}, {0, 1, 0}, {1, 0, 0}},
    }};
    auto along = [&](const Vec3& axis) { return std::abs(dot(axis, h)); };
    for (std::uint32_t face = 0; face < 6; ++face) {
        const auto& a = axes[face];
        MeshFace local;
        local.normal = a.n;
        local.u_axis = a.u;
        local.v_axis = a.v;
        local.center = a.n * along(a.n);
        local.half_u = along(a.u);
        local.half_v = along(a.v);
        const auto c = local.corners();
        const std::array<std::uint32_t, 4> idx{index_of(c[0]), index_of(c[1]), index_of(c[2]), index_of(c[3])};
        m.triangles.push_back({idx[0], idx[1], idx[2]});
        m.triangles.push_back({idx[0], idx[2], idx[3]});
        m.triangle_face.push_back(face);
        m.triangle_face.push_back(face);
        m.faces.push_back(transform_face(p.pose, local));
    }
    return m;
}

void add_triangle_face(EntityMesh& m, std::array<std::uint32_t, 3> tri) {
    const std::array<Vec3, 3> corners{m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]]};
    m.triangle_face.push_back(static_cast<std::uint32_t>(m.faces.size()));
    m.triangles.push_back(tri);
    m.faces.push_back(face_from_polygon(corners));
}

EntityMesh sphere_mesh(const PrimitiveRecord& p) {
    const Vec3 r = p.extents * 0.5;
    EntityMesh m;
    m.id = p.id;
    const std::uint32_t slices = kSphereSlices;
    const std::uint32_t stacks = kSphereStacks;
    m.vertices.push_back(p.pose.transform_point({0.0, r.y, 0.0}));
    for (std::uint32_t s = 1; s < stacks; ++s) {
        const double phi = kPi * static_cast<double>(s) / stacks;
        for (std::uint32_t j = 0; j < slices; ++j) {
            const double theta = 2.0 * kPi * static_cast<double>(j) / slices;
            const Vec3 local{r.x * std::sin(phi) * std::cos(theta), r.y * std::cos(phi),
                             r.z * std::sin(phi) * std::sin(theta)};
            m.vertices.push_back(p.pose.transform_point(local));
        }
    }
    m.vertices.push_back(p.pose.transform_point({0.0, -r.y, 0.0}));
    const std::uint32_t bottom = static_cast<std::uint32_t>(m.vertices.size() - 1);
    auto ring = [&](std::uint32_t s, std::uint32_t j) { return 1 + (s - 1) * slices + (j % slices); };

    for (std::uint32_t j = 0; j < slices; ++j) add_triangle_face(m, {0, ring(1, j + 1), ring(1, j)});
    for (std::uint32_t s = 1; s + 1 < stacks; ++s) {
        for (std::uint32_t j = 0; j < slices; ++j) {
            const std::uint32_t a = ring(s, j), b = ring(s, j + 1);
            const std::uint32_t c = ring(s + 1, j), d = ring(s + 1, j + 1);
            add_triangle_face(m, {a, b, d});
            add_triangle_face(m, {a, d, c});
        }
    }
    for (std::uint32_t j = 0; j < slices; ++j) {
        add_triangle_face(m, {bottom, ring(stacks - 1, j), ring(stacks - 1, j + 1)});
    }
    return m;
}

EntityMesh cylinder_mesh(const PrimitiveRecord& p, int radial_segments) {
    const Vec3 h = p.extents * 0.5;
    const auto k = static_cast<std::uint32_t>(std::max(3, radial_segments));
    EntityMesh m;
    m.id = p.id;
    std::vector<Vec3> local(2 * k + 2);
    for (std::uint32_t j = 0; j < k; ++j) {
        const double theta = 2.0 * kPi * static_cast<double>(j) / k;
        const double x = h.x * std::cos(theta);
        const double z = h.z * std::sin(theta);
        local[j] = {x, -h.y, z};
        local[k + j] = {x, h.y, z};
    }
    local[2 * k] = {0.0, -h.y, 0.0};
    local[2 * k + 1] = {0.0, h.y, 0.0};
    for (const auto& v : local) m.vertices.push_back(p.pose.transform_point(v));

    const std::uint32_t bottom_center = 2 * k;
    const std::uint32_t top_center = 2 * k + 1;

    MeshFace top;
    top.center = {0.0, h.y, 0.0};
    top.normal = {0.0, 1.0, 0.0};
    top.u_axis = {0.0, 0.0, 1.0};
    top.v_axis = {1.0, 0.0, 0.0};
    top.half_u = h.z;
    top.half_v = h.x;
    MeshFace bottom;
    bottom.center = {0.0, -h.y, 0.0};
    bottom.normal = {0.0, -1.0, 0.0};
    bottom.u_axis = {1.0, 0.0, 0.0};
    bottom.v_axis = {0.0, 0.0, 1.0};
    bottom.half_u = h.x;
    bottom.half_v = h.z;
    m.faces.push_back(transform_face(p.pose, top));
    m.faces.push_back(transform_face(p.pose, bottom));

    for (std::uint32_t j = 0; j < k; ++j) {
        const std::uint32_t jn = (j + 1) % k;
        const std::array<Vec3, 4> quad{local[k + j], local[k + jn], local[jn], local[j]};
        m.faces.push_back(transform_face(p.pose, face_from_polygon(quad)));
    }

    for (std::uint32_t j = 0; j < k; ++j) {
        const std::uint32_t jn = (j + 1) % k;
        m.triangles.push_back({top_center, k + jn, k + j});
        m.triangle_face.push_back(0);
    }
    for (std::uint32_t j = 0; j < k; ++j) {
        const std::uint32_t jn = (j + 1) % k;
        m.triangles.push_back({k + j, k + jn, jn});
        m.triangles.push_back({k + j, jn, j});
        m.triangle_face.push_back(2 + j);
        m.triangle_face.push_back(2 + j);
    }
    for (std::uint32_t j = 0; j < k; ++j) {
        const std::uint32_t jn = (j + 1) % k;
        m.triangles.push_back({bottom_center, j, jn});
        m.triangle_face.push_back(1);
    }
    return m;
}

void append_number(std::string& out, double v) {
    char buf[64];
    if (v == 0.0) v = 0.0;  // no "-0.000000"
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    // Values in (-5e-7, 0) also print as -0.000000.
    if (std::string_view(buf) == "-0.000000") {
        out += "0.000000";
    } else {
        out += buf;
    }
}

void append_object(std::string& out, std::string_view name, EntityId id, std::span<const Vec3> vertices,
                   std::span<const std::array<std::uint32_t, 3>> triangles, std::size_t& vertex_base) {
    out += "o ";
    out += name;
    out += '_';
    out += std::to_string(id);
    out += '\n';
    for (const auto& v : vertices) {
        out += "v ";
        append_number(out, v.x);
        out += ' ';
        append_number(out, v.y);
        out += ' ';
        append_number(out, v.z);
        out += '\n';
    }
    for (const auto& t : triangles) {
        out += "f ";
        out += std::to_string(vertex_base + t[0] + 1);
        out += ' ';
        out += std::to_string(vertex_base + t[1] + 1);
        out += ' ';
        out += std::to_string(vertex_base + t[2] + 1);
        out += '\n';
    }
    vertex_base += vertices.size();
}

}  // namespace

EntityMesh primitive_mesh(const PrimitiveRecord& p, int radial_segments) {
    switch (p.kind) {
        case PrimitiveKind::box: return box_mesh(p);
        case PrimitiveKind::sphere: return sphere_mesh(p);
        case PrimitiveKind::cylinder: return cylinder_mesh(p, radial_segments);
    }
    return box_mesh(p);
}

EntityMesh environment_entity_mesh(const EnvironmentMesh& env) {
    EntityMesh m;
    m.id = env.id;
    m.vertices = env.vertices;
    for (const auto& t : env.triangles) add_triangle_face(m, t);
    return m;
}

MeshFormat parse_mesh_format(std::string_view name) {
    if (name == "obj") return MeshFormat::obj;
    throw std::invalid_argument("unknown mesh format '" + std::string(name) + "'");
}

std::string export_mesh(const Scene& scene, MeshFormat format, int radial_segments) {
    if (format != MeshFormat::obj) throw std::invalid_argument("unsupported mesh format");

    std::string out = "# airsketch scene export\n# units: meters (world frame)\n";
    std::size_t vertex_base = 0;

    // Merge the three id-sorted lists.
    std::size_t si = 0, pi = 0, ei = 0;
    constexpr EntityId none = ~EntityId{0};
    while (true) {
        const EntityId sid = si < scene.strokes.size() ? scene.strokes[si].id : none;
        const EntityId pid = pi < scene.primitives.size() ? scene.primitives[pi].id : none;
        const EntityId eid = ei < scene.environment.size() ? scene.environment[ei].id : none;
        const EntityId next = std::min({sid, pid, eid});
        if (next == none) break;
        if (next == sid) {
            const auto& s = scene.strokes[si++];
            const TubeMesh tube = tessellate_tube(s.samples, s.radius, radial_segments);
            append_object(out, "stroke", s.id, tube.vertices, tube.triangles, vertex_base);
        } else if (next == pid) {
            const auto& p = scene.primitives[pi++];
            const EntityMesh mesh = primitive_mesh(p, radial_segments);
            append_object(out, to_string(p.kind), p.id, mesh.vertices, mesh.triangles, vertex_base);
        } else {
            const auto& e = scene.environment[ei++];
            append_object(out, "environment", e.id, e.vertices, e.triangles, vertex_base);
        }
    }
    return out;
}

}  // namespace airsketch
