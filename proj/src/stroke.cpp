#include "airsketch/stroke.hpp"

#include <cmath>

namespace airsketch {

bool StrokeBuilder::append_sample(const Vec3& p) {
    if (samples.empty() || distance(samples.back(), p) >= min_sample_distance) {
        samples.push_back(p);
        return true;
    }
    return false;
}

StrokeBuilder& StrokeCapture::begin_stroke(const StyleState& style, StrokeKind kind,
                                           double min_sample_distance) {
    if (builder_) throw StateError("a stroke is already active");
    builder_.emplace();
    builder_->kind = kind;
    builder_->radius = style.current_radius;
    builder_->color = style.current_color;
    builder_->min_sample_distance = min_sample_distance;
    return *builder_;
}

bool StrokeCapture::append_sample(const Vec3& p) {
    if (!builder_) throw StateError("no active stroke");
    return builder_->append_sample(p);
}

std::optional<StrokeRecord> StrokeCapture::end_stroke(std::optional<Vec3> final_point) {
    if (!builder_) throw StateError("no active stroke");
    StrokeBuilder b = std::move(*builder_);
    builder_.reset();

    if (final_point && (b.samples.empty() || distance(b.samples.back(), *final_point) > kFinalPointEpsilon)) {
        b.samples.push_back(*final_point);
    }
    if (b.samples.size() < 2) return std::nullopt;

    StrokeRecord rec;
    rec.samples = std::move(b.samples);
    rec.radius = b.radius;
    rec.color = b.color;
    rec.kind = b.kind;
    return rec;
}

std::vector<Vec3> tube_tangents(std::span<const Vec3> samples) {
    const std::size_t n = samples.size();
    std::vector<Vec3> seg(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i + 1 < n; ++i) seg[i] = normalize(samples[i + 1] - samples[i]);

    // Zero-length segments inherit the nearest earlier direction, or the first
    // later one at the very start.
    Vec3 fallback{0.0, 0.0, 1.0};
    for (const auto& d : seg) {
        if (d != Vec3{}) {
            fallback = d;
            break;
        }
    }
    for (auto& d : seg) {
        if (d == Vec3{}) {
            d = fallback;
        } else {
            fallback = d;
        }
    }

    std::vector<Vec3> tangents(n);
    if (n < 2) return tangents;
    tangents[0] = seg[0];
    tangents[n - 1] = seg[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const Vec3 bisector = seg[i - 1] + seg[i];
        const double len = length(bisector);
        tangents[i] = len < 1e-9 ? tangents[i - 1] : bisector / len;
    }
    return tangents;
}

TubeMesh tessellate_tube(std::span<const Vec3> samples, double radius, int radial_segments) {
    if (samples.size() < 2) throw std::invalid_argument("tube needs at least 2 samples");
    if (!(radius > 0.0)) throw std::invalid_argument("tube radius must be positive");
    if (radial_segments < 3) throw std::invalid_argument("tube needs at least 3 radial segments");

    const std::size_t n = samples.size();
    const auto k = static_cast<std::uint32_t>(radial_segments);
    const std::vector<Vec3> tangents = tube_tangents(samples);

    std::vector<double> cos_t(k);
    std::vector<double> sin_t(k);
    for (std::uint32_t j = 0; j < k; ++j) {
        const double theta = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(k);
        cos_t[j] = std::cos(theta);
        sin_t[j] = std::sin(theta);
    }

    TubeMesh mesh;
    mesh.vertices.reserve(n * k + 2);
    mesh.normals.reserve(n * k + 2);
    mesh.triangles.reserve(2 * k * n);

    Vec3 normal = any_perpendicular(tangents[0]);
    Vec3 binormal = cross(tangents[0], normal);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& t = tangents[i];
        if (i > 0) {
            const Vec3& prev = tangents[i - 1];
            // Parallel transport: carry the previous frame along the minimal
            // rotation between tangents. Unchanged tangents keep the frame bit for bit.
            if (length(cross(prev, t)) > 1e-12 || dot(prev, t) < 0.0) {
                const Quat step = Quat::from_two_vectors(prev, t);
                normal = step.rotate(normal);
                normal = normalize(normal - t * dot(normal, t));
                binormal = cross(t, normal);
            }
        }
        for (std::uint32_t j = 0; j < k; ++j) {
            const Vec3 radial = normal * cos_t[j] + binormal * sin_t[j];
            mesh.vertices.push_back(samples[i] + radial * radius);
            mesh.normals.push_back(radial);
        }
    }

    const auto start_cap = static_cast<std::uint32_t>(n * k);
    const std::uint32_t end_cap = start_cap + 1;
    mesh.vertices.push_back(samples.front());
    mesh.normals.push_back(-tangents.front());
    mesh.vertices.push_back(samples.back());
    mesh.normals.push_back(tangents.back());

    for (std::uint32_t i = 0; i + 1 < n; ++i) {
        for (std::uint32_t j = 0; j < k; ++j) {
            const std::uint32_t jn = (j + 1) % k;
            const std::uint32_t a = i * k + j;
            const std::uint32_t b = i * k + jn;
            const std::uint32_t c = (i + 1) * k + j;
            const std::uint32_t d = (i + 1) * k + jn;
            mesh.triangles.push_back({a, b, c});
            mesh.triangles.push_back({b, d, c});
        }
    }
    const auto last_ring = static_cast<std::uint32_t>((n - 1) * k);
    for (std::uint32_t j = 0; j < k; ++j) {
        const std::uint32_t jn = (j + 1) % k;
        mesh.triangles.push_back({start_cap, jn, j});
        mesh.triangles.push_back({end_cap, last_ring + j, last_ring + jn});
    }
    return mesh;
}

}  // namespace airsketch
