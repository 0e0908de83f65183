#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "airsketch/scene.hpp"

namespace airsketch {

inline constexpr double kDefaultMinSampleDistance = 0.003;  // world meters
inline constexpr double kFinalPointEpsilon = 1e-6;
inline constexpr int kDefaultRadialSegments = 12;

class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Pending samples of a stroke being drawn. Consecutive accepted samples are
/// at least `min_sample_distance` apart; only the final point may be closer.
struct StrokeBuilder {
    std::vector<Vec3> samples;
    StrokeKind kind = StrokeKind::air;
    double radius = kSizePalette[1];
    Rgba8 color;
    double min_sample_distance = kDefaultMinSampleDistance;

    bool append_sample(const Vec3& p);
};

/// Holds at most one active StrokeBuilder.
class StrokeCapture {
public:
    // Throws StateError if a stroke is already active.
    StrokeBuilder& begin_stroke(const StyleState& style, StrokeKind kind,
                                double min_sample_distance = kDefaultMinSampleDistance);
    // Throws StateError if no stroke is active.
    bool append_sample(const Vec3& p);
    // Returns a record (id 0, caller assigns) iff the stroke ended with >= 2 samples.
    std::optional<StrokeRecord> end_stroke(std::optional<Vec3> final_point = std::nullopt);

    bool active() const { return builder_.has_value(); }
    const StrokeBuilder* builder() const { return builder_ ? &*builder_ : nullptr; }
    StrokeBuilder* builder() { return builder_ ? &*builder_ : nullptr; }
    void cancel() { builder_.reset(); }

private:
    std::optional<StrokeBuilder> builder_;
};

struct TubeMesh {
    std::vector<Vec3> vertices;
    std::vector<Vec3> normals;
    std::vector<std::array<std::uint32_t, 3>> triangles;
};

/// Rings of `radial_segments` vertices around each sample, oriented by
/// parallel-transported frames, bridged segment to segment and closed with a
/// fan cap at each end. Ring vertices come first (sample-major), then the
/// start cap center, then the end cap center.
///
/// Throws std::invalid_argument for fewer than 2 samples, radius <= 0 or
/// fewer than 3 radial segments.
TubeMesh tessellate_tube(std::span<const Vec3> samples, double radius,
                         int radial_segments = kDefaultRadialSegments);

// Unit tangent used for each ring: segment direction at the ends, bisector
// inside, previous tangent where the bisector degenerates.
std::vector<Vec3> tube_tangents(std::span<const Vec3> samples);

}  // namespace airsketch
