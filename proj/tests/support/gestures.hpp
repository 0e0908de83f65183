#pragma once

#include <cstdint>

namespace airsketch::testing {

struct PanReport {
    int drags = 0;
    int frames = 0;
    double max_drift = 0.0;  // grabbed world point vs off-hand, physical meters
};

// Random OFF_B drags in world-control mode.
PanReport random_pan_drags(int drags, std::uint64_t seed);

struct ScaleReport {
    int gestures = 0;
    int frames = 0;
    int clamped_frames = 0;
    double max_ratio_error = 0.0;   // |s/s0 - d/d0| on unclamped frames
    double max_clamp_error = 0.0;   // |s - bound| on clamped frames
    double max_pivot_drift = 0.0;   // physical meters
    double min_scale = 1.0;
    double max_scale = 1.0;
};

// Random OFF_A gestures in world-control mode.
ScaleReport random_scale_gestures(int gestures, std::uint64_t seed);

}  // namespace airsketch::testing
