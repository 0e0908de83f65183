#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "airsketch/engine.hpp"
#include "airsketch/replay.hpp"

namespace airsketch::testing {

enum class PalmPose { up, down, toward, neutral };

// Off-hand rotation giving the requested palm class for these hand positions.
Quat palm_rotation(PalmPose palm, const Vec3& pen, const Vec3& off);

/// Scripted input generator. Works in the physical frame; every action emits
/// frames at a fixed rate.
class TraceBuilder {
public:
    explicit TraceBuilder(std::string description, std::int64_t dt_ms = 10);

    void emit();
    void hold(int frames);

    void move_pen(const Vec3& to, int steps);
    void move_off(const Vec3& to, int steps);
    void move_both(const Vec3& pen_to, const Vec3& off_to, int steps);
    void set_pen_rotation(const Quat& q) { pen_.rotation = q; }
    void set_palm(PalmPose p) { palm_ = p; }

    void press(Button b);
    void release(Button b);
    void click(Button b);

    // Open the palm, tap ring slots in order, restore the palm and pen.
    void menu_tap(int slot);
    void menu_tap_sequence(std::initializer_list<int> slots);

    // Press primary at the current pen position, follow the path, release.
    void stroke(const std::vector<Vec3>& path, int steps_per_segment = 6, Button b = kPenPrimary);

    const Pose& pen() const { return pen_; }
    const Pose& off() const { return off_; }
    std::int64_t now() const { return t_; }
    Trace finish() const { return trace_; }
    std::size_t size() const { return trace_.frames.size(); }

private:
    Quat palm_rotation() const;

    Trace trace_;
    std::int64_t t_ = 0;
    std::int64_t dt_;
    Pose head_;
    Pose pen_;
    Pose off_;
    std::uint8_t buttons_ = 0;
    PalmPose palm_ = PalmPose::neutral;
};

// Menu slots of the main ring and the palette submenus.
namespace slot {
inline constexpr int color = 0, size = 1, plane = 2, world = 3, create = 4, laser = 5, select = 6,
                     reset_scale = 7;
}

// Portable uniform doubles from a standardized engine.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform(double lo, double hi) { return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    int below(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }
    Vec3 in_box(const Vec3& lo, const Vec3& hi) {
        return {uniform(lo.x, hi.x), uniform(lo.y, hi.y), uniform(lo.z, hi.z)};
    }
    Vec3 unit_vector();
    Quat rotation();

private:
    std::mt19937_64 engine_;
};

}  // namespace airsketch::testing
