#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "airsketch/constraints.hpp"
#include "airsketch/scene.hpp"
#include "airsketch/stroke.hpp"

namespace airsketch {

// Button bits as they appear in input frames.
enum Button : std::uint8_t {
    kPenPrimary = 1 << 0,    // sketch / confirm
    kPenSecondary = 1 << 1,  // grab selected objects
    kOffA = 1 << 2,          // scale world; freehand plane placement
    kOffB = 1 << 3,          // pan world; surface plane placement
};

/// One tracker sample. Poses are in the physical (room) frame; the pen pose
/// origin is its interaction point and the pen points along its local -Z.
struct InputFrame {
    std::int64_t t = 0;  // milliseconds
    Pose head;
    Pose pen;
    Pose offhand;
    std::uint8_t buttons = 0;

    bool held(Button b) const { return (buttons & b) != 0; }
};

enum class PalmFacing { up, down, toward_dominant, neutral };
enum class Mode { air_sketch, laser_sketch, primitive_create, select_manipulate, world_control };
enum class MenuState { hidden, shown, submenu_color, submenu_size, bin };
enum class CreationVariant { between_hands, uniform, ground };

std::string_view to_string(PalmFacing p);
std::string_view to_string(Mode m);
std::string_view to_string(MenuState m);
std::string_view to_string(CreationVariant v);

inline constexpr double kPalmThresholdDeg = 45.0;
inline constexpr double kPalmReleaseDeg = 55.0;  // threshold + 10 deg hysteresis

inline constexpr double kMenuRingRadius = 0.08;
inline constexpr double kMenuButtonRadius = 0.03;
inline constexpr double kMenuLift = 0.02;
inline constexpr double kMenuLockoutRadius = 0.12;
inline constexpr double kBinRadius = 0.12;
inline constexpr int kMenuSlots = 8;

inline constexpr double kMinPrimitiveExtent = 0.001;
inline constexpr double kMinScaleArmDistance = 0.01;
inline constexpr double kLaserMissLength = 5.0;  // physical meters

Vec3 palm_normal(const Pose& offhand);

/// UP > DOWN > TOWARD_DOMINANT at 45 degrees; the previous class is kept
/// until its own angle exceeds 55 degrees.
PalmFacing classify_palm(const Pose& offhand, const Pose& pen, PalmFacing previous = PalmFacing::neutral);

enum class MenuAction {
    open_color,
    open_size,
    toggle_plane,
    world_control,
    create_primitive,
    toggle_laser,
    select_manipulate,
    reset_scale,
    pick_color,
    pick_size,
};

std::string_view to_string(MenuAction a);

struct MenuButton {
    int slot = 0;
    MenuAction action = MenuAction::open_color;
    int value = 0;  // palette index for pick_color / pick_size
    Vec3 position;  // physical
};

/// Circular palette in the off-hand palm plane, physical frame.
struct MenuLayout {
    Vec3 center;
    Vec3 normal;
    std::vector<MenuButton> buttons;
};

MenuLayout menu_layout(MenuState state, const Pose& offhand);
// Nearest button within kMenuButtonRadius of the pen tip.
std::optional<std::size_t> hover_button(const MenuLayout& layout, const Vec3& pen_tip);

/// Draft geometry for a primitive spanned by the hands (world frame).
PrimitiveRecord primitive_from_hands(PrimitiveKind kind, CreationVariant variant, const Vec3& dominant,
                                     const Vec3& offhand);

struct PrimitiveDraft {
    CreationVariant variant = CreationVariant::between_hands;
    PrimitiveRecord record;
};

struct PanGrab {
    Vec3 offset_at_press;
    Vec3 hand_at_press;  // physical
};

struct ScaleGrab {
    double start_distance = 0.0;
    double start_scale = 1.0;
    Vec3 pivot_physical;
    Vec3 pivot_world;
};

struct ManipulateGrab {
    Pose pen_at_press;  // world
    std::vector<PrimitiveRecord> originals;
};

using Grab = std::variant<PanGrab, ScaleGrab, ManipulateGrab>;

struct ActiveStroke {
    std::optional<PlanarMode> planar;  // set for plane strokes
    ProxyPlane plane;                  // plane the stroke is bound to
    Vec3 anchor;                       // grid_line press point
};

struct EngineState {
    Scene scene;
    Mode mode = Mode::air_sketch;
    bool plane_tool = false;
    PrimitiveKind primitive_kind = PrimitiveKind::box;
    MenuState menu = MenuState::hidden;
    PalmFacing palm = PalmFacing::neutral;
    CreationVariant last_variant = CreationVariant::between_hands;

    StrokeCapture stroke;
    std::optional<ActiveStroke> stroke_info;
    std::optional<PrimitiveDraft> draft;
    std::optional<Grab> grab;
    std::vector<EntityId> selection;  // ascending

    std::uint8_t prev_buttons = 0;
    std::optional<std::int64_t> last_t;
    bool primary_consumed = false;  // current primary press went to the menu
};

struct DraftFeedback {
    PrimitiveKind kind = PrimitiveKind::box;
    CreationVariant variant = CreationVariant::between_hands;
    Pose pose;
    Vec3 extents;
    Rgba8 color;
    bool gold = false;  // otherwise semi-transparent
};

struct StrokePreview {
    StrokeKind kind = StrokeKind::air;
    std::vector<Vec3> samples;
    double radius = 0.0;
    Rgba8 color;
};

/// What a renderer needs to draw the affordances. `_phys` fields are in the
/// room frame, `_world` fields in the scene frame.
struct FeedbackState {
    std::int64_t t = 0;
    Mode mode = Mode::air_sketch;
    bool plane_tool = false;
    PrimitiveKind primitive_kind = PrimitiveKind::box;
    PalmFacing palm = PalmFacing::neutral;
    Pose head_phys;

    Vec3 tip_phys;
    Rgba8 tip_color;
    double tip_radius_world = 0.0;
    double tip_radius_phys = 0.0;

    bool arrow = false;
    bool ink_drop = false;
    std::optional<std::array<Vec3, 2>> laser_world;  // start, end
    bool laser_hit = false;

    std::optional<EntityId> hover_id;
    std::vector<EntityId> selected_ids;
    std::optional<DraftFeedback> draft;
    std::optional<StrokePreview> active_stroke;

    Vec3 wire_cube_center_phys;
    Vec3 wire_cube_extents;

    MenuState menu = MenuState::hidden;
    MenuLayout menu_layout;
    std::optional<int> hovered_slot;
    Rgba8 center_swatch;
    bool bin = false;

    WorldTransform world;
};

/// Entities touched by a step, for streaming to clients.
struct SceneDelta {
    std::vector<EntityId> added;
    std::vector<EntityId> updated;
    std::vector<EntityId> removed;
    bool world = false;
    bool style = false;
    bool plane = false;
    bool next_id = false;

    bool empty() const {
        return added.empty() && updated.empty() && removed.empty() && !world && !style && !plane && !next_id;
    }
};

struct StepResult {
    bool accepted = false;
    std::string error;
    SceneDelta delta;
    FeedbackState feedback;
};

/// Applies one frame. Deterministic: the result depends only on (state, frame).
/// A frame whose timestamp does not increase, or whose poses are not finite,
/// is rejected and leaves the state untouched.
StepResult step(EngineState& state, const InputFrame& frame);

class Engine {
public:
    Engine() = default;
    explicit Engine(Scene scene) { state_.scene = std::move(scene); }

    StepResult step(const InputFrame& frame) { return airsketch::step(state_, frame); }

    const EngineState& state() const { return state_; }
    const Scene& scene() const { return state_.scene; }

private:
    EngineState state_;
};

}  // namespace airsketch
