#include "airsketch/engine.hpp"

#include <algorithm>
#include <cmath>

namespace airsketch {

std::string_view to_string(PalmFacing p) {
    switch (p) {
        case PalmFacing::up: return "up";
        case PalmFacing::down: return "down";
        case PalmFacing::toward_dominant: return "toward_dominant";
        case PalmFacing::neutral: return "neutral";
    }
    return "neutral";
}

std::string_view to_string(Mode m) {
    switch (m) {
        case Mode::air_sketch: return "air_sketch";
        case Mode::laser_sketch: return "laser_sketch";
        case Mode::primitive_create: return "primitive_create";
        case Mode::select_manipulate: return "select_manipulate";
        case Mode::world_control: return "world_control";
    }
    return "air_sketch";
}

std::string_view to_string(MenuState m) {
    switch (m) {
        case MenuState::hidden: return "hidden";
        case MenuState::shown: return "shown";
        case MenuState::submenu_color: return "submenu_color";
        case MenuState::submenu_size: return "submenu_size";
        case MenuState::bin: return "bin";
    }
    return "hidden";
}

std::string_view to_string(CreationVariant v) {
    switch (v) {
        case CreationVariant::between_hands: return "between_hands";
        case CreationVariant::uniform: return "uniform";
        case CreationVariant::ground: return "ground";
    }
    return "between_hands";
}

std::string_view to_string(MenuAction a) {
    switch (a) {
        case MenuAction::open_color: return "color";
        case MenuAction::open_size: return "size";
        case MenuAction::toggle_plane: return "plane";
        case MenuAction::world_control: return "world";
        case MenuAction::create_primitive: return "create";
        case MenuAction::toggle_laser: return "laser";
        case MenuAction::select_manipulate: return "select";
        case MenuAction::reset_scale: return "reset_scale";
        case MenuAction::pick_color: return "pick_color";
        case MenuAction::pick_size: return "pick_size";
    }
    return "color";
}

// ---------------------------------------------------------------------------
// Palm classification

Vec3 palm_normal(const Pose& offhand) { return offhand.rotation.rotate({0.0, 1.0, 0.0}); }

namespace {

double angle_deg(const Vec3& a, const Vec3& b) {
    return rad_to_deg(std::atan2(length(cross(a, b)), dot(a, b)));
}

}  // namespace

PalmFacing classify_palm(const Pose& offhand, const Pose& pen, PalmFacing previous) {
    const Vec3 n = normalize(palm_normal(offhand));
    const Vec3 to_pen = pen.position - offhand.position;
    const double up = angle_deg(n, {0.0, 1.0, 0.0});
    const double down = angle_deg(n, {0.0, -1.0, 0.0});
    const double toward = length(to_pen) > 1e-9 ? angle_deg(n, to_pen) : 180.0;

    auto angle_of = [&](PalmFacing p) {
        switch (p) {
            case PalmFacing::up: return up;
            case PalmFacing::down: return down;
            case PalmFacing::toward_dominant: return toward;
            case PalmFacing::neutral: break;
        }
        return 180.0;
    };
    if (previous != PalmFacing::neutral && angle_of(previous) <= kPalmReleaseDeg) return previous;
    if (up <= kPalmThresholdDeg) return PalmFacing::up;
    if (down <= kPalmThresholdDeg) return PalmFacing::down;
    if (toward <= kPalmThresholdDeg) return PalmFacing::toward_dominant;
    return PalmFacing::neutral;
}

// ---------------------------------------------------------------------------
// Palette menu

MenuLayout menu_layout(MenuState state, const Pose& offhand) {
    MenuLayout layout;
    layout.normal = normalize(palm_normal(offhand));
    layout.center = offhand.position + layout.normal * kMenuLift;
    const Vec3 a = offhand.rotation.rotate({1.0, 0.0, 0.0});
    const Vec3 b = offhand.rotation.rotate({0.0, 0.0, 1.0});
    auto slot_position = [&](int slot) {
        const double theta = 2.0 * kPi * slot / kMenuSlots;
        return layout.center + (a * std::cos(theta) + b * std::sin(theta)) * kMenuRingRadius;
    };

    switch (state) {
        case MenuState::shown: {
            constexpr MenuAction main[kMenuSlots] = {
                MenuAction::open_color,       MenuAction::open_size,    MenuAction::toggle_plane,
                MenuAction::world_control,    MenuAction::create_primitive, MenuAction::toggle_laser,
                MenuAction::select_manipulate, MenuAction::reset_scale,
            };
            for (int i = 0; i < kMenuSlots; ++i) layout.buttons.push_back({i, main[i], 0, slot_position(i)});
            break;
        }
        case MenuState::submenu_color:
            for (int i = 0; i < static_cast<int>(kColorPalette.size()); ++i) {
                layout.buttons.push_back({i, MenuAction::pick_color, i, slot_position(i)});
            }
            break;
        case MenuState::submenu_size:
            for (int i = 0; i < static_cast<int>(kSizePalette.size()); ++i) {
                layout.buttons.push_back({i, MenuAction::pick_size, i, slot_position(i)});
            }
            break;
        case MenuState::hidden:
        case MenuState::bin:
            break;
    }
    return layout;
}

std::optional<std::size_t> hover_button(const MenuLayout& layout, const Vec3& pen_tip) {
    std::optional<std::size_t> best;
    double best_d = kMenuButtonRadius;
    for (std::size_t i = 0; i < layout.buttons.size(); ++i) {
        const double d = distance(layout.buttons[i].position, pen_tip);
        if (d <= best_d && (!best || d < best_d)) {
            best = i;
            best_d = d;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Primitive drafting

PrimitiveRecord primitive_from_hands(PrimitiveKind kind, CreationVariant variant, const Vec3& dominant,
                                     const Vec3& offhand) {
    PrimitiveRecord rec;
    rec.kind = kind;
    const Vec3 mid = (dominant + offhand) * 0.5;
    switch (variant) {
        case CreationVariant::between_hands: {
            const Vec3 span{std::abs(dominant.x - offhand.x), std::abs(dominant.y - offhand.y),
                            std::abs(dominant.z - offhand.z)};
            rec.pose.position = mid;
            if (kind == PrimitiveKind::box) {
                rec.extents = span;
            } else if (kind == PrimitiveKind::sphere) {
                const double d = std::min({span.x, span.y, span.z});
                rec.extents = {d, d, d};
            } else {
                const double d = std::min(span.x, span.z);
                rec.extents = {d, span.y, d};
            }
            break;
        }
        case CreationVariant::uniform: {
            const double edge = distance(dominant, offhand);
            rec.pose.position = mid;
            rec.extents = {edge, edge, edge};
            break;
        }
        case CreationVariant::ground: {
            const double side = std::hypot(dominant.x - offhand.x, dominant.z - offhand.z);
            const double height = std::max(0.0, dominant.y);
            if (kind == PrimitiveKind::sphere) {
                const double d = std::min(side, height);
                rec.extents = {d, d, d};
            } else {
                rec.extents = {side, height, side};
            }
            rec.pose.position = {mid.x, rec.extents.y * 0.5, mid.z};
            break;
        }
    }
    return rec;
}

// ---------------------------------------------------------------------------
// Frame stepping

namespace {

bool finite_pose(const Pose& p) {
    const Quat& q = p.rotation;
    return p.position.finite() && std::isfinite(q.x) && std::isfinite(q.y) && std::isfinite(q.z) &&
           std::isfinite(q.w) && q.norm() > 0.5;
}

void mark(std::vector<EntityId>& list, EntityId id) {
    if (std::find(list.begin(), list.end(), id) == list.end()) list.push_back(id);
}

struct Frame {
    const InputFrame& in;
    std::uint8_t pressed;
    std::uint8_t released;
    double hand_distance;  // physical
    bool menu_visible;
    bool in_lockout;
    MenuLayout layout;

    bool held(Button b) const { return in.held(b); }
    bool was_pressed(Button b) const { return (pressed & b) != 0; }
    bool was_released(Button b) const { return (released & b) != 0; }
};

class Stepper {
public:
    Stepper(EngineState& s, SceneDelta& d) : s_(s), delta_(d) {}

    Pose pen_world(const InputFrame& f) const { return s_.scene.world.world_from_physical(f.pen); }
    Vec3 to_world(const Vec3& p) const { return s_.scene.world_from_physical(p); }
    Ray pen_ray(const InputFrame& f) const {
        const Pose pw = pen_world(f);
        return Ray::make(pw.position, pw.rotation.rotate({0.0, 0.0, -1.0}));
    }

    void commit_stroke(std::optional<StrokeRecord> rec) {
        s_.stroke_info.reset();
        if (!rec) return;
        rec->id = s_.scene.allocate_id();
        mark(delta_.added, rec->id);
        delta_.next_id = true;
        s_.scene.add_stroke(std::move(*rec));
    }

    void end_active_operation() {
        if (s_.stroke.active()) commit_stroke(s_.stroke.end_stroke());
        s_.draft.reset();
        s_.grab.reset();
    }

    void switch_mode(Mode m) {
        if (s_.mode == m) return;
        end_active_operation();
        s_.mode = m;
    }

    void apply_menu(const MenuButton& button) {
        switch (button.action) {
            case MenuAction::open_color: s_.menu = MenuState::submenu_color; break;
            case MenuAction::open_size: s_.menu = MenuState::submenu_size; break;
            case MenuAction::toggle_plane:
                s_.plane_tool = !s_.plane_tool;
                if (s_.plane_tool) {
                    switch_mode(Mode::air_sketch);
                } else if (s_.scene.plane.present) {
                    s_.scene.plane = ProxyPlane{};
                    delta_.plane = true;
                }
                break;
            case MenuAction::world_control: switch_mode(Mode::world_control); break;
            case MenuAction::create_primitive:
                if (s_.mode == Mode::primitive_create) {
                    s_.primitive_kind = static_cast<PrimitiveKind>((static_cast<int>(s_.primitive_kind) + 1) % 3);
                } else {
                    switch_mode(Mode::primitive_create);
                }
                break;
            case MenuAction::toggle_laser:
                switch_mode(s_.mode == Mode::laser_sketch ? Mode::air_sketch : Mode::laser_sketch);
                break;
            case MenuAction::select_manipulate: switch_mode(Mode::select_manipulate); break;
            case MenuAction::reset_scale:
                if (s_.grab && std::holds_alternative<ScaleGrab>(*s_.grab)) s_.grab.reset();
                if (s_.scene.world.scale != 1.0) {
                    s_.scene.world.scale = 1.0;
                    delta_.world = true;
                }
                break;
            case MenuAction::pick_color:
                s_.scene.style.current_color = kColorPalette[static_cast<std::size_t>(button.value)];
                delta_.style = true;
                s_.menu = MenuState::shown;
                break;
            case MenuAction::pick_size:
                s_.scene.style.current_radius = kSizePalette[static_cast<std::size_t>(button.value)];
                delta_.style = true;
                s_.menu = MenuState::shown;
                break;
        }
    }

    void air_sketch(const Frame& fr) {
        const InputFrame& f = fr.in;
        const Pose pw = pen_world(f);
        const Vec3 tip = pw.position;

        if (s_.plane_tool && !s_.stroke.active()) {
            if (fr.was_pressed(kOffA)) {
                s_.scene.plane = place_plane_freehand(pw);
                delta_.plane = true;
            } else if (fr.was_pressed(kOffB)) {
                if (auto plane = place_plane_on_surface(pen_ray(f), s_.scene)) {
                    s_.scene.plane = *plane;
                    delta_.plane = true;
                }
            }
        }
        const auto snapped = snap_pen_to_plane(tip, s_.scene.plane);

        if (fr.was_pressed(kPenPrimary) && !s_.primary_consumed && !s_.stroke.active()) {
            ActiveStroke info;
            if (snapped) {
                info.planar = planar_mode_for(fr.hand_distance);
                info.plane = s_.scene.plane;
                s_.stroke.begin_stroke(s_.scene.style, StrokeKind::plane);
                if (*info.planar == PlanarMode::grid_line) {
                    info.anchor = grid_point(tip, info.plane);
                    s_.stroke.append_sample(info.anchor);
                } else {
                    s_.stroke.append_sample(*snapped);
                }
            } else {
                s_.stroke.begin_stroke(s_.scene.style, StrokeKind::air);
                s_.stroke.append_sample(tip);
            }
            s_.stroke_info = info;
            return;
        }
        if (!s_.stroke.active()) return;

        const ActiveStroke& info = *s_.stroke_info;
        auto constrained = [&]() -> Vec3 {
            if (!info.planar) return tip;
            if (*info.planar == PlanarMode::grid_line) return grid_point(tip, info.plane);
            return project_point_plane(tip, info.plane.equation());
        };

        if (fr.held(kPenPrimary)) {
            if (fr.in_lockout) return;
            const Vec3 p = constrained();
            if (info.planar == PlanarMode::grid_line) {
                auto& samples = s_.stroke.builder()->samples;
                samples.assign(1, info.anchor);
                if (distance(p, info.anchor) > kFinalPointEpsilon) samples.push_back(p);
            } else {
                s_.stroke.append_sample(p);
            }
        } else if (fr.was_released(kPenPrimary)) {
            std::optional<Vec3> final_point;
            if (!fr.in_lockout) final_point = constrained();
            // A grid line keeps its last segment when released inside the lockout.
            if (info.planar == PlanarMode::grid_line && final_point) {
                s_.stroke.builder()->samples.assign(1, info.anchor);
            }
            commit_stroke(s_.stroke.end_stroke(final_point));
        }
    }

    void laser_sketch(const Frame& fr, FeedbackState& fb) {
        const InputFrame& f = fr.in;
        const Ray ray = pen_ray(f);
        const auto sample = laser_project_sample(ray, build_scene_geometry(s_.scene));
        const Vec3 end = sample ? sample->hit.point : ray.at(kLaserMissLength / s_.scene.world.scale);
        fb.laser_world = std::array<Vec3, 2>{ray.origin, end};
        fb.laser_hit = sample.has_value();

        if (fr.held(kPenPrimary) && !s_.primary_consumed) {
            if (fr.in_lockout) return;
            if (sample) {
                if (!s_.stroke.active()) {
                    s_.stroke.begin_stroke(s_.scene.style, StrokeKind::laser);
                    s_.stroke_info = ActiveStroke{};
                }
                s_.stroke.append_sample(sample->point);
            } else if (s_.stroke.active()) {
                commit_stroke(s_.stroke.end_stroke());
            }
        } else if (fr.was_released(kPenPrimary) && s_.stroke.active()) {
            std::optional<Vec3> final_point;
            if (sample && !fr.in_lockout) final_point = sample->point;
            commit_stroke(s_.stroke.end_stroke(final_point));
        }
    }

    void primitive_create(const Frame& fr) {
        const InputFrame& f = fr.in;
        switch (s_.palm) {
            case PalmFacing::up: s_.last_variant = CreationVariant::uniform; break;
            case PalmFacing::down: s_.last_variant = CreationVariant::ground; break;
            case PalmFacing::toward_dominant: s_.last_variant = CreationVariant::between_hands; break;
            case PalmFacing::neutral: break;
        }

        if (fr.was_pressed(kPenPrimary) && !s_.primary_consumed && !s_.draft) s_.draft.emplace();
        if (!s_.draft) return;

        s_.draft->variant = s_.last_variant;
        if (fr.held(kPenPrimary)) {
            s_.draft->record = primitive_from_hands(s_.primitive_kind, s_.last_variant, to_world(f.pen.position),
                                                    to_world(f.offhand.position));
            s_.draft->record.color = s_.scene.style.current_color;
            return;
        }
        PrimitiveRecord rec = s_.draft->record;
        s_.draft.reset();
        if (rec.extents.x < kMinPrimitiveExtent || rec.extents.y < kMinPrimitiveExtent ||
            rec.extents.z < kMinPrimitiveExtent) {
            return;
        }
        rec.id = s_.scene.allocate_id();
        mark(delta_.added, rec.id);
        delta_.next_id = true;
        s_.scene.add_primitive(rec);
    }

    void select_manipulate(const Frame& fr, FeedbackState& fb) {
        const InputFrame& f = fr.in;
        const Pose pw = pen_world(f);
        const auto hover = point_pick(pw.position, s_.scene);
        fb.hover_id = hover;

        if (fr.was_pressed(kPenPrimary) && !s_.primary_consumed && hover) {
            auto it = std::lower_bound(s_.selection.begin(), s_.selection.end(), *hover);
            if (it != s_.selection.end() && *it == *hover) {
                s_.selection.erase(it);
            } else {
                s_.selection.insert(it, *hover);
            }
        }

        if (fr.was_pressed(kPenSecondary) && !s_.grab && !s_.selection.empty()) {
            ManipulateGrab g;
            g.pen_at_press = pw;
            for (EntityId id : s_.selection) {
                if (const auto* p = s_.scene.find_primitive(id)) g.originals.push_back(*p);
            }
            s_.grab = std::move(g);
        }

        auto* grab = s_.grab ? std::get_if<ManipulateGrab>(&*s_.grab) : nullptr;
        if (grab == nullptr) return;

        if (fr.held(kPenSecondary)) {
            const Pose motion = compose(pw, inverse(grab->pen_at_press));
            std::vector<EntityId> grabbed;
            for (const auto& orig : grab->originals) {
                grabbed.push_back(orig.id);
                if (auto* p = s_.scene.find_primitive(orig.id)) p->pose = compose(motion, orig.pose);
            }
            // Snap the group to the closest facing pair, if any; recomputed every frame
            // from the unsnapped poses so the adjustment only sticks once released.
            std::optional<SnapAdjustment> best;
            for (EntityId id : grabbed) {
                const auto* p = s_.scene.find_primitive(id);
                if (p == nullptr) continue;
                auto adj = detect_face_snap(*p, s_.scene, kSnapAngleToleranceDeg, kSnapGapTolerance, grabbed);
                if (adj && (!best || std::abs(adj->gap) < std::abs(best->gap))) best = adj;
            }
            for (EntityId id : grabbed) {
                if (auto* p = s_.scene.find_primitive(id)) {
                    if (best) p->pose = best->apply(p->pose);
                    mark(delta_.updated, id);
                }
            }
        } else {
            const MenuLayout bin = menu_layout(MenuState::bin, f.offhand);
            if (distance(f.pen.position, bin.center) <= kBinRadius) {
                for (const auto& orig : grab->originals) {
                    if (s_.scene.remove_entity(orig.id)) mark(delta_.removed, orig.id);
                    auto it = std::find(s_.selection.begin(), s_.selection.end(), orig.id);
                    if (it != s_.selection.end()) s_.selection.erase(it);
                }
            }
            s_.grab.reset();
        }
    }

    void world_control(const Frame& fr) {
        const InputFrame& f = fr.in;
        WorldTransform& world = s_.scene.world;
        if (!s_.grab) {
            if (fr.was_pressed(kOffA)) {
                const double d0 = fr.hand_distance;
                if (d0 >= kMinScaleArmDistance) {
                    const Vec3 pivot = (f.pen.position + f.offhand.position) * 0.5;
                    s_.grab = ScaleGrab{d0, world.scale, pivot, world.world_from_physical(pivot)};
                }
            } else if (fr.was_pressed(kOffB)) {
                s_.grab = PanGrab{world.offset, f.offhand.position};
            }
        }
        if (!s_.grab) return;

        const WorldTransform before = world;
        if (auto* g = std::get_if<ScaleGrab>(&*s_.grab)) {
            if (!fr.held(kOffA)) {
                s_.grab.reset();
                return;
            }
            world.scale = std::clamp(g->start_scale * (fr.hand_distance / g->start_distance), kMinWorldScale,
                                     kMaxWorldScale);
            world.offset = g->pivot_physical - g->pivot_world * world.scale;
        } else if (auto* p = std::get_if<PanGrab>(&*s_.grab)) {
            if (!fr.held(kOffB)) {
                s_.grab.reset();
                return;
            }
            world.offset = p->offset_at_press + (f.offhand.position - p->hand_at_press);
        }
        if (world.scale != before.scale || world.offset != before.offset) delta_.world = true;
    }

private:
    EngineState& s_;
    SceneDelta& delta_;
};

FeedbackState build_feedback(const EngineState& s, const InputFrame& f, const Frame& fr, FeedbackState fb) {
    const Scene& scene = s.scene;
    fb.t = f.t;
    fb.mode = s.mode;
    fb.plane_tool = s.plane_tool;
    fb.primitive_kind = s.primitive_kind;
    fb.palm = s.palm;
    fb.head_phys = f.head;

    fb.tip_phys = f.pen.position;
    fb.tip_color = scene.style.current_color;
    fb.tip_radius_world = scene.style.current_radius;
    fb.tip_radius_phys = scene.style.current_radius * scene.world.scale;

    const Vec3 tip_world = scene.world_from_physical(f.pen.position);
    fb.arrow = s.mode == Mode::air_sketch && scene.plane.present &&
               (snap_pen_to_plane(tip_world, scene.plane).has_value() ||
                (s.stroke_info && s.stroke_info->planar.has_value()));
    fb.ink_drop = s.stroke.active() && s.stroke.builder()->kind != StrokeKind::air;

    fb.selected_ids = s.selection;
    if (s.draft) {
        DraftFeedback d;
        d.kind = s.draft->record.kind;
        d.variant = s.draft->variant;
        d.pose = s.draft->record.pose;
        d.extents = s.draft->record.extents;
        d.color = s.draft->record.color;
        d.gold = s.draft->variant == CreationVariant::uniform;
        fb.draft = d;
    }
    if (const auto* b = s.stroke.builder()) {
        fb.active_stroke = StrokePreview{b->kind, b->samples, b->radius, b->color};
    }

    fb.wire_cube_extents = scene.tracked_volume;
    fb.wire_cube_center_phys = {0.0, scene.tracked_volume.y * 0.5, 0.0};

    fb.menu = s.menu;
    fb.menu_layout = fr.layout;
    fb.center_swatch = scene.style.current_color;
    fb.bin = s.menu == MenuState::bin;
    if (fr.menu_visible) {
        if (auto h = hover_button(fr.layout, f.pen.position)) fb.hovered_slot = fr.layout.buttons[*h].slot;
    }
    fb.world = scene.world;
    return fb;
}

void finalize_delta(SceneDelta& d) {
    auto drop = [](std::vector<EntityId>& list, EntityId id) {
        list.erase(std::remove(list.begin(), list.end(), id), list.end());
    };
    for (EntityId id : d.added) drop(d.updated, id);
    for (EntityId id : d.removed) {
        drop(d.updated, id);
        drop(d.added, id);
    }
    std::sort(d.added.begin(), d.added.end());
    std::sort(d.updated.begin(), d.updated.end());
    std::sort(d.removed.begin(), d.removed.end());
}

}  // namespace

StepResult step(EngineState& s, const InputFrame& f) {
    StepResult result;
    if (s.last_t && f.t <= *s.last_t) {
        result.error = "non-monotonic timestamp " + std::to_string(f.t) + " after " + std::to_string(*s.last_t);
        return result;
    }
    if (!finite_pose(f.head) || !finite_pose(f.pen) || !finite_pose(f.offhand) || f.buttons > 0x0f) {
        result.error = "invalid frame at t=" + std::to_string(f.t);
        return result;
    }
    result.accepted = true;

    Stepper st(s, result.delta);
    s.palm = classify_palm(f.offhand, f.pen, s.palm);

    const bool manipulating = s.grab && std::holds_alternative<ManipulateGrab>(*s.grab);
    if (manipulating) {
        s.menu = MenuState::bin;
    } else if (s.palm == PalmFacing::up) {
        if (s.menu == MenuState::hidden || s.menu == MenuState::bin) s.menu = MenuState::shown;
    } else {
        s.menu = MenuState::hidden;
    }

    Frame fr{f,
             static_cast<std::uint8_t>(f.buttons & ~s.prev_buttons),
             static_cast<std::uint8_t>(~f.buttons & s.prev_buttons),
             distance(f.pen.position, f.offhand.position),
             false,
             false,
             {}};

    auto refresh_menu = [&] {
        fr.layout = menu_layout(s.menu, f.offhand);
        fr.menu_visible = s.menu == MenuState::shown || s.menu == MenuState::submenu_color ||
                          s.menu == MenuState::submenu_size;
        fr.in_lockout = fr.menu_visible && distance(f.pen.position, fr.layout.center) <= kMenuLockoutRadius;
    };
    refresh_menu();

    if (fr.was_pressed(kPenPrimary)) {
        s.primary_consumed = false;
        if (fr.menu_visible) {
            if (auto h = hover_button(fr.layout, f.pen.position)) {
                st.apply_menu(fr.layout.buttons[*h]);
                s.primary_consumed = true;
                refresh_menu();
            } else if (fr.in_lockout) {
                s.primary_consumed = true;
            }
        }
    }

    FeedbackState fb;
    switch (s.mode) {
        case Mode::air_sketch: st.air_sketch(fr); break;
        case Mode::laser_sketch: st.laser_sketch(fr, fb); break;
        case Mode::primitive_create: st.primitive_create(fr); break;
        case Mode::select_manipulate: st.select_manipulate(fr, fb); break;
        case Mode::world_control: st.world_control(fr); break;
    }

    // A manipulation grab that started this frame turns the menu into the bin.
    if (s.grab && std::holds_alternative<ManipulateGrab>(*s.grab)) {
        s.menu = MenuState::bin;
        refresh_menu();
    } else if (s.menu == MenuState::bin) {
        s.menu = s.palm == PalmFacing::up ? MenuState::shown : MenuState::hidden;
        refresh_menu();
    }

    if (fr.was_released(kPenPrimary)) s.primary_consumed = false;

    finalize_delta(result.delta);
    result.feedback = build_feedback(s, f, fr, std::move(fb));
    s.prev_buttons = f.buttons;
    s.last_t = f.t;
    return result;
}

}  // namespace airsketch
