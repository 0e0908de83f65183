#include "airsketch/scene.hpp"

#include <algorithm>

namespace airsketch {

std::string_view to_string(StrokeKind k) {
    switch (k) {
        case StrokeKind::air: return "air";
        case StrokeKind::plane: return "plane";
        case StrokeKind::laser: return "laser";
    }
    return "air";
}

std::string_view to_string(PrimitiveKind k) {
    switch (k) {
        case PrimitiveKind::box: return "box";
        case PrimitiveKind::sphere: return "sphere";
        case PrimitiveKind::cylinder: return "cylinder";
    }
    return "box";
}

std::array<double, 2> ProxyPlane::to_plane_coords(const Vec3& p) const {
    const Vec3 d = p - pose.position;
    return {dot(d, u_axis()), dot(d, v_axis())};
}

Vec3 ProxyPlane::from_plane_coords(double u, double v) const {
    return pose.position + u_axis() * u + v_axis() * v;
}

namespace {

template <typename T>
auto find_by_id(T& items, EntityId id) {
    auto it = std::lower_bound(items.begin(), items.end(), id,
                               [](const auto& item, EntityId key) { return item.id < key; });
    return (it != items.end() && it->id == id) ? it : items.end();
}

template <typename T>
void insert_sorted(std::vector<T>& items, T value) {
    auto it = std::lower_bound(items.begin(), items.end(), value.id,
                               [](const T& item, EntityId key) { return item.id < key; });
    items.insert(it, std::move(value));
}

}  // namespace

const PrimitiveRecord* Scene::find_primitive(EntityId id) const {
    auto it = find_by_id(primitives, id);
    return it == primitives.end() ? nullptr : &*it;
}

PrimitiveRecord* Scene::find_primitive(EntityId id) {
    auto it = find_by_id(primitives, id);
    return it == primitives.end() ? nullptr : &*it;
}

const StrokeRecord* Scene::find_stroke(EntityId id) const {
    auto it = find_by_id(strokes, id);
    return it == strokes.end() ? nullptr : &*it;
}

bool Scene::remove_entity(EntityId id) {
    if (auto it = find_by_id(strokes, id); it != strokes.end()) {
        strokes.erase(it);
        return true;
    }
    if (auto it = find_by_id(primitives, id); it != primitives.end()) {
        primitives.erase(it);
        return true;
    }
    if (auto it = find_by_id(environment, id); it != environment.end()) {
        environment.erase(it);
        return true;
    }
    return false;
}

void Scene::add_stroke(StrokeRecord s) { insert_sorted(strokes, std::move(s)); }
void Scene::add_primitive(PrimitiveRecord p) { insert_sorted(primitives, std::move(p)); }
void Scene::add_environment(EnvironmentMesh m) { insert_sorted(environment, std::move(m)); }

}  // namespace airsketch
