#include <gtest/gtest.h>

#include <sstream>

#include "airsketch/mesh.hpp"
#include "airsketch/scene.hpp"
#include "airsketch/scene_io.hpp"
#include "support/trace_builder.hpp"

namespace airsketch {
namespace {

using testing::Rng;

constexpr const char* kEmptySceneBytes =
    R"({"environment":[],"format":"airsketch-scene","next_id":1,"plane":{"present":false},"primitives":[],)"
    R"("strokes":[],"style":{"color":[0,0,0,255],"radius_um":4000},"tracked_volume_um":[4000000,2000000,3000000],)"
    R"("version":1,"world":{"offset_um":[0,0,0],"scale_e9":1000000000}})";
constexpr const char* kEmptySceneHash = "9d4aff167d69cc40e7a068fc8fa391dacde468a6580f538b79eb44089d14601d";

Scene sample_scene() {
    Scene s;
    StrokeRecord st;
    st.id = s.allocate_id();
    st.samples = {{0.1, 1.2, -0.3}, {0.1234567, 1.25, -0.31}, {0.2, 1.3, -0.35}};
    st.radius = 0.008;
    st.color = kColorPalette[2];
    st.kind = StrokeKind::plane;
    s.add_stroke(st);

    PrimitiveRecord p;
    p.id = s.allocate_id();
    p.kind = PrimitiveKind::cylinder;
    p.pose = {{0.5, 0.25, -1.0}, Quat::from_axis_angle(normalize(Vec3{1, 2, 3}), 0.7)};
    p.extents = {0.2, 0.5, 0.2};
    p.color = kColorPalette[5];
    s.add_primitive(p);

    EnvironmentMesh m;
    m.id = s.allocate_id();
    m.vertices = {{-2, 0, -2}, {2, 0, -2}, {0, 0, 2}};
    m.triangles = {{0, 2, 1}};
    s.add_environment(m);

    s.plane.present = true;
    s.plane.pose = {{0, 1, -0.5}, rotation_from_euler({15, 30, 0})};
    s.world = {1.5, {0.1, -0.2, 0.3}};
    s.style = {kColorPalette[3], kSizePalette[2]};
    return s;
}

TEST(WorldTransform, Examples) {
    Scene s;
    EXPECT_EQ(s.world_from_physical({1, 2, 3}), (Vec3{1, 2, 3}));
    s.world = {2.0, {}};
    EXPECT_EQ(s.world_from_physical({2, 0, 0}), (Vec3{1, 0, 0}));
    s.world = {0.5, {1, 0, 0}};
    EXPECT_EQ(s.world_from_physical({1, 0, 0}), (Vec3{0, 0, 0}));
}

TEST(WorldTransform, RoundTripIdentity) {
    Rng rng(21);
    for (int i = 0; i < 2000; ++i) {
        WorldTransform w{rng.uniform(kMinWorldScale, kMaxWorldScale), rng.in_box({-5, -5, -5}, {5, 5, 5})};
        const Vec3 p = rng.in_box({-3, -3, -3}, {3, 3, 3});
        const Vec3 q = w.world_from_physical(w.physical_from_world(p));
        EXPECT_LT(distance(p, q), 1e-12 * (1.0 + length(p)) * std::max(1.0, 1.0 / w.scale) * 10);
    }
}

TEST(SceneDefaults, TrackedVolumeIs24CubicMeters) {
    Scene s;
    EXPECT_EQ(s.tracked_volume, (Vec3{4, 2, 3}));
    EXPECT_EQ(s.tracked_volume.x * s.tracked_volume.y * s.tracked_volume.z, 24.0);
}

TEST(SceneDefaults, Palettes) {
    EXPECT_EQ(kSizePalette.size(), 4u);
    EXPECT_EQ(kSizePalette[0], 0.002);
    EXPECT_EQ(kSizePalette[3], 0.016);
    EXPECT_EQ(kColorPalette.size(), 8u);
    EXPECT_EQ(kColorPalette[0], (Rgba8{0, 0, 0, 255}));
    EXPECT_EQ(kColorPalette[1], (Rgba8{255, 255, 255, 255}));
}

TEST(SceneIds, NeverReusedAfterDeletion) {
    Scene s = sample_scene();
    const EntityId before = s.next_id;
    ASSERT_TRUE(s.remove_entity(2));
    EXPECT_FALSE(s.remove_entity(2));
    EXPECT_EQ(s.next_id, before);
    EXPECT_EQ(s.allocate_id(), before);
}

TEST(CanonicalSerialize, EmptySceneGoldenBytes) {
    EXPECT_EQ(canonical_serialize(Scene{}), kEmptySceneBytes);
    EXPECT_EQ(scene_hash(Scene{}), kEmptySceneHash);
}

TEST(CanonicalSerialize, Sha256KnownVector) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(CanonicalSerialize, RoundTripIsFixedPoint) {
    const Scene s = sample_scene();
    const std::string a = canonical_serialize(s);
    const Scene loaded = deserialize_scene(a);
    EXPECT_EQ(canonical_serialize(loaded), a);
    EXPECT_EQ(scene_hash(loaded), scene_hash(s));
    EXPECT_EQ(a.find(' '), std::string::npos);
    EXPECT_EQ(a.find('\n'), std::string::npos);
}

TEST(CanonicalSerialize, RandomRotationsRoundTrip) {
    Rng rng(22);
    for (int i = 0; i < 500; ++i) {
        Scene s;
        PrimitiveRecord p;
        p.id = s.allocate_id();
        p.pose = {rng.in_box({-3, -3, -3}, {3, 3, 3}), rng.rotation()};
        p.extents = rng.in_box({0.01, 0.01, 0.01}, {2, 2, 2});
        s.add_primitive(p);
        const std::string a = canonical_serialize(s);
        EXPECT_EQ(canonical_serialize(deserialize_scene(a)), a);
    }
}

TEST(CanonicalSerialize, SubMicrometerDifferencesVanish) {
    Scene a = sample_scene();
    Scene b = sample_scene();
    b.strokes[0].samples[1].x += 2e-7;
    EXPECT_EQ(canonical_serialize(a), canonical_serialize(b));
    b.strokes[0].samples[1].x += 2e-6;
    EXPECT_NE(scene_hash(a), scene_hash(b));
}

TEST(CanonicalSerialize, RoundsHalfToEvenMicrometers) {
    EXPECT_EQ(to_micrometers(0.0000005), 0);
    EXPECT_EQ(to_micrometers(0.0000015), 2);
    EXPECT_EQ(to_micrometers(-0.0000025), -2);
    EXPECT_EQ(to_micrometers(1.0), 1000000);
}

TEST(CanonicalSerialize, EntitiesOrderedById) {
    const std::string text = canonical_serialize(sample_scene());
    EXPECT_LT(text.find("\"environment\""), text.find("\"primitives\""));
    EXPECT_LT(text.find("\"primitives\""), text.find("\"strokes\""));
}

TEST(Deserialize, RejectsMalformedScenes) {
    EXPECT_THROW(deserialize_scene("not json"), SceneFormatError);
    EXPECT_THROW(deserialize_scene("{}"), SceneFormatError);
    std::string text = canonical_serialize(sample_scene());

    auto mutate = [&](const std::string& from, const std::string& to) {
        std::string t = text;
        const auto pos = t.find(from);
        EXPECT_NE(pos, std::string::npos) << from;
        return t.replace(pos, from.size(), to);
    };
    EXPECT_THROW(deserialize_scene(mutate("\"next_id\":4", "\"next_id\":2")), SceneFormatError);
    EXPECT_THROW(deserialize_scene(mutate("\"kind\":\"cylinder\"", "\"kind\":\"cone\"")), SceneFormatError);
    EXPECT_THROW(deserialize_scene(mutate("\"version\":1", "\"version\":2")), SceneFormatError);
    EXPECT_THROW(deserialize_scene(mutate("\"scale_e9\":1500000000", "\"scale_e9\":0")), SceneFormatError);
    EXPECT_THROW(deserialize_scene(mutate("\"radius_um\":8000", "\"radius_um\":-1")), SceneFormatError);
}

TEST(ExportMesh, EmptySceneIsHeaderOnly) {
    const std::string obj = export_mesh(Scene{}, MeshFormat::obj);
    std::istringstream in(obj);
    std::string line;
    while (std::getline(in, line)) {
        EXPECT_TRUE(line.empty() || line[0] == '#') << line;
    }
}

std::pair<int, int> count_vf(const std::string& obj) {
    std::istringstream in(obj);
    std::string line;
    int v = 0, f = 0;
    while (std::getline(in, line)) {
        v += line.rfind("v ", 0) == 0;
        f += line.rfind("f ", 0) == 0;
    }
    return {v, f};
}

TEST(ExportMesh, TwoSampleStrokeHas26Vertices) {
    Scene s;
    StrokeRecord st;
    st.id = s.allocate_id();
    st.samples = {{0, 1, 0}, {0.3, 1, 0}};
    s.add_stroke(st);
    EXPECT_EQ(count_vf(export_mesh(s, MeshFormat::obj)), std::make_pair(26, 48));
}

TEST(ExportMesh, BoxHas8VerticesAnd12Triangles) {
    Scene s;
    PrimitiveRecord p;
    p.id = s.allocate_id();
    s.add_primitive(p);
    EXPECT_EQ(count_vf(export_mesh(s, MeshFormat::obj)), std::make_pair(8, 12));
}

TEST(ExportMesh, DeterministicAndUnknownFormatRejected) {
    const Scene s = sample_scene();
    EXPECT_EQ(export_mesh(s, MeshFormat::obj), export_mesh(s, MeshFormat::obj));
    EXPECT_EQ(parse_mesh_format("obj"), MeshFormat::obj);
    EXPECT_THROW(parse_mesh_format("stl"), std::invalid_argument);
}

}  // namespace
}  // namespace airsketch
