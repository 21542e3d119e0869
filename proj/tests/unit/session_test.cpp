#include <gtest/gtest.h>

#include <cmath>

#include "files.hpp"
#include "frame_script.hpp"
#include "inspect/errors.hpp"
#include "inspect/session.hpp"
#include "inspect/wire.hpp"
#include "oracles.hpp"

namespace inspect {
namespace {

using testing::FrameScript;
using testing::TempDir;
using testing::world_of;

const Vec3 kLocalA{0, 0, 0};
const Vec3 kLocalB{3, 4, 0};

SessionConfig base_config(bool snapping = false) {
  SessionConfig c;
  c.grid.snapping_enabled = snapping;
  c.log_path.clear();
  c.metrics_path.clear();
  return c;
}

TriangleMesh cube() { return testing::box_mesh({0, 0, 0}, {1, 1, 1}); }

Session make_session(const SessionConfig& c) { return Session(c, cube()); }

// Add mode, two markers, back to Measure, connect them.
void script_connected_pair(FrameScript& s, const ModelPose& pose) {
  const Vec3 a = world_of(pose, kLocalA);
  const Vec3 b = world_of(pose, kLocalB);
  s.press(MenuButton::AddMarker).double_pinch_at(a).double_pinch_at(b);
  s.press(MenuButton::AddMarker).gaze_pinch(a).gaze_pinch(b);
}

// Applies the frames the session has not seen yet (script clocks strictly increase).
Snapshot run(Session& session, const std::vector<InputFrame>& frames) {
  Snapshot last = session.snapshot();
  for (const InputFrame& f : frames) {
    if (session.last_frame_time() && f.t_ms <= *session.last_frame_time()) continue;
    last = session.apply(f);
  }
  return last;
}

nlohmann::json without_time(const Snapshot& s) {
  nlohmann::json j = wire::snapshot_to_json(s);
  j.erase("t_ms");
  return j;
}

TEST(NewSession, InitialState) {
  Session session = make_session(base_config(true));
  const Snapshot s = session.snapshot();
  EXPECT_EQ(s.pose.scale, 0.05);
  EXPECT_EQ(s.mode, Mode::Measure);
  EXPECT_TRUE(s.markers.empty());
  EXPECT_TRUE(s.rulers.empty());
  EXPECT_GT(s.snap_point_count, 0u);
  EXPECT_EQ(s.snap_point_count, session.grid().size());
  EXPECT_TRUE(s.snap_points.empty());
  EXPECT_EQ(s.hud.scale_text, "0.050");
}

TEST(NewSession, LoadsMeshFileAndCreatesLog) {
  TempDir dir("session_new");
  testing::write_file(dir / "m.obj", "v 0 0 0\nv 2 0 0\nv 0 2 0\nf 1 2 3\n");
  SessionConfig c = base_config(true);
  c.mesh_path = dir / "m.obj";
  c.log_path = dir / "log.csv";
  c.meters_per_model_unit = 0.5;
  const Session session = new_session(c);
  EXPECT_EQ(session.mesh().vertices[1], (Vec3{1, 0, 0}));
  EXPECT_EQ(testing::read_file(dir / "log.csv"), std::string(kLogHeader) + "\n");
}

TEST(NewSession, MissingMeshNamesPath) {
  SessionConfig c = base_config();
  c.mesh_path = "/nonexistent/rack.obj";
  try {
    new_session(c);
    FAIL();
  } catch (const FileError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/rack.obj"), std::string::npos);
  }
  EXPECT_THROW(new_session(base_config()), ConfigError);
}

TEST(NewSession, PropagatesMeshErrors) {
  TempDir dir("session_bad_mesh");
  testing::write_file(dir / "bad.obj", "v 0 0 0\nf 1 2 3\n");
  testing::write_file(dir / "empty.obj", "# nothing\n");
  SessionConfig c = base_config();
  c.mesh_path = dir / "bad.obj";
  EXPECT_THROW(new_session(c), ParseError);
  c.mesh_path = dir / "empty.obj";
  EXPECT_THROW(new_session(c), EmptyMesh);
}

TEST(NewSession, SnappingToggle) {
  SessionConfig on = base_config(true);
  SessionConfig off = base_config(false);
  on.snapshot_snap_points = off.snapshot_snap_points = true;
  const ModelPose pose = on.default_pose;
  const Vec3 target = world_of(pose, {0.303, 0.297, 0.004});

  Session snapping = make_session(on);
  FrameScript s1(on);
  s1.press(MenuButton::AddMarker).double_pinch_at(target);
  const Snapshot a = run(snapping, s1.frames());
  ASSERT_EQ(a.markers.size(), 1u);
  const auto hit = snapping.grid().query(a.markers[0].local);
  ASSERT_TRUE(hit);
  EXPECT_EQ(hit->distance, 0.0);
  EXPECT_EQ(a.snap_points.size(), snapping.grid().size());

  Session plain = make_session(off);
  FrameScript s2(off);
  s2.press(MenuButton::AddMarker).double_pinch_at(target);
  const Snapshot b = run(plain, s2.frames());
  EXPECT_EQ(b.snap_point_count, 0u);
  EXPECT_TRUE(b.snap_points.empty());
  ASSERT_EQ(b.markers.size(), 1u);
  EXPECT_NEAR(b.markers[0].local.x, 0.303, 1e-12);
  EXPECT_NEAR(b.markers[0].local.z, 0.004, 1e-12);
}

TEST(Apply, ScriptedFixtureCreatesOneRuler) {
  const SessionConfig c = base_config();
  Session session = make_session(c);
  FrameScript script(c);
  script_connected_pair(script, c.default_pose);
  ASSERT_EQ(script.frames().size(), 7u);
  const Snapshot last = run(session, script.frames());
  ASSERT_EQ(last.markers.size(), 2u);
  ASSERT_EQ(last.rulers.size(), 1u);
  const auto& records = session.measure().log().records();
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].event, LogEvent::Created);
  EXPECT_EQ(records[0].t_ms, 600);
  const double expected = distance(last.markers[0].local, last.markers[1].local);
  EXPECT_EQ(*records[0].length_m, expected);
  EXPECT_NEAR(expected, 5.0, 1e-9);
  EXPECT_EQ(format_log_row(records[0]), "1,600,CREATED,1,1,2,5.000");
  EXPECT_EQ(last.mode, Mode::Measure);
  EXPECT_EQ(last.hud.entries.size(), 1u);
  EXPECT_EQ(last.last_seq, 1u);
}

TEST(Apply, NoHandsChangesOnlyTimestamp) {
  const SessionConfig c = base_config();
  Session session = make_session(c);
  FrameScript script(c);
  script_connected_pair(script, c.default_pose);
  const Snapshot before = run(session, script.frames());
  InputFrame empty;
  empty.t_ms = 5000;
  empty.head_position = FrameScript::kHead;
  const Snapshot after = session.apply(empty);
  EXPECT_EQ(after.t_ms, 5000);
  nlohmann::json a = without_time(before), b = without_time(after);
  // The gesture echo and gaze reflect the new frame; everything else is unchanged.
  for (auto* j : {&a, &b}) {
    j->erase("gestures");
    j->erase("gaze_target");
    j->erase("markers");
  }
  EXPECT_EQ(a, b);
  ASSERT_EQ(after.markers.size(), before.markers.size());
  for (std::size_t i = 0; i < after.markers.size(); ++i) {
    EXPECT_EQ(after.markers[i].local, before.markers[i].local);
  }
}

TEST(Apply, DecreasingTimestampIsRejected) {
  const SessionConfig c = base_config();
  Session session = make_session(c);
  FrameScript script(c, 1000);
  script.press(MenuButton::AddMarker);
  run(session, script.frames());
  const nlohmann::json before = wire::snapshot_to_json(session.snapshot());
  InputFrame late = script.frames().back();
  late.t_ms = 999;
  EXPECT_THROW(session.apply(late), FrameOrderError);
  EXPECT_EQ(wire::snapshot_to_json(session.snapshot()), before);
  // Equal timestamps are fine.
  InputFrame same = script.frames().back();
  EXPECT_NO_THROW(session.apply(same));
}

TEST(Apply, SingleHandPinchDoesNotCreateMarker) {
  const SessionConfig c = base_config();
  Session session = make_session(c);
  FrameScript script(c);
  script.press(MenuButton::AddMarker).one_hand(Side::Right, {0, 1, -0.5}).idle().one_hand(
      Side::Left, {0, 1, -0.5});
  // Two pinches far apart do not form a double pinch either.
  script.two_hand({-0.2, 1, -0.5}, {0.2, 1, -0.5});
  EXPECT_TRUE(run(session, script.frames()).markers.empty());
}

TEST(Apply, HeldDoublePinchCreatesOneMarker) {
  const SessionConfig c = base_config();
  Session session = make_session(c);
  FrameScript script(c);
  script.press(MenuButton::AddMarker);
  for (int i = 0; i < 5; ++i) script.frame(testing::pinching_hand({-0.01, 1, -0.5}),
                                           testing::pinching_hand({0.01, 1, -0.5}));
  EXPECT_EQ(run(session, script.frames()).markers.size(), 1u);
}

TEST(Apply, MenuVisibilityAndButtons) {
  const SessionConfig c = base_config();
  Session session = make_session(c);
  FrameScript script(c);
  script.frame(testing::palm_up_hand(FrameScript::kMenuAnchor), testing::open_hand(FrameScript::kRightRest));
  const Snapshot shown = run(session, script.frames());
  EXPECT_TRUE(shown.menu_visible);
  ASSERT_EQ(shown.menu_buttons.size(), 5u);
  EXPECT_EQ(shown.menu_buttons[0].center,
            menu_button_center(FrameScript::kMenuAnchor, MenuButton::Reset, c.gestures));
  script.idle();
  const Snapshot hidden = run(session, script.frames());
  EXPECT_FALSE(hidden.menu_visible);
  EXPECT_TRUE(hidden.menu_buttons.empty());
}

TEST(Apply, HelpToggle) {
  const SessionConfig c = base_config();
  Session session = make_session(c);
  FrameScript script(c);
  script.press(MenuButton::Help);
  EXPECT_TRUE(run(session, script.frames()).help_visible);
  script.press(MenuButton::Help);
  EXPECT_FALSE(run(session, script.frames()).help_visible);
}

TEST(Apply, ResetRestoresPoseClearsMarkersKeepsLog) {
  TempDir dir("session_reset");
  SessionConfig c = base_config();
  c.log_path = dir / "log.csv";
  Session session = make_session(c);
  FrameScript script(c);
  script_connected_pair(script, c.default_pose);
  script.press(MenuButton::Manipulate).one_hand(Side::Right, {0.3, 1, -0.3}).one_hand(
      Side::Right, {0.4, 1.1, -0.3});
  const Snapshot moved = run(session, script.frames());
  EXPECT_NE(moved.pose, c.default_pose);
  const std::string before_reset = testing::read_file(c.log_path);

  script.press(MenuButton::Reset);
  const Snapshot after = run(session, script.frames());
  EXPECT_EQ(after.pose, c.default_pose);
  EXPECT_TRUE(after.markers.empty());
  EXPECT_TRUE(after.rulers.empty());
  EXPECT_EQ(after.mode, Mode::Manipulate);
  const std::string log = testing::read_file(c.log_path);
  EXPECT_EQ(log.substr(0, before_reset.size()), before_reset);
  EXPECT_EQ(log.substr(before_reset.size()),
            "2," + std::to_string(script.frames().back().t_ms) + ",SESSION_RESET,,,,\n");
  // HUD still lists the measurement taken before the reset.
  EXPECT_EQ(after.hud.entries.size(), 1u);

  // Resetting an untouched session changes nothing but the log.
  script.press(MenuButton::Reset);
  EXPECT_EQ(run(session, script.frames()).pose, c.default_pose);
}

TEST(Apply, RemoveMarkerMode) {
  const SessionConfig c = base_config();
  Session session = make_session(c);
  FrameScript script(c);
  script_connected_pair(script, c.default_pose);
  script.press(MenuButton::RemoveMarker);
  // Gazing at empty space does nothing.
  script.gaze_double_pinch({5, 5, 5});
  const Snapshot still = run(session, script.frames());
  EXPECT_EQ(still.markers.size(), 2u);
  script.gaze_double_pinch(world_of(c.default_pose, kLocalA));
  const Snapshot after = run(session, script.frames());
  ASSERT_EQ(after.markers.size(), 1u);
  EXPECT_EQ(after.markers[0].id, 2);
  EXPECT_TRUE(after.rulers.empty());
  const auto& records = session.measure().log().records();
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[1].event, LogEvent::Removed);
}

TEST(Apply, DragMarkerUpdatesRuler) {
  const SessionConfig c = base_config();
  Session session = make_session(c);
  FrameScript script(c);
  script_connected_pair(script, c.default_pose);
  const Vec3 b = world_of(c.default_pose, kLocalB);
  script.press(MenuButton::AddMarker).gaze_pinch(b);  // right hand grabs B
  const Vec3 lifted = FrameScript::kRightRest + Vec3{0, 0.05, 0};
  script.frame(testing::open_hand(FrameScript::kLeftRest), testing::pinching_hand(lifted));
  script.frame(testing::open_hand(FrameScript::kLeftRest), testing::thumbs_up_hand(lifted));
  const Snapshot last = run(session, script.frames());
  ASSERT_EQ(last.markers.size(), 2u);
  EXPECT_FALSE(last.markers[1].grabbed_by);
  EXPECT_NEAR(last.markers[1].local.y, 5.0, 1e-9);
  EXPECT_NEAR(last.markers[1].local.x, 3.0, 1e-9);
  const auto& records = session.measure().log().records();
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[1].event, LogEvent::Updated);
  EXPECT_EQ(format_length(*records[1].length_m), "5.831");
  EXPECT_EQ(last.hud.entries.back().text, "5.831 m");
}

TEST(Apply, DragReleasesAfterTimeout) {
  const SessionConfig c = base_config();
  Session session = make_session(c);
  FrameScript script(c, 0, 100);
  script_connected_pair(script, c.default_pose);
  script.press(MenuButton::AddMarker).gaze_pinch(world_of(c.default_pose, kLocalB));
  const TimestampMs grabbed_at = script.frames().back().t_ms;
  script.frame(testing::open_hand(FrameScript::kLeftRest),
               testing::pinching_hand(FrameScript::kRightRest + Vec3{0.05, 0, 0}));
  const TimestampMs last_pinch = script.frames().back().t_ms;
  ASSERT_EQ(last_pinch, grabbed_at + 100);
  run(session, script.frames());
  while (script.now() < last_pinch + 2000) {
    script.idle();
    run(session, script.frames());
    ASSERT_TRUE(session.measure().grabbed_by(Side::Right)) << script.frames().back().t_ms;
  }
  script.idle();
  ASSERT_EQ(script.frames().back().t_ms, last_pinch + 2000);
  const Snapshot released = run(session, script.frames());
  EXPECT_FALSE(session.measure().grabbed_by(Side::Right));
  EXPECT_EQ(session.measure().log().records().back().event, LogEvent::Updated);
  EXPECT_EQ(session.measure().log().records().back().t_ms, last_pinch + 2000);
  EXPECT_NE(std::find(released.notices.begin(), released.notices.end(), "marker_released:2"),
            released.notices.end());
}

TEST(Apply, ModeChangeReleasesGrab) {
  const SessionConfig c = base_config();
  Session session = make_session(c);
  FrameScript script(c);
  script_connected_pair(script, c.default_pose);
  script.press(MenuButton::AddMarker).gaze_pinch(world_of(c.default_pose, kLocalB));
  run(session, script.frames());
  ASSERT_TRUE(session.measure().grabbed_by(Side::Right));
  script.press(MenuButton::Manipulate);
  run(session, script.frames());
  EXPECT_FALSE(session.measure().grabbed_by(Side::Right));
  EXPECT_EQ(session.menu().mode, Mode::Manipulate);
}

TEST(Apply, MeasureRejectionsAreNoticed) {
  const SessionConfig c = base_config();
  Session session = make_session(c);
  FrameScript script(c);
  script_connected_pair(script, c.default_pose);
  script.gaze_pinch(world_of(c.default_pose, kLocalA)).gaze_pinch(world_of(c.default_pose, kLocalB));
  const Snapshot last = run(session, script.frames());
  EXPECT_EQ(last.rulers.size(), 1u);
  EXPECT_EQ(session.measure().log().records().size(), 1u);
  ASSERT_EQ(last.notices.size(), 1u);
  EXPECT_EQ(last.notices[0], "duplicate_ruler");
}

TEST(Apply, HoverHaloFollowsNearestHand) {
  const SessionConfig c = base_config();
  Session session = make_session(c);
  FrameScript script(c);
  const Vec3 a = world_of(c.default_pose, kLocalA);
  script.press(MenuButton::AddMarker).double_pinch_at(a).idle();
  script.frame(testing::open_hand(FrameScript::kLeftRest), testing::open_hand(a + Vec3{0.05, 0, 0}),
               a + Vec3{0, 0, 0.5});
  Snapshot s = run(session, script.frames());
  ASSERT_EQ(s.markers.size(), 1u);
  EXPECT_EQ(s.gaze_target, 1);
  EXPECT_EQ(s.markers[0].halo, Halo::HoverRight);
  script.frame(testing::open_hand(a - Vec3{0.02, 0, 0}), testing::open_hand(a + Vec3{0.05, 0, 0}),
               a + Vec3{0, 0, 0.5});
  s = run(session, script.frames());
  EXPECT_EQ(s.markers[0].halo, Halo::HoverLeft);
  script.idle();
  s = run(session, script.frames());
  EXPECT_EQ(s.markers[0].halo, Halo::None);
}

TEST(Apply, ManipulationMovesModelNotLengths) {
  const SessionConfig c = base_config();
  Session session = make_session(c);
  FrameScript script(c);
  script_connected_pair(script, c.default_pose);
  const Snapshot connected = run(session, script.frames());
  const double length = connected.rulers[0].length_m;

  script.press(MenuButton::Manipulate);
  script.one_hand(Side::Right, {0.3, 1, -0.3}).one_hand(Side::Right, {0.4, 1, -0.3});
  script.idle();
  script.two_hand({-0.1, 1, -0.3}, {0.1, 1, -0.3}).two_hand({-0.2, 1, -0.3}, {0.2, 1, -0.3});
  script.two_hand({0, 1, -0.5}, {0, 1, -0.1});
  const Snapshot s = run(session, script.frames());
  EXPECT_NEAR(s.pose.scale, 0.1, 1e-12);
  EXPECT_NEAR(s.pose.yaw, -std::numbers::pi / 2, 1e-12);
  EXPECT_EQ(s.rulers[0].length_m, length);
  EXPECT_EQ(session.measure().log().records().size(), 1u);
  const ManipMetrics& m = session.metrics();
  EXPECT_NEAR(m.max_rotation_deg, 90.0, 1e-9);
  EXPECT_EQ(m.scale_min_seen, 0.05);
  EXPECT_NEAR(m.scale_max_seen, 0.1, 1e-12);
  EXPECT_GT(m.total_displacement, 0.1 - 1e-12);
  // Markers ride along with the model.
  EXPECT_NE(s.markers[0].world, connected.markers[0].world);
}

TEST(Metrics, JsonFormat) {
  ManipMetrics m;
  m.total_displacement = 0.5;
  m.max_rotation_deg = 90;
  m.scale_min_seen = 0.004;
  m.scale_max_seen = 1.479;
  EXPECT_EQ(metrics_json(m),
            "{\n  \"total_displacement_nominal\": 0.5,\n  \"max_rotation_deg\": 90.0,\n"
            "  \"scale_min\": 0.004,\n  \"scale_max\": 1.479\n}\n");
}

class ReplayTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::write_file(dir_ / "cube.obj", "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
    config_ = base_config();
    config_.mesh_path = dir_ / "cube.obj";
  }

  void write_frames_file(const std::vector<InputFrame>& frames, const std::string& name) {
    std::ofstream out(dir_ / name);
    write_frames(frames, out);
  }

  TempDir dir_{"replay"};
  SessionConfig config_;
};

TEST_F(ReplayTest, EmptyFramesGiveHeaderAndInitialMetrics) {
  testing::write_file(dir_ / "empty.jsonl", "");
  const ReplayResult r = replay(config_, dir_ / "empty.jsonl", dir_ / "log.csv", dir_ / "m.json");
  EXPECT_EQ(r.frames, 0u);
  EXPECT_EQ(testing::read_file(dir_ / "log.csv"), std::string(kLogHeader) + "\n");
  EXPECT_EQ(testing::read_file(dir_ / "m.json"),
            metrics_json(ManipMetrics::starting_at(config_.default_pose)));
  EXPECT_EQ(testing::read_file(dir_ / "m.json"),
            "{\n  \"total_displacement_nominal\": 0.0,\n  \"max_rotation_deg\": 0.0,\n"
            "  \"scale_min\": 0.05,\n  \"scale_max\": 0.05\n}\n");
}

TEST_F(ReplayTest, TwiceIsByteIdentical) {
  FrameScript script(config_);
  script_connected_pair(script, config_.default_pose);
  script.press(MenuButton::Manipulate).two_hand({-0.1, 1, -0.3}, {0.1, 1, -0.3}).two_hand(
      {-0.15, 1.02, -0.31}, {0.12, 1, -0.2});
  write_frames_file(script.frames(), "f.jsonl");
  replay(config_, dir_ / "f.jsonl", dir_ / "l1.csv", dir_ / "m1.json");
  const ReplayResult r = replay(config_, dir_ / "f.jsonl", dir_ / "l2.csv", dir_ / "m2.json");
  EXPECT_EQ(r.frames, script.frames().size());
  EXPECT_EQ(r.records, 1u);
  EXPECT_EQ(testing::read_file(dir_ / "l1.csv"), testing::read_file(dir_ / "l2.csv"));
  EXPECT_EQ(testing::read_file(dir_ / "m1.json"), testing::read_file(dir_ / "m2.json"));
  EXPECT_NE(testing::read_file(dir_ / "l1.csv").find("CREATED"), std::string::npos);
}

TEST_F(ReplayTest, MalformedLineReportsLineNumber) {
  FrameScript script(config_);
  script.idle().idle();
  write_frames_file(script.frames(), "f.jsonl");
  std::ofstream(dir_ / "f.jsonl", std::ios::app) << "\n{\"t_ms\": 5}\n";
  try {
    replay(config_, dir_ / "f.jsonl", dir_ / "l.csv", dir_ / "m.json");
    FAIL();
  } catch (const ReplayError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST_F(ReplayTest, OutOfOrderStreamIsRejectedBeforeWriting) {
  FrameScript script(config_, 500);
  script.idle().idle();
  std::vector<InputFrame> frames = script.frames();
  frames[1].t_ms = 100;
  write_frames_file(frames, "f.jsonl");
  EXPECT_THROW(replay(config_, dir_ / "f.jsonl", dir_ / "l.csv", dir_ / "m.json"), FrameOrderError);
  EXPECT_FALSE(std::filesystem::exists(dir_ / "l.csv"));
}

TEST_F(ReplayTest, MissingFramesFile) {
  EXPECT_THROW(replay(config_, dir_ / "nope.jsonl", dir_ / "l.csv", dir_ / "m.json"), FileError);
}

}  // namespace
}  // namespace inspect
