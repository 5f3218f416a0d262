#include <gtest/gtest.h>

#include "lrfhss/config.hpp"

using namespace lrfhss;

TEST(Config, ScenarioKeys) {
  const json j = json::parse(R"({
    "dr": 9, "nodes": 2500, "lambda_per_hour": 8, "interval_s": 1800,
    "payload_bytes": 20, "scheme": "fragment", "r": 3, "power_dbm": 20,
    "delta_h_s": 0.2, "delta_p_s": 0.1, "delta_w_s": 0.01
  })");
  check_config_keys(j);
  const ScenarioParams p = scenario_from_json(j);
  EXPECT_EQ(p.dr, DataRate::DR9);
  EXPECT_EQ(p.nodes, 2500u);
  EXPECT_EQ(p.scheme, Scheme::FragmentReplication);
  EXPECT_EQ(p.r, 3);
  const Scenario s = make_scenario(p);
  EXPECT_DOUBLE_EQ(s.lambda, 4.0);  // 8/h over half an hour
  EXPECT_DOUBLE_EQ(s.p_t_w, 0.1);
  EXPECT_DOUBLE_EQ(s.geometry.delta_w, 0.01);
}

TEST(Config, RejectsUnknownAndMistypedKeys) {
  EXPECT_THROW(check_config_keys(json::parse(R"({"nodez": 3})")), InvalidArgument);
  EXPECT_THROW(scenario_from_json(json::parse(R"({"nodes": "many"})")), InvalidArgument);
  EXPECT_THROW(scenario_from_json(json::parse(R"({"dr": 7})")), InvalidArgument);
  EXPECT_THROW(scenario_from_json(json::parse(R"({"scheme": "mrc"})")), InvalidArgument);
}

TEST(Config, SweepSpec) {
  const json j = json::parse(R"({
    "drs": ["DR8"], "schemes": ["none", "frame:2", {"scheme": "fragment", "r": 3}],
    "node_axis": {"min": 100, "max": 10000, "points": 3},
    "lambda_per_hour": 8, "runs": 500, "seed": 9, "simulate": true,
    "channel_mode": "grid", "fragment_order": "contiguous", "frame_gap_s": 0.1
  })");
  const SweepSpec spec = sweep_from_json(j);
  EXPECT_EQ(spec.dr_list, (std::vector<DataRate>{DataRate::DR8}));
  ASSERT_EQ(spec.scheme_r_list.size(), 3u);
  EXPECT_EQ(spec.scheme_r_list[1], (SchemeR{Scheme::FrameReplication, 2}));
  EXPECT_EQ(spec.scheme_r_list[2], (SchemeR{Scheme::FragmentReplication, 3}));
  EXPECT_EQ(spec.node_counts, (std::vector<std::uint64_t>{100, 1000, 10000}));
  EXPECT_EQ(spec.runs_per_point, 500u);
  EXPECT_TRUE(spec.simulate);
  EXPECT_EQ(spec.sim.channel_mode, ChannelMode::DeviceGrid);
  EXPECT_EQ(spec.sim.fragment_order, FragmentOrder::Contiguous);
  EXPECT_DOUBLE_EQ(spec.sim.frame_gap_s, 0.1);
}

TEST(Config, SweepDefaultsToBaseline) {
  const SweepSpec spec = sweep_from_json(json::object());
  EXPECT_EQ(spec.dr_list.size(), 2u);
  EXPECT_EQ(spec.scheme_r_list.size(), 5u);
  EXPECT_EQ(spec.node_counts, default_node_axis());
  EXPECT_DOUBLE_EQ(spec.delta_h_s, 0.233);
  EXPECT_DOUBLE_EQ(spec.delta_p_s, 0.102);
  EXPECT_DOUBLE_EQ(spec.power_dbm, 14.0);
  EXPECT_EQ(spec.payload_bytes, 15);
}
