#pragma once

// JSON ingestion for scenarios and sweep specifications. Durations are in
// seconds, power in dBm, rates in messages per node per hour.

#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "lrfhss/errors.hpp"
#include "lrfhss/experiment.hpp"
#include "lrfhss/frame_model.hpp"
#include "lrfhss/simcore.hpp"

namespace lrfhss {

using json = nlohmann::json;

namespace detail {

inline const std::set<std::string>& known_config_keys() {
  static const std::set<std::string> keys{
      "dr",          "nodes",          "lambda_per_hour", "interval_s",   "payload_bytes",
      "scheme",      "r",              "power_dbm",       "delta_h_s",    "delta_p_s",
      "delta_w_s",   "n_channels",     "runs",            "seed",         "out",
      "figure",      "drs",            "schemes",         "node_counts",  "node_axis",
      "simulate",    "channel_mode",   "fragment_order",  "frame_gap_s",  "threads",
      "profile",     "verbosity"};
  return keys;
}

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config key '") + key + "': " + e.what());
  }
}

inline DataRate dr_from_json(const json& v) {
  if (v.is_number_integer()) return data_rate_from_int(v.get<int>());
  if (v.is_string()) return parse_data_rate(v.get<std::string>());
  throw InvalidArgument("data rate must be 8, 9, \"DR8\" or \"DR9\"");
}

inline SchemeR scheme_r_from_json(const json& v) {
  if (v.is_string()) {
    // "none", "frame:2", "fragment:3"
    const auto text = v.get<std::string>();
    const auto colon = text.find(':');
    SchemeR sr{parse_scheme(text.substr(0, colon)), 1};
    if (colon != std::string::npos) sr.r = std::stoi(text.substr(colon + 1));
    return sr;
  }
  if (v.is_object()) {
    SchemeR sr{parse_scheme(get_as<std::string>(v, "scheme")), 1};
    if (v.contains("r")) sr.r = get_as<int>(v, "r");
    return sr;
  }
  throw InvalidArgument("scheme entries must be strings like \"frame:2\" or {scheme, r} objects");
}

}  // namespace detail

inline json load_json_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("cannot read config " + path.string());
  try {
    json j = json::parse(is);
    if (!j.is_object()) throw InvalidArgument("config root must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw InvalidArgument("config " + path.string() + ": " + e.what());
  }
}

/// Rejects keys no subcommand understands.
inline void check_config_keys(const json& j) {
  for (const auto& [key, _] : j.items())
    if (!detail::known_config_keys().count(key))
      throw InvalidArgument("unknown config key '" + key + "'");
}

inline ScenarioParams scenario_from_json(const json& j, ScenarioParams p = {}) {
  using detail::get_as;
  if (j.contains("dr")) p.dr = detail::dr_from_json(j.at("dr"));
  if (j.contains("nodes")) p.nodes = get_as<std::uint64_t>(j, "nodes");
  if (j.contains("lambda_per_hour")) p.lambda_per_hour = get_as<double>(j, "lambda_per_hour");
  if (j.contains("interval_s")) p.interval_s = get_as<double>(j, "interval_s");
  if (j.contains("payload_bytes")) p.payload_bytes = get_as<int>(j, "payload_bytes");
  if (j.contains("scheme")) p.scheme = parse_scheme(get_as<std::string>(j, "scheme"));
  if (j.contains("r")) p.r = get_as<int>(j, "r");
  if (j.contains("power_dbm")) p.power_dbm = get_as<double>(j, "power_dbm");
  if (j.contains("delta_h_s")) p.delta_h_s = get_as<double>(j, "delta_h_s");
  if (j.contains("delta_p_s")) p.delta_p_s = get_as<double>(j, "delta_p_s");
  if (j.contains("delta_w_s")) p.delta_w_s = get_as<double>(j, "delta_w_s");
  if (j.contains("n_channels")) p.n_channels = get_as<int>(j, "n_channels");
  return p;
}

inline SimOptions sim_options_from_json(const json& j, SimOptions o = {}) {
  using detail::get_as;
  if (j.contains("channel_mode")) {
    const auto m = get_as<std::string>(j, "channel_mode");
    if (m == "pool")
      o.channel_mode = ChannelMode::FullPool;
    else if (m == "grid")
      o.channel_mode = ChannelMode::DeviceGrid;
    else
      throw InvalidArgument("channel_mode must be \"pool\" or \"grid\"");
  }
  if (j.contains("fragment_order")) {
    const auto m = get_as<std::string>(j, "fragment_order");
    if (m == "round_robin")
      o.fragment_order = FragmentOrder::RoundRobin;
    else if (m == "contiguous")
      o.fragment_order = FragmentOrder::Contiguous;
    else
      throw InvalidArgument("fragment_order must be \"round_robin\" or \"contiguous\"");
  }
  if (j.contains("frame_gap_s")) o.frame_gap_s = get_as<double>(j, "frame_gap_s");
  if (j.contains("threads")) o.threads = get_as<unsigned>(j, "threads");
  return o;
}

inline SweepSpec sweep_from_json(const json& j, SweepSpec spec = baseline_sweep()) {
  using detail::get_as;
  if (j.contains("drs")) {
    spec.dr_list.clear();
    for (const auto& v : j.at("drs")) spec.dr_list.push_back(detail::dr_from_json(v));
  }
  if (j.contains("schemes")) {
    spec.scheme_r_list.clear();
    for (const auto& v : j.at("schemes")) spec.scheme_r_list.push_back(detail::scheme_r_from_json(v));
  }
  if (j.contains("node_counts")) spec.node_counts = get_as<std::vector<std::uint64_t>>(j, "node_counts");
  if (j.contains("node_axis")) {
    const json& a = j.at("node_axis");
    spec.node_counts = log_spaced_nodes(get_as<double>(a, "min"), get_as<double>(a, "max"),
                                        get_as<int>(a, "points"));
  }
  if (j.contains("lambda_per_hour")) spec.lambda_per_hour = get_as<double>(j, "lambda_per_hour");
  if (j.contains("interval_s")) spec.interval_s = get_as<double>(j, "interval_s");
  if (j.contains("payload_bytes")) spec.payload_bytes = get_as<int>(j, "payload_bytes");
  if (j.contains("power_dbm")) spec.power_dbm = get_as<double>(j, "power_dbm");
  if (j.contains("delta_h_s")) spec.delta_h_s = get_as<double>(j, "delta_h_s");
  if (j.contains("delta_p_s")) spec.delta_p_s = get_as<double>(j, "delta_p_s");
  if (j.contains("delta_w_s")) spec.delta_w_s = get_as<double>(j, "delta_w_s");
  if (j.contains("n_channels")) spec.n_channels = get_as<int>(j, "n_channels");
  if (j.contains("runs")) spec.runs_per_point = get_as<std::uint64_t>(j, "runs");
  if (j.contains("seed")) spec.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("simulate")) spec.simulate = get_as<bool>(j, "simulate");
  spec.sim = sim_options_from_json(j, spec.sim);
  return spec;
}

}  // namespace lrfhss
