#pragma once

// Command-line front end: analytic | simulate | sweep | reproduce.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lrfhss/lrfhss.hpp"

namespace lrfhss::cli {

enum ExitCode : int { kOk = 0, kRuntime = 1, kUsage = 2 };

namespace detail {

inline std::string fmt(double v, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Flags shared by the scenario-shaped subcommands. Values only apply when the
// flag was given, so a config file can supply the rest.
struct ScenarioFlags {
  int dr = 8;
  std::string scheme = "none";
  int r = 1;
  std::uint64_t nodes = 1000;
  double lambda_per_hour = 4.0;
  double interval_s = 3600.0;
  int payload_bytes = 15;
  double power_dbm = 14.0;
  double delta_h_ms = 233.0;
  double delta_p_ms = 102.0;
  double delta_w_ms = 0.0;
  int n_channels = 280;

  CLI::Option* o_dr = nullptr;
  CLI::Option* o_scheme = nullptr;
  CLI::Option* o_r = nullptr;
  CLI::Option* o_nodes = nullptr;
  CLI::Option* o_lambda = nullptr;
  CLI::Option* o_interval = nullptr;
  CLI::Option* o_payload = nullptr;
  CLI::Option* o_power = nullptr;
  CLI::Option* o_dh = nullptr;
  CLI::Option* o_dp = nullptr;
  CLI::Option* o_dw = nullptr;
  CLI::Option* o_nc = nullptr;

  // Per-message flags are only meaningful for single-scenario subcommands.
  void add(CLI::App* app, bool per_message) {
    if (per_message) {
      o_dr = app->add_option("--dr", dr, "Data rate (8 or 9)")->check(CLI::IsMember({8, 9}));
      o_scheme = app->add_option("--scheme", scheme, "Replication scheme")
                     ->check(CLI::IsMember({"none", "frame", "fragment"}));
      o_r = app->add_option("--r", r, "Replica count")->check(CLI::PositiveNumber);
      o_nodes = app->add_option("--nodes", nodes, "Number of nodes N")->check(CLI::PositiveNumber);
    }
    o_lambda = app->add_option("--lambda-per-hour", lambda_per_hour, "Messages per node per hour");
    o_interval = app->add_option("--interval-s", interval_s, "Observation interval in seconds");
    o_payload = app->add_option("--payload-bytes", payload_bytes, "Message size in bytes");
    o_power = app->add_option("--power-dbm", power_dbm, "Transmit power in dBm");
    o_dh = app->add_option("--delta-h-ms", delta_h_ms, "Header replica duration (ms)");
    o_dp = app->add_option("--delta-p-ms", delta_p_ms, "Payload fragment duration (ms)");
    o_dw = app->add_option("--delta-w-ms", delta_w_ms, "Header processing wait (ms)");
    o_nc = app->add_option("--n-channels", n_channels, "Physical channel count");
  }

  static bool given(const CLI::Option* o) { return o != nullptr && o->count() > 0; }

  void apply(ScenarioParams& p) const {
    if (given(o_dr)) p.dr = data_rate_from_int(dr);
    if (given(o_scheme)) p.scheme = parse_scheme(scheme);
    if (given(o_r)) p.r = r;
    if (given(o_nodes)) p.nodes = nodes;
    if (given(o_lambda)) p.lambda_per_hour = lambda_per_hour;
    if (given(o_interval)) p.interval_s = interval_s;
    if (given(o_payload)) p.payload_bytes = payload_bytes;
    if (given(o_power)) p.power_dbm = power_dbm;
    if (given(o_dh)) p.delta_h_s = delta_h_ms / 1e3;
    if (given(o_dp)) p.delta_p_s = delta_p_ms / 1e3;
    if (given(o_dw)) p.delta_w_s = delta_w_ms / 1e3;
    if (given(o_nc)) p.n_channels = n_channels;
  }

  void apply(SweepSpec& s) const {
    if (given(o_lambda)) s.lambda_per_hour = lambda_per_hour;
    if (given(o_interval)) s.interval_s = interval_s;
    if (given(o_payload)) s.payload_bytes = payload_bytes;
    if (given(o_power)) s.power_dbm = power_dbm;
    if (given(o_dh)) s.delta_h_s = delta_h_ms / 1e3;
    if (given(o_dp)) s.delta_p_s = delta_p_ms / 1e3;
    if (given(o_dw)) s.delta_w_s = delta_w_ms / 1e3;
    if (given(o_nc)) s.n_channels = n_channels;
  }
};

inline void print_report(std::ostream& out, const Scenario& s, const DeliveryReport& rep) {
  out << "scenario  " << to_string(s.profile.dr) << ' ' << to_string(s.scheme) << " r=" << s.r
      << " N=" << s.n_nodes << " lambda=" << fmt(s.lambda) << "/" << fmt(s.interval_s)
      << "s B=" << s.payload_bytes << '\n';
  out << "N_P       " << s.geometry.n_payload_fragments << '\n';
  out << "epsilon   " << s.geometry.epsilon << '\n';
  out << "S_H       " << fmt(rep.s_h) << '\n';
  out << "xi_P      " << fmt(rep.xi_p) << '\n';
  out << "S_P       " << fmt(rep.s_p) << '\n';
  out << "S         " << fmt(rep.s) << '\n';
  if (s.scheme == Scheme::FragmentReplication) {
    out << "xi_P_rep  " << fmt(rep.xi_p_replica) << '\n';
    out << "S_P_rep   " << fmt(rep.s_p_replica) << '\n';
  }
  out << "MDP       " << fmt(rep.mdp) << '\n';
  out << "EE        " << fmt(rep.ee) << " msg/J\n";
  out << "ToA_M     " << fmt(rep.toa_m) << " s\n";
}

}  // namespace detail

/// Runs the CLI; returns the process exit status.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"LR-FHSS message replication: analytic model, Monte Carlo simulator, sweeps"};
  app.require_subcommand(1);

  std::string config_path;
  int verbosity = 0;
  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_flag("-v,--verbose", verbosity, "Increase verbosity");

  detail::ScenarioFlags analytic_flags;
  auto* analytic_cmd = app.add_subcommand("analytic", "Evaluate the closed-form model for one scenario");
  analytic_cmd->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  analytic_flags.add(analytic_cmd, true);

  detail::ScenarioFlags sim_flags;
  std::uint64_t runs = 10'000;
  std::uint64_t seed = 0;
  std::string channel_mode = "pool";
  std::string fragment_order = "round_robin";
  double frame_gap_ms = 0.0;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo estimate for one scenario");
  sim_cmd->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  sim_flags.add(sim_cmd, true);
  auto* o_sim_runs = sim_cmd->add_option("--runs", runs, "Simulated messages")->check(CLI::PositiveNumber);
  auto* o_sim_seed = sim_cmd->add_option("--seed", seed, "Base seed (default 0)");
  auto* o_cm = sim_cmd->add_option("--channel-mode", channel_mode, "pool | grid")
                   ->check(CLI::IsMember({"pool", "grid"}));
  auto* o_fo = sim_cmd->add_option("--fragment-order", fragment_order, "round_robin | contiguous")
                   ->check(CLI::IsMember({"round_robin", "contiguous"}));
  auto* o_gap = sim_cmd->add_option("--frame-gap-ms", frame_gap_ms, "Gap between replica frames (ms)");

  detail::ScenarioFlags sweep_flags;
  std::string out_path = "-";
  bool simulate = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a sweep spec and write CSV");
  sweep_cmd->add_option("--config", config_path, "Sweep spec (JSON)")->check(CLI::ExistingFile);
  sweep_flags.add(sweep_cmd, false);
  auto* o_sw_out = sweep_cmd->add_option("--out", out_path, "CSV destination ('-' for stdout)");
  auto* o_sw_runs = sweep_cmd->add_option("--runs", runs, "Runs per point")->check(CLI::PositiveNumber);
  auto* o_sw_seed = sweep_cmd->add_option("--seed", seed, "Base seed");
  auto* o_sw_sim = sweep_cmd->add_flag("--simulate", simulate, "Also run the simulator");

  detail::ScenarioFlags repro_flags;
  std::string figure;
  auto* repro_cmd = app.add_subcommand("reproduce", "Emit a figure dataset from the baseline sweep");
  repro_cmd->add_option("--config", config_path, "Optional overrides (JSON)")->check(CLI::ExistingFile);
  auto* o_fig = repro_cmd->add_option("--figure", figure, "fig2a|fig2b|fig3|fig4|fig5a|fig5b")
                    ->check(CLI::IsMember({"fig2a", "fig2b", "fig3", "fig4", "fig5a", "fig5b"}));
  repro_flags.add(repro_cmd, false);
  auto* o_rp_out = repro_cmd->add_option("--out", out_path, "Output directory");
  auto* o_rp_runs = repro_cmd->add_option("--runs", runs, "Runs per point")->check(CLI::PositiveNumber);
  auto* o_rp_seed = repro_cmd->add_option("--seed", seed, "Base seed");
  auto* o_rp_sim = repro_cmd->add_flag("--simulate", simulate, "Also run the simulator");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kUsage;
  }

  auto given = [](const CLI::Option* o) { return o->count() > 0; };
  const auto t_start = std::chrono::steady_clock::now();

  try {
    json cfg = json::object();
    if (!config_path.empty()) {
      cfg = load_json_file(config_path);
      check_config_keys(cfg);
    }
    if (cfg.contains("verbosity")) verbosity = std::max(verbosity, cfg.at("verbosity").get<int>());

    if (analytic_cmd->parsed()) {
      ScenarioParams p = scenario_from_json(cfg);
      analytic_flags.apply(p);
      const Scenario s = make_scenario(p);
      detail::print_report(out, s, evaluate(s));
    } else if (sim_cmd->parsed()) {
      ScenarioParams p = scenario_from_json(cfg);
      sim_flags.apply(p);
      const Scenario s = make_scenario(p);

      SimOptions opts = sim_options_from_json(cfg);
      if (given(o_cm)) opts.channel_mode = channel_mode == "grid" ? ChannelMode::DeviceGrid : ChannelMode::FullPool;
      if (given(o_fo))
        opts.fragment_order = fragment_order == "contiguous" ? FragmentOrder::Contiguous : FragmentOrder::RoundRobin;
      if (given(o_gap)) opts.frame_gap_s = frame_gap_ms / 1e3;
      std::uint64_t n_runs = cfg.contains("runs") ? cfg.at("runs").get<std::uint64_t>() : runs;
      std::uint64_t base_seed = cfg.contains("seed") ? cfg.at("seed").get<std::uint64_t>() : seed;
      if (given(o_sim_runs)) n_runs = runs;
      if (given(o_sim_seed)) base_seed = seed;

      const MdpEstimate est = run_monte_carlo(s, n_runs, base_seed, opts);
      const DeliveryReport rep = evaluate(s);
      out << "scenario      " << to_string(s.profile.dr) << ' ' << to_string(s.scheme) << " r=" << s.r
          << " N=" << s.n_nodes << '\n';
      out << "runs          " << est.runs << '\n';
      out << "seed          " << est.seed << '\n';
      out << "successes     " << est.successes << '\n';
      out << "mdp_sim       " << detail::fmt(est.mdp_hat) << '\n';
      out << "ci95          [" << detail::fmt(est.ci_low) << ", " << detail::fmt(est.ci_high) << "]\n";
      out << "mdp_analytic  " << detail::fmt(rep.mdp) << '\n';
    } else if (sweep_cmd->parsed()) {
      if (config_path.empty()) {
        err << "error: sweep requires --config\n";
        return kUsage;
      }
      SweepSpec spec = sweep_from_json(cfg);
      sweep_flags.apply(spec);
      if (given(o_sw_runs)) spec.runs_per_point = runs;
      if (given(o_sw_seed)) spec.seed = seed;
      if (given(o_sw_sim)) spec.simulate = simulate;
      std::string dest = cfg.contains("out") ? cfg.at("out").get<std::string>() : "-";
      if (given(o_sw_out)) dest = out_path;

      const auto records = run_sweep(spec);
      const std::size_t rows = dest == "-" ? write_csv(records, out) : write_csv(records, dest);
      if (verbosity > 0) err << "wrote " << rows << " rows\n";
    } else if (repro_cmd->parsed()) {
      std::string fig = cfg.contains("figure") ? cfg.at("figure").get<std::string>() : "";
      if (given(o_fig)) fig = figure;
      if (fig.empty()) {
        err << "error: reproduce requires --figure\n";
        return kUsage;
      }
      const FigureId id = parse_figure(fig);
      SweepSpec spec = sweep_from_json(cfg, baseline_sweep(figure_layout(id).lambda_per_hour));
      repro_flags.apply(spec);
      if (given(o_rp_runs)) spec.runs_per_point = runs;
      if (given(o_rp_seed)) spec.seed = seed;
      if (given(o_rp_sim)) spec.simulate = simulate;
      std::filesystem::path dir = cfg.contains("out") ? cfg.at("out").get<std::string>() : "./" + fig;
      if (given(o_rp_out)) dir = out_path;

      const auto records = run_sweep(spec);
      const auto files = emit_figure_dataset(records, id, dir);
      write_csv(records, dir / "records.csv");
      for (const auto& f : files) out << f.string() << '\n';
      if (verbosity > 0) err << "wrote " << files.size() << " series to " << dir.string() << '\n';
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    err << "error: config: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }

  if (verbosity > 0) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t_start;
    err << "elapsed " << detail::fmt(dt.count(), "%.3f") << " s\n";
  }
  return kOk;
}

}  // namespace lrfhss::cli
