#pragma once

// Parameter sweeps over (data rate, scheme, r, node count) with analytic and,
// optionally, simulated delivery probability.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "lrfhss/analytic.hpp"
#include "lrfhss/errors.hpp"
#include "lrfhss/frame_model.hpp"
#include "lrfhss/simcore.hpp"

namespace lrfhss {

struct SchemeR {
  Scheme scheme = Scheme::None;
  int r = 1;

  friend auto operator<=>(const SchemeR&, const SchemeR&) = default;
};

/// One curve in a figure: data rate plus replication setting.
struct Combo {
  DataRate dr = DataRate::DR8;
  Scheme scheme = Scheme::None;
  int r = 1;

  friend auto operator<=>(const Combo&, const Combo&) = default;
};

inline std::string to_string(const Combo& c) {
  return std::string(to_string(c.dr)) + "/" + std::string(to_string(c.scheme)) + "/r" +
         std::to_string(c.r);
}

struct SweepSpec {
  std::vector<DataRate> dr_list;
  std::vector<SchemeR> scheme_r_list;
  std::vector<std::uint64_t> node_counts;
  double lambda_per_hour = 4.0;
  double interval_s = 3600.0;
  int payload_bytes = 15;
  double power_dbm = 14.0;
  double delta_h_s = 0.233;
  double delta_p_s = 0.102;
  double delta_w_s = 0.0;
  int n_channels = 280;
  std::uint64_t runs_per_point = 10'000;
  std::uint64_t seed = 0;
  bool simulate = false;
  SimOptions sim;
};

struct SweepRecord {
  DataRate dr = DataRate::DR8;
  Scheme scheme = Scheme::None;
  int r = 1;
  std::uint64_t n_nodes = 0;
  double lambda_per_hour = 0.0;
  double mdp_analytic = 0.0;
  std::optional<double> mdp_sim;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  double ee_analytic = 0.0;
  double toa_m = 0.0;
  std::uint64_t runs = 0;
  std::uint64_t seed = 0;

  Combo combo() const { return {dr, scheme, r}; }
};

enum class Metric { MDP, EE };

// Thrown when one sweep coordinate cannot form a valid scenario.
class SweepPointError : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

/// `points` log-spaced integers from lo to hi inclusive, deduplicated.
inline std::vector<std::uint64_t> log_spaced_nodes(double lo, double hi, int points) {
  if (!(lo >= 1.0) || !(hi >= lo) || points < 1)
    throw InvalidArgument("log axis needs 1 <= lo <= hi and at least one point");
  std::vector<std::uint64_t> out;
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < points; ++i) {
    const double x = points == 1 ? a : a + (b - a) * i / (points - 1);
    const auto n = static_cast<std::uint64_t>(std::llround(std::pow(10.0, x)));
    if (out.empty() || out.back() != n) out.push_back(n);
  }
  return out;
}

/// None plus {frame, fragment} x {2, 3}.
inline std::vector<SchemeR> default_scheme_r_list() {
  return {{Scheme::None, 1},
          {Scheme::FrameReplication, 2},
          {Scheme::FrameReplication, 3},
          {Scheme::FragmentReplication, 2},
          {Scheme::FragmentReplication, 3}};
}

// Default node axis: 22 log-spaced counts, 10^2 .. 10^5.5.
inline std::vector<std::uint64_t> default_node_axis() {
  return log_spaced_nodes(1e2, std::pow(10.0, 5.5), 22);
}

/// Built-in "baseline" sweep: 15-byte messages, 233 ms headers, 102 ms
/// fragments, 14 dBm, one-hour interval.
inline SweepSpec baseline_sweep(double lambda_per_hour = 4.0) {
  SweepSpec spec;
  spec.dr_list = {DataRate::DR8, DataRate::DR9};
  spec.scheme_r_list = default_scheme_r_list();
  spec.node_counts = default_node_axis();
  spec.lambda_per_hour = lambda_per_hour;
  return spec;
}

inline ScenarioParams scenario_params(const SweepSpec& spec, DataRate dr, SchemeR sr,
                                      std::uint64_t nodes) {
  ScenarioParams p;
  p.dr = dr;
  p.nodes = nodes;
  p.lambda_per_hour = spec.lambda_per_hour;
  p.interval_s = spec.interval_s;
  p.payload_bytes = spec.payload_bytes;
  p.scheme = sr.scheme;
  p.r = sr.r;
  p.power_dbm = spec.power_dbm;
  p.delta_h_s = spec.delta_h_s;
  p.delta_p_s = spec.delta_p_s;
  p.delta_w_s = spec.delta_w_s;
  p.n_channels = spec.n_channels;
  return p;
}

/// One record per (dr, scheme-r, N), ordered by dr, scheme, r, then N.
inline std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
  if (spec.dr_list.empty() || spec.scheme_r_list.empty() || spec.node_counts.empty())
    throw InvalidArgument("sweep needs at least one data rate, scheme and node count");
  if (spec.simulate && spec.runs_per_point < 1)
    throw InvalidArgument("simulated sweep needs runs_per_point >= 1");

  const std::set<DataRate> drs(spec.dr_list.begin(), spec.dr_list.end());
  const std::set<SchemeR> schemes(spec.scheme_r_list.begin(), spec.scheme_r_list.end());
  const std::set<std::uint64_t> nodes(spec.node_counts.begin(), spec.node_counts.end());

  std::vector<SweepRecord> out;
  out.reserve(drs.size() * schemes.size() * nodes.size());
  std::uint64_t point = 0;
  for (DataRate dr : drs) {
    for (const SchemeR& sr : schemes) {
      for (std::uint64_t n : nodes) {
        Scenario s;
        try {
          s = make_scenario(scenario_params(spec, dr, sr, n));
        } catch (const InvalidArgument& e) {
          throw SweepPointError(std::string("sweep point ") + to_string(Combo{dr, sr.scheme, sr.r}) +
                                " N=" + std::to_string(n) + ": " + e.what());
        }
        const DeliveryReport rep = evaluate(s);
        SweepRecord rec;
        rec.dr = dr;
        rec.scheme = sr.scheme;
        rec.r = sr.r;
        rec.n_nodes = n;
        rec.lambda_per_hour = spec.lambda_per_hour;
        rec.mdp_analytic = rep.mdp;
        rec.ee_analytic = rep.ee;
        rec.toa_m = rep.toa_m;
        rec.seed = run_seed(spec.seed, point);
        if (spec.simulate) {
          const MdpEstimate est = run_monte_carlo(s, spec.runs_per_point, rec.seed, spec.sim);
          rec.mdp_sim = est.mdp_hat;
          rec.ci_low = est.ci_low;
          rec.ci_high = est.ci_high;
          rec.runs = est.runs;
        }
        out.push_back(rec);
        ++point;
      }
    }
  }
  return out;
}

inline double metric_value(const SweepRecord& rec, Metric m) {
  return m == Metric::MDP ? rec.mdp_analytic : rec.ee_analytic;
}

/// Best combo at `n_nodes`. Every combo that appears anywhere in `records`
/// must have a row at `n_nodes`. Ties go to lower r, then lower data rate.
inline Combo find_best_scheme(const std::vector<SweepRecord>& records, Metric metric,
                              std::uint64_t n_nodes) {
  std::set<Combo> all;
  std::map<Combo, double> at_n;
  for (const SweepRecord& rec : records) {
    all.insert(rec.combo());
    if (rec.n_nodes == n_nodes) at_n[rec.combo()] = metric_value(rec, metric);
  }
  if (at_n.empty()) throw IncompleteData("no records at N=" + std::to_string(n_nodes));
  for (const Combo& c : all)
    if (!at_n.count(c))
      throw IncompleteData("combo " + to_string(c) + " has no record at N=" + std::to_string(n_nodes));

  auto rank = [](const Combo& c) {
    return std::make_tuple(c.r, static_cast<int>(c.dr), static_cast<int>(c.scheme));
  };
  const Combo* best = nullptr;
  double best_v = 0.0;
  for (const auto& [combo, v] : at_n) {
    if (!best || v > best_v || (v == best_v && rank(combo) < rank(*best))) {
      best = &combo;
      best_v = v;
    }
  }
  return *best;
}

}  // namespace lrfhss
