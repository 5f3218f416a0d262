#pragma once

// LR-FHSS data-rate profiles, frame geometry and time-on-air.

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "lrfhss/errors.hpp"

namespace lrfhss {

enum class DataRate : int { DR8 = 8, DR9 = 9 };

enum class Scheme { None, FrameReplication, FragmentReplication };

// Exact rational coding rate; keeps fragment counts free of rounding.
struct CodingRate {
  int num = 1;
  int den = 1;

  constexpr double value() const { return static_cast<double>(num) / den; }
  friend constexpr bool operator==(CodingRate, CodingRate) = default;
};

struct DataRateProfile {
  DataRate dr = DataRate::DR8;
  CodingRate coding_rate{1, 3};
  int n_header_replicas = 3;
  int n_channels = 280;
  int grid_size = 35;
  double obw_hz = 488.0;
  double ocw_hz = 137'000.0;
};

struct FrameGeometry {
  int n_payload_fragments = 0;  // includes the last fragment
  double delta_h = 0.0;
  double delta_p = 0.0;
  double delta_l = 0.0;
  double delta_w = 0.0;
  int epsilon = 0;
  bool has_short_last = false;
};

/// Network, traffic and replication configuration for one evaluation point.
/// Build through make_scenario() so the invariants hold.
struct Scenario {
  std::uint64_t n_nodes = 1;
  double lambda = 1.0;      // messages per node per interval
  double interval_s = 3600.0;
  int payload_bytes = 15;
  Scheme scheme = Scheme::None;
  int r = 1;
  double p_t_w = 0.0;
  DataRateProfile profile;
  FrameGeometry geometry;

  // Per-node offered load, messages per second.
  double offered_load() const { return lambda / interval_s; }
};

inline std::string_view to_string(DataRate dr) {
  return dr == DataRate::DR8 ? "DR8" : "DR9";
}

inline std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::None: return "none";
    case Scheme::FrameReplication: return "frame";
    case Scheme::FragmentReplication: return "fragment";
  }
  return "?";
}

inline DataRate parse_data_rate(std::string_view text) {
  if (text == "8" || text == "DR8" || text == "dr8") return DataRate::DR8;
  if (text == "9" || text == "DR9" || text == "dr9") return DataRate::DR9;
  throw InvalidArgument("unsupported data rate '" + std::string(text) + "' (expected 8 or 9)");
}

inline DataRate data_rate_from_int(int id) {
  if (id == 8) return DataRate::DR8;
  if (id == 9) return DataRate::DR9;
  throw InvalidArgument("unsupported data rate DR" + std::to_string(id));
}

inline Scheme parse_scheme(std::string_view text) {
  if (text == "none") return Scheme::None;
  if (text == "frame") return Scheme::FrameReplication;
  if (text == "fragment" || text == "frag") return Scheme::FragmentReplication;
  throw InvalidArgument("unknown replication scheme '" + std::string(text) + "'");
}

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline DataRateProfile dr_profile(DataRate dr) {
  DataRateProfile p;
  p.dr = dr;
  switch (dr) {
    case DataRate::DR8:
      p.coding_rate = {1, 3};
      p.n_header_replicas = 3;
      return p;
    case DataRate::DR9:
      p.coding_rate = {2, 3};
      p.n_header_replicas = 2;
      return p;
  }
  throw InvalidArgument("unsupported data rate DR" + std::to_string(static_cast<int>(dr)));
}

/// Number of payload fragments for a B-byte payload: ceil((B+2) / (6c)).
inline int payload_fragment_count(int payload_bytes, CodingRate c) {
  const long long numer = static_cast<long long>(payload_bytes + 2) * c.den;
  const long long denom = 6LL * c.num;
  return static_cast<int>((numer + denom - 1) / denom);
}

/// Splits a B-byte payload into fragments. The fractional part of (B+2)/(6c)
/// sets the length of the trailing short fragment; an exact multiple yields a
/// full-length last fragment.
inline FrameGeometry derive_frame_geometry(int payload_bytes, const DataRateProfile& profile,
                                           double delta_h, double delta_p, double delta_w) {
  if (payload_bytes < 1) throw InvalidArgument("payload must be at least one byte");
  if (!(delta_h > 0.0) || !(delta_p > 0.0))
    throw InvalidArgument("header and fragment durations must be positive");
  if (!(delta_w >= 0.0)) throw InvalidArgument("header wait time must be non-negative");

  const CodingRate c = profile.coding_rate;
  const long long numer = static_cast<long long>(payload_bytes + 2) * c.den;
  const long long denom = 6LL * c.num;
  const long long remainder = numer % denom;

  FrameGeometry g;
  g.n_payload_fragments = payload_fragment_count(payload_bytes, c);
  g.delta_h = delta_h;
  g.delta_p = delta_p;
  g.delta_w = delta_w;
  g.has_short_last = remainder != 0;
  g.delta_l = g.has_short_last
                  ? static_cast<double>(remainder) / static_cast<double>(denom) * delta_p
                  : delta_p;
  // ceil(c * N_P) in integers
  g.epsilon = static_cast<int>((static_cast<long long>(c.num) * g.n_payload_fragments + c.den - 1) /
                               c.den);
  return g;
}

/// Frame time-on-air: N_H*dH + dW + dP*ceil((B+2)/(6c)). Every fragment,
/// including a short last one, is billed at full fragment length here.
inline double time_on_air_frame(int payload_bytes, const FrameGeometry& geometry,
                                const DataRateProfile& profile) {
  return profile.n_header_replicas * geometry.delta_h + geometry.delta_w +
         geometry.delta_p * payload_fragment_count(payload_bytes, profile.coding_rate);
}

/// Airtime spent on one message under the scenario's replication scheme.
inline double message_airtime(const Scenario& s) {
  switch (s.scheme) {
    case Scheme::None:
      return time_on_air_frame(s.payload_bytes, s.geometry, s.profile);
    case Scheme::FrameReplication:
      return s.r * time_on_air_frame(s.payload_bytes, s.geometry, s.profile);
    case Scheme::FragmentReplication:
      // One frame carrying r copies of the message.
      return time_on_air_frame(s.r * s.payload_bytes, s.geometry, s.profile);
  }
  return 0.0;
}

// Human-facing scenario description: seconds, dBm, messages per hour.
struct ScenarioParams {
  DataRate dr = DataRate::DR8;
  std::uint64_t nodes = 1000;
  double lambda_per_hour = 4.0;
  double interval_s = 3600.0;
  int payload_bytes = 15;
  Scheme scheme = Scheme::None;
  int r = 1;
  double power_dbm = 14.0;
  double delta_h_s = 0.233;
  double delta_p_s = 0.102;
  double delta_w_s = 0.0;
  int n_channels = 280;
};

inline Scenario make_scenario(const ScenarioParams& p) {
  if (p.nodes < 1) throw InvalidArgument("node count must be at least 1");
  if (!(p.lambda_per_hour > 0.0)) throw InvalidArgument("message rate must be positive");
  if (!(p.interval_s > 0.0)) throw InvalidArgument("interval must be positive");
  if (p.r < 1) throw InvalidArgument("replica count must be at least 1");
  if (p.scheme == Scheme::None && p.r != 1)
    throw InvalidArgument("scheme 'none' requires r = 1");
  if (p.n_channels < 2) throw InvalidArgument("need at least two channels");
  if (!std::isfinite(p.power_dbm)) throw InvalidArgument("transmit power must be finite");

  Scenario s;
  s.profile = dr_profile(p.dr);
  s.profile.n_channels = p.n_channels;
  if (s.profile.grid_size > s.profile.n_channels) s.profile.grid_size = s.profile.n_channels;
  s.n_nodes = p.nodes;
  s.interval_s = p.interval_s;
  s.lambda = p.lambda_per_hour * p.interval_s / 3600.0;
  s.payload_bytes = p.payload_bytes;
  s.scheme = p.scheme;
  s.r = p.r;
  s.p_t_w = dbm_to_watts(p.power_dbm);
  s.geometry = derive_frame_geometry(p.payload_bytes, s.profile, p.delta_h_s, p.delta_p_s,
                                     p.delta_w_s);
  return s;
}

}  // namespace lrfhss
