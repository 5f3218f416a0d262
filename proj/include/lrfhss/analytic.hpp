#pragma once

// Closed-form message delivery probability and energy efficiency for a single
// replicating device among N pure-ALOHA LR-FHSS nodes.

#include <algorithm>
#include <cmath>
#include <limits>

#include "lrfhss/errors.hpp"
#include "lrfhss/frame_model.hpp"

namespace lrfhss {

// Mean spacing between successive header replicas, full fragments and last
// fragments across the whole network. t_p is +inf when frames carry a single
// fragment, so its reciprocal is exactly zero.
struct InterArrivals {
  double t_h = 0.0;
  double t_p = 0.0;
  double t_l = 0.0;
};

// Expected number of elements sent during the vulnerable interval of a target
// header, full fragment and last fragment.
struct Exposures {
  double alpha_h = 0.0;
  double alpha_p = 0.0;
  double alpha_l = 0.0;
};

struct DeliveryReport {
  double s_h = 0.0;           // >= 1 header replica survives
  double xi_p = 0.0;          // single fragment survives
  double s_p = 0.0;           // >= epsilon fragments survive
  double s = 0.0;             // frame success, s_h * s_p
  double xi_p_replica = 0.0;  // fragment recovered from any of r copies
  double s_p_replica = 0.0;   // >= epsilon unique fragments recovered
  double mdp = 0.0;
  double ee = 0.0;            // messages per joule
  double toa_m = 0.0;         // seconds
};

inline InterArrivals interarrival_times(const Scenario& s) {
  const double frames = static_cast<double>(s.n_nodes) * s.lambda;
  const int np = s.geometry.n_payload_fragments;
  InterArrivals t;
  t.t_h = s.interval_s / (frames * s.profile.n_header_replicas);
  t.t_p = np > 1 ? s.interval_s / (frames * (np - 1)) : std::numeric_limits<double>::infinity();
  t.t_l = s.interval_s / frames;
  return t;
}

/// Vulnerable time divided by inter-arrival time, summed over the three
/// element kinds. The vulnerable window between elements of durations a and b
/// is a + b.
inline Exposures collision_exposures(const Scenario& s, const InterArrivals& t) {
  const double dh = s.geometry.delta_h;
  const double dp = s.geometry.delta_p;
  const double dl = s.geometry.delta_l;
  const double rate_h = 1.0 / t.t_h;
  const double rate_p = 1.0 / t.t_p;  // 0 when t_p is unbounded
  const double rate_l = 1.0 / t.t_l;

  Exposures e;
  e.alpha_h = 2.0 * dh * rate_h + (dh + dp) * rate_p + (dh + dl) * rate_l;
  e.alpha_p = 2.0 * dp * rate_p + (dh + dp) * rate_h + (dp + dl) * rate_l;
  e.alpha_l = 2.0 * dl * rate_l + (dh + dl) * rate_h + (dp + dl) * rate_p;
  return e;
}

namespace detail {

// ((n_c - 1) / n_c)^(alpha - 1), with the exponent floored at zero so that
// fewer than one expected interferer never produces a survival probability
// above one.
inline double element_survival(double alpha, int n_channels) {
  const double q = static_cast<double>(n_channels - 1) / n_channels;
  return std::pow(q, std::max(alpha - 1.0, 0.0));
}

inline double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

// 1 - (1 - p)^k without the cancellation that zeroes tiny p.
inline double at_least_one(double p, int k) {
  if (p >= 1.0) return 1.0;
  return clamp01(-std::expm1(k * std::log1p(-p)));
}

}  // namespace detail

inline double header_success_prob(const Exposures& e, const DataRateProfile& profile) {
  return detail::at_least_one(detail::element_survival(e.alpha_h, profile.n_channels),
                              profile.n_header_replicas);
}

inline double fragment_success_prob(const Exposures& e, const FrameGeometry& g,
                                    const DataRateProfile& profile) {
  const int np = g.n_payload_fragments;
  const double full = detail::element_survival(e.alpha_p, profile.n_channels);
  const double last = detail::element_survival(e.alpha_l, profile.n_channels);
  return detail::clamp01(((np - 1) * full + last) / np);
}

/// P[at least `epsilon` of `n` independent fragments succeed], each with
/// probability `xi`.
inline double payload_success_prob(double xi, int n, int epsilon) {
  if (n < 1) throw InvalidArgument("fragment count must be at least 1");
  if (epsilon < 1 || epsilon > n)
    throw InvalidArgument("decode threshold must lie in [1, fragment count]");
  if (!(xi >= 0.0 && xi <= 1.0)) throw InvalidArgument("fragment success must lie in [0, 1]");

  double sum = 0.0;
  double binom = 1.0;  // C(n, i)
  for (int i = 0; i <= n; ++i) {
    if (i >= epsilon) sum += binom * std::pow(xi, i) * std::pow(1.0 - xi, n - i);
    binom = binom * (n - i) / (i + 1);
  }
  return detail::clamp01(sum);
}

inline double replica_fragment_success(double xi, int r) {
  if (r < 1) throw InvalidArgument("replica count must be at least 1");
  if (r == 1) return xi;
  return detail::at_least_one(xi, r);
}

inline double frame_success_prob(const Scenario& s) {
  const Exposures e = collision_exposures(s, interarrival_times(s));
  const double s_h = header_success_prob(e, s.profile);
  const double xi = fragment_success_prob(e, s.geometry, s.profile);
  return s_h * payload_success_prob(xi, s.geometry.n_payload_fragments, s.geometry.epsilon);
}

inline double energy_efficiency(const Scenario& s, double mdp) {
  const double toa = message_airtime(s);
  if (!(s.p_t_w > 0.0) || !(toa > 0.0))
    throw InvalidArgument("energy efficiency needs positive power and airtime");
  return mdp / (s.p_t_w * toa);
}

/// Full model evaluation for one scenario.
inline DeliveryReport evaluate(const Scenario& s) {
  const FrameGeometry& g = s.geometry;
  const Exposures e = collision_exposures(s, interarrival_times(s));

  DeliveryReport rep;
  rep.s_h = header_success_prob(e, s.profile);
  rep.xi_p = fragment_success_prob(e, g, s.profile);
  rep.s_p = payload_success_prob(rep.xi_p, g.n_payload_fragments, g.epsilon);
  rep.s = rep.s_h * rep.s_p;

  const int r = s.scheme == Scheme::FragmentReplication ? s.r : 1;
  rep.xi_p_replica = replica_fragment_success(rep.xi_p, r);
  rep.s_p_replica = payload_success_prob(rep.xi_p_replica, g.n_payload_fragments, g.epsilon);

  switch (s.scheme) {
    case Scheme::None:
      rep.mdp = rep.s;
      break;
    case Scheme::FrameReplication:
      // r = 1 returns s itself; 1 - (1 - s) is not exact below s = 0.5.
      rep.mdp = s.r == 1 ? rep.s : detail::at_least_one(rep.s, s.r);
      break;
    case Scheme::FragmentReplication:
      rep.mdp = rep.s_h * rep.s_p_replica;
      break;
  }
  rep.toa_m = message_airtime(s);
  rep.ee = energy_efficiency(s, rep.mdp);
  return rep;
}

inline double mdp(const Scenario& s) { return evaluate(s).mdp; }

}  // namespace lrfhss
