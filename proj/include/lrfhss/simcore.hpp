#pragma once

// Monte Carlo collision simulator: one device under test (DUT) replicating
// its message, N - 1 background nodes sending each message once, Poisson
// arrivals, independent per-element channel hopping.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "lrfhss/errors.hpp"
#include "lrfhss/frame_model.hpp"

namespace lrfhss {

enum class ElementKind : std::uint8_t { HeaderReplica, FullFragment, LastFragment };

/// One on-air unit: a header replica or a fragment copy.
struct Element {
  std::uint32_t owner = 0;  // 0 is the DUT
  ElementKind kind = ElementKind::HeaderReplica;
  std::uint32_t channel = 0;
  double start = 0.0;
  double duration = 0.0;
  std::uint32_t frame_index = 0;     // replica frame (frame replication)
  std::uint32_t fragment_index = 0;  // header replica number for headers
  std::uint32_t replica_index = 0;   // copy round (fragment replication)

  double end() const { return start + duration; }
  bool is_header() const { return kind == ElementKind::HeaderReplica; }
};

struct RunOutcome {
  bool delivered = false;
  bool header_received = false;
  int fragments_recovered = 0;
};

struct MdpEstimate {
  std::uint64_t runs = 0;
  std::uint64_t successes = 0;
  double mdp_hat = 0.0;
  double ci_low = 0.0;   // Wilson 95%
  double ci_high = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const MdpEstimate&, const MdpEstimate&) = default;
};

enum class ChannelMode {
  FullPool,   // every element hops uniformly over all n_c channels
  DeviceGrid  // each frame picks one of the n_c / grid_size grids and hops inside it
};

enum class FragmentOrder {
  RoundRobin,  // F1..Fn, F1..Fn, ...
  Contiguous   // F1 F1 .. F2 F2 ..
};

struct SimOptions {
  ChannelMode channel_mode = ChannelMode::FullPool;
  FragmentOrder fragment_order = FragmentOrder::RoundRobin;
  double frame_gap_s = 0.0;  // silence between replica frames
  unsigned threads = 0;      // 0: LRFHSS_THREADS, else hardware concurrency
};

using Rng = std::mt19937_64;

constexpr double kZ95 = 1.959963984540054;
constexpr double kZ99 = 2.5758293035489004;

struct Interval {
  double low = 0.0;
  double high = 0.0;
  double half_width() const { return 0.5 * (high - low); }
};

inline Interval wilson_interval(std::uint64_t successes, std::uint64_t runs, double z) {
  if (runs == 0) throw InvalidArgument("Wilson interval needs at least one run");
  const double n = static_cast<double>(runs);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::clamp(std::min(center - half, p), 0.0, 1.0),
          std::clamp(std::max(center + half, p), 0.0, 1.0)};
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class ChannelHopper {
public:
  ChannelHopper(const DataRateProfile& profile, ChannelMode mode, Rng& rng)
      : n_channels_(static_cast<std::uint32_t>(profile.n_channels)) {
    if (mode == ChannelMode::DeviceGrid && profile.grid_size < profile.n_channels) {
      stride_ = static_cast<std::uint32_t>(profile.n_channels / profile.grid_size);
      width_ = static_cast<std::uint32_t>(profile.grid_size);
      offset_ = std::uniform_int_distribution<std::uint32_t>(0, stride_ - 1)(rng);
    } else {
      stride_ = 1;
      width_ = n_channels_;
    }
  }

  std::uint32_t next(Rng& rng) const {
    return offset_ + stride_ * std::uniform_int_distribution<std::uint32_t>(0, width_ - 1)(rng);
  }

private:
  std::uint32_t n_channels_;
  std::uint32_t stride_ = 1;
  std::uint32_t width_ = 1;
  std::uint32_t offset_ = 0;
};

// Appends one frame (headers, wait, `rounds` passes over the fragments).
inline void append_frame(std::vector<Element>& out, std::uint32_t owner, double start,
                         std::uint32_t frame_index, int rounds, const Scenario& s,
                         const SimOptions& opts, Rng& rng) {
  const FrameGeometry& g = s.geometry;
  const ChannelHopper hopper(s.profile, opts.channel_mode, rng);
  double t = start;
  for (int h = 0; h < s.profile.n_header_replicas; ++h) {
    out.push_back({owner, ElementKind::HeaderReplica, hopper.next(rng), t, g.delta_h, frame_index,
                   static_cast<std::uint32_t>(h), 0});
    t += g.delta_h;
  }
  t += g.delta_w;

  const int np = g.n_payload_fragments;
  auto fragment = [&](int i, int round) {
    const bool last = i == np - 1;
    const double d = last ? g.delta_l : g.delta_p;
    out.push_back({owner, last ? ElementKind::LastFragment : ElementKind::FullFragment,
                   hopper.next(rng), t, d, frame_index, static_cast<std::uint32_t>(i),
                   static_cast<std::uint32_t>(round)});
    t += d;
  };
  if (opts.fragment_order == FragmentOrder::RoundRobin) {
    for (int round = 0; round < rounds; ++round)
      for (int i = 0; i < np; ++i) fragment(i, round);
  } else {
    for (int i = 0; i < np; ++i)
      for (int round = 0; round < rounds; ++round) fragment(i, round);
  }
}

}  // namespace detail

/// Element timeline of the DUT's message starting at t0.
inline std::vector<Element> build_dut_timeline(const Scenario& s, double t0, Rng& rng,
                                               const SimOptions& opts = {}) {
  std::vector<Element> out;
  const double frame_slot = time_on_air_frame(s.payload_bytes, s.geometry, s.profile);
  switch (s.scheme) {
    case Scheme::None:
      detail::append_frame(out, 0, t0, 0, 1, s, opts, rng);
      break;
    case Scheme::FrameReplication:
      for (int k = 0; k < s.r; ++k)
        detail::append_frame(out, 0, t0 + k * (frame_slot + opts.frame_gap_s),
                             static_cast<std::uint32_t>(k), 1, s, opts, rng);
      break;
    case Scheme::FragmentReplication:
      detail::append_frame(out, 0, t0, 0, s.r, s, opts, rng);
      break;
  }
  return out;
}

/// Background frames from the other N - 1 nodes that can touch
/// [window_begin, window_end]. Frame starts are Poisson with rate
/// (N - 1) * lambda / T over the window extended left by one frame length;
/// elements with no possible overlap with the window are dropped.
inline std::vector<Element> generate_background(const Scenario& s, double window_begin,
                                                double window_end, Rng& rng,
                                                const SimOptions& opts = {}) {
  if (!(window_end > window_begin)) throw InvalidArgument("background window is empty or inverted");

  std::vector<Element> out;
  if (s.n_nodes <= 1) return out;

  const double frame_len = time_on_air_frame(s.payload_bytes, s.geometry, s.profile);
  const double rate = static_cast<double>(s.n_nodes - 1) * s.lambda / s.interval_s;
  const double from = window_begin - frame_len;
  const double span = window_end - from;

  std::poisson_distribution<std::uint64_t> count_dist(rate * span);
  std::uniform_real_distribution<double> start_dist(from, window_end);
  const std::uint64_t n_frames = count_dist(rng);

  std::vector<Element> frame;
  for (std::uint64_t k = 0; k < n_frames; ++k) {
    frame.clear();
    detail::append_frame(frame, static_cast<std::uint32_t>(k + 1), start_dist(rng), 0, 1, s, opts,
                         rng);
    for (const Element& e : frame)
      if (e.start < window_end && e.end() > window_begin) out.push_back(e);
  }
  return out;
}

/// A DUT element is clean iff no background element on its channel overlaps
/// it. Intervals are open, so touching endpoints do not collide.
inline std::vector<bool> detect_clean_elements(const std::vector<Element>& dut,
                                               const std::vector<Element>& background) {
  std::vector<bool> clean(dut.size(), true);
  std::vector<std::size_t> by_channel(dut.size());
  for (std::size_t i = 0; i < dut.size(); ++i) by_channel[i] = i;
  std::sort(by_channel.begin(), by_channel.end(), [&](std::size_t a, std::size_t b) {
    return dut[a].channel < dut[b].channel;
  });

  for (const Element& bg : background) {
    auto lo = std::lower_bound(by_channel.begin(), by_channel.end(), bg.channel,
                               [&](std::size_t i, std::uint32_t ch) { return dut[i].channel < ch; });
    for (auto it = lo; it != by_channel.end() && dut[*it].channel == bg.channel; ++it) {
      const Element& d = dut[*it];
      if (d.start < bg.end() && bg.start < d.end()) clean[*it] = false;
    }
  }
  return clean;
}

/// Scores one DUT message from its per-element clean flags.
inline RunOutcome evaluate_delivery(const Scenario& s, const std::vector<Element>& dut,
                                    const std::vector<bool>& clean) {
  if (dut.size() != clean.size()) throw InvalidArgument("clean flags not aligned with timeline");
  const int np = s.geometry.n_payload_fragments;
  const int eps = s.geometry.epsilon;
  const std::size_t n_frames = s.scheme == Scheme::FrameReplication ? static_cast<std::size_t>(s.r) : 1;

  std::vector<char> header_ok(n_frames, 0);
  std::vector<char> recovered(n_frames * static_cast<std::size_t>(np), 0);
  for (std::size_t i = 0; i < dut.size(); ++i) {
    if (!clean[i]) continue;
    const Element& e = dut[i];
    const std::size_t f = e.frame_index < n_frames ? e.frame_index : 0;
    if (e.is_header())
      header_ok[f] = 1;
    else
      recovered[f * np + e.fragment_index] = 1;
  }

  RunOutcome out;
  for (std::size_t f = 0; f < n_frames; ++f) {
    const int got = static_cast<int>(
        std::count(recovered.begin() + f * np, recovered.begin() + (f + 1) * np, 1));
    out.header_received = out.header_received || header_ok[f];
    out.fragments_recovered = std::max(out.fragments_recovered, got);
    if (header_ok[f] && got >= eps) out.delivered = true;
  }
  return out;
}

/// Deterministic per-run seed.
inline std::uint64_t run_seed(std::uint64_t seed, std::uint64_t run_index) {
  return detail::splitmix64(seed ^ detail::splitmix64(run_index));
}

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LRFHSS_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// One simulated message: random start, DUT timeline, background, scoring.
inline RunOutcome simulate_message(const Scenario& s, std::uint64_t seed,
                                   const SimOptions& opts = {}) {
  Rng rng(seed);
  std::vector<Element> dut = build_dut_timeline(s, 0.0, rng, opts);
  const double span = dut.empty() ? 0.0 : dut.back().end();
  const double latest = s.interval_s - std::max(span, message_airtime(s));
  const double t0 = latest > 0.0 ? std::uniform_real_distribution<double>(0.0, latest)(rng) : 0.0;
  for (Element& e : dut) e.start += t0;

  const std::vector<Element> bg = generate_background(s, t0, t0 + span, rng, opts);
  return evaluate_delivery(s, dut, detect_clean_elements(dut, bg));
}

/// Message delivery probability estimate over `runs` independent messages.
/// Runs are split across threads; the result depends only on
/// (scenario, runs, seed, options other than thread count).
inline MdpEstimate run_monte_carlo(const Scenario& s, std::uint64_t runs, std::uint64_t seed,
                                   const SimOptions& opts = {}) {
  if (runs == 0) throw InvalidArgument("need at least one simulation run");

  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(opts.threads), runs));
  std::vector<std::uint64_t> successes(n_threads, 0);
  std::vector<std::exception_ptr> errors(n_threads);

  auto work = [&](unsigned t) {
    try {
      const std::uint64_t begin = runs * t / n_threads;
      const std::uint64_t end = runs * (t + 1) / n_threads;
      for (std::uint64_t i = begin; i < end; ++i)
        if (simulate_message(s, run_seed(seed, i), opts).delivered) ++successes[t];
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };

  if (n_threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  MdpEstimate est;
  est.runs = runs;
  for (auto c : successes) est.successes += c;
  est.mdp_hat = static_cast<double>(est.successes) / static_cast<double>(runs);
  const Interval ci = wilson_interval(est.successes, runs, kZ95);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  est.seed = seed;
  return est;
}

}  // namespace lrfhss
