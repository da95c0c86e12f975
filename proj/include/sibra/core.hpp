// core.hpp -- shared domain vocabulary: identifiers, time quantization,
// bandwidth class ladders, link anatomy.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <set>
#include <string>

namespace sibra {

using AsId = std::uint16_t;          // 0 is reserved as "none/local"
using InterfaceId = std::uint16_t;

// 128-bit opaque end-to-end reservation identifier.
struct FlowId {
  std::array<std::uint8_t, 16> bytes{};

  static FlowId random(std::uint64_t hi, std::uint64_t lo);
  std::string hex() const;
  static FlowId from_hex(const std::string& s);

  auto operator<=>(const FlowId&) const = default;
};

struct FlowIdHash {
  std::size_t operator()(const FlowId& f) const;
};

// Time counted in 4-second SIBRA seconds since scenario start.
struct SibraTime {
  std::uint64_t ticks = 0;

  auto operator<=>(const SibraTime&) const = default;
};

inline constexpr double kSibraSecond = 4.0;  // wall seconds per tick

// wall seconds -> ticks, floor semantics
SibraTime quantize_time(double wall_seconds);

enum class PathKind : std::uint8_t { Steady = 0, Ephemeral = 1 };

inline constexpr int kSteadyClassCount = 12;
inline constexpr int kEphemeralClassCount = 20;

// One rung of the geometric rate ladder.
struct BandwidthClass {
  PathKind kind = PathKind::Steady;
  std::uint8_t index = 0;

  double rate_kbps() const;
  auto operator<=>(const BandwidthClass&) const = default;
};

double steady_class_rate(int index);     // 16 * sqrt(2^i) kbps, i in 0..11
double ephemeral_class_rate(int index);  // 256 * sqrt(2^i) kbps, i in 0..19

// Smallest class whose rate covers the requested kbps. Throws
// std::domain_error when the request exceeds the top class.
BandwidthClass class_for_rate(PathKind kind, double requested_kbps);

// Classes within +/-2 indices, clipped to the ladder. Renewal dual-use
// probing only inspects these.
std::set<std::uint8_t> comparable_classes(BandwidthClass c);

// Per-link bandwidth split. Fractions must sum to 1.
struct LinkAnatomy {
  double capacity_bps = 0;
  double ephemeral_frac = 0.80;
  double steady_frac = 0.05;
  double besteffort_frac = 0.15;

  double steady_kbps() const { return capacity_bps * steady_frac / 1000.0; }
  double ephemeral_kbps() const { return capacity_bps * ephemeral_frac / 1000.0; }
  double besteffort_kbps() const { return capacity_bps * besteffort_frac / 1000.0; }
  double beta() const { return ephemeral_frac / steady_frac; }

  void validate() const;  // throws std::invalid_argument on bad fractions
};

enum class Direction : std::uint8_t { Forward = 0, Reverse = 1, Bidirectional = 2 };

// Reservation parameters chosen by the requester.
struct ReservationConfig {
  SibraTime expiration;           // absolute tick, encoded mod 2^16 on the wire
  Direction direction = Direction::Forward;
  BandwidthClass fwd_class;
  BandwidthClass rev_class;
  std::uint8_t reservation_index = 0;  // 4 bits, wraps per renewal

  void validate(SibraTime now) const;
};

inline constexpr std::uint64_t kSteadyDefaultLifetimeTicks = 45;  // 180 s
inline constexpr std::uint64_t kEphemeralMaxLifetimeTicks = 4;    // 16 s

// System-wide defaults. All of these are overridable per scenario.
struct Defaults {
  static constexpr int max_steady_paths = 5;         // simultaneous per AS
  static constexpr double pending_sweep_ms = 300.0;  // stale pending cutoff
  static constexpr double slack_frac = 0.05;         // per-partition admission slack
  static constexpr double rho = 0.5;                 // down-path local/external split
  static constexpr int violation_threshold = 8;
  static constexpr std::uint64_t blacklist_ticks = 16;
  static constexpr int monitored_class_count = 4;
  static constexpr double overuse_tolerance = 0.05;  // of class rate
  static constexpr double probe_rate = 0.08;         // renewal filter probes per packet
  static constexpr std::size_t bloom_capacity = 10000;
  static constexpr double bloom_fp_rate = 0.01;       // seen-flows filter
  static constexpr double renewal_fp_rate = 0.001;    // renewal filters (probed often)
};

}  // namespace sibra
