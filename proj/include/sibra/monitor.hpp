// monitor.hpp -- per-AS policing. Four mechanisms:
//   1. per-neighbor aggregate usage vs total reserved (cheap, always on)
//   2. per-flow rate checks for a few randomly monitored ephemeral classes
//   3. renewal dual-use probing against per-(class, expiration) Bloom filters
//   4. pushback notifications toward the traffic origin
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <unordered_map>

#include "sibra/bloom.hpp"
#include "sibra/events.hpp"

namespace sibra {

struct MonitorConfig {
  int violation_threshold = Defaults::violation_threshold;
  std::uint64_t blacklist_ticks = Defaults::blacklist_ticks;
  double overuse_tolerance = Defaults::overuse_tolerance;
  double probe_rate = Defaults::probe_rate;
  int monitored_class_count = Defaults::monitored_class_count;
  std::size_t filter_capacity = Defaults::bloom_capacity;
  double renewal_fp = Defaults::renewal_fp_rate;
};

struct BudgetCheck {
  bool ok = true;
  double exceeded_by_kbps = 0;
};

enum class FlowVerdict : std::uint8_t { Ok, Blacklisted };
enum class DualUseVerdict : std::uint8_t { Clean, Suspicious };

struct PushbackNote {
  AsId from = 0;
  AsId to = 0;  // previous hop toward the origin
  FlowId flow{};
};

class Monitor {
 public:
  Monitor(AsId self, MonitorConfig cfg, EventLog* log);

  // --- per-neighbor aggregate ---------------------------------------------
  void set_reserved(AsId neighbor, double kbps);
  void note_neighbor_traffic(AsId neighbor, double bits, SibraTime now);
  // Compares the average rate over the last closed interval (falling back to
  // the running interval) against the reserved total; equality passes.
  BudgetCheck check_neighbor_budget(AsId neighbor) const;
  void close_interval(SibraTime now);  // rotate usage counters at a tick edge

  // --- monitored ephemeral classes ----------------------------------------
  std::set<std::uint8_t> select_monitored_classes(std::mt19937_64& rng, int m);
  const std::set<std::uint8_t>& monitored_classes() const { return monitored_; }
  // Direct rate check; blacklists on violation.
  FlowVerdict flag_class_violation(const FlowId& flow, double avg_rate_kbps,
                                   BandwidthClass cls, SibraTime now);
  // Packet-driven form: accumulates bytes for monitored classes and flags as
  // soon as an interval's byte budget is exceeded.
  FlowVerdict note_flow_packet(const FlowId& flow, BandwidthClass cls, double bits,
                               SibraTime now);

  // --- renewal dual-use ----------------------------------------------------
  void record_renewal_observation(const FlowId& flow, std::uint8_t index,
                                  BandwidthClass cls, SibraTime exp_tick);
  // Probes renewal filters of comparable classes at expiration ticks strictly
  // after the packet's own. An honest sender rides its newest token, so only
  // Bloom false positives can hit it; a sender still using a pre-renewal
  // token is exposed at offset i = new_index - old_index.
  DualUseVerdict detect_dual_use(const FlowId& flow, std::uint8_t index, BandwidthClass cls,
                                 SibraTime exp_tick, SibraTime now, std::mt19937_64& rng);
  void rotate_renewal_filters(SibraTime now);  // drop filters for passed ticks
  int violation_count(const FlowId& flow) const;

  // --- blacklist ------------------------------------------------------------
  void blacklist_flow(const FlowId& flow, SibraTime now);
  bool blacklisted(const FlowId& flow, SibraTime now) const;

  // --- pushback --------------------------------------------------------------
  PushbackNote pushback(const FlowId& flow, AsId prev_as, SibraTime now);
  void add_watch(const FlowId& flow);
  bool watched(const FlowId& flow) const;

  const MonitorConfig& config() const { return cfg_; }

 private:
  struct NeighborUsage {
    double reserved_kbps = 0;
    double bits_current = 0;
    double rate_last_kbps = -1;  // <0 means no closed interval yet
  };

  BloomFilter& renewal_filter(std::uint8_t class_index, std::uint64_t exp_tick);

  AsId self_;
  MonitorConfig cfg_;
  EventLog* log_;
  std::map<AsId, NeighborUsage> neighbors_;
  std::uint64_t usage_tick_ = 0;
  std::set<std::uint8_t> monitored_;
  std::unordered_map<FlowId, double, FlowIdHash> interval_bits_;
  std::uint64_t flow_tick_ = 0;
  std::map<std::pair<std::uint8_t, std::uint64_t>, BloomFilter> renewal_;
  std::unordered_map<FlowId, int, FlowIdHash> violations_;
  std::unordered_map<FlowId, std::uint64_t, FlowIdHash> blacklist_until_;
  std::set<FlowId> watch_;
};

}  // namespace sibra
