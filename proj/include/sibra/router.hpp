// router.hpp -- per-AS control and data plane. One Router is one logical
// actor; every mutation happens on one event at a time. The data path
// (forward_data) touches only the packet, the AS key, the blacklist, and
// constant-size aggregates; per-flow tables are reached on the slowpath
// (admission, confirmation, first-sight activation, sweeps, reclaims).
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "sibra/bloom.hpp"
#include "sibra/events.hpp"
#include "sibra/fairshare.hpp"
#include "sibra/monitor.hpp"
#include "sibra/token.hpp"

namespace sibra {

struct DuplicateFlow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RouterConfig {
  double pending_sweep_ms = Defaults::pending_sweep_ms;
  int ell = 1;  // reclaim window, SIBRA seconds, valid 1..5
  double slack_frac = Defaults::slack_frac;
  std::size_t seen_capacity = Defaults::bloom_capacity;
  double seen_fp = Defaults::bloom_fp_rate;
  MonitorConfig monitor;
  std::uint64_t rng_seed = 0;
};

struct AdmitOutcome {
  bool admitted = false;
  ReservationToken token{};
  double offer_kbps = 0;
};

enum class DropReason : std::uint8_t {
  None = 0,
  NoToken = 1,
  BadToken = 2,
  Expired = 3,
  Blacklisted = 4,
};

struct ForwardOutcome {
  bool forwarded = false;
  DropReason reason = DropReason::None;
  AsId next = 0;  // egress neighbor when forwarded (0 = delivered locally)
};

class Router {
 public:
  Router(AsId self, MacKey key, RouterConfig cfg, EventLog* log);

  void add_link(AsId neighbor, LinkAnatomy link);
  bool has_link(AsId neighbor) const { return links_.count(neighbor) > 0; }

  // Admission for a fresh reservation request. Debits both the ingress and
  // egress neighbor entries, parks the flow in the pending table, appends a
  // token, and advances the hop cursor. A request already marked failed
  // upstream only collects this AS's bandwidth offer. Neighbor id 0 stands
  // for a local end (source or destination inside this AS).
  AdmitOutcome admit_reservation(SibraHeader& h, AsId ingress, AsId egress,
                                 const ShareInputs& shares, double now_ms);

  // Destination's confirmation traveling back: pending -> active.
  // Returns false when the pending entry is gone (e.g., already swept).
  bool confirm_reservation(const FlowId& flow, double now_ms);

  // Data-plane forwarding with token verification and first-sight activation.
  ForwardOutcome forward_data(SibraHeader& h, AsId from, double bits, double now_ms);

  std::size_t sweep_pending(double now_ms);
  std::size_t reclaim_expired(SibraTime now);

  AdmitOutcome renew_reservation(SibraHeader& h, AsId ingress, AsId egress, double now_ms);

  double apply_multiplexing(AsId neighbor) const;

  // Normalized congested-share computation; the instance method pins the
  // result for one wall second.
  static std::vector<double> compute_downpath_shares(const std::vector<ShareInputs>& active,
                                                     bool congested);
  std::vector<double> dynamic_downpath_share(const std::vector<ShareInputs>& active,
                                             bool congested, double now_ms);

  Monitor& monitor() { return monitor_; }
  const Monitor& monitor() const { return monitor_; }
  std::mt19937_64& rng() { return rng_; }
  AsId id() const { return self_; }
  const MacKey& key() const { return key_; }

  double reserved(AsId neighbor, PathKind kind) const;
  const LinkAnatomy& link(AsId neighbor) const;
  bool has_pending(const FlowId& flow) const { return pending_.count(flow) > 0; }
  bool is_active(const FlowId& flow) const { return accounting_.count(flow) > 0; }
  std::size_t pending_size() const { return pending_.size(); }
  std::size_t active_size() const { return accounting_.size(); }
  std::optional<std::uint8_t> active_index(const FlowId& flow) const;

 private:
  struct LinkEntry {
    LinkAnatomy link;
    double reserved_steady = 0;    // kbps
    double reserved_ephemeral = 0; // kbps
  };

  struct Entry {  // shared shape of pending and accounting rows
    BandwidthClass fwd_cls;
    BandwidthClass rev_cls;
    Direction direction = Direction::Forward;
    SibraTime exp;
    AsId ingress = 0;
    AsId egress = 0;
    std::uint8_t index = 0;
    double created_ms = 0;       // pending: creation time for the sweep
    std::uint64_t confirm_tick = 0;
    bool sighted = false;        // data seen since activation
  };

  double needed_kbps(const Entry& e) const;
  bool fits(AsId neighbor, PathKind kind, double kbps) const;
  void debit(AsId neighbor, PathKind kind, double kbps, const FlowId& flow, double now_ms);
  void credit(AsId neighbor, PathKind kind, double kbps, const FlowId& flow, double now_ms);
  void credit_entry(const Entry& e, const FlowId& flow, double now_ms);
  double remaining(AsId neighbor, PathKind kind) const;
  double offer_for(AsId ingress, AsId egress, PathKind kind) const;
  void log(EventKind kind, const FlowId& flow, AsId neighbor, PathKind part, double kbps,
           double now_ms, std::uint8_t detail = 0);
  std::string flow_key(const FlowId& flow) const;
  void advance_windows(SibraTime now);

  AsId self_;
  MacKey key_;
  RouterConfig cfg_;
  EventLog* log_;
  Monitor monitor_;
  std::mt19937_64 rng_;
  std::map<AsId, LinkEntry> links_;
  std::unordered_map<FlowId, Entry, FlowIdHash> pending_;
  std::unordered_map<FlowId, Entry, FlowIdHash> accounting_;
  BloomFilter seen_cur_;
  BloomFilter seen_prev_;
  std::uint64_t next_rotation_;
  std::vector<double> share_cache_;
  double share_cache_ms_ = -1e18;
};

}  // namespace sibra
