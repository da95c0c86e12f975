#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

#include "sibra/router.hpp"
#include "sibra/simnet.hpp"

namespace sibra {

namespace {

constexpr double kTickMs = kSibraSecond * 1000.0;

enum class Role {
  DocSource,   // capability probes at the configured request rate
  DocFlood,    // junk requests far above the sender's own limit
  Transfer,    // one reservation, then a paced transfer until the bits run out
  PairHolder,  // keeps a reservation alive and trickles data into it
  Session,     // request/use/expire/re-request loop (loss study)
  Churn,       // re-reserves its full share every expiry (contention load)
  Probe,       // per-tick bandwidth probe, never holds what it is offered
  Dill,        // one reservation renewed every tick
};

struct SourceSpec {
  Role role = Role::Session;
  AsId leaf = 0;
  std::vector<AsId> path;  // leaf .. destination AS
  double sbw_kbps = 0;     // this spec's slice of the leaf's steady path
  double share_kbps = 0;   // ephemeral bound along the path
  ShareInputs shares;
  BandwidthClass ask{PathKind::Ephemeral, 0};
  double rate_kbps = 0;         // paced data rate once granted
  std::uint64_t exp_ahead = 4;  // requested lifetime, ticks
  double limit_kbps = 0;        // request-channel allowance (5% of sbw)
  double period_ms = 0;         // launch cadence for repeating roles
  double hop_q = 0;             // per-hop loss, calibrated to the packet rate
  bool accept_offers = false;
  bool want_confirm = true;
  double remaining_bits = std::numeric_limits<double>::infinity();
};

struct SimFlow {
  int spec = -1;
  SibraHeader header;
  double launch_ms = 0;
  double rate_kbps = 0;
  double remaining_bits = std::numeric_limits<double>::infinity();
  double exp_wall_ms = 0;
  bool confirmed = false;
  bool settled = false;  // reply or timeout processed
  bool counted = false;  // contributes to the success denominator
  bool retried = false;
  double done_ms = -1;
};

struct Bucket {
  double rate_kbps = 0;
  double level_bits = 0;
  double last_ms = 0;
};

struct Ev {
  double t = 0;
  std::uint64_t seq = 0;
  std::function<void()> fn;
};

struct EvOrder {
  bool operator()(const Ev& x, const Ev& y) const {
    if (x.t != y.t) return x.t > y.t;
    return x.seq > y.seq;
  }
};

class Engine {
 public:
  Engine(const Topology& topo, const Scenario& sc)
      : topo_(topo), sc_(sc), rng_(sc.seed ^ 0x6d5f3791a24e8f01ull) {}

  Metrics run();
  std::vector<std::pair<double, double>> lowerbound_jump();

 private:
  // --- construction ---------------------------------------------------------
  void build_network();
  void index_steady_load();
  std::vector<AsId> route(AsId src_leaf, AsId dst) const;
  double path_share(const std::vector<AsId>& path, double sbw_u, int src_isd) const;
  SourceSpec make_spec(Role role, AsId leaf, AsId dst, double sbw_slice);
  std::vector<AsId> leaves_by_weight(int isd) const;  // descending sbw, then id

  // --- event plumbing -------------------------------------------------------
  void at(double t, std::function<void()> fn);
  void every(double first, double period, double until, const std::function<void()>& fn);
  void drain(double until_ms);
  double draw() { return static_cast<double>(rng_() >> 11) * 0x1p-53; }

  // --- network actions ------------------------------------------------------
  Router& router(AsId id) { return routers_.at(id); }
  double delay(AsId a, AsId b) const { return delays_.at(order(a, b)); }
  static std::pair<AsId, AsId> order(AsId a, AsId b) { return std::minmax(a, b); }
  bool bucket_take(AsId as, int spec, double bits);
  int new_flow(int spec);
  void launch(int f);
  void request_hop(int f, std::size_t k);
  void reply_hop(int f, std::size_t k);
  void setup_finished(int f);
  void setup_timeout(int f);
  double relaunch_horizon(Role role) const;
  void data_burst(int f, double cadence_ms);
  void renew_tick(int f);
  void probe_tick(int spec);

  // --- drivers --------------------------------------------------------------
  void schedule_maintenance();
  void drive_doc();
  void drive_coremelt();
  void drive_lowerbound(bool jump);
  void drive_loss();
  void drive_dill();

  // --- results --------------------------------------------------------------
  double waste_from_log(double end_ms) const;
  Metrics finish();

  const Topology& topo_;
  Scenario sc_;
  std::mt19937_64 rng_;
  EventLog log_;
  std::map<AsId, Router> routers_;
  std::map<std::pair<AsId, AsId>, double> delays_;
  std::map<std::pair<AsId, AsId>, double> sold_kbps_;  // steady sold per link
  std::map<int, double> isd_sold_;                     // per-ISD leaf total
  std::vector<SourceSpec> specs_;
  std::vector<SimFlow> flows_;
  std::map<std::pair<AsId, int>, Bucket> buckets_;
  std::map<std::pair<AsId, AsId>, std::vector<double>> link_bits_;  // per tick
  std::priority_queue<Ev, std::vector<Ev>, EvOrder> q_;
  std::uint64_t seq_ = 0;
  double now_ = 0;
  double end_ms_ = 0;
  std::uint64_t flow_counter_ = 0;
  int attempts_ = 0;
  int successes_ = 0;
  int renewals_ok_ = 0;
  int renewals_tried_ = 0;
  double transfer_time_s_ = 0;
  int transfers_done_ = 0;
  int transfers_started_ = 0;
  std::vector<std::pair<double, double>> timeline_;
};

// --- construction -----------------------------------------------------------

void Engine::build_network() {
  end_ms_ = sc_.duration_s * 1000.0;
  // pending reservations must outlive the slowest setup round trip, or the
  // sweeper eats them before the confirmation walks back
  double max_oneway = 0;
  for (const auto& p : topo_.steady_paths) {
    double d = 0;
    for (std::size_t i = 0; i + 1 < p.path.size(); ++i) {
      const TopoLink* l = topo_.find_link(p.path[i], p.path[i + 1]);
      d += l->delay_ms;
    }
    max_oneway = std::max(max_oneway, d);
  }
  double sweep_ms = std::max(Defaults::pending_sweep_ms, 3.0 * max_oneway);
  for (const auto& as : topo_.ases) {
    RouterConfig cfg;
    cfg.pending_sweep_ms = sweep_ms;
    cfg.rng_seed = sc_.seed * 0x9e3779b9ull + as.id;
    routers_.emplace(std::piecewise_construct, std::forward_as_tuple(as.id),
                     std::forward_as_tuple(as.id, MacKey::derive(0xc0ffee ^ (as.id * 7919ull)),
                                           cfg, &log_));
  }
  for (const auto& l : topo_.links) {
    routers_.at(l.a).add_link(l.b, l.anatomy);
    routers_.at(l.b).add_link(l.a, l.anatomy);
    delays_[order(l.a, l.b)] = l.delay_ms;
    std::uint64_t ticks = static_cast<std::uint64_t>(end_ms_ / kTickMs) + 3;
    link_bits_[order(l.a, l.b)] = std::vector<double>(ticks, 0.0);
  }
  index_steady_load();
}

void Engine::index_steady_load() {
  for (const auto& p : topo_.steady_paths) {
    for (std::size_t i = 0; i + 1 < p.path.size(); ++i)
      sold_kbps_[order(p.path[i], p.path[i + 1])] += p.sbw_kbps;
    isd_sold_[topo_.find_as(p.leaf)->isd] += p.sbw_kbps;
  }
}

std::vector<AsId> Engine::route(AsId src_leaf, AsId dst) const {
  const SteadyPath* up = topo_.steady_for(src_leaf);
  if (!up) throw std::invalid_argument("source has no steady path");
  std::vector<AsId> path = up->path;
  if (path.back() == dst) return path;

  const TopoAs* d = topo_.find_as(dst);
  if (!d) throw std::invalid_argument("unknown destination");
  if (d->core) {
    const TopoCorePath* cp = topo_.core_between(path.back(), dst);
    if (!cp) throw std::invalid_argument("no core path between ISDs");
    path.insert(path.end(), cp->path.begin() + 1, cp->path.end());
    return path;
  }
  const SteadyPath* dp = topo_.steady_for(dst);
  if (!dp) throw std::invalid_argument("destination has no steady path");
  const std::vector<AsId>& ddown = dp->path;  // dst first, core last
  AsId src_core = path.back();
  AsId dst_core = ddown.back();

  if (src_core == dst_core) {
    // shortcut at the first AS shared by the two steady paths
    for (std::size_t i = 0; i < path.size(); ++i) {
      auto hit = std::find(ddown.begin(), ddown.end(), path[i]);
      if (hit == ddown.end()) continue;
      path.resize(i + 1);
      for (auto it = std::make_reverse_iterator(hit); it != ddown.rend(); ++it)
        path.push_back(*it);
      return path;
    }
    throw std::invalid_argument("steady paths never meet below their core");
  }
  const TopoCorePath* cp = topo_.core_between(src_core, dst_core);
  if (!cp) throw std::invalid_argument("no core path between ISDs");
  path.insert(path.end(), cp->path.begin() + 1, cp->path.end());
  path.insert(path.end(), ddown.rbegin() + 1, ddown.rend());
  return path;
}

double Engine::path_share(const std::vector<AsId>& path, double sbw_u, int src_isd) const {
  // The guaranteed ephemeral bound: at every link, this source holds
  // sbw_u / (steady sold over the link) of the link's ephemeral partition.
  double bound = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const TopoLink* l = topo_.find_link(path[i], path[i + 1]);
    double sold = sold_kbps_.count(order(path[i], path[i + 1]))
                      ? sold_kbps_.at(order(path[i], path[i + 1]))
                      : 0.0;
    bool core_link = topo_.find_as(path[i])->core && topo_.find_as(path[i + 1])->core;
    if (core_link) sold = std::max(sold, isd_sold_.at(src_isd));
    sold = std::max(sold, sbw_u);
    bound = std::min(bound, sbw_u * l->anatomy.beta() * l->anatomy.steady_kbps() / sold);
  }
  return bound;
}

SourceSpec Engine::make_spec(Role role, AsId leaf, AsId dst, double sbw_slice) {
  SourceSpec s;
  s.role = role;
  s.leaf = leaf;
  s.path = route(leaf, dst);
  s.sbw_kbps = sbw_slice;
  int isd = topo_.find_as(leaf)->isd;
  s.share_kbps = std::min(16.0 * sbw_slice, path_share(s.path, sbw_slice, isd));
  s.limit_kbps = sc_.request_limit_frac * sbw_slice;
  std::size_t hops = s.path.size() - 1;
  s.hop_q = sc_.loss_rate > 0 ? 1.0 - std::pow(1.0 - sc_.loss_rate, 1.0 / hops) : 0.0;

  // Aggregates equivalent to the per-link bound, so the admission formulas
  // reproduce it: Eq-2/Eq-3 inputs are solved for the observed bottleneck.
  double total = isd_sold_.at(isd);
  s.shares.sBW_u = sbw_slice;
  s.shares.sBW_S = total;
  s.shares.sBW_ustar = total;
  double synthetic = s.share_kbps * total / (16.0 * sbw_slice);
  s.shares.sBW_C = synthetic;
  s.shares.sBW_d = synthetic;
  s.shares.C_SD = 1;
  s.shares.C_starD = 1;
  return s;
}

std::vector<AsId> Engine::leaves_by_weight(int isd) const {
  std::vector<std::pair<double, AsId>> v;
  for (const auto& a : topo_.ases)
    if (a.leaf && a.isd == isd)
      v.push_back({topo_.steady_for(a.id)->sbw_kbps, a.id});
  std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  std::vector<AsId> out;
  for (const auto& [w, id] : v) out.push_back(id);
  return out;
}

// --- event plumbing ---------------------------------------------------------

void Engine::at(double t, std::function<void()> fn) {
  q_.push({std::max(t, now_), seq_++, std::move(fn)});
}

void Engine::every(double first, double period, double until,
                   const std::function<void()>& fn) {
  if (first > until) return;
  at(first, [this, period, until, fn] {
    fn();
    every(now_ + period, period, until, fn);
  });
}

void Engine::drain(double until_ms) {
  while (!q_.empty() && q_.top().t <= until_ms) {
    Ev e = std::move(const_cast<Ev&>(q_.top()));
    q_.pop();
    now_ = e.t;
    e.fn();
  }
  now_ = until_ms;
}

// --- network actions --------------------------------------------------------

bool Engine::bucket_take(AsId as, int spec, double bits) {
  auto key = std::make_pair(as, spec);
  auto it = buckets_.find(key);
  if (it == buckets_.end()) {
    Bucket b;
    b.rate_kbps = specs_[spec].limit_kbps;
    b.level_bits = std::max(b.rate_kbps * 1000.0, 2048.0);  // at least two packets
    b.last_ms = now_;
    it = buckets_.emplace(key, b).first;
  }
  Bucket& b = it->second;
  double cap = std::max(b.rate_kbps * 1000.0, 2048.0);
  b.level_bits = std::min(cap, b.level_bits + b.rate_kbps * (now_ - b.last_ms));
  b.last_ms = now_;
  if (b.level_bits < bits) return false;
  b.level_bits -= bits;
  return true;
}

int Engine::new_flow(int spec) {
  SimFlow f;
  f.spec = spec;
  std::uint64_t n = ++flow_counter_;
  for (int i = 0; i < 8; ++i) f.header.flow.bytes[i] = (n >> (56 - 8 * i)) & 0xff;
  for (int i = 0; i < 8; ++i) f.header.flow.bytes[8 + i] = (sc_.seed >> (56 - 8 * i)) & 0xff;
  const SourceSpec& s = specs_[spec];
  f.header.expiration = {quantize_time(now_ / 1000.0).ticks + s.exp_ahead};
  f.header.fwd_class = s.ask;
  f.header.rev_class = s.ask;
  f.header.direction = Direction::Forward;
  f.header.reservation_index = 0;
  f.header.is_request = true;
  f.launch_ms = now_;
  f.rate_kbps = s.rate_kbps;
  f.remaining_bits = s.remaining_bits;
  f.exp_wall_ms = (f.header.expiration.ticks + 1) * kTickMs;
  flows_.push_back(f);
  return static_cast<int>(flows_.size()) - 1;
}

void Engine::launch(int f) {
  const SourceSpec& s = specs_[flows_[f].spec];
  if (s.role == Role::DocSource && now_ <= end_ms_ - sc_.timeout_s * 1000.0 - 2000.0) {
    flows_[f].counted = true;
    ++attempts_;
  }
  if (s.role == Role::Transfer) ++transfers_started_;
  if (s.want_confirm) {
    int idx = f;
    at(now_ + sc_.timeout_s * 1000.0, [this, idx] { setup_timeout(idx); });
  }
  request_hop(f, 0);
}

void Engine::request_hop(int f, std::size_t k) {
  SimFlow& fl = flows_[f];
  const SourceSpec& s = specs_[fl.spec];
  AsId as = s.path[k];
  if (!bucket_take(as, fl.spec, sc_.request_bytes * 8.0)) return;  // rate-limited away
  AsId ingress = k > 0 ? s.path[k - 1] : 0;
  AsId egress = k + 1 < s.path.size() ? s.path[k + 1] : 0;
  router(as).admit_reservation(fl.header, ingress, egress, s.shares, now_);
  if (k + 1 == s.path.size()) {
    if (s.role != Role::DocFlood) at(now_, [this, f, k] { reply_hop(f, k); });
    return;
  }
  if (s.hop_q > 0 && draw() < s.hop_q) return;  // lost on the wire
  at(now_ + delay(as, s.path[k + 1]), [this, f, k] { request_hop(f, k + 1); });
}

void Engine::reply_hop(int f, std::size_t k) {
  SimFlow& fl = flows_[f];
  const SourceSpec& s = specs_[fl.spec];
  AsId as = s.path[k];
  if (s.want_confirm && !fl.header.failed) router(as).confirm_reservation(fl.header.flow, now_);
  if (k == 0) {
    setup_finished(f);
    return;
  }
  if (s.hop_q > 0 && draw() < s.hop_q) return;
  at(now_ + delay(as, s.path[k - 1]), [this, f, k] { reply_hop(f, k - 1); });
}

void Engine::setup_finished(int f) {
  SimFlow& fl = flows_[f];
  const SourceSpec& s = specs_[fl.spec];
  if (fl.settled) return;
  fl.settled = true;

  if (fl.header.failed) {
    if (s.accept_offers && !fl.retried) {
      double offer = std::numeric_limits<double>::infinity();
      for (const auto& o : fl.header.offers) offer = std::min(offer, o.offered_kbps);
      if (std::isfinite(offer) && offer > 0) {
        int nf = new_flow(fl.spec);
        flows_[nf].retried = true;
        flows_[nf].header.fwd_class = class_for_rate(PathKind::Ephemeral, offer);
        flows_[nf].header.rev_class = flows_[nf].header.fwd_class;
        flows_[nf].rate_kbps = std::min(fl.rate_kbps, offer);
        launch(nf);
        return;
      }
    }
    if (s.role == Role::Session || s.role == Role::Churn || s.role == Role::PairHolder) {
      int spec = fl.spec;
      at(now_ + sc_.timeout_s * 1000.0, [this, spec] {
        if (now_ < relaunch_horizon(specs_[spec].role)) launch(new_flow(spec));
      });
    }
    return;
  }

  if (s.role == Role::DocSource) {
    if (fl.counted && !fl.header.tokens.empty()) ++successes_;
    return;
  }
  fl.confirmed = true;
  double cadence = s.role == Role::Transfer ? 100.0 : 500.0;
  at(now_, [this, f, cadence] { data_burst(f, cadence); });
  if (s.role == Role::Dill) {
    double next = (quantize_time(now_ / 1000.0).ticks + 1) * kTickMs + 200.0;
    at(next, [this, f] { renew_tick(f); });
  }
  if (s.role == Role::Session || s.role == Role::Churn || s.role == Role::PairHolder) {
    // the next generation starts just after the tick-edge reclaim frees this one
    int spec = fl.spec;
    at(fl.exp_wall_ms + 1.0, [this, spec] {
      if (now_ < relaunch_horizon(specs_[spec].role)) launch(new_flow(spec));
    });
  }
}

double Engine::relaunch_horizon(Role role) const {
  // sessions wind down early enough for their final reservation to expire
  // inside the run; churn and pair load keeps pressing to the very end
  if (role == Role::Session) return end_ms_ - (kEphemeralMaxLifetimeTicks + 2) * kTickMs;
  return end_ms_;
}

void Engine::setup_timeout(int f) {
  SimFlow& fl = flows_[f];
  if (fl.settled) return;
  fl.settled = true;
  const SourceSpec& s = specs_[fl.spec];
  if (s.role == Role::Session || s.role == Role::Churn) {
    int spec = fl.spec;
    if (now_ < end_ms_) launch(new_flow(spec));
  }
}

void Engine::data_burst(int f, double cadence_ms) {
  SimFlow& fl = flows_[f];
  const SourceSpec& s = specs_[fl.spec];
  if (now_ >= end_ms_ || now_ >= fl.exp_wall_ms) return;
  double bits = std::min(fl.rate_kbps * cadence_ms, fl.remaining_bits);
  if (bits <= 0) return;

  SibraHeader d = fl.header;
  d.is_request = false;
  d.hops = 0;
  double path_delay = 0;
  bool ok = true;
  for (std::size_t k = 0; k < s.path.size(); ++k) {
    AsId from = k > 0 ? s.path[k - 1] : 0;
    auto out = router(s.path[k]).forward_data(d, from, bits, now_);
    if (!out.forwarded) {
      ok = false;
      break;
    }
    if (k + 1 < s.path.size()) {
      path_delay += delay(s.path[k], s.path[k + 1]);
      auto& per_tick = link_bits_.at(order(s.path[k], s.path[k + 1]));
      std::size_t tick = static_cast<std::size_t>(now_ / kTickMs);
      if (tick < per_tick.size()) per_tick[tick] += bits;
    }
  }
  if (ok) {
    fl.remaining_bits -= bits;
    if (fl.remaining_bits <= 0 && fl.done_ms < 0) {
      fl.done_ms = now_ + path_delay;
      if (s.role == Role::Transfer) {
        ++transfers_done_;
        transfer_time_s_ = (fl.done_ms - fl.launch_ms) / 1000.0;
      }
      return;
    }
  }
  at(now_ + cadence_ms, [this, f, cadence_ms] { data_burst(f, cadence_ms); });
}

void Engine::renew_tick(int f) {
  SimFlow& fl = flows_[f];
  const SourceSpec& s = specs_[fl.spec];
  if (now_ >= end_ms_) return;
  ++renewals_tried_;

  SibraHeader rn;
  rn.flow = fl.header.flow;
  rn.expiration = {quantize_time(now_ / 1000.0).ticks + s.exp_ahead};
  rn.fwd_class = fl.header.fwd_class;
  rn.rev_class = fl.header.rev_class;
  rn.direction = Direction::Forward;
  rn.reservation_index = (fl.header.reservation_index + 1) & 0xf;
  rn.is_request = true;

  bool ok = true;
  for (std::size_t k = 0; k < s.path.size() && ok; ++k) {
    AsId ingress = k > 0 ? s.path[k - 1] : 0;
    AsId egress = k + 1 < s.path.size() ? s.path[k + 1] : 0;
    ok = router(s.path[k]).renew_reservation(rn, ingress, egress, now_).admitted;
  }
  if (ok) {
    ++renewals_ok_;
    fl.header.tokens = rn.tokens;
    fl.header.reservation_index = rn.reservation_index;
    fl.header.expiration = rn.expiration;
    fl.exp_wall_ms = (rn.expiration.ticks + 1) * kTickMs;
    timeline_.push_back({now_ / 1000.0, rn.fwd_class.rate_kbps()});
  }
  at(now_ + kTickMs, [this, f] { renew_tick(f); });
}

void Engine::probe_tick(int spec) {
  const SourceSpec& s = specs_[spec];
  if (now_ >= end_ms_) return;
  int f = new_flow(spec);
  SimFlow& fl = flows_[f];
  fl.header.fwd_class = {PathKind::Ephemeral, kEphemeralClassCount - 1};
  fl.header.rev_class = fl.header.fwd_class;
  fl.settled = true;  // bookkeeping only; never confirmed, never used

  for (std::size_t k = 0; k < s.path.size(); ++k) {
    AsId ingress = k > 0 ? s.path[k - 1] : 0;
    AsId egress = k + 1 < s.path.size() ? s.path[k + 1] : 0;
    router(s.path[k]).admit_reservation(fl.header, ingress, egress, s.shares, now_);
  }
  double offer = std::numeric_limits<double>::infinity();
  for (const auto& o : fl.header.offers) offer = std::min(offer, o.offered_kbps);
  if (!std::isfinite(offer)) offer = 0;
  timeline_.push_back({now_ / 1000.0, offer});
}

// --- drivers ----------------------------------------------------------------

void Engine::schedule_maintenance() {
  every(100.0, 100.0, end_ms_ + 2000.0, [this] {
    for (auto& [id, r] : routers_) r.sweep_pending(now_);
  });
  every(kTickMs, kTickMs, end_ms_ + 2000.0, [this] {
    SibraTime t = quantize_time(now_ / 1000.0);
    for (auto& [id, r] : routers_) {
      r.reclaim_expired(t);
      r.monitor().close_interval(t);
    }
  });
}

void Engine::drive_doc() {
  bool inter = sc_.kind == ScenarioKind::DocInter;
  if (inter && topo_.isd_count() < 2)
    throw std::invalid_argument("inter-ISD scenario needs at least two ISDs");

  int src_isd = 1;
  int dst_isd = inter ? 2 : 1;
  auto dst_leaves = leaves_by_weight(dst_isd);
  auto src_leaves = leaves_by_weight(src_isd);
  if (dst_leaves.empty() || src_leaves.empty())
    throw std::invalid_argument("topology has no usable leaves");
  AsId victim = dst_leaves.front();

  std::vector<AsId> pool;
  for (AsId id : src_leaves)
    if (id != victim) pool.push_back(id);
  int nb = std::min<int>(sc_.benign_count, static_cast<int>(pool.size()));
  if (nb + sc_.attacker_count > static_cast<int>(pool.size()))
    throw std::invalid_argument("not enough leaves for the requested populations");

  for (int i = 0; i < nb; ++i) {
    SourceSpec s = make_spec(Role::DocSource, pool[i], victim,
                             topo_.steady_for(pool[i])->sbw_kbps);
    s.ask = {PathKind::Steady, 0};
    s.exp_ahead = 2;
    s.want_confirm = false;
    double limited_hz = s.limit_kbps / (sc_.request_bytes * 8.0 / 1000.0);
    s.period_ms = 1000.0 / std::min(sc_.request_rate_hz, 0.95 * limited_hz);
    specs_.push_back(s);
  }
  // attackers fill from the light end of the weight order
  for (int i = 0; i < sc_.attacker_count; ++i) {
    AsId leaf = pool[pool.size() - 1 - i];
    SourceSpec s = make_spec(Role::DocFlood, leaf, victim, topo_.steady_for(leaf)->sbw_kbps);
    s.ask = {PathKind::Ephemeral, 10};  // oversized on purpose
    s.exp_ahead = 2;
    s.want_confirm = false;
    double limited_hz = s.limit_kbps / (sc_.request_bytes * 8.0 / 1000.0);
    s.period_ms = 1000.0 / (sc_.flood_factor * limited_hz);
    specs_.push_back(s);
  }
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    double start = 10.0 + static_cast<double>(rng_() % 100);
    every(start, specs_[i].period_ms, end_ms_,
          [this, i] { launch(new_flow(static_cast<int>(i))); });
  }
}

void Engine::drive_coremelt() {
  if (topo_.isd_count() < 2)
    throw std::invalid_argument("the congested-core scenario needs two ISDs");
  auto src_leaves = leaves_by_weight(1);
  auto dst_leaves = leaves_by_weight(2);
  if (src_leaves.size() < 2 || dst_leaves.size() < 2)
    throw std::invalid_argument("need a benign pair and at least one attacker slot per side");

  SourceSpec b = make_spec(Role::Transfer, src_leaves[0], dst_leaves[0],
                           topo_.steady_for(src_leaves[0])->sbw_kbps);
  b.ask = class_for_rate(PathKind::Ephemeral, sc_.reservation_kbps);
  b.rate_kbps = sc_.reservation_kbps;
  b.remaining_bits = sc_.transfer_bytes * 8.0;
  specs_.push_back(b);
  at(100.0, [this] { launch(new_flow(0)); });

  std::vector<AsId> asrc(src_leaves.begin() + 1, src_leaves.end());
  std::vector<AsId> adst(dst_leaves.begin() + 1, dst_leaves.end());
  std::map<AsId, int> pairs_on;
  std::vector<std::pair<AsId, AsId>> pairs;
  for (int p = 0; p < sc_.attacker_pairs; ++p) {
    AsId s = asrc[p % asrc.size()];
    pairs.push_back({s, adst[p % adst.size()]});
    pairs_on[s]++;
  }
  for (int p = 0; p < sc_.attacker_pairs; ++p) {
    auto [src, dst] = pairs[p];
    double slice = topo_.steady_for(src)->sbw_kbps / pairs_on[src];
    SourceSpec s = make_spec(Role::PairHolder, src, dst, slice);
    s.ask = class_for_rate(PathKind::Ephemeral, sc_.attacker_kbps);
    s.rate_kbps = sc_.attacker_send_kbps;
    s.accept_offers = true;
    specs_.push_back(s);
    int idx = static_cast<int>(specs_.size()) - 1;
    at(static_cast<double>(rng_() % 80), [this, idx] { launch(new_flow(idx)); });
  }
}

void Engine::drive_lowerbound(bool jump) {
  auto leaves = leaves_by_weight(1);
  if (leaves.size() < 2) throw std::invalid_argument("need a probe leaf and attacker slots");
  AsId benign = leaves.front();
  AsId core = topo_.steady_for(benign)->path.back();

  SourceSpec probe = make_spec(Role::Probe, benign, core, topo_.steady_for(benign)->sbw_kbps);
  specs_.push_back(probe);
  every(500.0, kTickMs, end_ms_, [this] { probe_tick(0); });

  std::vector<AsId> slots(leaves.begin() + 1, leaves.end());
  int full = std::min<int>(jump ? sc_.attacker_count * 10 : sc_.attacker_count,
                           static_cast<int>(slots.size()));
  int initial = jump ? std::min(sc_.attacker_count, full) : full;
  for (int i = 0; i < full; ++i) {
    AsId leaf = slots[i];
    SourceSpec s = make_spec(Role::Churn, leaf, core, topo_.steady_for(leaf)->sbw_kbps);
    double floor_rate = 0;
    for (int c = 0; c < kEphemeralClassCount; ++c)
      if (ephemeral_class_rate(c) <= s.share_kbps * (1 + 1e-12))
        floor_rate = ephemeral_class_rate(c);
    if (floor_rate <= 0) continue;
    s.ask = class_for_rate(PathKind::Ephemeral, floor_rate);
    s.rate_kbps = floor_rate * 0.5;
    s.exp_ahead = 2;
    specs_.push_back(s);
    int idx = static_cast<int>(specs_.size()) - 1;
    double start = i < initial ? 50.0 + static_cast<double>(rng_() % 200)
                               : end_ms_ / 2.0 + static_cast<double>(rng_() % 200);
    at(start, [this, idx] { launch(new_flow(idx)); });
  }
}

void Engine::drive_loss() {
  for (const auto& sp : topo_.steady_paths) {
    SourceSpec s = make_spec(Role::Session, sp.leaf, sp.path.back(), sp.sbw_kbps);
    double floor_rate = 0;
    for (int c = 0; c < kEphemeralClassCount; ++c)
      if (ephemeral_class_rate(c) <= s.share_kbps * (1 + 1e-12))
        floor_rate = ephemeral_class_rate(c);
    if (floor_rate <= 0) continue;
    s.ask = class_for_rate(PathKind::Ephemeral, std::min(floor_rate, 256.0));
    s.rate_kbps = s.ask.rate_kbps() * 0.8;
    specs_.push_back(s);
    int idx = static_cast<int>(specs_.size()) - 1;
    at(static_cast<double>(rng_() % 400), [this, idx] { launch(new_flow(idx)); });
  }
  if (specs_.empty()) throw std::invalid_argument("topology offers no session paths");
}

void Engine::drive_dill() {
  auto leaves = leaves_by_weight(1);
  if (leaves.empty()) throw std::invalid_argument("no leaf to run the renewal loop from");
  AsId benign = leaves.front();
  AsId core = topo_.steady_for(benign)->path.back();
  SourceSpec s = make_spec(Role::Dill, benign, core, topo_.steady_for(benign)->sbw_kbps);
  s.ask = {PathKind::Ephemeral, 0};
  s.rate_kbps = 128.0;
  s.exp_ahead = 2;
  specs_.push_back(s);
  at(100.0, [this] { launch(new_flow(0)); });
}

// --- results ----------------------------------------------------------------

double Engine::waste_from_log(double end_ms) const {
  struct Epoch {
    double t0 = 0;
    double rate = 0;
    bool used = false;
    bool open = false;
  };
  std::map<std::pair<AsId, std::string>, Epoch> live;
  double wasted = 0, total = 0;
  auto close = [&](Epoch& e, double t1) {
    double span = std::max(0.0, t1 - e.t0) / 1000.0;
    total += e.rate * span;
    if (!e.used) wasted += e.rate * span;
    e.open = false;
  };
  for (const auto& ev : log_.events()) {
    auto key = std::make_pair(ev.as, ev.flow.hex());
    switch (ev.kind) {
      case EventKind::Admit: {
        Epoch& e = live[key];
        if (e.open) close(e, ev.t_ms);
        e = {ev.t_ms, ev.kbps, false, true};
        break;
      }
      case EventKind::Forward: {
        auto it = live.find(key);
        if (it != live.end() && it->second.open) it->second.used = true;
        break;
      }
      case EventKind::Sweep:
      case EventKind::Reclaim:
      case EventKind::Expire: {
        auto it = live.find(key);
        if (it != live.end() && it->second.open) close(it->second, ev.t_ms);
        break;
      }
      default:
        break;
    }
  }
  for (auto& [key, e] : live)
    if (e.open) close(e, end_ms);
  return total > 0 ? wasted / total : 0.0;
}

Metrics Engine::finish() {
  Metrics m;
  if (attempts_ > 0) m.success_ratio = static_cast<double>(successes_) / attempts_;
  if (transfers_started_ > 0)
    m.success_ratio = static_cast<double>(transfers_done_) / transfers_started_;
  if (renewals_tried_ > 0)
    m.success_ratio = static_cast<double>(renewals_ok_) / renewals_tried_;
  m.transfer_time_s = transfer_time_s_;
  m.r_waste = waste_from_log(end_ms_ + 2000.0);
  m.reservable_kbps = timeline_;
  if (!timeline_.empty() && timeline_.back().second > 0)
    m.benign_class = class_for_rate(PathKind::Ephemeral, timeline_.back().second).index;

  double max_util = 0;
  for (const auto& [key, per_tick] : link_bits_) {
    const TopoLink* l = topo_.find_link(key.first, key.second);
    double eph_bits_per_tick = l->anatomy.ephemeral_kbps() * 1000.0 * kSibraSecond;
    for (double bits : per_tick) max_util = std::max(max_util, bits / eph_bits_per_tick);
  }

  double end_s = end_ms_ / 1000.0;
  m.rows.push_back({end_s, "success_ratio", m.success_ratio});
  m.rows.push_back({end_s, "transfer_time_s", m.transfer_time_s});
  m.rows.push_back({end_s, "r_waste", m.r_waste});
  m.rows.push_back({end_s, "benign_class", static_cast<double>(m.benign_class)});
  m.rows.push_back({end_s, "max_link_utilization", max_util});
  for (const auto& [t, v] : timeline_) m.rows.push_back({t, "reservable_kbps", v});
  m.event_log = log_.render();
  return m;
}

Metrics Engine::run() {
  build_network();
  schedule_maintenance();
  switch (sc_.kind) {
    case ScenarioKind::DocIntra:
    case ScenarioKind::DocInter: drive_doc(); break;
    case ScenarioKind::Coremelt: drive_coremelt(); break;
    case ScenarioKind::LowerBound: drive_lowerbound(false); break;
    case ScenarioKind::LossTolerance: drive_loss(); break;
    case ScenarioKind::Dill: drive_dill(); break;
  }
  drain(end_ms_ + sc_.timeout_s * 1000.0 + 2000.0);
  return finish();
}

std::vector<std::pair<double, double>> Engine::lowerbound_jump() {
  build_network();
  schedule_maintenance();
  drive_lowerbound(true);
  drain(end_ms_ + sc_.timeout_s * 1000.0 + 2000.0);
  return timeline_;
}

}  // namespace

Metrics run_scenario(const Topology& topo, const Scenario& sc) {
  topo.validate();
  sc.validate();
  Engine e(topo, sc);
  return e.run();
}

std::vector<std::pair<double, double>> run_lowerbound(const Topology& topo,
                                                      const Scenario& sc) {
  topo.validate();
  sc.validate();
  if (sc.kind != ScenarioKind::LowerBound)
    throw std::invalid_argument("population-jump runs need a LowerBound scenario");
  Engine e(topo, sc);
  return e.lowerbound_jump();
}

std::string metrics_csv(const Metrics& m) {
  std::string out = "t,series,value\n";
  char buf[128];
  for (const auto& r : m.rows) {
    std::snprintf(buf, sizeof buf, "%.3f,%s,%.6f\n", r.t_s, r.series.c_str(), r.value);
    out += buf;
  }
  return out;
}

void emit_metrics(const Metrics& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << metrics_csv(m);
}

}  // namespace sibra
