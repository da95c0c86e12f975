#include "sibra/router.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sibra {

Router::Router(AsId self, MacKey key, RouterConfig cfg, EventLog* log)
    : self_(self),
      key_(key),
      cfg_(cfg),
      log_(log),
      monitor_(self, cfg.monitor, log),
      rng_(cfg.rng_seed ^ (0x5b7a0d1ull * self)),
      seen_cur_(cfg.seen_capacity, cfg.seen_fp),
      seen_prev_(cfg.seen_capacity, cfg.seen_fp),
      next_rotation_(cfg.ell) {
  if (cfg.ell < 1 || cfg.ell > 5) throw std::invalid_argument("ell must be in [1,5]");
}

void Router::add_link(AsId neighbor, LinkAnatomy link) {
  link.validate();
  if (neighbor == 0) throw std::invalid_argument("neighbor id 0 is reserved");
  links_[neighbor] = LinkEntry{link, 0, 0};
}

std::string Router::flow_key(const FlowId& flow) const {
  return std::string(reinterpret_cast<const char*>(flow.bytes.data()), flow.bytes.size());
}

double Router::needed_kbps(const Entry& e) const {
  double need = 0;
  if (e.direction != Direction::Reverse) need += e.fwd_cls.rate_kbps();
  if (e.direction != Direction::Forward) need += e.rev_cls.rate_kbps();
  return need;
}

double Router::remaining(AsId neighbor, PathKind kind) const {
  auto it = links_.find(neighbor);
  if (it == links_.end()) throw std::invalid_argument("unknown neighbor");
  const LinkEntry& e = it->second;
  double cap = kind == PathKind::Steady ? e.link.steady_kbps() : e.link.ephemeral_kbps();
  double used = kind == PathKind::Steady ? e.reserved_steady : e.reserved_ephemeral;
  return cap - used;
}

bool Router::fits(AsId neighbor, PathKind kind, double kbps) const {
  if (neighbor == 0) return true;  // local end, no link to debit
  return remaining(neighbor, kind) >= kbps * (1 - 1e-12);
}

void Router::debit(AsId neighbor, PathKind kind, double kbps, const FlowId& flow,
                   double now_ms) {
  if (neighbor == 0 || kbps == 0) return;
  LinkEntry& e = links_.at(neighbor);
  double& used = kind == PathKind::Steady ? e.reserved_steady : e.reserved_ephemeral;
  used += kbps;
  monitor_.set_reserved(neighbor, e.reserved_steady + e.reserved_ephemeral);
  log(EventKind::Debit, flow, neighbor, kind, kbps, now_ms);
}

void Router::credit(AsId neighbor, PathKind kind, double kbps, const FlowId& flow,
                    double now_ms) {
  if (neighbor == 0 || kbps == 0) return;
  LinkEntry& e = links_.at(neighbor);
  double& used = kind == PathKind::Steady ? e.reserved_steady : e.reserved_ephemeral;
  used -= kbps;
  if (used < 0 && used > -1e-6) used = 0;  // float dust from delta arithmetic
  monitor_.set_reserved(neighbor, e.reserved_steady + e.reserved_ephemeral);
  log(EventKind::Credit, flow, neighbor, kind, kbps, now_ms);
}

void Router::credit_entry(const Entry& e, const FlowId& flow, double now_ms) {
  double need = needed_kbps(e);
  credit(e.ingress, e.fwd_cls.kind, need, flow, now_ms);
  credit(e.egress, e.fwd_cls.kind, need, flow, now_ms);
}

double Router::offer_for(AsId ingress, AsId egress, PathKind kind) const {
  double room = std::numeric_limits<double>::infinity();
  if (ingress != 0) room = std::min(room, remaining(ingress, kind));
  if (egress != 0) room = std::min(room, remaining(egress, kind));
  if (!std::isfinite(room)) return 0;
  // largest class rate that still fits
  double best = 0;
  int count = kind == PathKind::Steady ? kSteadyClassCount : kEphemeralClassCount;
  for (int i = 0; i < count; ++i) {
    double r = kind == PathKind::Steady ? steady_class_rate(i) : ephemeral_class_rate(i);
    if (r <= room) best = r;
  }
  return best;
}

void Router::log(EventKind kind, const FlowId& flow, AsId neighbor, PathKind part,
                 double kbps, double now_ms, std::uint8_t detail) {
  if (log_) log_->append({now_ms, self_, kind, flow, neighbor, part, kbps, detail});
}

AdmitOutcome Router::admit_reservation(SibraHeader& h, AsId ingress, AsId egress,
                                       const ShareInputs& shares, double now_ms) {
  if (!h.is_request) throw std::invalid_argument("not a reservation request");
  SibraTime now = quantize_time(now_ms / 1000.0);
  ReservationConfig rc{h.expiration, h.direction, h.fwd_class, h.rev_class,
                       h.reservation_index};
  rc.validate(now);

  PathKind kind = h.fwd_class.kind;

  if (h.failed) {
    // collect an offer for the destination; no admission here
    double offer = offer_for(ingress, egress, kind);
    h.offers.push_back({self_, offer});
    h.hops++;
    log(EventKind::Deny, h.flow, egress, kind, offer, now_ms, 1);
    return {false, {}, offer};
  }

  Entry e;
  e.fwd_cls = h.fwd_class;
  e.rev_cls = h.rev_class;
  e.direction = h.direction;
  e.exp = h.expiration;
  e.ingress = ingress;
  e.egress = egress;
  e.index = h.reservation_index;
  e.created_ms = now_ms;

  auto same_params = [&](const Entry& o) {
    return o.fwd_cls == e.fwd_cls && o.rev_cls == e.rev_cls && o.exp == e.exp &&
           o.index == e.index && o.direction == e.direction;
  };
  RequestInfo req = h.request_info();
  const ReservationToken* prev = h.tokens.empty() ? nullptr : &h.tokens.back();
  if (auto it = pending_.find(h.flow); it != pending_.end()) {
    if (!same_params(it->second)) throw DuplicateFlow("flow pending with different parameters");
    auto tok = issue_token(key_, ingress, egress, req, prev);  // idempotent retry
    h.tokens.push_back(tok);
    h.hops++;
    return {true, tok, 0};
  }
  if (auto it = accounting_.find(h.flow); it != accounting_.end()) {
    if (!same_params(it->second)) throw DuplicateFlow("flow active with different parameters");
    auto tok = issue_token(key_, ingress, egress, req, prev);
    h.tokens.push_back(tok);
    h.hops++;
    return {true, tok, 0};
  }

  double need = needed_kbps(e);
  bool ok = fits(ingress, kind, need) && fits(egress, kind, need);
  if (ok && kind == PathKind::Ephemeral) ok = need <= eph_path_share(shares) * (1 + 1e-12);

  if (!ok) {
    double offer = offer_for(ingress, egress, kind);
    if (kind == PathKind::Ephemeral) {
      double share = eph_path_share(shares);
      double best = 0;
      for (int i = 0; i < kEphemeralClassCount; ++i)
        if (ephemeral_class_rate(i) <= std::min(offer > 0 ? offer : 0.0, share))
          best = ephemeral_class_rate(i);
      offer = best;
    }
    h.failed = true;
    h.decline_as = self_;
    h.offers.push_back({self_, offer});
    h.hops++;
    log(EventKind::Deny, h.flow, egress, kind, offer, now_ms);
    return {false, {}, offer};
  }

  debit(ingress, kind, need, h.flow, now_ms);
  debit(egress, kind, need, h.flow, now_ms);
  pending_.emplace(h.flow, e);

  auto tok = issue_token(key_, ingress, egress, req, prev);
  h.tokens.push_back(tok);
  h.hops++;
  log(EventKind::Admit, h.flow, egress, kind, need, now_ms);
  return {true, tok, 0};
}

bool Router::confirm_reservation(const FlowId& flow, double now_ms) {
  if (accounting_.count(flow)) return true;  // double confirm is a no-op
  auto it = pending_.find(flow);
  if (it == pending_.end()) return false;  // swept or never admitted
  Entry e = it->second;
  pending_.erase(it);
  e.confirm_tick = quantize_time(now_ms / 1000.0).ticks;
  e.sighted = false;
  accounting_.emplace(flow, e);
  log(EventKind::Confirm, flow, e.egress, e.fwd_cls.kind, needed_kbps(e), now_ms);
  return true;
}

void Router::advance_windows(SibraTime now) {
  while (now.ticks >= next_rotation_) {
    std::swap(seen_prev_, seen_cur_);
    seen_cur_.clear();
    next_rotation_ += cfg_.ell;
  }
}

ForwardOutcome Router::forward_data(SibraHeader& h, AsId from, double bits, double now_ms) {
  SibraTime now = quantize_time(now_ms / 1000.0);
  advance_windows(now);
  if (h.hops >= h.tokens.size())
    return {false, DropReason::NoToken, 0};
  const ReservationToken& tok = h.tokens[h.hops];

  if (monitor_.blacklisted(h.flow, now)) {
    log(EventKind::Drop, h.flow, from, h.fwd_class.kind, 0, now_ms,
        static_cast<std::uint8_t>(DropReason::Blacklisted));
    return {false, DropReason::Blacklisted, 0};
  }
  if (now.ticks > h.expiration.ticks) {
    log(EventKind::Drop, h.flow, from, h.fwd_class.kind, 0, now_ms,
        static_cast<std::uint8_t>(DropReason::Expired));
    return {false, DropReason::Expired, 0};
  }
  const ReservationToken* prev = h.hops > 0 ? &h.tokens[h.hops - 1] : nullptr;
  if (tok.ingress != from || !verify_token(key_, tok, h.request_info(), prev)) {
    log(EventKind::Drop, h.flow, from, h.fwd_class.kind, 0, now_ms,
        static_cast<std::uint8_t>(DropReason::BadToken));
    return {false, DropReason::BadToken, 0};
  }

  std::string fk = flow_key(h.flow);
  if (!seen_cur_.contains(fk) && !seen_prev_.contains(fk)) {
    // slowpath: first sight in this window activates a pending reservation
    if (auto it = pending_.find(h.flow); it != pending_.end()) {
      Entry e = it->second;
      pending_.erase(it);
      e.confirm_tick = now.ticks;
      e.sighted = true;
      accounting_.emplace(h.flow, e);
      log(EventKind::Confirm, h.flow, e.egress, e.fwd_cls.kind, needed_kbps(e), now_ms, 1);
    } else if (auto ac = accounting_.find(h.flow); ac != accounting_.end()) {
      ac->second.sighted = true;
    }
  }
  seen_cur_.insert(fk);

  monitor_.note_neighbor_traffic(from, bits, now);
  monitor_.note_flow_packet(h.flow, h.fwd_class, bits, now);
  monitor_.detect_dual_use(h.flow, h.reservation_index, h.fwd_class, h.expiration, now, rng_);

  h.hops++;
  log(EventKind::Forward, h.flow, tok.egress, h.fwd_class.kind, bits, now_ms);
  return {true, DropReason::None, tok.egress};
}

std::size_t Router::sweep_pending(double now_ms) {
  std::size_t removed = 0;
  for (auto it = pending_.begin(); it != pending_.end();) {
    if (now_ms - it->second.created_ms > cfg_.pending_sweep_ms) {
      credit_entry(it->second, it->first, now_ms);
      log(EventKind::Sweep, it->first, it->second.egress, it->second.fwd_cls.kind,
          needed_kbps(it->second), now_ms);
      it = pending_.erase(it);
      ++removed;
    } else {
      ++it;
    }
  }
  return removed;
}

std::size_t Router::reclaim_expired(SibraTime now) {
  advance_windows(now);
  monitor_.rotate_renewal_filters(now);

  double now_ms = now.ticks * kSibraSecond * 1000.0;
  std::size_t count = 0;
  for (auto it = accounting_.begin(); it != accounting_.end();) {
    const Entry& e = it->second;
    bool expired = now.ticks > e.exp.ticks;
    bool idle = !seen_cur_.contains(flow_key(it->first)) &&
                !seen_prev_.contains(flow_key(it->first));
    // an activated-but-never-sending flow gets one full window of grace
    bool reclaimable = e.sighted ? idle : (idle && now.ticks >= e.confirm_tick + 2);
    if (expired || reclaimable) {
      credit_entry(e, it->first, now_ms);
      log(expired ? EventKind::Expire : EventKind::Reclaim, it->first, e.egress,
          e.fwd_cls.kind, needed_kbps(e), now_ms);
      it = accounting_.erase(it);
      ++count;
    } else {
      ++it;
    }
  }
  return count;
}

AdmitOutcome Router::renew_reservation(SibraHeader& h, AsId ingress, AsId egress,
                                       double now_ms) {
  SibraTime now = quantize_time(now_ms / 1000.0);
  auto it = accounting_.find(h.flow);
  if (it == accounting_.end()) {
    log(EventKind::RenewDeny, h.flow, egress, h.fwd_class.kind, 0, now_ms, 1);
    return {false, {}, 0};
  }
  Entry& old = it->second;
  if (monitor_.blacklisted(h.flow, now)) {
    log(EventKind::RenewDeny, h.flow, egress, h.fwd_class.kind, 0, now_ms, 2);
    return {false, {}, 0};
  }
  if (ingress != old.ingress || egress != old.egress) {
    log(EventKind::RenewDeny, h.flow, egress, h.fwd_class.kind, 0, now_ms, 6);
    return {false, {}, 0};
  }
  if (h.reservation_index != ((old.index + 1) & 0xf)) {
    log(EventKind::RenewDeny, h.flow, egress, h.fwd_class.kind, 0, now_ms, 3);
    return {false, {}, 0};
  }
  if (h.fwd_class.kind != old.fwd_cls.kind || h.expiration.ticks <= old.exp.ticks) {
    log(EventKind::RenewDeny, h.flow, egress, h.fwd_class.kind, 0, now_ms, 4);
    return {false, {}, 0};
  }
  ReservationConfig rc{h.expiration, h.direction, h.fwd_class, h.rev_class,
                       h.reservation_index};
  rc.validate(now);

  Entry upd = old;
  upd.fwd_cls = h.fwd_class;
  upd.rev_cls = h.rev_class;
  upd.direction = h.direction;
  upd.exp = h.expiration;
  upd.index = h.reservation_index;

  PathKind kind = h.fwd_class.kind;
  double delta = needed_kbps(upd) - needed_kbps(old);
  if (delta > 0 && (!fits(old.ingress, kind, delta) || !fits(old.egress, kind, delta))) {
    double offer = offer_for(old.ingress, old.egress, kind);
    log(EventKind::RenewDeny, h.flow, egress, kind, offer, now_ms, 5);
    return {false, {}, offer};
  }
  if (delta > 0) {
    debit(old.ingress, kind, delta, h.flow, now_ms);
    debit(old.egress, kind, delta, h.flow, now_ms);
  } else if (delta < 0) {
    credit(old.ingress, kind, -delta, h.flow, now_ms);
    credit(old.egress, kind, -delta, h.flow, now_ms);
  }
  old = upd;

  monitor_.record_renewal_observation(h.flow, h.reservation_index, h.fwd_class, h.expiration);

  RequestInfo req = h.request_info();
  const ReservationToken* prev = h.tokens.empty() ? nullptr : &h.tokens.back();
  auto tok = issue_token(key_, old.ingress, old.egress, req, prev);
  h.tokens.push_back(tok);
  h.hops++;
  log(EventKind::Renew, h.flow, egress, kind, needed_kbps(upd), now_ms, h.reservation_index);
  return {true, tok, 0};
}

double Router::apply_multiplexing(AsId neighbor) const {
  auto it = links_.find(neighbor);
  if (it == links_.end()) throw std::invalid_argument("unknown neighbor");
  const LinkEntry& e = it->second;
  double cap_kbps = e.link.capacity_bps / 1000.0;
  double reservable = e.link.steady_kbps() + e.link.ephemeral_kbps();
  double reserved = e.reserved_steady + e.reserved_ephemeral;
  double slack = cfg_.slack_frac * reservable;
  double borrowed = reservable - reserved - slack;
  return e.link.besteffort_frac * cap_kbps + std::max(0.0, borrowed);
}

std::vector<double> Router::compute_downpath_shares(const std::vector<ShareInputs>& active,
                                                    bool congested) {
  if (active.empty()) return {};
  double budget = active.front().sBW_d;
  for (const auto& in : active)
    if (in.sBW_d != budget)
      throw std::invalid_argument("active users disagree on the down-path budget");
  if (!congested) return std::vector<double>(active.size(), budget);

  std::vector<double> weights;
  weights.reserve(active.size());
  double total = 0;
  for (const auto& in : active) {
    if (in.C_starD <= 0 || in.sBW_ustar <= 0)
      throw std::domain_error("share weights need positive aggregates");
    double w = (in.C_SD / in.C_starD) * (in.sBW_u / in.sBW_ustar);
    weights.push_back(w);
    total += w;
  }
  if (total <= 0) throw std::domain_error("no active user carries weight");
  for (auto& w : weights) w = w / total * budget;
  return weights;
}

std::vector<double> Router::dynamic_downpath_share(const std::vector<ShareInputs>& active,
                                                   bool congested, double now_ms) {
  // shares stay pinned for one wall second unless the user set changes
  if (now_ms - share_cache_ms_ < 1000.0 && share_cache_.size() == active.size())
    return share_cache_;
  share_cache_ = compute_downpath_shares(active, congested);
  share_cache_ms_ = now_ms;
  return share_cache_;
}

double Router::reserved(AsId neighbor, PathKind kind) const {
  auto it = links_.find(neighbor);
  if (it == links_.end()) throw std::invalid_argument("unknown neighbor");
  return kind == PathKind::Steady ? it->second.reserved_steady
                                  : it->second.reserved_ephemeral;
}

const LinkAnatomy& Router::link(AsId neighbor) const {
  auto it = links_.find(neighbor);
  if (it == links_.end()) throw std::invalid_argument("unknown neighbor");
  return it->second.link;
}

std::optional<std::uint8_t> Router::active_index(const FlowId& flow) const {
  auto it = accounting_.find(flow);
  if (it == accounting_.end()) return std::nullopt;
  return it->second.index;
}

}  // namespace sibra
