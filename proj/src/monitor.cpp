#include "sibra/monitor.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace sibra {

namespace {

// key for renewal filter membership: flow bytes + index
std::string tuple_key(const FlowId& flow, std::uint8_t index) {
  std::string k(reinterpret_cast<const char*>(flow.bytes.data()), flow.bytes.size());
  k.push_back(static_cast<char>(index & 0xf));
  return k;
}

}  // namespace

Monitor::Monitor(AsId self, MonitorConfig cfg, EventLog* log)
    : self_(self), cfg_(cfg), log_(log) {}

void Monitor::set_reserved(AsId neighbor, double kbps) {
  neighbors_[neighbor].reserved_kbps = kbps;
}

void Monitor::note_neighbor_traffic(AsId neighbor, double bits, SibraTime now) {
  if (now.ticks != usage_tick_) close_interval(now);
  neighbors_[neighbor].bits_current += bits;
}

void Monitor::close_interval(SibraTime now) {
  for (auto& [id, u] : neighbors_) {
    u.rate_last_kbps = u.bits_current / kSibraSecond / 1000.0;
    u.bits_current = 0;
  }
  usage_tick_ = now.ticks;
}

BudgetCheck Monitor::check_neighbor_budget(AsId neighbor) const {
  auto it = neighbors_.find(neighbor);
  if (it == neighbors_.end()) return {true, 0};
  const auto& u = it->second;
  double rate = u.rate_last_kbps >= 0 ? u.rate_last_kbps
                                      : u.bits_current / kSibraSecond / 1000.0;
  if (rate > u.reserved_kbps) return {false, rate - u.reserved_kbps};
  return {true, 0};
}

std::set<std::uint8_t> Monitor::select_monitored_classes(std::mt19937_64& rng, int m) {
  if (m < 0 || m > kEphemeralClassCount)
    throw std::invalid_argument("monitored class count out of range");
  std::vector<std::uint8_t> all(kEphemeralClassCount);
  for (int i = 0; i < kEphemeralClassCount; ++i) all[i] = static_cast<std::uint8_t>(i);
  // partial Fisher-Yates with hand-rolled draws for cross-platform stability
  for (int i = 0; i < m; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (all.size() - i));
    std::swap(all[i], all[j]);
  }
  monitored_.clear();
  monitored_.insert(all.begin(), all.begin() + m);
  interval_bits_.clear();
  return monitored_;
}

FlowVerdict Monitor::flag_class_violation(const FlowId& flow, double avg_rate_kbps,
                                          BandwidthClass cls, SibraTime now) {
  if (avg_rate_kbps > cls.rate_kbps() * (1.0 + cfg_.overuse_tolerance)) {
    if (log_)
      log_->append({now.ticks * kSibraSecond * 1000.0, self_, EventKind::Violation, flow, 0,
                    cls.kind, avg_rate_kbps, cls.index});
    blacklist_flow(flow, now);
    return FlowVerdict::Blacklisted;
  }
  return FlowVerdict::Ok;
}

FlowVerdict Monitor::note_flow_packet(const FlowId& flow, BandwidthClass cls, double bits,
                                      SibraTime now) {
  if (now.ticks != flow_tick_) {
    interval_bits_.clear();
    flow_tick_ = now.ticks;
  }
  if (!monitored_.count(cls.index) && !watch_.count(flow)) return FlowVerdict::Ok;
  double& acc = interval_bits_[flow];
  acc += bits;
  double budget_bits = cls.rate_kbps() * 1000.0 * kSibraSecond * (1.0 + cfg_.overuse_tolerance);
  if (acc > budget_bits)
    return flag_class_violation(flow, acc / kSibraSecond / 1000.0, cls, now);
  return FlowVerdict::Ok;
}

BloomFilter& Monitor::renewal_filter(std::uint8_t class_index, std::uint64_t exp_tick) {
  auto key = std::make_pair(class_index, exp_tick);
  auto it = renewal_.find(key);
  if (it == renewal_.end())
    it = renewal_.emplace(key, BloomFilter(cfg_.filter_capacity, cfg_.renewal_fp)).first;
  return it->second;
}

void Monitor::record_renewal_observation(const FlowId& flow, std::uint8_t index,
                                         BandwidthClass cls, SibraTime exp_tick) {
  renewal_filter(cls.index, exp_tick.ticks).insert(tuple_key(flow, index));
}

DualUseVerdict Monitor::detect_dual_use(const FlowId& flow, std::uint8_t index,
                                        BandwidthClass cls, SibraTime exp_tick, SibraTime now,
                                        std::mt19937_64& rng) {
  // probabilistic inspection keeps the per-packet cost constant
  double coin = static_cast<double>(rng() >> 11) * 0x1p-53;
  if (coin >= cfg_.probe_rate) return DualUseVerdict::Clean;

  auto comparable = comparable_classes(cls);
  std::vector<const BloomFilter*> candidates;
  for (const auto& [key, filter] : renewal_) {
    if (key.second <= exp_tick.ticks) continue;  // only strictly later expirations
    if (!comparable.count(key.first)) continue;
    candidates.push_back(&filter);
  }
  if (candidates.empty()) return DualUseVerdict::Clean;

  const BloomFilter& probe = *candidates[rng() % candidates.size()];
  std::uint8_t i = static_cast<std::uint8_t>(rng() % 16);
  std::uint8_t probed_index = static_cast<std::uint8_t>((index + i) & 0xf);
  if (!probe.contains(tuple_key(flow, probed_index))) return DualUseVerdict::Clean;

  int count = ++violations_[flow];
  if (log_)
    log_->append({now.ticks * kSibraSecond * 1000.0, self_, EventKind::Violation, flow, 0,
                  cls.kind, 0, static_cast<std::uint8_t>(count)});
  if (count > cfg_.violation_threshold) {
    blacklist_flow(flow, now);
    return DualUseVerdict::Suspicious;
  }
  return DualUseVerdict::Clean;
}

void Monitor::rotate_renewal_filters(SibraTime now) {
  std::erase_if(renewal_, [&](const auto& kv) { return kv.first.second <= now.ticks; });
}

int Monitor::violation_count(const FlowId& flow) const {
  auto it = violations_.find(flow);
  return it == violations_.end() ? 0 : it->second;
}

void Monitor::blacklist_flow(const FlowId& flow, SibraTime now) {
  blacklist_until_[flow] = now.ticks + cfg_.blacklist_ticks;
  if (log_)
    log_->append({now.ticks * kSibraSecond * 1000.0, self_, EventKind::Blacklist, flow, 0,
                  PathKind::Ephemeral, 0, 0});
}

bool Monitor::blacklisted(const FlowId& flow, SibraTime now) const {
  auto it = blacklist_until_.find(flow);
  return it != blacklist_until_.end() && now.ticks < it->second;
}

PushbackNote Monitor::pushback(const FlowId& flow, AsId prev_as, SibraTime now) {
  if (log_)
    log_->append({now.ticks * kSibraSecond * 1000.0, self_, EventKind::Pushback, flow, prev_as,
                  PathKind::Ephemeral, 0, 0});
  return {self_, prev_as, flow};
}

void Monitor::add_watch(const FlowId& flow) { watch_.insert(flow); }

bool Monitor::watched(const FlowId& flow) const { return watch_.count(flow) > 0; }

}  // namespace sibra
