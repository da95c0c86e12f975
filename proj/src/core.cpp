#include "sibra/core.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sibra {

FlowId FlowId::random(std::uint64_t hi, std::uint64_t lo) {
  FlowId f;
  for (int i = 0; i < 8; ++i) {
    f.bytes[i] = static_cast<std::uint8_t>(hi >> (56 - 8 * i));
    f.bytes[8 + i] = static_cast<std::uint8_t>(lo >> (56 - 8 * i));
  }
  return f;
}

std::string FlowId::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(32);
  for (auto b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

FlowId FlowId::from_hex(const std::string& s) {
  if (s.size() != 32) throw std::invalid_argument("flow id hex must be 32 chars");
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("bad hex digit in flow id");
  };
  FlowId f;
  for (int i = 0; i < 16; ++i)
    f.bytes[i] = static_cast<std::uint8_t>(nib(s[2 * i]) << 4 | nib(s[2 * i + 1]));
  return f;
}

std::size_t FlowIdHash::operator()(const FlowId& f) const {
  // FNV-1a over the 16 bytes
  std::uint64_t h = 1469598103934665603ull;
  for (auto b : f.bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

SibraTime quantize_time(double wall_seconds) {
  if (wall_seconds < 0) throw std::domain_error("negative wall time");
  return SibraTime{static_cast<std::uint64_t>(std::floor(wall_seconds / kSibraSecond))};
}

double steady_class_rate(int index) {
  if (index < 0 || index >= kSteadyClassCount)
    throw std::domain_error("steady class index out of range");
  return 16.0 * std::sqrt(std::pow(2.0, index));
}

double ephemeral_class_rate(int index) {
  if (index < 0 || index >= kEphemeralClassCount)
    throw std::domain_error("ephemeral class index out of range");
  return 256.0 * std::sqrt(std::pow(2.0, index));
}

double BandwidthClass::rate_kbps() const {
  return kind == PathKind::Steady ? steady_class_rate(index) : ephemeral_class_rate(index);
}

BandwidthClass class_for_rate(PathKind kind, double requested_kbps) {
  if (requested_kbps <= 0) throw std::domain_error("requested rate must be positive");
  const int count = kind == PathKind::Steady ? kSteadyClassCount : kEphemeralClassCount;
  for (int i = 0; i < count; ++i) {
    double r = kind == PathKind::Steady ? steady_class_rate(i) : ephemeral_class_rate(i);
    // tolerate floating-point speckle when the request equals a class rate
    if (r >= requested_kbps * (1.0 - 1e-9))
      return BandwidthClass{kind, static_cast<std::uint8_t>(i)};
  }
  throw std::domain_error("requested rate exceeds the top bandwidth class");
}

std::set<std::uint8_t> comparable_classes(BandwidthClass c) {
  const int count = c.kind == PathKind::Steady ? kSteadyClassCount : kEphemeralClassCount;
  if (c.index >= count) throw std::domain_error("class index out of range");
  std::set<std::uint8_t> out;
  for (int d = -2; d <= 2; ++d) {
    int i = static_cast<int>(c.index) + d;
    if (i >= 0 && i < count) out.insert(static_cast<std::uint8_t>(i));
  }
  return out;
}

void LinkAnatomy::validate() const {
  if (capacity_bps <= 0) throw std::invalid_argument("link capacity must be positive");
  if (ephemeral_frac < 0 || steady_frac < 0 || besteffort_frac < 0)
    throw std::invalid_argument("negative partition fraction");
  double sum = ephemeral_frac + steady_frac + besteffort_frac;
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("partition fractions must sum to 1");
  if (steady_frac == 0) throw std::invalid_argument("steady partition must be non-empty");
}

void ReservationConfig::validate(SibraTime now) const {
  if (expiration.ticks <= now.ticks)
    throw std::invalid_argument("reservation already expired");
  std::uint64_t life = expiration.ticks - now.ticks;
  bool eph = fwd_class.kind == PathKind::Ephemeral || rev_class.kind == PathKind::Ephemeral;
  if (eph && life > kEphemeralMaxLifetimeTicks)
    throw std::invalid_argument("ephemeral reservation lifetime exceeds maximum");
  if (reservation_index >= 16)
    throw std::invalid_argument("reservation index must fit in 4 bits");
  if (direction == Direction::Bidirectional || direction == Direction::Reverse) {
    // reverse leg must carry a class of the same path kind
    if (rev_class.kind != fwd_class.kind)
      throw std::invalid_argument("mixed path kinds in one reservation");
  }
}

}  // namespace sibra
