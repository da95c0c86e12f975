// token.hpp -- onion-authenticated reservation tokens and the packet
// header that carries them.
//
// Wire layout (big endian throughout):
//   prefix, 24 bytes:
//     flow id            16
//     expiration tick     2   (absolute tick mod 2^16)
//     packed              2   bits 15..11 fwd class, 10..6 rev class,
//                             5..4 direction, 3..0 reservation index
//     flags               1   bit0 path kind (0 steady / 1 ephemeral)
//                             bit1 status (0 ok / 1 failed)
//                             bit2 request (1) vs confirmation (0)
//                             bit3 keep-alive
//     hops                1   tokens consumed so far; next-token cursor
//     token count         1
//     offer count         1
//   tokens, 8 bytes each: ingress 2, egress 2, mac 4
//   when failed: decline AS 2, then offers, 10 bytes each:
//     AS 2, offered kbps as IEEE-754 binary64 8
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "sibra/core.hpp"

namespace sibra {

inline constexpr std::size_t kHeaderPrefixBytes = 24;
inline constexpr std::size_t kTokenWireBytes = 8;
inline constexpr std::size_t kOfferWireBytes = 10;

// Per-AS secret for token MACs (AES-128 key).
struct MacKey {
  std::array<std::uint8_t, 16> bytes{};

  static MacKey derive(std::uint64_t seed);  // deterministic, for scenarios
  bool operator==(const MacKey&) const = default;
};

// Full 16-byte AES-CMAC; tokens carry the first four bytes.
std::array<std::uint8_t, 16> aes_cmac(const MacKey& key, const std::uint8_t* data,
                                      std::size_t len);

// What a router certifies when it admits a reservation.
struct RequestInfo {
  BandwidthClass bw;
  SibraTime expiration;
  FlowId flow;

  bool operator==(const RequestInfo&) const = default;
};

struct ReservationToken {
  InterfaceId ingress = 0;
  InterfaceId egress = 0;
  std::uint32_t mac = 0;

  std::array<std::uint8_t, kTokenWireBytes> wire() const;
  static ReservationToken from_wire(const std::uint8_t* p);
  bool operator==(const ReservationToken&) const = default;
};

// MAC chaining: each token authenticates its interface pair, the request,
// and the previous hop's token, so a tampered upstream token cascades into
// verification failure here.
ReservationToken issue_token(const MacKey& key, InterfaceId ingress, InterfaceId egress,
                             const RequestInfo& req, const ReservationToken* prev);
bool verify_token(const MacKey& key, const ReservationToken& token, const RequestInfo& req,
                  const ReservationToken* prev);

struct OfferEntry {
  AsId as = 0;
  double offered_kbps = 0;

  bool operator==(const OfferEntry&) const = default;
};

struct SibraHeader {
  FlowId flow;
  SibraTime expiration;  // wire keeps ticks mod 2^16
  BandwidthClass fwd_class;
  BandwidthClass rev_class;
  Direction direction = Direction::Forward;
  std::uint8_t reservation_index = 0;  // 4 bits
  bool failed = false;
  bool is_request = false;
  bool keepalive = false;
  std::uint8_t hops = 0;
  std::vector<ReservationToken> tokens;
  AsId decline_as = 0;  // meaningful only when failed
  std::vector<OfferEntry> offers;

  RequestInfo request_info() const { return {fwd_class, expiration, flow}; }
  std::size_t wire_size() const;
  bool operator==(const SibraHeader&) const = default;
};

std::vector<std::uint8_t> encode_header(const SibraHeader& h);
// Throws std::invalid_argument on truncated or malformed input.
SibraHeader decode_header(const std::uint8_t* data, std::size_t len);
SibraHeader decode_header(const std::vector<std::uint8_t>& data);

}  // namespace sibra
