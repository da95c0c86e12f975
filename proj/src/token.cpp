#include "sibra/token.hpp"

#include <openssl/core_names.h>
#include <openssl/evp.h>

#include <cstring>
#include <stdexcept>

namespace sibra {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

void put_u16(std::uint8_t* p, std::uint16_t v) {
  p[0] = static_cast<std::uint8_t>(v >> 8);
  p[1] = static_cast<std::uint8_t>(v);
}

std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] << 8 | p[1]);
}

void put_u32(std::uint8_t* p, std::uint32_t v) {
  p[0] = static_cast<std::uint8_t>(v >> 24);
  p[1] = static_cast<std::uint8_t>(v >> 16);
  p[2] = static_cast<std::uint8_t>(v >> 8);
  p[3] = static_cast<std::uint8_t>(v);
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) << 24 | static_cast<std::uint32_t>(p[1]) << 16 |
         static_cast<std::uint32_t>(p[2]) << 8 | static_cast<std::uint32_t>(p[3]);
}

void put_f64(std::uint8_t* p, double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, 8);
  for (int i = 0; i < 8; ++i) p[i] = static_cast<std::uint8_t>(u >> (56 - 8 * i));
}

double get_f64(const std::uint8_t* p) {
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u = u << 8 | p[i];
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}

std::uint8_t class_byte(BandwidthClass c) {
  return static_cast<std::uint8_t>((c.kind == PathKind::Ephemeral ? 0x80 : 0x00) | c.index);
}

// Canonical MAC input: ingress 2 | egress 2 | class 1 | exp 2 | flow 16 |
// previous token wire (0 or 8). 23 or 31 bytes.
std::size_t mac_input(std::uint8_t* out, InterfaceId ingress, InterfaceId egress,
                      const RequestInfo& req, const ReservationToken* prev) {
  put_u16(out, ingress);
  put_u16(out + 2, egress);
  out[4] = class_byte(req.bw);
  put_u16(out + 5, static_cast<std::uint16_t>(req.expiration.ticks & 0xffff));
  std::memcpy(out + 7, req.flow.bytes.data(), 16);
  std::size_t len = 23;
  if (prev) {
    auto w = prev->wire();
    std::memcpy(out + len, w.data(), w.size());
    len += w.size();
  }
  return len;
}

}  // namespace

MacKey MacKey::derive(std::uint64_t seed) {
  MacKey k;
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s), b = splitmix64(s);
  for (int i = 0; i < 8; ++i) {
    k.bytes[i] = static_cast<std::uint8_t>(a >> (56 - 8 * i));
    k.bytes[8 + i] = static_cast<std::uint8_t>(b >> (56 - 8 * i));
  }
  return k;
}

std::array<std::uint8_t, 16> aes_cmac(const MacKey& key, const std::uint8_t* data,
                                      std::size_t len) {
  static EVP_MAC* mac = EVP_MAC_fetch(nullptr, "CMAC", nullptr);
  if (!mac) throw std::runtime_error("CMAC unavailable in this OpenSSL build");
  EVP_MAC_CTX* ctx = EVP_MAC_CTX_new(mac);
  if (!ctx) throw std::runtime_error("EVP_MAC_CTX_new failed");
  char cipher[] = "AES-128-CBC";
  OSSL_PARAM params[] = {OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_CIPHER, cipher, 0),
                         OSSL_PARAM_construct_end()};
  std::array<std::uint8_t, 16> out{};
  std::size_t outlen = 0;
  int ok = EVP_MAC_init(ctx, key.bytes.data(), key.bytes.size(), params) &&
           EVP_MAC_update(ctx, data, len) &&
           EVP_MAC_final(ctx, out.data(), &outlen, out.size());
  EVP_MAC_CTX_free(ctx);
  if (!ok || outlen != 16) throw std::runtime_error("CMAC computation failed");
  return out;
}

std::array<std::uint8_t, kTokenWireBytes> ReservationToken::wire() const {
  std::array<std::uint8_t, kTokenWireBytes> w{};
  put_u16(w.data(), ingress);
  put_u16(w.data() + 2, egress);
  put_u32(w.data() + 4, mac);
  return w;
}

ReservationToken ReservationToken::from_wire(const std::uint8_t* p) {
  return {get_u16(p), get_u16(p + 2), get_u32(p + 4)};
}

ReservationToken issue_token(const MacKey& key, InterfaceId ingress, InterfaceId egress,
                             const RequestInfo& req, const ReservationToken* prev) {
  std::uint8_t buf[23 + kTokenWireBytes];
  std::size_t len = mac_input(buf, ingress, egress, req, prev);
  auto full = aes_cmac(key, buf, len);
  return {ingress, egress, get_u32(full.data())};
}

bool verify_token(const MacKey& key, const ReservationToken& token, const RequestInfo& req,
                  const ReservationToken* prev) {
  ReservationToken expect = issue_token(key, token.ingress, token.egress, req, prev);
  return expect.mac == token.mac;
}

std::size_t SibraHeader::wire_size() const {
  std::size_t n = kHeaderPrefixBytes + tokens.size() * kTokenWireBytes;
  if (failed) n += 2 + offers.size() * kOfferWireBytes;
  return n;
}

std::vector<std::uint8_t> encode_header(const SibraHeader& h) {
  if (h.fwd_class.kind != h.rev_class.kind)
    throw std::invalid_argument("forward and reverse classes must share a path kind");
  if (h.reservation_index >= 16) throw std::invalid_argument("reservation index overflow");
  if (h.tokens.size() > 255 || h.offers.size() > 255)
    throw std::invalid_argument("token or offer count overflow");
  if (!h.failed && !h.offers.empty())
    throw std::invalid_argument("offers are only carried on failed requests");
  int limit = h.fwd_class.kind == PathKind::Steady ? kSteadyClassCount : kEphemeralClassCount;
  if (h.fwd_class.index >= limit || h.rev_class.index >= limit)
    throw std::invalid_argument("class index out of range");

  std::vector<std::uint8_t> out(h.wire_size());
  std::uint8_t* p = out.data();
  std::memcpy(p, h.flow.bytes.data(), 16);
  put_u16(p + 16, static_cast<std::uint16_t>(h.expiration.ticks & 0xffff));
  std::uint16_t packed = static_cast<std::uint16_t>(
      (h.fwd_class.index & 0x1f) << 11 | (h.rev_class.index & 0x1f) << 6 |
      (static_cast<int>(h.direction) & 0x3) << 4 | (h.reservation_index & 0xf));
  put_u16(p + 18, packed);
  std::uint8_t flags = 0;
  if (h.fwd_class.kind == PathKind::Ephemeral) flags |= 0x01;
  if (h.failed) flags |= 0x02;
  if (h.is_request) flags |= 0x04;
  if (h.keepalive) flags |= 0x08;
  p[20] = flags;
  p[21] = h.hops;
  p[22] = static_cast<std::uint8_t>(h.tokens.size());
  p[23] = static_cast<std::uint8_t>(h.offers.size());
  p += kHeaderPrefixBytes;
  for (const auto& t : h.tokens) {
    auto w = t.wire();
    std::memcpy(p, w.data(), w.size());
    p += w.size();
  }
  if (h.failed) {
    put_u16(p, h.decline_as);
    p += 2;
    for (const auto& o : h.offers) {
      put_u16(p, o.as);
      put_f64(p + 2, o.offered_kbps);
      p += kOfferWireBytes;
    }
  }
  return out;
}

SibraHeader decode_header(const std::uint8_t* data, std::size_t len) {
  if (len < kHeaderPrefixBytes) throw std::invalid_argument("header shorter than prefix");
  SibraHeader h;
  std::memcpy(h.flow.bytes.data(), data, 16);
  h.expiration = SibraTime{get_u16(data + 16)};
  std::uint16_t packed = get_u16(data + 18);
  std::uint8_t flags = data[20];
  PathKind kind = (flags & 0x01) ? PathKind::Ephemeral : PathKind::Steady;
  h.fwd_class = {kind, static_cast<std::uint8_t>(packed >> 11 & 0x1f)};
  h.rev_class = {kind, static_cast<std::uint8_t>(packed >> 6 & 0x1f)};
  int dir = packed >> 4 & 0x3;
  if (dir > 2) throw std::invalid_argument("bad direction field");
  h.direction = static_cast<Direction>(dir);
  h.reservation_index = packed & 0xf;
  h.failed = flags & 0x02;
  h.is_request = flags & 0x04;
  h.keepalive = flags & 0x08;
  if (flags & 0xf0) throw std::invalid_argument("reserved flag bits set");
  h.hops = data[21];
  std::size_t ntok = data[22], noff = data[23];
  int limit = kind == PathKind::Steady ? kSteadyClassCount : kEphemeralClassCount;
  if (h.fwd_class.index >= limit || h.rev_class.index >= limit)
    throw std::invalid_argument("class index out of range");

  std::size_t need = kHeaderPrefixBytes + ntok * kTokenWireBytes +
                     (h.failed ? 2 + noff * kOfferWireBytes : 0);
  if (!h.failed && noff != 0) throw std::invalid_argument("offers present without failure");
  if (len != need) throw std::invalid_argument("header length mismatch");

  const std::uint8_t* p = data + kHeaderPrefixBytes;
  h.tokens.reserve(ntok);
  for (std::size_t i = 0; i < ntok; ++i, p += kTokenWireBytes)
    h.tokens.push_back(ReservationToken::from_wire(p));
  if (h.failed) {
    h.decline_as = get_u16(p);
    p += 2;
    h.offers.reserve(noff);
    for (std::size_t i = 0; i < noff; ++i, p += kOfferWireBytes)
      h.offers.push_back({get_u16(p), get_f64(p + 2)});
  }
  return h;
}

SibraHeader decode_header(const std::vector<std::uint8_t>& data) {
  return decode_header(data.data(), data.size());
}

}  // namespace sibra
