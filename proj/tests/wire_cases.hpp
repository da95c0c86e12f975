// Shared input cases for the wire-format golden vectors. The generator tool
// and the regression test both build inputs from here; expected outputs live
// in data/wire_vectors.json.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sibra/token.hpp"

namespace sibra::wirecases {

struct TokenCase {
  std::string name;
  std::uint64_t key_seed;
  InterfaceId ingress;
  InterfaceId egress;
  RequestInfo req;
  bool chained;             // uses the previous case's token as prev
  ReservationToken result;  // filled by build_token_cases
};

inline RequestInfo demo_request() {
  return RequestInfo{.bw = {PathKind::Ephemeral, 4},
                     .expiration = SibraTime{12},
                     .flow = FlowId::random(0x1111222233334444ull, 0x5555666677778888ull)};
}

inline std::vector<TokenCase> build_token_cases() {
  std::vector<TokenCase> cases = {
      {"first-hop", 11, 0, 7, demo_request(), false, {}},
      {"transit-hop", 12, 3, 9, demo_request(), true, {}},
      {"last-hop", 13, 2, 0, demo_request(), true, {}},
      {"steady-hop", 21, 5, 6,
       RequestInfo{.bw = {PathKind::Steady, 2},
                   .expiration = SibraTime{45},
                   .flow = FlowId::random(0xaaaabbbbccccddddull, 0xeeeeffff00001111ull)},
       false, {}},
  };
  const ReservationToken* prev = nullptr;
  for (auto& c : cases) {
    c.result = issue_token(MacKey::derive(c.key_seed), c.ingress, c.egress, c.req,
                           c.chained ? prev : nullptr);
    prev = &c.result;
  }
  return cases;
}

inline std::vector<std::pair<std::string, SibraHeader>> build_header_cases() {
  auto toks = build_token_cases();
  RequestInfo req = demo_request();

  SibraHeader bare;
  bare.flow = req.flow;
  bare.expiration = req.expiration;
  bare.fwd_class = req.bw;
  bare.rev_class = {PathKind::Ephemeral, 3};
  bare.direction = Direction::Forward;
  bare.reservation_index = 1;
  bare.is_request = true;

  SibraHeader carrying = bare;
  carrying.is_request = false;
  carrying.hops = 1;
  carrying.tokens = {toks[0].result, toks[1].result, toks[2].result};

  SibraHeader declined = bare;
  declined.failed = true;
  declined.decline_as = 42;
  declined.tokens = {toks[0].result};
  declined.offers = {{42, 512.0}, {43, 1024.0}};

  SibraHeader keepalive;
  keepalive.flow = toks[3].req.flow;
  keepalive.expiration = SibraTime{45};
  keepalive.fwd_class = {PathKind::Steady, 2};
  keepalive.rev_class = {PathKind::Steady, 2};
  keepalive.direction = Direction::Bidirectional;
  keepalive.reservation_index = 15;
  keepalive.keepalive = true;
  keepalive.tokens = {toks[3].result};

  return {{"bare-request", bare},
          {"token-carrying", carrying},
          {"declined-with-offers", declined},
          {"steady-keepalive", keepalive}};
}

inline std::string to_hex(const std::uint8_t* p, std::size_t n) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(digits[p[i] >> 4]);
    out.push_back(digits[p[i] & 0xf]);
  }
  return out;
}

}  // namespace sibra::wirecases
