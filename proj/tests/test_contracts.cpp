#include <doctest.h>

#include <map>
#include <random>
#include <stdexcept>

#include "sibra/contracts.hpp"

using namespace sibra;

TEST_CASE("bootstrap proposal splits the observed volume") {
  auto b = bootstrap_proposal(10e12);
  CHECK(b.total_bps == doctest::Approx(8.5e12).epsilon(1e-12));
  CHECK(b.steady_bps == doctest::Approx(0.5e12).epsilon(1e-12));
  CHECK(b.ephemeral_bps == doctest::Approx(8.0e12).epsilon(1e-12));
  CHECK(b.steady_bps + b.ephemeral_bps == doctest::Approx(b.total_bps).epsilon(1e-12));

  auto zero = bootstrap_proposal(0);
  CHECK(zero.total_bps == 0.0);
  CHECK_THROWS_AS(bootstrap_proposal(-1), std::invalid_argument);
}

// Four core ASes: two in the destination region (B1, B2) and two in the
// source region (D1, D1a). B2 absorbs, B1 re-sells to both D's, D1a extends
// part of its slice onward to D1.
TEST_CASE("guarantees propagate along a resale chain") {
  const AsId B1 = 1, B2 = 2, D1 = 3, D1a = 4;
  std::map<AsId, ContractBook> books;
  for (AsId a : {B1, B2, D1, D1a}) books.emplace(a, ContractBook(a));

  auto r1 = respond(books.at(B2), books.at(B1), propose(B2, B1, B2, 5e12), true);
  CHECK(r1 == ContractResponse::Accepted);
  auto r2 = respond(books.at(B1), books.at(D1), propose(B1, D1, B2, 1e12), true);
  CHECK(r2 == ContractResponse::Accepted);
  auto r3 = respond(books.at(B1), books.at(D1a), propose(B1, D1a, B2, 3e12), true);
  CHECK(r3 == ContractResponse::Accepted);
  auto r4 = respond(books.at(D1a), books.at(D1), propose(D1a, D1, B2, 2e12), true);
  CHECK(r4 == ContractResponse::Accepted);

  auto paths = books.at(D1).lookup_core_paths(B2);
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].bandwidth_bps == doctest::Approx(1e12));
  CHECK(paths[0].path == std::vector<AsId>{B1, B2});
  CHECK(paths[1].bandwidth_bps == doctest::Approx(2e12));
  CHECK(paths[1].path == std::vector<AsId>{D1a, B1, B2});
  CHECK(books.at(D1).guaranteed_total(B2) == doctest::Approx(3e12));

  // inbound bookkeeping counts only the direct absorption deal
  CHECK(books.at(B2).inbound_total() == doctest::Approx(5e12));
  CHECK(books.at(B1).inbound_total() == 0.0);

  SUBCASE("unknown destination yields no rows") {
    CHECK(books.at(D1).lookup_core_paths(99).empty());
  }

  SUBCASE("resale cannot exceed the remaining slice") {
    // B1 holds 5 and resold 4; a 2 Tbps extension no longer fits
    auto r = respond(books.at(B1), books.at(D1), propose(B1, D1, B2, 2e12), true);
    CHECK(r == ContractResponse::Rejected);
    // but the remaining 1 Tbps still does
    auto ok = respond(books.at(B1), books.at(D1), propose(B1, D1, B2, 1e12), true);
    CHECK(ok == ContractResponse::Accepted);
  }

  SUBCASE("rows never exceed the backing chain") {
    for (const auto& [id, book] : books)
      for (const auto& row : book.rows())
        if (row.path.size() > 1) {
          // the next hop holds a guarantee at least as large, minus resales
          CHECK(books.at(row.path.front()).guaranteed_total(row.destination) + 1e-6 >=
                row.bandwidth_bps);
        }
  }
}

TEST_CASE("basic rejection rules") {
  std::map<AsId, ContractBook> books;
  books.emplace(1, ContractBook(1));
  books.emplace(2, ContractBook(2));

  CHECK(respond(books.at(1), books.at(1), propose(1, 1, 1, 1e9), true) ==
        ContractResponse::Rejected);
  CHECK(respond(books.at(1), books.at(2), propose(1, 2, 1, 0), true) ==
        ContractResponse::Rejected);
  CHECK(respond(books.at(1), books.at(2), propose(1, 2, 1, 1e9), false) ==
        ContractResponse::Rejected);
  // extension without any backing row
  CHECK(respond(books.at(1), books.at(2), propose(1, 2, 7, 1e9), true) ==
        ContractResponse::Rejected);
  // misrouted message is a programming error, not a business decision
  CHECK_THROWS_AS(respond(books.at(2), books.at(1), propose(1, 2, 1, 1e9), true),
                  std::invalid_argument);
}

TEST_CASE("contract expiry removes rows") {
  std::map<AsId, ContractBook> books;
  books.emplace(1, ContractBook(1));
  books.emplace(2, ContractBook(2));
  books.emplace(3, ContractBook(3));

  respond(books.at(1), books.at(2), propose(1, 2, 1, 1e9, SibraTime{100}), true);
  respond(books.at(2), books.at(3), propose(2, 3, 1, 0.5e9, SibraTime{100}), true);
  CHECK(books.at(2).lookup_core_paths(1).size() == 1);
  CHECK(books.at(3).lookup_core_paths(1).size() == 1);

  CHECK(books.at(2).drop_expired(SibraTime{99}) == 0);
  CHECK(books.at(2).drop_expired(SibraTime{100}) == 1);
  CHECK(books.at(2).lookup_core_paths(1).empty());
  CHECK(books.at(1).drop_expired(SibraTime{100}) == 1);  // inbound record
  CHECK(books.at(1).inbound_total() == 0.0);
}

TEST_CASE("negotiation touches each edge at most once") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 4 + static_cast<int>(rng() % 30);
    std::map<AsId, ContractBook> books;
    for (int i = 1; i <= n; ++i) books.emplace(i, ContractBook(static_cast<AsId>(i)));

    // random connected graph: spanning chain plus random chords
    std::vector<std::pair<AsId, AsId>> edges;
    for (int i = 2; i <= n; ++i)
      edges.push_back({static_cast<AsId>(1 + rng() % (i - 1)), static_cast<AsId>(i)});
    int chords = static_cast<int>(rng() % (2 * n));
    for (int c = 0; c < chords; ++c) {
      AsId a = static_cast<AsId>(1 + rng() % n), b = static_cast<AsId>(1 + rng() % n);
      if (a != b) edges.push_back({a, b});
    }

    AsId dst = static_cast<AsId>(1 + rng() % n);
    int messages = negotiate_destination(books, dst, edges, 16e12);
    CHECK(messages <= static_cast<int>(edges.size()));

    // every AS reachable from dst ends up with a guarantee toward it
    for (auto& [id, book] : books) {
      if (id == dst) continue;
      CHECK(book.guaranteed_total(dst) > 0);
      for (const auto& row : book.rows()) {
        REQUIRE(!row.path.empty());
        CHECK(row.path.back() == dst);
      }
    }

    // conservation: no book resells more than it holds
    for (auto& [id, book] : books)
      for (const auto& row : book.rows()) CHECK(row.resold_bps <= row.bandwidth_bps + 1e-6);
  }
}

TEST_CASE("negotiated shares sum to the absorb budget one hop out") {
  std::map<AsId, ContractBook> books;
  for (AsId a : {1, 2, 3, 4}) books.emplace(a, ContractBook(a));
  // star: 1 in the middle
  std::vector<std::pair<AsId, AsId>> edges{{1, 2}, {1, 3}, {1, 4}};
  negotiate_destination(books, 1, edges, 9e12);
  double total = 0;
  for (AsId a : {2, 3, 4}) total += books.at(a).guaranteed_total(1);
  CHECK(total == doctest::Approx(9e12).epsilon(1e-12));
  CHECK(books.at(1).inbound_total() == doctest::Approx(9e12).epsilon(1e-12));
}
