// contracts.hpp -- guaranteed-bandwidth agreements between neighboring core
// ASes. The absorbing (destination-side) AS proposes; acceptance gives the
// sending side a table row it may re-sell to neighbors farther out, so
// guarantees propagate hop by hop without any multi-hop negotiation.
#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "sibra/core.hpp"

namespace sibra {

inline constexpr SibraTime kNeverExpires{std::numeric_limits<std::uint64_t>::max()};

struct CoreContract {
  AsId proposer = 0;     // absorbing side; traffic flows toward it
  AsId acceptor = 0;     // sending side that gains the guarantee
  AsId destination = 0;  // final core AS reached (== proposer for direct deals)
  double bandwidth_bps = 0;
  double uptime = 0.9999;
  SibraTime expiry = kNeverExpires;
  // For extensions: which of the proposer's core paths is being re-sold.
  // Empty lets the responder pick the largest-slack row.
  std::vector<AsId> via;
};

struct CorePathRow {
  AsId destination = 0;
  std::vector<AsId> path;  // neighbor-first hop sequence toward destination
  double bandwidth_bps = 0;
  double resold_bps = 0;  // slice already extended to farther neighbors
  SibraTime expiry = kNeverExpires;

  double available() const { return bandwidth_bps - resold_bps; }
};

struct BootstrapSplit {
  double total_bps = 0;      // 85% of the observed aggregate
  double steady_bps = 0;     // 5% slice
  double ephemeral_bps = 0;  // 80% slice
};

// Initial proposal size for a fresh deployment: commit to absorbing the
// steady + ephemeral partitions of today's observed volume.
BootstrapSplit bootstrap_proposal(double observed_aggregate_bps);

enum class ContractResponse { Accepted, Rejected };

// Per-AS view: guaranteed core paths plus the raw contracts behind them.
class ContractBook {
 public:
  ContractBook() = default;
  explicit ContractBook(AsId self) : self_(self) {}

  AsId self() const { return self_; }
  const std::vector<CorePathRow>& rows() const { return rows_; }
  std::vector<CorePathRow> lookup_core_paths(AsId dst) const;
  double guaranteed_total(AsId dst) const;  // sum of row bandwidths toward dst

  // Sum of direct contracts this AS proposed (traffic it absorbs); this is
  // the C_*->D aggregate the share formulas divide by.
  double inbound_total() const;
  const std::vector<CoreContract>& inbound() const { return inbound_; }

  std::size_t drop_expired(SibraTime now);

 private:
  friend ContractResponse respond(ContractBook& proposer, ContractBook& acceptor,
                                  const CoreContract& c, bool adjacent);
  AsId self_ = 0;
  std::vector<CorePathRow> rows_;
  std::vector<CoreContract> inbound_;
};

// Builds the proposal message; validation happens at respond time.
CoreContract propose(AsId proposer, AsId acceptor, AsId destination, double bandwidth_bps,
                     SibraTime expiry = kNeverExpires, std::vector<AsId> via = {});

// Single round-trip decision. Direct proposals (destination == proposer) are
// accepted on basic checks; extensions additionally require one of the
// proposer's own rows toward the destination to cover the amount, which is
// then marked as re-sold so it cannot be extended twice.
ContractResponse respond(ContractBook& proposer, ContractBook& acceptor,
                         const CoreContract& c, bool adjacent);

// Floods guarantees for one destination across a core graph: BFS order, each
// AS re-sells its remaining guarantee in equal slices to strictly-farther
// neighbors, at most one proposal per edge. Returns messages sent.
int negotiate_destination(std::map<AsId, ContractBook>& books, AsId destination,
                          const std::vector<std::pair<AsId, AsId>>& edges,
                          double absorb_budget_bps, SibraTime expiry = kNeverExpires);

}  // namespace sibra
