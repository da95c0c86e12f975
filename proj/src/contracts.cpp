#include "sibra/contracts.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace sibra {

BootstrapSplit bootstrap_proposal(double observed_aggregate_bps) {
  if (observed_aggregate_bps < 0)
    throw std::invalid_argument("observed aggregate must be non-negative");
  return {0.85 * observed_aggregate_bps, 0.05 * observed_aggregate_bps,
          0.80 * observed_aggregate_bps};
}

std::vector<CorePathRow> ContractBook::lookup_core_paths(AsId dst) const {
  std::vector<CorePathRow> out;
  for (const auto& r : rows_)
    if (r.destination == dst) out.push_back(r);
  return out;
}

double ContractBook::guaranteed_total(AsId dst) const {
  double sum = 0;
  for (const auto& r : rows_)
    if (r.destination == dst) sum += r.bandwidth_bps;
  return sum;
}

double ContractBook::inbound_total() const {
  double sum = 0;
  for (const auto& c : inbound_) sum += c.bandwidth_bps;
  return sum;
}

std::size_t ContractBook::drop_expired(SibraTime now) {
  std::size_t before = rows_.size() + inbound_.size();
  std::erase_if(rows_, [&](const CorePathRow& r) { return r.expiry.ticks <= now.ticks; });
  std::erase_if(inbound_, [&](const CoreContract& c) { return c.expiry.ticks <= now.ticks; });
  return before - rows_.size() - inbound_.size();
}

CoreContract propose(AsId proposer, AsId acceptor, AsId destination, double bandwidth_bps,
                     SibraTime expiry, std::vector<AsId> via) {
  CoreContract c;
  c.proposer = proposer;
  c.acceptor = acceptor;
  c.destination = destination;
  c.bandwidth_bps = bandwidth_bps;
  c.expiry = expiry;
  c.via = std::move(via);
  return c;
}

ContractResponse respond(ContractBook& proposer, ContractBook& acceptor,
                         const CoreContract& c, bool adjacent) {
  if (proposer.self() != c.proposer || acceptor.self() != c.acceptor)
    throw std::invalid_argument("contract routed to the wrong parties");
  if (!adjacent) return ContractResponse::Rejected;
  if (c.proposer == c.acceptor) return ContractResponse::Rejected;
  if (!(c.bandwidth_bps > 0)) return ContractResponse::Rejected;

  CorePathRow row;
  row.destination = c.destination;
  row.bandwidth_bps = c.bandwidth_bps;
  row.expiry = c.expiry;

  if (c.destination == c.proposer) {
    // direct absorption deal
    row.path = {c.proposer};
    proposer.inbound_.push_back(c);
  } else {
    // extension: must be backed by one un-resold slice of the proposer's own
    // guarantee toward the destination
    CorePathRow* backing = nullptr;
    for (auto& r : proposer.rows_) {
      if (r.destination != c.destination) continue;
      // relative slack absorbs accumulated rounding from equal splits
      if (r.available() < c.bandwidth_bps * (1 - 1e-9)) continue;
      if (!c.via.empty()) {
        if (r.path == c.via) backing = &r;
      } else if (!backing || r.available() > backing->available()) {
        backing = &r;
      }
    }
    if (!backing) return ContractResponse::Rejected;
    backing->resold_bps += c.bandwidth_bps;
    row.path.reserve(1 + backing->path.size());
    row.path.push_back(c.proposer);
    row.path.insert(row.path.end(), backing->path.begin(), backing->path.end());
  }
  acceptor.rows_.push_back(std::move(row));
  return ContractResponse::Accepted;
}

int negotiate_destination(std::map<AsId, ContractBook>& books, AsId destination,
                          const std::vector<std::pair<AsId, AsId>>& edges,
                          double absorb_budget_bps, SibraTime expiry) {
  if (!books.count(destination)) throw std::invalid_argument("destination has no book");

  std::map<AsId, std::vector<AsId>> adj;
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& [id, ns] : adj) std::sort(ns.begin(), ns.end());

  // BFS distances from the destination
  std::map<AsId, int> dist;
  std::deque<AsId> q{destination};
  dist[destination] = 0;
  while (!q.empty()) {
    AsId u = q.front();
    q.pop_front();
    for (AsId v : adj[u])
      if (books.count(v) && !dist.count(v)) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
  }

  // process in (distance, id) order so guarantees exist before resale
  std::vector<AsId> order;
  for (auto& [id, d] : dist) order.push_back(id);
  std::sort(order.begin(), order.end(),
            [&](AsId a, AsId b) { return std::tie(dist[a], a) < std::tie(dist[b], b); });

  int messages = 0;
  for (AsId u : order) {
    std::vector<AsId> farther;
    for (AsId v : adj[u])
      if (dist.count(v) && dist[v] == dist[u] + 1) farther.push_back(v);
    if (farther.empty()) continue;

    if (u == destination) {
      if (absorb_budget_bps <= 0) continue;
      double slice = absorb_budget_bps / static_cast<double>(farther.size());
      for (AsId v : farther) {
        ++messages;  // one proposal per edge; replies ride the same exchange
        respond(books.at(u), books.at(v), propose(u, v, destination, slice, expiry), true);
      }
      continue;
    }

    // Re-sell each held row's remaining slice. Neighbors are spread across
    // rows round-robin (largest slack first) so every proposal is backed by
    // exactly one row, then each row splits evenly among its assignees.
    std::vector<CorePathRow> avail;
    for (const auto& r : books.at(u).rows())
      if (r.destination == destination && r.available() > 0) avail.push_back(r);
    if (avail.empty()) continue;
    std::stable_sort(avail.begin(), avail.end(), [](const auto& a, const auto& b) {
      return a.available() > b.available();
    });
    std::vector<int> assigned(avail.size(), 0);
    for (std::size_t j = 0; j < farther.size(); ++j) ++assigned[j % avail.size()];
    for (std::size_t j = 0; j < farther.size(); ++j) {
      const auto& row = avail[j % avail.size()];
      double slice = row.available() / assigned[j % avail.size()];
      ++messages;
      respond(books.at(u), books.at(farther[j]),
              propose(u, farther[j], destination, slice, expiry, row.path), true);
    }
  }
  return messages;
}

}  // namespace sibra
