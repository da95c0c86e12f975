// simnet.hpp -- deterministic discrete-event simulator: synthetic AS-level
// topologies, benign and attacker traffic, and the canned experiment kinds.
// One seeded generator drives every random choice; identical (topology,
// scenario, seed) triples produce byte-identical logs and metrics.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sibra/contracts.hpp"
#include "sibra/core.hpp"

namespace sibra {

struct TopoAs {
  AsId id = 0;
  int isd = 1;
  int tier = 3;  // 1 core, 2 transit, 3 leaf
  bool core = false;
  bool leaf = false;
};

struct TopoLink {
  AsId a = 0;
  AsId b = 0;
  LinkAnatomy anatomy;
  double delay_ms = 1.0;
};

struct SteadyPath {
  AsId leaf = 0;
  std::vector<AsId> path;  // leaf first, ISD core last
  double sbw_kbps = 0;
};

struct TopoCorePath {
  AsId src = 0;
  AsId dst = 0;
  std::vector<AsId> path;
  double cbw_kbps = 0;
};

struct StaticContract {
  AsId proposer = 0;
  AsId acceptor = 0;
  AsId destination = 0;
  double bandwidth_bps = 0;
  SibraTime expiry = kNeverExpires;
};

struct Topology {
  std::vector<TopoAs> ases;
  std::vector<TopoLink> links;
  std::vector<SteadyPath> steady_paths;
  std::vector<TopoCorePath> core_paths;
  std::vector<StaticContract> contracts;

  void validate() const;  // throws std::invalid_argument
  std::string digest() const;
  const TopoAs* find_as(AsId id) const;
  const TopoLink* find_link(AsId a, AsId b) const;
  const SteadyPath* steady_for(AsId leaf) const;
  const TopoCorePath* core_between(AsId src, AsId dst) const;
  int isd_count() const;
};

// Parses the versioned structured-text form (format: 1). Parse failures
// carry the 1-based line number of the offending byte.
Topology load_topology(const std::string& path);
Topology parse_topology(const std::string& text);

// Tiered synthetic internet: per ISD one core, a transit layer, leaves
// underneath; cores fully meshed across ISDs. Deterministic in the seed.
Topology generate_topology(int n_isd, int ases, std::uint64_t seed);

// Disjoint linear paths (request source at one end, destination core at the
// other) with hop counts drawn uniformly from [min_hops, max_hops].
Topology generate_chain_topology(int paths, int min_hops, int max_hops,
                                 std::uint64_t seed);

enum class ScenarioKind { DocIntra, DocInter, Coremelt, LowerBound, LossTolerance, Dill };

ScenarioKind scenario_kind_from(const std::string& name);
const char* scenario_kind_name(ScenarioKind k);

struct Scenario {
  ScenarioKind kind = ScenarioKind::DocIntra;
  std::uint64_t seed = 0;
  double duration_s = 60.0;
  // traffic shape
  int benign_count = 5;
  int attacker_count = 50;       // attacking ASes (request floods, churn)
  int attacker_pairs = 50;       // reserved-but-idle flow pairs
  double request_rate_hz = 10.0;
  int request_bytes = 125;
  double request_limit_frac = 0.05;
  double timeout_s = 4.0;
  double loss_rate = 0.0;  // per-packet; applied as calibrated per-hop draws
  double flood_factor = 50.0;    // attacker request rate vs own limit
  // transfers and reservations
  double transfer_bytes = 1e6;
  double reservation_kbps = 800.0;
  double attacker_kbps = 256.0;
  double attacker_send_kbps = 8.0;

  void validate() const;
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text);

struct MetricRow {
  double t_s = 0;
  std::string series;
  double value = 0;
};

struct Metrics {
  double success_ratio = 1.0;
  double transfer_time_s = 0.0;
  double r_waste = 0.0;
  int benign_class = -1;  // ephemeral ladder index granted to the probe flow
  std::vector<std::pair<double, double>> reservable_kbps;  // (t_s, kbps)
  std::vector<MetricRow> rows;
  std::string event_log;  // line-delimited records
};

Metrics run_scenario(const Topology& topo, const Scenario& sc);

// LowerBound with a mid-run population jump: at t = half, ten times as many
// attacker ASes are active. The probe's reservable bandwidth must not move,
// because the share depends only on the topology's steady-path weights.
std::vector<std::pair<double, double>> run_lowerbound(const Topology& topo,
                                                      const Scenario& sc);

std::string metrics_csv(const Metrics& m);
void emit_metrics(const Metrics& m, const std::string& path);

}  // namespace sibra
