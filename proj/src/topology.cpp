#include <cstdarg>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "nlohmann/json.hpp"
#include "sibra/simnet.hpp"

namespace sibra {

using nlohmann::json;

namespace {

[[noreturn]] void fail_at_byte(const std::string& text, std::size_t byte,
                               const std::string& what) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  throw std::invalid_argument("parse error at line " + std::to_string(line) + ": " + what);
}

json parse_versioned(const std::string& text, const char* kind) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail_at_byte(text, e.byte, e.what());
  }
  if (!j.is_object()) throw std::invalid_argument(std::string(kind) + ": expected an object");
  if (!j.contains("format") || j["format"] != 1)
    throw std::invalid_argument(std::string(kind) + ": unsupported format (want 1)");
  return j;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void append_line(std::string& out, const char* fmt, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  out += buf;
  out += '\n';
}

}  // namespace

const TopoAs* Topology::find_as(AsId id) const {
  for (const auto& a : ases)
    if (a.id == id) return &a;
  return nullptr;
}

const TopoLink* Topology::find_link(AsId a, AsId b) const {
  for (const auto& l : links)
    if ((l.a == a && l.b == b) || (l.a == b && l.b == a)) return &l;
  return nullptr;
}

const SteadyPath* Topology::steady_for(AsId leaf) const {
  for (const auto& p : steady_paths)
    if (p.leaf == leaf) return &p;
  return nullptr;
}

const TopoCorePath* Topology::core_between(AsId src, AsId dst) const {
  for (const auto& p : core_paths)
    if (p.src == src && p.dst == dst) return &p;
  return nullptr;
}

int Topology::isd_count() const {
  std::set<int> isds;
  for (const auto& a : ases) isds.insert(a.isd);
  return static_cast<int>(isds.size());
}

void Topology::validate() const {
  std::set<AsId> ids;
  for (const auto& a : ases) {
    if (a.id == 0) throw std::invalid_argument("AS id 0 is reserved");
    if (!ids.insert(a.id).second)
      throw std::invalid_argument("duplicate AS id " + std::to_string(a.id));
  }
  std::set<std::pair<AsId, AsId>> seen;
  for (const auto& l : links) {
    if (l.a == l.b) throw std::invalid_argument("self link");
    if (!ids.count(l.a) || !ids.count(l.b))
      throw std::invalid_argument("link references unknown AS");
    l.anatomy.validate();
    if (l.anatomy.capacity_bps <= 0) throw std::invalid_argument("non-positive capacity");
    auto key = std::minmax(l.a, l.b);
    if (!seen.insert({key.first, key.second}).second)
      throw std::invalid_argument("duplicate link");
  }
  for (const auto& p : steady_paths) {
    if (p.path.size() < 2) throw std::invalid_argument("steady path too short");
    if (p.path.front() != p.leaf) throw std::invalid_argument("steady path must start at its leaf");
    if (p.sbw_kbps <= 0) throw std::invalid_argument("steady path bandwidth must be positive");
    const TopoAs* leaf = find_as(p.leaf);
    const TopoAs* head = find_as(p.path.back());
    if (!leaf || !head) throw std::invalid_argument("steady path references unknown AS");
    if (!head->core || head->isd != leaf->isd)
      throw std::invalid_argument("steady path must end at the leaf's ISD core");
    for (std::size_t i = 0; i + 1 < p.path.size(); ++i)
      if (!find_link(p.path[i], p.path[i + 1]))
        throw std::invalid_argument("steady path uses a missing link");
  }
  for (const auto& a : ases)
    if (a.leaf && !steady_for(a.id))
      throw std::invalid_argument("leaf " + std::to_string(a.id) + " has no steady path");
  for (const auto& p : core_paths) {
    const TopoAs* s = find_as(p.src);
    const TopoAs* d = find_as(p.dst);
    if (!s || !d || !s->core || !d->core)
      throw std::invalid_argument("core path endpoints must be core ASes");
    if (p.cbw_kbps <= 0) throw std::invalid_argument("core path bandwidth must be positive");
    for (std::size_t i = 0; i + 1 < p.path.size(); ++i)
      if (!find_link(p.path[i], p.path[i + 1]))
        throw std::invalid_argument("core path uses a missing link");
  }
}

std::string Topology::digest() const {
  std::string canon;
  for (const auto& a : ases)
    append_line(canon, "as %u %d %d %d %d", a.id, a.isd, a.tier, a.core ? 1 : 0,
                a.leaf ? 1 : 0);
  for (const auto& l : links)
    append_line(canon, "link %u %u %.6f %.6f %.6f %.6f %.6f", l.a, l.b,
                l.anatomy.capacity_bps, l.anatomy.steady_frac, l.anatomy.ephemeral_frac,
                l.anatomy.besteffort_frac, l.delay_ms);
  for (const auto& p : steady_paths) {
    std::string hops;
    for (AsId h : p.path) hops += std::to_string(h) + " ";
    append_line(canon, "steady %u %.6f %s", p.leaf, p.sbw_kbps, hops.c_str());
  }
  for (const auto& p : core_paths) {
    std::string hops;
    for (AsId h : p.path) hops += std::to_string(h) + " ";
    append_line(canon, "core %u %u %.6f %s", p.src, p.dst, p.cbw_kbps, hops.c_str());
  }
  for (const auto& c : contracts)
    append_line(canon, "contract %u %u %u %.6f %llu", c.proposer, c.acceptor, c.destination,
                c.bandwidth_bps, static_cast<unsigned long long>(c.expiry.ticks));
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Topology parse_topology(const std::string& text) {
  json j = parse_versioned(text, "topology");
  Topology t;
  for (const auto& a : j.value("ases", json::array())) {
    TopoAs as;
    as.id = a.at("id").get<AsId>();
    as.isd = a.value("isd", 1);
    as.tier = a.value("tier", 3);
    as.core = a.value("core", false);
    as.leaf = a.value("leaf", false);
    t.ases.push_back(as);
  }
  for (const auto& l : j.value("links", json::array())) {
    TopoLink link;
    link.a = l.at("a").get<AsId>();
    link.b = l.at("b").get<AsId>();
    link.anatomy.capacity_bps = l.at("capacity_bps").get<double>();
    link.anatomy.steady_frac = l.value("steady_frac", 0.05);
    link.anatomy.ephemeral_frac = l.value("ephemeral_frac", 0.80);
    link.anatomy.besteffort_frac = l.value("besteffort_frac", 0.15);
    link.delay_ms = l.value("delay_ms", 1.0);
    t.links.push_back(link);
  }
  for (const auto& p : j.value("steady_paths", json::array())) {
    SteadyPath sp;
    sp.leaf = p.at("leaf").get<AsId>();
    sp.path = p.at("path").get<std::vector<AsId>>();
    sp.sbw_kbps = p.at("sbw_kbps").get<double>();
    t.steady_paths.push_back(sp);
  }
  for (const auto& p : j.value("core_paths", json::array())) {
    TopoCorePath cp;
    cp.src = p.at("src").get<AsId>();
    cp.dst = p.at("dst").get<AsId>();
    cp.path = p.at("path").get<std::vector<AsId>>();
    cp.cbw_kbps = p.at("cbw_kbps").get<double>();
    t.core_paths.push_back(cp);
  }
  for (const auto& c : j.value("contracts", json::array())) {
    StaticContract sc;
    sc.proposer = c.at("proposer").get<AsId>();
    sc.acceptor = c.at("acceptor").get<AsId>();
    sc.destination = c.value("destination", sc.proposer);
    sc.bandwidth_bps = c.at("bandwidth_bps").get<double>();
    if (c.contains("expires_tick") && c["expires_tick"].get<long long>() >= 0)
      sc.expiry = {c["expires_tick"].get<std::uint64_t>()};
    t.contracts.push_back(sc);
  }
  t.validate();
  return t;
}

Topology load_topology(const std::string& path) { return parse_topology(slurp(path)); }

Topology generate_topology(int n_isd, int ases, std::uint64_t seed) {
  if (n_isd < 1 || ases < 3 * n_isd)
    throw std::invalid_argument("need at least a core, a transit, and a leaf per ISD");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  auto pick = [&rng](int n) { return static_cast<int>(rng() % n); };

  Topology t;
  std::vector<AsId> cores;
  AsId next_id = 1;
  static const double kLeafSbw[] = {16.0, 32.0, 64.0, 200.0};

  for (int isd = 1; isd <= n_isd; ++isd) {
    int budget = ases / n_isd + (isd == 1 ? ases % n_isd : 0);
    int transits = std::max(1, (budget - 1) / 50);
    int leaves = budget - 1 - transits;

    AsId core = next_id++;
    t.ases.push_back({core, isd, 1, true, false});
    cores.push_back(core);

    std::vector<AsId> tr;
    for (int i = 0; i < transits; ++i) {
      AsId id = next_id++;
      t.ases.push_back({id, isd, 2, false, false});
      t.links.push_back({id, core, LinkAnatomy{40e6}, 10.0});
      tr.push_back(id);
    }
    for (int i = 0; i < leaves; ++i) {
      AsId id = next_id++;
      t.ases.push_back({id, isd, 3, false, true});
      AsId up = tr[pick(static_cast<int>(tr.size()))];
      t.links.push_back({id, up, LinkAnatomy{20e6}, 5.0 + pick(5)});
      t.steady_paths.push_back({id, {id, up, core}, kLeafSbw[pick(4)]});
    }
  }
  for (std::size_t i = 0; i < cores.size(); ++i)
    for (std::size_t k = i + 1; k < cores.size(); ++k) {
      t.links.push_back({cores[i], cores[k], LinkAnatomy{40e6}, 20.0});
      double cbw = 40e6 * 0.05 / 1000.0;  // steady slice of the core link, kbps
      t.core_paths.push_back({cores[i], cores[k], {cores[i], cores[k]}, cbw});
      t.core_paths.push_back({cores[k], cores[i], {cores[k], cores[i]}, cbw});
      t.contracts.push_back({cores[k], cores[i], cores[k], cbw * 1000.0, kNeverExpires});
      t.contracts.push_back({cores[i], cores[k], cores[i], cbw * 1000.0, kNeverExpires});
    }
  t.validate();
  return t;
}

Topology generate_chain_topology(int paths, int min_hops, int max_hops, std::uint64_t seed) {
  if (paths < 1 || min_hops < 1 || max_hops < min_hops)
    throw std::invalid_argument("bad chain topology shape");
  std::mt19937_64 rng(seed ^ 0xda942042e4dd58b5ull);
  Topology t;
  AsId next_id = 1;
  for (int p = 0; p < paths; ++p) {
    int hops = min_hops + static_cast<int>(rng() % (max_hops - min_hops + 1));
    double delay = 500.0 / hops;  // one-way 500 ms regardless of length
    std::vector<AsId> chain;
    for (int i = 0; i <= hops; ++i) {
      AsId id = next_id++;
      bool head = i == hops;
      t.ases.push_back({id, p + 1, head ? 1 : (i == 0 ? 3 : 2), head, i == 0});
      chain.push_back(id);
      if (i > 0) t.links.push_back({chain[i - 1], id, LinkAnatomy{20e6}, delay});
    }
    t.steady_paths.push_back({chain.front(), chain, 64.0});
  }
  t.validate();
  return t;
}

ScenarioKind scenario_kind_from(const std::string& name) {
  if (name == "DocIntra") return ScenarioKind::DocIntra;
  if (name == "DocInter") return ScenarioKind::DocInter;
  if (name == "Coremelt") return ScenarioKind::Coremelt;
  if (name == "LowerBound") return ScenarioKind::LowerBound;
  if (name == "LossTolerance") return ScenarioKind::LossTolerance;
  if (name == "Dill") return ScenarioKind::Dill;
  throw std::invalid_argument("unknown scenario kind: " + name);
}

const char* scenario_kind_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::DocIntra: return "DocIntra";
    case ScenarioKind::DocInter: return "DocInter";
    case ScenarioKind::Coremelt: return "Coremelt";
    case ScenarioKind::LowerBound: return "LowerBound";
    case ScenarioKind::LossTolerance: return "LossTolerance";
    case ScenarioKind::Dill: return "Dill";
  }
  return "unknown";
}

void Scenario::validate() const {
  if (duration_s <= 0) throw std::invalid_argument("duration must be positive");
  if (timeout_s <= 0) throw std::invalid_argument("timeout must be positive");
  if (loss_rate < 0 || loss_rate >= 1) throw std::invalid_argument("loss rate must be in [0,1)");
  if (request_rate_hz < 0 || request_bytes <= 0)
    throw std::invalid_argument("bad request shape");
  if (request_limit_frac <= 0 || request_limit_frac > 1)
    throw std::invalid_argument("request limit fraction must be in (0,1]");
  if (benign_count < 0 || attacker_count < 0 || attacker_pairs < 0)
    throw std::invalid_argument("population counts must be non-negative");
  if (transfer_bytes <= 0 || reservation_kbps <= 0 || attacker_kbps <= 0)
    throw std::invalid_argument("transfer parameters must be positive");
}

Scenario parse_scenario(const std::string& text) {
  json j = parse_versioned(text, "scenario");
  Scenario s;
  s.kind = scenario_kind_from(j.at("kind").get<std::string>());
  s.seed = j.value("seed", 0ull);
  s.duration_s = j.value("duration_s", s.duration_s);
  s.benign_count = j.value("benign_count", s.benign_count);
  s.attacker_count = j.value("attacker_count", s.attacker_count);
  s.attacker_pairs = j.value("attacker_pairs", s.attacker_pairs);
  s.request_rate_hz = j.value("request_rate_hz", s.request_rate_hz);
  s.request_bytes = j.value("request_bytes", s.request_bytes);
  s.request_limit_frac = j.value("request_limit_frac", s.request_limit_frac);
  s.timeout_s = j.value("timeout_s", s.timeout_s);
  s.loss_rate = j.value("loss_rate", s.loss_rate);
  s.flood_factor = j.value("flood_factor", s.flood_factor);
  s.transfer_bytes = j.value("transfer_bytes", s.transfer_bytes);
  s.reservation_kbps = j.value("reservation_kbps", s.reservation_kbps);
  s.attacker_kbps = j.value("attacker_kbps", s.attacker_kbps);
  s.attacker_send_kbps = j.value("attacker_send_kbps", s.attacker_send_kbps);
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) { return parse_scenario(slurp(path)); }

}  // namespace sibra
