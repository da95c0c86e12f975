// Command-line front end: rate ladders, per-leaf share math, scenario
// execution, and header codec inspection. Exit codes: 0 ok, 1 domain error,
// 2 usage or I/O error. Machine output goes to stdout, diagnostics to stderr.
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sibra/fairshare.hpp"
#include "sibra/simnet.hpp"
#include "sibra/token.hpp"

using namespace sibra;

namespace {

std::string num2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

const char* kind_tag(PathKind k) { return k == PathKind::Steady ? "Steady" : "Ephemeral"; }

int cmd_classes(const std::string& format) {
  std::ostringstream out;
  if (format == "csv") {
    out << "partition,index,rate_kbps\n";
    for (int i = 0; i < kSteadyClassCount; ++i)
      out << "Steady," << i << "," << num2(steady_class_rate(i)) << "\n";
    for (int i = 0; i < kEphemeralClassCount; ++i)
      out << "Ephemeral," << i << "," << num2(ephemeral_class_rate(i)) << "\n";
  } else {
    for (int i = 0; i < kSteadyClassCount; ++i)
      out << "Steady     " << (i < 10 ? " " : "") << i << "  "
          << num2(steady_class_rate(i)) << " kbps\n";
    for (int i = 0; i < kEphemeralClassCount; ++i)
      out << "Ephemeral  " << (i < 10 ? " " : "") << i << "  "
          << num2(ephemeral_class_rate(i)) << " kbps\n";
  }
  std::cout << out.str();
  return 0;
}

LinkAnatomy parse_anatomy(const std::string& spec, double capacity_bps) {
  LinkAnatomy a;
  a.capacity_bps = capacity_bps;
  if (!spec.empty()) {
    double s, e, b;
    if (std::sscanf(spec.c_str(), "%lf,%lf,%lf", &s, &e, &b) != 3)
      throw std::invalid_argument("anatomy wants steady,ephemeral,besteffort fractions");
    a.steady_frac = s;
    a.ephemeral_frac = e;
    a.besteffort_frac = b;
  }
  a.validate();
  return a;
}

int cmd_leaf_share(double capacity_bps, std::uint64_t leaves, const std::string& anatomy,
                   const std::string& format) {
  LeafShare share = leaf_fair_share(capacity_bps, leaves, parse_anatomy(anatomy, capacity_bps));
  if (format == "csv") {
    std::cout << "metric,value_mbps\n"
              << "total_share," << num2(share.total_bps / 1e6) << "\n"
              << "ephemeral_share," << num2(share.ephemeral_bps / 1e6) << "\n";
  } else {
    std::cout << "Per-leaf share:    " << num2(share.total_bps / 1e6) << " Mbps\n"
              << "Ephemeral portion: " << num2(share.ephemeral_bps / 1e6) << " Mbps\n";
  }
  return 0;
}

int cmd_simulate(const std::string& topo_path, const std::string& scn_path,
                 const std::string& out_path, bool seed_set, std::uint64_t seed,
                 const std::string& format) {
  for (const std::string& p : {topo_path, scn_path}) {
    if (!std::filesystem::exists(p)) {
      std::cerr << "cannot open " << p << "\n";
      return 2;
    }
  }
  Topology topo = load_topology(topo_path);
  topo.validate();
  Scenario sc = load_scenario(scn_path);
  if (seed_set) sc.seed = seed;
  sc.validate();

  Metrics m = run_scenario(topo, sc);
  if (!out_path.empty()) emit_metrics(m, out_path);
  if (format == "csv") {
    std::cout << metrics_csv(m);
  } else {
    std::cout << "scenario:             " << scenario_kind_name(sc.kind) << "\n"
              << "seed:                 " << sc.seed << "\n"
              << "success ratio:        " << num2(m.success_ratio) << "\n"
              << "transfer time:        " << num2(m.transfer_time_s) << " s\n"
              << "reservation waste:    " << num2(m.r_waste * 100.0) << " %\n"
              << "benign class granted: " << m.benign_class << "\n";
    if (!m.reservable_kbps.empty())
      std::cout << "reservable bandwidth: " << num2(m.reservable_kbps.back().second)
                << " kbps\n";
    if (!out_path.empty()) std::cout << "metrics written to " << out_path << "\n";
  }
  return 0;
}

std::vector<std::uint8_t> hex_to_bytes(const std::string& hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("odd hex length");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto nib = [&](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      c = static_cast<char>(std::tolower(c));
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      throw std::invalid_argument("bad hex digit");
    };
    out[i] = static_cast<std::uint8_t>(nib(hex[2 * i]) << 4 | nib(hex[2 * i + 1]));
  }
  return out;
}

std::string bytes_to_hex(const std::vector<std::uint8_t>& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

BandwidthClass parse_class(const std::string& s) {
  if (s.size() < 2 || (s[0] != 'S' && s[0] != 'E' && s[0] != 's' && s[0] != 'e'))
    throw std::invalid_argument("class wants S<i> or E<i>, got " + s);
  PathKind kind = (s[0] == 'S' || s[0] == 's') ? PathKind::Steady : PathKind::Ephemeral;
  int idx = std::stoi(s.substr(1));
  int limit = kind == PathKind::Steady ? kSteadyClassCount : kEphemeralClassCount;
  if (idx < 0 || idx >= limit) throw std::invalid_argument("class index out of range: " + s);
  return {kind, static_cast<std::uint8_t>(idx)};
}

std::string class_tag(BandwidthClass c) {
  return std::string(1, c.kind == PathKind::Steady ? 'S' : 'E') + std::to_string(c.index);
}

const char* dir_tag(Direction d) {
  switch (d) {
    case Direction::Forward: return "fwd";
    case Direction::Reverse: return "rev";
    case Direction::Bidirectional: return "bi";
  }
  return "?";
}

// Spec grammar: comma-separated key=value pairs plus bare flags, e.g.
//   flow=<32 hex>,exp=12,fwd=E4,rev=E3,idx=1,dir=fwd,request
SibraHeader header_from_spec(const std::string& spec) {
  SibraHeader h;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    std::string key = item.substr(0, eq);
    std::string val = eq == std::string::npos ? "" : item.substr(eq + 1);
    if (key == "request") h.is_request = true;
    else if (key == "failed") h.failed = true;
    else if (key == "keepalive") h.keepalive = true;
    else if (key == "flow") h.flow = FlowId::from_hex(val);
    else if (key == "exp") h.expiration = {std::stoull(val)};
    else if (key == "fwd") h.fwd_class = parse_class(val);
    else if (key == "rev") h.rev_class = parse_class(val);
    else if (key == "idx") h.reservation_index = static_cast<std::uint8_t>(std::stoul(val) & 0xf);
    else if (key == "dir") {
      if (val == "fwd") h.direction = Direction::Forward;
      else if (val == "rev") h.direction = Direction::Reverse;
      else if (val == "bi") h.direction = Direction::Bidirectional;
      else throw std::invalid_argument("dir wants fwd|rev|bi");
    } else {
      throw std::invalid_argument("unknown header field: " + key);
    }
  }
  return h;
}

int cmd_header(const std::string& decode_hex, const std::string& encode_spec,
               const std::string& format) {
  if (!encode_spec.empty()) {
    std::cout << bytes_to_hex(encode_header(header_from_spec(encode_spec))) << "\n";
    return 0;
  }
  SibraHeader h = decode_header(hex_to_bytes(decode_hex));
  const char* sep = format == "csv" ? "," : ": ";
  std::ostringstream out;
  auto field = [&](const char* name, const std::string& value) {
    if (format == "csv") out << name << sep << value << "\n";
    else out << name << sep << value << "\n";
  };
  if (format == "csv") out << "field,value\n";
  field("flow", h.flow.hex());
  field("expiration_tick", std::to_string(h.expiration.ticks));
  field("fwd_class", class_tag(h.fwd_class) + " " + num2(h.fwd_class.rate_kbps()) + " kbps");
  field("rev_class", class_tag(h.rev_class) + " " + num2(h.rev_class.rate_kbps()) + " kbps");
  field("direction", dir_tag(h.direction));
  field("index", std::to_string(h.reservation_index));
  std::string flags;
  if (h.is_request) flags += "request ";
  if (h.failed) flags += "failed ";
  if (h.keepalive) flags += "keepalive ";
  if (flags.empty()) flags = "-";
  else flags.pop_back();
  field("flags", flags);
  field("hops", std::to_string(h.hops));
  field("tokens", std::to_string(h.tokens.size()));
  if (h.failed) field("decline_as", std::to_string(h.decline_as));
  for (const auto& o : h.offers)
    field("offer", std::to_string(o.as) + " " + num2(o.offered_kbps) + " kbps");
  std::cout << out.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bandwidth reservation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // accept --format after the subcommand too
  std::string format = "plain";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "plain"}))
      ->capture_default_str();

  auto* classes = app.add_subcommand("classes", "print both rate ladders");

  auto* leaf = app.add_subcommand("leaf-share", "equal split of a core aggregate");
  double capacity_bps = 0;
  std::uint64_t leaves = 0;
  std::string anatomy;
  leaf->add_option("--capacity", capacity_bps, "aggregate capacity in bps")->required();
  leaf->add_option("--leaves", leaves, "number of leaf ASes")->required();
  leaf->add_option("--anatomy", anatomy, "steady,ephemeral,besteffort fractions");

  auto* sim = app.add_subcommand("simulate", "run a scenario against a topology");
  std::string topo_path, scn_path, out_path;
  std::uint64_t seed = 0;
  sim->add_option("--topology", topo_path, "topology json")->required();
  sim->add_option("--scenario", scn_path, "scenario json")->required();
  sim->add_option("--out", out_path, "metrics csv destination");
  auto* seed_opt = sim->add_option("--seed", seed, "override the scenario seed")
                       ->capture_default_str();

  auto* hdr = app.add_subcommand("header", "encode or decode a wire header");
  std::string decode_hex, encode_spec;
  auto* dec = hdr->add_option("--decode", decode_hex, "header bytes as hex");
  auto* enc = hdr->add_option("--encode", encode_spec, "field spec, key=value comma list");
  dec->excludes(enc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // usage problems are I/O-class errors
  }

  try {
    if (app.got_subcommand(classes)) return cmd_classes(format);
    if (app.got_subcommand(leaf)) return cmd_leaf_share(capacity_bps, leaves, anatomy, format);
    if (app.got_subcommand(sim))
      return cmd_simulate(topo_path, scn_path, out_path, seed_opt->count() > 0, seed, format);
    if (app.got_subcommand(hdr)) {
      if (decode_hex.empty() && encode_spec.empty()) {
        std::cerr << "header wants --decode or --encode\n";
        return 2;
      }
      return cmd_header(decode_hex, encode_spec, format);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
