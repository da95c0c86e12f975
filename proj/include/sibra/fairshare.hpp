// fairshare.hpp -- proportional bandwidth share formulas. Everything here is
// a pure function of configured aggregates, which is what makes the shares
// independent of how many competitors show up at runtime.
#pragma once

#include <cstdint>

#include "sibra/core.hpp"

namespace sibra {

// Inputs for one (source leaf, destination) pair. Aggregates are configured
// or negotiated totals, never live competitor counts.
struct ShareInputs {
  double beta = 16.0;     // ephemeral_frac / steady_frac
  double sBW_u = 0;       // this source's steady up-path, kbps
  double sBW_S = 0;       // total steady sold by the source's core AS, kbps
  double sBW_ustar = 0;   // total steady up-path bandwidth at the core, kbps
  double sBW_C = 0;       // core-path bandwidth, kbps
  double sBW_d = 0;       // steady down-path, kbps
  double C_SD = 0;        // core contract source->destination, kbps
  double C_starD = 0;     // all core contracts into the destination core, kbps
  double rho = Defaults::rho;  // local vs external down-path preference

  // Full invariant check; throws std::invalid_argument.
  void validate() const;
};

// Ephemeral entitlement earned by holding a steady up-path: beta * sBW_u.
double eph_source_share(const ShareInputs& in);
// Share of a core path, weighted by the source's slice of its core's
// steady total: (sBW_u / sBW_S) * beta * sBW_C.
double eph_core_share(const ShareInputs& in);
// Share of the destination's steady down-path, additionally weighted by the
// contract slice: (C_SD / C_starD) * (sBW_u / sBW_S) * beta * sBW_d.
double eph_dest_share(const ShareInputs& in);
// End-to-end ephemeral allocation: min of the three shares above.
double eph_path_share(const ShareInputs& in);

// Steady traffic shares (no beta factor).
double steady_core_share(const ShareInputs& in);      // (sBW_u/sBW_ustar)*sBW_C
double steady_dest_share(const ShareInputs& in);      // (C_SD/C_starD)*(sBW_u/sBW_ustar)*sBW_d
double steady_local_share(const ShareInputs& in);     // (sBW_u/sBW_ustar)*rho*sBW_d
double steady_external_share(const ShareInputs& in);  // (1-rho)*steady_dest_share

struct LeafShare {
  double total_bps = 0;
  double ephemeral_bps = 0;
};

// Equal split of a country-level aggregate across its leaf ASes.
LeafShare leaf_fair_share(double total_core_capacity_bps, std::uint64_t leaf_count,
                          const LinkAnatomy& anatomy);

}  // namespace sibra
