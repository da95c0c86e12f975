#include "sibra/fairshare.hpp"

#include <algorithm>
#include <stdexcept>

namespace sibra {

namespace {

void require_nonneg(double v, const char* what) {
  if (v < 0) throw std::invalid_argument(std::string(what) + " must be non-negative");
}

void require_denominator(double v, const char* what) {
  if (v <= 0) throw std::domain_error(std::string(what) + " must be positive");
}

void require_rho(double rho) {
  if (!(rho > 0 && rho < 1)) throw std::domain_error("rho must lie strictly in (0,1)");
}

}  // namespace

void ShareInputs::validate() const {
  require_nonneg(beta, "beta");
  require_nonneg(sBW_u, "sBW_u");
  require_nonneg(sBW_S, "sBW_S");
  require_nonneg(sBW_ustar, "sBW_ustar");
  require_nonneg(sBW_C, "sBW_C");
  require_nonneg(sBW_d, "sBW_d");
  require_nonneg(C_SD, "C_SD");
  require_nonneg(C_starD, "C_starD");
  if (sBW_u > sBW_S) throw std::invalid_argument("sBW_u exceeds sBW_S");
  if (sBW_u > sBW_ustar) throw std::invalid_argument("sBW_u exceeds sBW_ustar");
  if (C_SD > C_starD) throw std::invalid_argument("C_SD exceeds C_starD");
  require_rho(rho);
}

double eph_source_share(const ShareInputs& in) {
  require_nonneg(in.sBW_u, "sBW_u");
  require_nonneg(in.beta, "beta");
  return in.beta * in.sBW_u;
}

double eph_core_share(const ShareInputs& in) {
  require_nonneg(in.sBW_u, "sBW_u");
  require_nonneg(in.sBW_C, "sBW_C");
  require_denominator(in.sBW_S, "sBW_S");
  return in.sBW_u / in.sBW_S * in.beta * in.sBW_C;
}

double eph_dest_share(const ShareInputs& in) {
  require_nonneg(in.sBW_u, "sBW_u");
  require_nonneg(in.C_SD, "C_SD");
  require_nonneg(in.sBW_d, "sBW_d");
  require_denominator(in.sBW_S, "sBW_S");
  require_denominator(in.C_starD, "C_starD");
  return in.C_SD / in.C_starD * (in.sBW_u / in.sBW_S) * in.beta * in.sBW_d;
}

double eph_path_share(const ShareInputs& in) {
  return std::min({eph_source_share(in), eph_core_share(in), eph_dest_share(in)});
}

double steady_core_share(const ShareInputs& in) {
  require_nonneg(in.sBW_u, "sBW_u");
  require_nonneg(in.sBW_C, "sBW_C");
  require_denominator(in.sBW_ustar, "sBW_ustar");
  return in.sBW_u / in.sBW_ustar * in.sBW_C;
}

double steady_dest_share(const ShareInputs& in) {
  require_nonneg(in.sBW_u, "sBW_u");
  require_nonneg(in.C_SD, "C_SD");
  require_nonneg(in.sBW_d, "sBW_d");
  require_denominator(in.sBW_ustar, "sBW_ustar");
  require_denominator(in.C_starD, "C_starD");
  return in.C_SD / in.C_starD * (in.sBW_u / in.sBW_ustar) * in.sBW_d;
}

double steady_local_share(const ShareInputs& in) {
  require_nonneg(in.sBW_u, "sBW_u");
  require_nonneg(in.sBW_d, "sBW_d");
  require_denominator(in.sBW_ustar, "sBW_ustar");
  require_rho(in.rho);
  return in.sBW_u / in.sBW_ustar * in.rho * in.sBW_d;
}

double steady_external_share(const ShareInputs& in) {
  require_rho(in.rho);
  return (1.0 - in.rho) * steady_dest_share(in);
}

LeafShare leaf_fair_share(double total_core_capacity_bps, std::uint64_t leaf_count,
                          const LinkAnatomy& anatomy) {
  if (leaf_count == 0) throw std::domain_error("leaf count must be positive");
  require_nonneg(total_core_capacity_bps, "capacity");
  double total = total_core_capacity_bps / static_cast<double>(leaf_count);
  return {total, anatomy.ephemeral_frac * total};
}

}  // namespace sibra
