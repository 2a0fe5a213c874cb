#pragma once

// Closed-form capacities of the shuffling-sampling channel, its wiretap
// version with and without a shared key, and the block-erasure wiretap pair.

#include <algorithm>
#include <string>

#include "dnawt/errors.hpp"

namespace dnawt {

struct CapacityInputs {
  double beta;
  double p0;
  double q0;
  double r_key = 0.0;  // bits per stored symbol

  void validate() const {
    require(beta > 1.0, ErrorKind::BetaOutOfRange, "beta must exceed 1, got " + std::to_string(beta));
    require_probability(p0, "p0");
    require_probability(q0, "q0");
    require(r_key >= 0.0, ErrorKind::DomainError, "key rate must be non-negative");
  }
};

inline double payload_share(double beta) {
  require(beta > 1.0, ErrorKind::BetaOutOfRange, "beta must exceed 1, got " + std::to_string(beta));
  return 1.0 - 1.0 / beta;
}

inline double positive_part(double x) noexcept { return x > 0.0 ? x : 0.0; }

inline double storage_capacity(double beta, double pi0) {
  require_probability(pi0, "pi0");
  return payload_share(beta) * (1.0 - pi0);
}

inline double secure_storage_capacity(double beta, double p0, double q0) {
  require_probability(p0, "p0");
  require_probability(q0, "q0");
  require(q0 >= p0, ErrorKind::OrderViolation, "q0 < p0; use the keyed capacity");
  return payload_share(beta) * (q0 - p0);
}

inline double secure_storage_capacity_keyed(const CapacityInputs& in) {
  in.validate();
  const double share = payload_share(in.beta);
  return std::min(share * positive_part(in.q0 - in.p0) + in.r_key, share * (1.0 - in.p0));
}

inline double bewtc_secrecy_capacity(double eps_m, double eps_w, double r_key) {
  require_probability(eps_m, "eps_m");
  require_probability(eps_w, "eps_w");
  require(r_key >= 0.0, ErrorKind::DomainError, "key rate must be non-negative");
  return std::min(r_key + positive_part(eps_w - eps_m), 1.0 - eps_m);
}

}  // namespace dnawt
