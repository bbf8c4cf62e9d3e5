#pragma once

#include <cstdint>

namespace pldc {

// Quantile of the standard normal (Acklam's rational approximation, |err| < 1.2e-8,
// refined by one Halley step); p in (0,1).
double normal_inv_cdf(double p);

// Upper critical value t with P(T_dof > t) = tail_prob, for Student's t.
double t_critical(int dof, double tail_prob);

// Two-sided Student-t CDF complement helper: P(|T_dof| > t).
double t_two_sided_pvalue(int dof, double t);

// Confidence-interval half width used by the sequential procedure: z / (2 sqrt(n)).
double ci_half_width(double z_score, int n);

// Deterministic counter-based uniform in (0,1): splitmix64-style mix of
// (seed, stream, counter). Platform-independent by construction.
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

}  // namespace pldc
