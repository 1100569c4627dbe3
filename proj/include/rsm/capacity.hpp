#ifndef RSM_CAPACITY_HPP
#define RSM_CAPACITY_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "annealed.hpp"
#include "error.hpp"
#include "special_functions.hpp"

namespace rsm {

// Upper bound on the uniform-codebook capacity of the deletion channel:
// alpha log 2 - h(alpha) + (annealed planted free energy), alpha = 1 - p.
inline double upper_bound_uniform_capacity(double p)
{
	detail::require(p >= 0.0 && p < 1.0, errc::invalid_argument, "p must lie in [0, 1)");
	if (p == 0.0)
		return std::numbers::ln2;
	const double alpha = 1.0 - p;
	return alpha * std::numbers::ln2 - binary_entropy(alpha) + planted_annealed(alpha).value;
}

inline double dgv_lower_bound(double p)
{
	detail::require(p >= 0.0 && p <= 1.0, errc::invalid_argument, "p must lie in [0, 1]");
	if (p > 0.5)
		return 0.0;
	return std::max(0.0, std::numbers::ln2 - binary_entropy(p));
}

// h(2 alpha) / 2, a lower bound on the null quenched free energy.
inline double skip_vector_lower_bound(double alpha)
{
	detail::require(alpha > 0.0 && alpha < 0.5, errc::invalid_argument, "alpha must lie in (0, 1/2)");
	return binary_entropy(2.0 * alpha) / 2.0;
}

// P(N(alpha, alpha(1 - alpha)) >= 0) - 1/2.
inline double beta_alpha(double alpha)
{
	detail::require_density(alpha);
	return normal_cdf(std::sqrt(alpha / (1.0 - alpha))) - 0.5;
}

inline double beta_star(double alpha) { return beta_alpha(alpha) / 40.0; }

// Natural log of 1920^96 / (alpha^24 beta^96 (1 - alpha)^12). The ceiling in
// the integer constant changes the log by less than 1e-370 and is dropped.
inline double log_kappa(double alpha)
{
	detail::require_density(alpha);
	return 96.0 * std::log(1920.0) - 24.0 * std::log(alpha) - 96.0 * std::log(beta_alpha(alpha)) -
	       12.0 * std::log1p(-alpha);
}

// log of beta^3 / (51200 kappa^5) at alpha = 1 - p.
inline double log_explicit_lower_bound(double p)
{
	detail::require(p > 0.0 && p < 1.0, errc::invalid_argument, "p must lie in (0, 1)");
	const double alpha = 1.0 - p;
	return 3.0 * std::log(beta_alpha(alpha)) - std::log(51200.0) - 5.0 * log_kappa(alpha);
}

struct ExplicitBoundConstants {
	double alpha = 0.0;
	double beta = 0.0;
	double beta_star = 0.0;
	double log_kappa = 0.0;
};

inline ExplicitBoundConstants explicit_bound_constants(double alpha)
{
	ExplicitBoundConstants c;
	c.alpha = alpha;
	c.beta = beta_alpha(alpha);
	c.beta_star = c.beta / 40.0;
	c.log_kappa = log_kappa(alpha);
	return c;
}

struct CapacityBounds {
	double p = 0.0;
	double alpha = 1.0;
	double lower_dgv = 0.0;
	double log10_explicit_lower = 0.0; // meaningful for 0 < p < 1
	double upper_annealed = 0.0;
	std::optional<double> mc_estimate;
	std::optional<double> mc_stderr;
};

inline CapacityBounds capacity_bounds(double p)
{
	CapacityBounds c;
	c.p = p;
	c.alpha = 1.0 - p;
	c.lower_dgv = dgv_lower_bound(p);
	c.upper_annealed = upper_bound_uniform_capacity(p);
	if (p > 0.0)
		c.log10_explicit_lower = log_explicit_lower_bound(p) / std::numbers::ln10;
	return c;
}

} // namespace rsm

#endif
