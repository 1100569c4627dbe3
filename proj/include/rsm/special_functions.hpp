#ifndef RSM_SPECIAL_FUNCTIONS_HPP
#define RSM_SPECIAL_FUNCTIONS_HPP

#include <cmath>
#include <numbers>

namespace rsm {

// Binary entropy in nats, with h(0) = h(1) = 0.
inline double binary_entropy(double p) noexcept
{
	if (p <= 0.0 || p >= 1.0)
		return 0.0;
	return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

// Digamma. The argument is shifted up to at least 8 with psi(x) = psi(x+1) - 1/x,
// then the asymptotic expansion is summed.
inline double digamma(double x) noexcept
{
	double acc = 0.0;
	while (x < 8.0) {
		acc -= 1.0 / x;
		x += 1.0;
	}
	const double r = 1.0 / (x * x);
	const double tail =
	    r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 - r * 691.0 / 32760)))));
	return acc + std::log(x) - 0.5 / x - tail;
}

inline double trigamma(double x) noexcept
{
	double acc = 0.0;
	while (x < 8.0) {
		acc += 1.0 / (x * x);
		x += 1.0;
	}
	const double r = 1.0 / (x * x);
	const double series =
	    1.0 / x + 0.5 * r +
	    (r / x) * (1.0 / 6 - r * (1.0 / 30 - r * (1.0 / 42 - r * (1.0 / 30 - r * 5.0 / 66))));
	return acc + series;
}

inline double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

} // namespace rsm

#endif
