#ifndef RSM_ANNEALED_HPP
#define RSM_ANNEALED_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"
#include "special_functions.hpp"

namespace rsm {

namespace detail {

inline void require_density(double alpha)
{
	require(alpha > 0.0 && alpha < 1.0, errc::invalid_argument, "alpha must lie in (0, 1)");
}

inline void require_rho(double rho)
{
	require(rho > 0.0 && rho < 1.0, errc::invalid_argument, "rho must lie in (0, 1)");
}

} // namespace detail

// h(alpha) - alpha log 2, the annealed free energy of the null model.
inline double null_annealed(double alpha)
{
	detail::require_density(alpha);
	return binary_entropy(alpha) - alpha * std::numbers::ln2;
}

inline double pair_mgf_discriminant(double x, double y) noexcept
{
	const double s = 1.0 - x - x * y;
	return s * s - 4.0 * x * x * y;
}

// Sum over a >= 1, 1 <= b <= a of C(a-1, b-1)^2 x^a y^b, in closed form. Finite
// exactly when x (1 + sqrt y)^2 < 1.
inline double pair_mgf_closed_form(double x, double y)
{
	detail::require(x > 0.0 && y > 0.0, errc::invalid_argument, "x and y must be positive");
	detail::require(x * (1.0 + std::sqrt(y)) * (1.0 + std::sqrt(y)) < 1.0, errc::divergent_series,
	                "(x, y) lies outside the convergence region");
	const double d = pair_mgf_discriminant(x, y);
	detail::require(d > 0.0, errc::divergent_series, "discriminant is not positive");
	return x * y / std::sqrt(d);
}

// Direct summation of the same double series, shell by shell in a. Each shell
// is accumulated in log space and the loop stops once the geometric tail
// predicted by the ratio of the last two shells is below tol times the sum.
inline double pair_mgf_series(double x, double y, double tol = 1e-13, std::size_t max_shells = 100000)
{
	detail::require(x > 0.0 && y > 0.0, errc::invalid_argument, "x and y must be positive");
	detail::require(tol > 0.0, errc::invalid_argument, "tolerance must be positive");
	const double lx = std::log(x);
	const double ly = std::log(y);
	std::vector<double> logs;
	double total = 0.0;
	double prev_shell = 0.0;
	for (std::size_t a = 1; a <= max_shells; ++a) {
		// log of C(a-1,k)^2 x^a y^(k+1) for k = 0..a-1, via the term ratio.
		logs.resize(a);
		double t = static_cast<double>(a) * lx + ly;
		double peak = t;
		for (std::size_t k = 0; k < a; ++k) {
			logs[k] = t;
			peak = std::max(peak, t);
			const double r = static_cast<double>(a - 1 - k) / static_cast<double>(k + 1);
			if (k + 1 < a)
				t += 2.0 * std::log(r) + ly;
		}
		double scaled = 0.0;
		for (double l : logs)
			scaled += std::exp(l - peak);
		const double log_shell = peak + std::log(scaled);
		if (log_shell > 700.0)
			throw error(errc::series_diverged, "series terms overflow");
		const double shell = std::exp(log_shell);
		total += shell;
		if (a >= 8 && prev_shell > 0.0) {
			const double ratio = shell / prev_shell;
			if (ratio < 1.0) {
				const double tail = shell * ratio / (1.0 - ratio);
				if (tail < tol * total)
					return total;
			} else if (a >= 1000) {
				throw error(errc::series_diverged, "shells are not decreasing");
			}
		}
		prev_shell = shell;
	}
	throw error(errc::series_diverged, "series did not converge within the shell cap");
}

// Moment-matched exponential-family parameters along the curve indexed by rho.
inline double x_of_rho(double alpha, double rho)
{
	detail::require_density(alpha);
	detail::require_rho(rho);
	return (1.0 - alpha) * (2.0 - 2.0 * alpha + alpha * rho) / (2.0 - alpha * rho);
}

inline double y_of_rho(double alpha, double rho)
{
	detail::require_density(alpha);
	detail::require_rho(rho);
	return alpha * alpha * (2.0 - rho) * (1.0 - rho) / ((1.0 - alpha) * (2.0 - 2.0 * alpha + alpha * rho));
}

inline double z_of_rho(double alpha, double rho)
{
	detail::require_density(alpha);
	detail::require_rho(rho);
	return alpha * (1.0 - rho) * std::sqrt(2.0 - rho) /
	       (std::sqrt(rho) * std::sqrt((2.0 - alpha * rho) * (2.0 - 2.0 * alpha + alpha * rho)));
}

// Root in (0, 1) of 2a^2 r^2 + (4a - 5a^2 - 4) r + 2a^2, by the cancellation-free
// form of the quadratic formula. The two roots multiply to 1.
inline double rho_star(double alpha)
{
	detail::require_density(alpha);
	const double qa = 2.0 * alpha * alpha;
	const double qb = 4.0 * alpha - 5.0 * alpha * alpha - 4.0;
	const double qc = qa;
	const double disc = qb * qb - 4.0 * qa * qc;
	const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
	const double r1 = q / qa;
	const double r2 = qc / q;
	return (r1 > 0.0 && r1 < 1.0) ? r1 : r2;
}

struct VariationalPoint {
	double rho = 0.0;
	double x = 0.0;
	double y = 0.0;
	double z_value = 0.0;
	double phi = 0.0;
	double objective = 0.0; // alpha * rho * phi
};

inline VariationalPoint variational_point(double alpha, double rho)
{
	VariationalPoint v;
	v.rho = rho;
	v.x = x_of_rho(alpha, rho);
	v.y = y_of_rho(alpha, rho);
	v.z_value = pair_mgf_closed_form(v.x, v.y);
	v.objective = alpha * rho * std::log(v.z_value) - std::log(v.x) - alpha * std::log(v.y);
	v.phi = v.objective / (alpha * rho);
	return v;
}

inline double phi_of_rho(double alpha, double rho) { return variational_point(alpha, rho).phi; }

struct AnnealedPlantedSolution {
	double alpha = 0.0;
	double delta = 0.0;
	double x = 0.0;
	double y = 0.0;
	double rho_star = 0.0;
	double raw = 0.0;   // -log x - alpha log y, the limit of (1/N) log Zbar
	double value = 0.0; // annealed planted free energy, nats
};

inline AnnealedPlantedSolution planted_annealed(double alpha)
{
	detail::require_density(alpha);
	AnnealedPlantedSolution s;
	s.alpha = alpha;
	s.delta = std::sqrt(9.0 * alpha * alpha - 4.0 * alpha + 4.0);
	const double gap = s.delta - 3.0 * alpha;
	s.x = gap / 2.0;
	const double num = 3.0 * alpha + 2.0 - s.delta;
	s.y = num * num / (2.0 * gap * (2.0 + gap));
	s.rho_star = rho_star(alpha);
	s.raw = -std::log(s.x) - alpha * std::log(s.y);
	s.value = -binary_entropy(alpha) - alpha * std::numbers::ln2 + s.raw;
	return s;
}

// Zbar(N, M) = sum over pairs of embeddings of 2^{overlap}, as the number of
// weighted compositions of (N+1, M+1) into parts (a, b) with weight
// C(a-1, b-1)^2.
inline boost::multiprecision::cpp_int barZ_exact(std::size_t n, std::size_t m)
{
	using boost::multiprecision::cpp_int;
	detail::require(m >= 1 && m <= n, errc::invalid_dimensions, "requires 1 <= m <= n");
	detail::require(n <= 14, errc::out_of_oracle_range, "exact Zbar is limited to n <= 14");
	const std::size_t na = n + 1;
	const std::size_t nb = m + 1;

	std::vector<std::vector<cpp_int>> binom(na + 1);
	for (std::size_t i = 0; i <= na; ++i) {
		binom[i].assign(i + 1, 1);
		for (std::size_t k = 1; k < i; ++k)
			binom[i][k] = binom[i - 1][k - 1] + binom[i - 1][k];
	}
	auto w = [&](std::size_t a, std::size_t b) -> cpp_int {
		if (b < 1 || b > a)
			return 0;
		const cpp_int& c = binom[a - 1][b - 1];
		return c * c;
	};

	std::vector<std::vector<cpp_int>> g(na + 1, std::vector<cpp_int>(nb + 1));
	g[0][0] = 1;
	for (std::size_t A = 1; A <= na; ++A) {
		for (std::size_t B = 1; B <= std::min(A, nb); ++B) {
			cpp_int acc = 0;
			for (std::size_t a = 1; a <= A; ++a)
				for (std::size_t b = 1; b <= std::min(a, B); ++b)
					if (!g[A - a][B - b].is_zero())
						acc += w(a, b) * g[A - a][B - b];
			g[A][B] = acc;
		}
	}
	return g[na][nb];
}

// ---------------------------------------------------------------------------
// Strict-Weak polymer with Gamma(shape a, scale b) weights:
//   f(alpha) = inf_{lambda > 0} -(1 - alpha) psi(lambda) + psi(a + lambda) + alpha log b.

struct StrictWeakSolution {
	double lambda = 0.0;
	double value = 0.0;
	double residual = 0.0; // psi'(a + lambda) - (1 - alpha) psi'(lambda)
};

inline StrictWeakSolution strict_weak_solve(double a, double b, double alpha)
{
	detail::require(a > 0.0 && b > 0.0, errc::invalid_argument, "shape and scale must be positive");
	detail::require_density(alpha);
	auto objective = [&](double lambda) {
		return -(1.0 - alpha) * digamma(lambda) + digamma(a + lambda) + alpha * std::log(b);
	};
	auto slope = [&](double lambda) { return trigamma(a + lambda) - (1.0 - alpha) * trigamma(lambda); };

	// Bracket on a geometric grid in lambda.
	constexpr int lo_exp = -40;
	constexpr int hi_exp = 60;
	int best = lo_exp;
	double best_val = objective(std::ldexp(1.0, lo_exp));
	for (int k = lo_exp + 1; k <= hi_exp; ++k) {
		const double v = objective(std::ldexp(1.0, k));
		if (v < best_val) {
			best_val = v;
			best = k;
		}
	}
	if (best == lo_exp || best == hi_exp)
		throw error(errc::no_interior_minimum, "no interior minimum in the search bracket");

	// Golden-section in log(lambda).
	double lo = (best - 1) * std::numbers::ln2;
	double hi = (best + 1) * std::numbers::ln2;
	const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
	double c = hi - inv_phi * (hi - lo);
	double d = lo + inv_phi * (hi - lo);
	double fc = objective(std::exp(c));
	double fd = objective(std::exp(d));
	for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
		if (fc < fd) {
			hi = d;
			d = c;
			fd = fc;
			c = hi - inv_phi * (hi - lo);
			fc = objective(std::exp(c));
		} else {
			lo = c;
			c = d;
			fc = fd;
			d = lo + inv_phi * (hi - lo);
			fd = objective(std::exp(d));
		}
	}

	// The objective is flat at the minimum, so polish the first-order condition
	// by bisection on its sign change.
	double left = std::exp((best - 1) * std::numbers::ln2);
	double right = std::exp((best + 1) * std::numbers::ln2);
	double guess = std::exp(0.5 * (lo + hi));
	if (slope(left) < 0.0 && slope(right) > 0.0) {
		if (slope(guess) < 0.0)
			left = guess;
		else
			right = guess;
		for (int it = 0; it < 200 && right - left > 1e-15 * right; ++it) {
			const double mid = 0.5 * (left + right);
			if (slope(mid) < 0.0)
				left = mid;
			else
				right = mid;
		}
		guess = 0.5 * (left + right);
	}

	StrictWeakSolution s;
	s.lambda = guess;
	s.value = objective(guess);
	s.residual = slope(guess);
	return s;
}

inline double strict_weak_value(double a, double b, double alpha)
{
	return strict_weak_solve(a, b, alpha).value;
}

} // namespace rsm

#endif
