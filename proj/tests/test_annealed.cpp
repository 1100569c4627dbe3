#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include <rsm/annealed.hpp>
#include <rsm/partition.hpp>

using namespace rsm;
using boost::multiprecision::cpp_int;

namespace {

double entropy(double p) { return -p * std::log(p) - (1 - p) * std::log(1 - p); }

// Brute-force double sum with binomials from lgamma, truncated at a_max.
double mgf_truncated(double x, double y, int a_max)
{
	double s = 0.0;
	for (int a = 1; a <= a_max; ++a)
		for (int b = 1; b <= a; ++b) {
			const double lc = std::lgamma(a) - std::lgamma(b) - std::lgamma(a - b + 1);
			s += std::exp(2 * lc + a * std::log(x) + b * std::log(y));
		}
	return s;
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t m)
{
	std::vector<std::vector<std::size_t>> out;
	for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
		if (std::popcount(mask) != static_cast<int>(m))
			continue;
		std::vector<std::size_t> s;
		for (std::size_t i = 0; i < n; ++i)
			if ((mask >> i) & 1U)
				s.push_back(i + 1);
		out.push_back(s);
	}
	return out;
}

// Golden-section maximization of the variational objective over (0, 1).
double maximize_objective(double alpha)
{
	double lo = 1e-9, hi = 1 - 1e-9;
	const double r = (std::sqrt(5.0) - 1) / 2;
	for (int it = 0; it < 200; ++it) {
		const double c = hi - r * (hi - lo), d = lo + r * (hi - lo);
		if (variational_point(alpha, c).objective > variational_point(alpha, d).objective)
			hi = d;
		else
			lo = c;
	}
	return variational_point(alpha, 0.5 * (lo + hi)).objective;
}

} // namespace

TEST(NullAnnealed, Values)
{
	EXPECT_NEAR(null_annealed(0.25), 0.38905, 1e-5);
	EXPECT_NEAR(null_annealed(0.25), entropy(0.25) - 0.25 * std::log(2.0), 1e-15);
	EXPECT_NEAR(null_annealed(0.5), std::log(2.0) / 2, 1e-15);
	EXPECT_LT(std::abs(null_annealed(1e-9)), 1e-7);
	EXPECT_THROW(null_annealed(0.0), error);
	EXPECT_THROW(null_annealed(1.0), error);
}

TEST(PairMgf, ClosedFormMatchesBruteForce)
{
	EXPECT_NEAR(pair_mgf_closed_form(0.1, 0.1), mgf_truncated(0.1, 0.1, 120), 1e-14);
	EXPECT_NEAR(pair_mgf_series(0.1, 0.1), pair_mgf_closed_form(0.1, 0.1), 1e-10 * pair_mgf_closed_form(0.1, 0.1));
	EXPECT_NEAR(pair_mgf_closed_form(0.2, 0.7), mgf_truncated(0.2, 0.7, 300), 1e-12);
}

TEST(PairMgf, SeriesOnGrid)
{
	int points = 0;
	for (double x : {0.05, 0.1, 0.15, 0.2, 0.25})
		for (double y : {0.1, 0.4, 0.8, 1.2, 2.0}) {
			if (x * std::pow(1 + std::sqrt(y), 2) >= 0.9)
				continue;
			const double c = pair_mgf_closed_form(x, y);
			EXPECT_LT(std::abs(pair_mgf_series(x, y) - c) / c, 1e-9) << x << "," << y;
			++points;
		}
	EXPECT_GE(points, 20);
}

TEST(PairMgf, FirstShellIsXY)
{
	// With a single shell allowed the loop cannot certify convergence.
	EXPECT_THROW(pair_mgf_series(0.1, 0.3, 1e-13, 1), error);
	// The a = 1 contribution dominates for tiny x.
	EXPECT_NEAR(pair_mgf_series(1e-6, 0.5), 1e-6 * 0.5, 1e-11);
}

TEST(PairMgf, SolutionPointIsOne)
{
	EXPECT_NEAR(pair_mgf_closed_form(0.280776, 0.719216), 1.0, 1e-6);
	auto s = planted_annealed(0.5);
	EXPECT_NEAR(pair_mgf_closed_form(s.x, s.y), 1.0, 1e-12);
}

TEST(PairMgf, BlowsUpAtBoundary)
{
	const double y = 0.5;
	const double edge = 1.0 / std::pow(1 + std::sqrt(y), 2);
	EXPECT_GT(pair_mgf_closed_form(edge * (1 - 1e-8), y), 1e3);
	try {
		pair_mgf_closed_form(edge * 1.01, y);
		FAIL();
	} catch (const error& e) {
		EXPECT_EQ(e.code(), errc::divergent_series);
	}
	try {
		pair_mgf_series(edge * 1.05, y);
		FAIL();
	} catch (const error& e) {
		EXPECT_EQ(e.code(), errc::series_diverged);
	}
}

TEST(PairMgf, SeriesMonotone)
{
	double prev = 0;
	for (double x = 0.02; x < 0.2; x += 0.02) {
		const double v = pair_mgf_series(x, 0.6);
		EXPECT_GT(v, prev);
		prev = v;
	}
	prev = 0;
	for (double y = 0.1; y < 1.5; y += 0.1) {
		const double v = pair_mgf_series(0.1, y);
		EXPECT_GT(v, prev);
		prev = v;
	}
}

TEST(MomentCurve, Limits)
{
	EXPECT_LT(z_of_rho(0.5, 1 - 1e-9), 1e-8);
	EXPECT_GT(z_of_rho(0.5, 1e-12), 1e5);
	EXPECT_THROW(x_of_rho(0.5, 0.0), error);
	EXPECT_THROW(y_of_rho(0.5, 1.0), error);
	EXPECT_NEAR(x_of_rho(0.5, 0.157667), 0.280776, 1e-5);
}

TEST(MomentCurve, ZMatchesClosedForm)
{
	for (double alpha : {0.1, 0.5, 0.9})
		for (double rho = 0.05; rho < 1; rho += 0.1)
			EXPECT_NEAR(z_of_rho(alpha, rho),
			            pair_mgf_closed_form(x_of_rho(alpha, rho), y_of_rho(alpha, rho)),
			            1e-12 * z_of_rho(alpha, rho));
}

TEST(RhoStar, HalfDensity)
{
	// rho^2 - 6.5 rho + 1 = 0, smaller root.
	EXPECT_NEAR(rho_star(0.5), (6.5 - std::sqrt(6.5 * 6.5 - 4)) / 2, 1e-14);
	EXPECT_NEAR(rho_star(0.5), 0.157667, 1e-5);
}

TEST(RhoStar, RootsMultiplyToOneAndForceZOne)
{
	for (int k = 1; k <= 19; ++k) {
		const double alpha = 0.05 * k;
		const double r = rho_star(alpha);
		ASSERT_GT(r, 0);
		ASSERT_LT(r, 1);
		const double a = 2 * alpha * alpha, b = 4 * alpha - 5 * alpha * alpha - 4;
		const double other = -b / a - r;
		EXPECT_NEAR(r * other, 1.0, 1e-12);
		EXPECT_NEAR(z_of_rho(alpha, r), 1.0, 1e-10);
	}
	EXPECT_NEAR(z_of_rho(1e-3, rho_star(1e-3)), 1.0, 1e-10);
	EXPECT_NEAR(z_of_rho(0.999, rho_star(0.999)), 1.0, 1e-10);
}

TEST(Variational, ObjectiveAtOptimumIsRaw)
{
	for (int k = 1; k <= 19; ++k) {
		const double alpha = 0.05 * k;
		auto s = planted_annealed(alpha);
		EXPECT_NEAR(variational_point(alpha, s.rho_star).objective, s.raw, 1e-8);
		EXPECT_NEAR(alpha * s.rho_star * phi_of_rho(alpha, s.rho_star), s.raw, 1e-8);
	}
}

TEST(Variational, EnvelopeIdentity)
{
	for (double alpha : {0.3, 0.6})
		for (int k = 1; k <= 20; ++k) {
			const double rho = k / 21.0;
			const double h = 1e-6;
			const double fd =
			    (variational_point(alpha, rho + h).objective - variational_point(alpha, rho - h).objective) / (2 * h);
			EXPECT_NEAR(fd, alpha * std::log(z_of_rho(alpha, rho)), 1e-5);
		}
}

TEST(Variational, UnimodalAroundRhoStar)
{
	for (double alpha : {0.2, 0.5, 0.8}) {
		const double rs = rho_star(alpha);
		double prev = -1e300;
		for (double rho = 0.002; rho < rs; rho += 0.002) {
			const double v = variational_point(alpha, rho).objective;
			EXPECT_GT(v, prev);
			prev = v;
		}
		prev = 1e300;
		for (double rho = rs + 0.002; rho < 0.999; rho += 0.002) {
			const double v = variational_point(alpha, rho).objective;
			EXPECT_LT(v, prev);
			prev = v;
		}
	}
}

TEST(Variational, GridMaximumMatchesRaw)
{
	for (double alpha : {0.1, 0.5, 0.9}) {
		double best = -1e300;
		for (int k = 1; k < 10000; ++k)
			best = std::max(best, variational_point(alpha, k * 1e-4).objective);
		EXPECT_LT(std::abs(best - planted_annealed(alpha).raw), 1e-7);
		EXPECT_NEAR(maximize_objective(alpha), planted_annealed(alpha).raw, 1e-10);
	}
}

TEST(PlantedAnnealed, HalfDensity)
{
	auto s = planted_annealed(0.5);
	EXPECT_NEAR(s.delta, std::sqrt(4.25), 1e-15);
	EXPECT_NEAR(s.x, 0.280776, 1e-6);
	EXPECT_NEAR(s.y, 0.719216, 1e-5);
	// Independent assembly of R and of the free energy from x and y.
	const double raw = -std::log(s.x) - 0.5 * std::log(s.y);
	EXPECT_NEAR(s.raw, raw, 1e-14);
	EXPECT_NEAR(s.raw, 1.43499, 1e-5);
	EXPECT_NEAR(s.value, -std::log(2.0) - 0.5 * std::log(2.0) + raw, 1e-14);
	EXPECT_NEAR(s.value, 0.39527, 1e-5);
}

TEST(PlantedAnnealed, AlgebraicResiduals)
{
	for (int k = 1; k <= 19; ++k) {
		const double alpha = 0.05 * k;
		auto s = planted_annealed(alpha);
		const double c = 1 / alpha;
		EXPECT_LT(std::abs(s.x * s.x * (1 - 2 * s.y) - 2 * s.x * (1 + s.y) + 1), 1e-10);
		EXPECT_LT(std::abs(c * s.x * s.x + 3 * s.x - (c - 1)), 1e-10);
		EXPECT_LT(std::abs(pair_mgf_closed_form(s.x, s.y) - 1), 1e-10);
		EXPECT_LT(std::abs(x_of_rho(alpha, s.rho_star) - s.x), 1e-10);
		EXPECT_LT(std::abs(y_of_rho(alpha, s.rho_star) - s.y), 1e-10);
		EXPECT_GT(s.x, 0);
		EXPECT_LT(s.x, 1);
		EXPECT_GT(s.y, 0);
		EXPECT_GT(s.value, null_annealed(alpha));
	}
}

TEST(BarZ, DiagonalIsPowerOfTwo)
{
	for (std::size_t n = 1; n <= 14; ++n)
		EXPECT_EQ(barZ_exact(n, n), cpp_int(1) << n);
}

TEST(BarZ, MatchesPairSum)
{
	for (std::size_t n = 1; n <= 8; ++n)
		for (std::size_t m = 1; m <= n; ++m) {
			cpp_int direct = 0;
			auto all = subsets(n, m);
			for (const auto& s : all)
				for (const auto& t : all) {
					int overlap = 0;
					for (std::size_t i = 0; i < m; ++i)
						overlap += s[i] == t[i];
					direct += cpp_int(1) << overlap;
				}
			EXPECT_EQ(barZ_exact(n, m), direct) << n << "," << m;
		}
}

TEST(BarZ, ExpectedPlantedCount)
{
	// E[Z] under the planted law by enumerating every (X, sigma*).
	for (std::size_t n = 1; n <= 6; ++n)
		for (std::size_t m = 1; m <= n; ++m) {
			auto all = subsets(n, m);
			cpp_int total = 0;
			for (std::uint32_t xw = 0; xw < (1U << n); ++xw) {
				std::vector<std::uint8_t> bits(n);
				for (std::size_t i = 0; i < n; ++i)
					bits[i] = (xw >> i) & 1U;
				BitString x(bits);
				for (const auto& s : all)
					total += count_embeddings_exact(x, restrict_to(x, s));
			}
			const double expectation = total.convert_to<double>() / (std::ldexp(1.0, n) * all.size());
			const double formula = barZ_exact(n, m).convert_to<double>() / (all.size() * std::ldexp(1.0, m));
			EXPECT_NEAR(expectation, formula, 1e-12 * formula);
		}
}

TEST(BarZ, RangeChecks)
{
	try {
		barZ_exact(15, 3);
		FAIL();
	} catch (const error& e) {
		EXPECT_EQ(e.code(), errc::out_of_oracle_range);
	}
	EXPECT_THROW(barZ_exact(4, 0), error);
	EXPECT_THROW(barZ_exact(3, 4), error);
}

TEST(BarZ, FiniteSizeTrendTowardsAnnealedValue)
{
	const double limit = planted_annealed(0.5).value;
	double prev = -1e300;
	for (std::size_t n : {6, 8, 10, 12, 14}) {
		const std::size_t m = n / 2;
		const double lc = std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0);
		const double v = (std::log(barZ_exact(n, m).convert_to<double>()) - lc - m * std::log(2.0)) / n;
		EXPECT_GT(v, prev) << n;
		EXPECT_LT(v, limit);
		prev = v;
	}
}

TEST(SpecialFunctions, DigammaAndTrigamma)
{
	constexpr double euler = 0.57721566490153286;
	EXPECT_NEAR(digamma(1.0), -euler, 1e-12);
	EXPECT_NEAR(digamma(0.5), -euler - 2 * std::log(2.0), 1e-12);
	EXPECT_NEAR(digamma(10.0), -euler + 7129.0 / 2520.0, 1e-12);
	EXPECT_NEAR(trigamma(1.0), std::numbers::pi * std::numbers::pi / 6, 1e-12);
	EXPECT_NEAR(trigamma(0.5), std::numbers::pi * std::numbers::pi / 2, 1e-11);
	for (double x : {0.3, 1.7, 4.2, 25.0})
		EXPECT_NEAR(digamma(x + 1) - digamma(x), 1 / x, 1e-12);
}

TEST(StrictWeak, Stationarity)
{
	for (double alpha : {0.1, 0.2, 0.3, 0.4, 0.5, 0.8}) {
		auto s = strict_weak_solve(1.0, 0.5, alpha);
		EXPECT_LT(std::abs((1 - alpha) * trigamma(s.lambda) - trigamma(1 + s.lambda)), 1e-8);
		// Infimum: perturbations do not go lower.
		for (double f : {0.9, 0.99, 1.01, 1.1}) {
			const double l = s.lambda * f;
			EXPECT_GE(-(1 - alpha) * digamma(l) + digamma(1 + l) + alpha * std::log(0.5), s.value - 1e-15);
		}
	}
}

TEST(StrictWeak, ExponentialCaseClosedForm)
{
	// For a = 1, psi(1 + l) - psi(l) = 1/l, so the objective is
	// alpha psi(l) + 1/l + alpha log b, stationary where alpha psi'(l) = 1/l^2.
	const double alpha = 0.3;
	auto s = strict_weak_solve(1.0, 0.5, alpha);
	EXPECT_NEAR(alpha * trigamma(s.lambda) * s.lambda * s.lambda, 1.0, 1e-8);
	EXPECT_NEAR(s.value, alpha * digamma(s.lambda) + 1 / s.lambda + alpha * std::log(0.5), 1e-12);
}

TEST(StrictWeak, InvalidParameters)
{
	EXPECT_THROW(strict_weak_value(0.0, 0.5, 0.3), error);
	EXPECT_THROW(strict_weak_value(1.0, -1.0, 0.3), error);
	EXPECT_THROW(strict_weak_value(1.0, 0.5, 1.0), error);
}
