#include <cmath>
#include <functional>
#include <limits>

#include <gtest/gtest.h>

#include <rsm/alignment.hpp>
#include <rsm/core_model.hpp>

using namespace rsm;

namespace {

struct Rational {
	std::size_t num;
	std::size_t den;
	double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Everything below is recomputed from scratch with integer targets so that the
// library's own helpers are not reused by the oracle.
struct Oracle {
	Rational alpha;
	std::size_t b, big_b;
	double delta, gamma;

	Oracle(Rational a, std::size_t b_, std::size_t big_b_)
		: alpha(a), b(b_), big_b(big_b_), delta(std::pow(double(b_), -0.5 + 1.0 / 24)),
		  gamma(std::pow(double(b_), -1.0 / 24))
	{
	}

	std::size_t target(std::size_t i) const
	{
		return (i + 1) * alpha.num * b / alpha.den - i * alpha.num * b / alpha.den;
	}
	bool in_window(std::size_t len) const
	{
		const double ab = alpha.value() * double(b);
		return double(len) >= (1 - delta) * ab && double(len) <= (1 + delta) * ab;
	}
	double score(const BitString& x, std::size_t i, const BitString& y, std::size_t off, std::size_t len) const
	{
		int xs = 0, ys = 0;
		for (std::size_t k = 0; k < b; ++k)
			xs += x[i * b + k] ? 1 : -1;
		for (std::size_t k = 0; k < len; ++k)
			ys += y[off + k] ? 1 : -1;
		if ((xs >= 0) != (ys >= 0))
			return 0.0;
		return std::min(1.0, delta * std::abs(ys));
	}

	// Enumerates every composition of |y| into B parts in [0, b].
	double best(const BitString& x, const BitString& y, bool standardized) const
	{
		const auto budget = static_cast<std::size_t>(std::floor((standardized ? 3.0 : 1.0) * gamma * double(big_b) + 1e-12));
		double top = -std::numeric_limits<double>::infinity();
		std::vector<std::size_t> lens(big_b);
		std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
			if (i == big_b) {
				if (used != y.size())
					return;
				std::size_t off_count = 0, off = 0;
				double sum = 0;
				for (std::size_t k = 0; k < big_b; ++k) {
					off_count += standardized ? lens[k] != target(k) : !in_window(lens[k]);
					sum += score(x, k, y, off, lens[k]);
					off += lens[k];
				}
				if (off_count <= budget)
					top = std::max(top, sum / double(big_b));
				return;
			}
			for (std::size_t l = 0; l <= b && used + l <= y.size(); ++l) {
				lens[i] = l;
				rec(i + 1, used + l);
			}
		};
		rec(0, 0);
		return top;
	}
};

BitString random_bits(std::size_t n, Rng& rng)
{
	std::vector<std::uint8_t> v(n);
	for (auto& c : v)
		c = static_cast<std::uint8_t>(rng.below(2));
	return BitString(std::move(v));
}

bool concatenation_preserved(const Partition& a, const Partition& b, std::size_t m)
{
	// Same string, so equal totals suffice for the blocks to tile it.
	return a.total() == m && b.total() == m;
}

} // namespace

TEST(Params, HalfDensityAt64)
{
	auto p = AlignmentParams::make(0.5, 64, 6400);
	EXPECT_NEAR(p.delta, std::pow(64.0, -11.0 / 24), 1e-15);
	EXPECT_NEAR(p.gamma, std::pow(64.0, -1.0 / 24), 1e-15);
	EXPECT_EQ(p.big_b, 100u);
	EXPECT_TRUE(p.nondegenerate());
	EXPECT_NEAR(p.threshold(), 0.5 + beta_alpha(0.5) / 40, 1e-15);
	EXPECT_EQ(p.induced_budget(), 84u);
	EXPECT_EQ(p.standardized_budget(), 252u);
	EXPECT_THROW(AlignmentParams::make(0.0, 4, 8), error);
	EXPECT_THROW(AlignmentParams::make(0.5, 9, 8), error);
	EXPECT_FALSE(AlignmentParams::make(0.5, 2, 8).nondegenerate());
}

TEST(Params, TargetsStayWithinOneOfLinear)
{
	for (double alpha : {0.3, 0.5, 0.37, 0.9})
		for (std::size_t b : {5u, 8u, 24u, 64u}) {
			auto p = AlignmentParams::make(alpha, b, b * 50);
			std::size_t sum = 0;
			for (std::size_t k = 0; k < 50; ++k) {
				const auto t = p.target_length(k);
				EXPECT_TRUE(t == static_cast<std::size_t>(std::floor(alpha * b)) ||
				            t == static_cast<std::size_t>(std::ceil(alpha * b)));
				sum += t;
				EXPECT_LE(std::abs(double(sum) - alpha * double(b) * double(k + 1)), 1.0);
			}
		}
}

TEST(LocalAlignment, Examples)
{
	EXPECT_EQ(local_alignment(BitString::parse("111"), BitString::parse("000"), 0.4), 0.0);
	EXPECT_NEAR(local_alignment(BitString::parse("111"), BitString::parse("11"), 0.4), 0.8, 1e-15);
	EXPECT_EQ(local_alignment(BitString(), BitString(), 0.4), 0.0);
	EXPECT_EQ(local_alignment(BitString::parse("0101"), BitString::parse("1111"), 0.4), 1.0);
	EXPECT_EQ(local_alignment(BitString::parse("0001"), BitString::parse("10"), 0.4), 0.0);
}

TEST(TotalAlignment, SingleBlock)
{
	auto p = AlignmentParams::make(0.5, 8, 8);
	auto x = BitString::parse("11110000");
	auto y = BitString::parse("1110");
	EXPECT_NEAR(total_alignment_std(x, y, p), local_alignment(x, y, p.delta), 1e-15);
	EXPECT_NEAR(total_alignment_ind(x, y, p), local_alignment(x, y, p.delta), 1e-15);
	// Off-target length: the budget floor(3 gamma) = 2 still admits it.
	auto y3 = BitString::parse("111");
	EXPECT_NEAR(total_alignment_std(x, y3, p), std::min(1.0, 3 * p.delta), 1e-15);
}

TEST(TotalAlignment, AllOnesHandComputed)
{
	// B = 2, b = 4, alpha = 1/2: y = 1111 against x = 1^8. Splits (2,2) give
	// min(1, 2 delta) each; (1,3), (3,1), (0,4), (4,0) are no better because
	// min(1, .) is concave and 2 delta < 1 < 4 delta.
	auto p = AlignmentParams::make(0.5, 4, 8);
	auto x = BitString::constant(8, 1);
	auto y = BitString::constant(4, 1);
	const double d = p.delta;
	const double hand = std::max({std::min(1.0, 2 * d), (std::min(1.0, d) + std::min(1.0, 3 * d)) / 2,
	                              std::min(1.0, 4 * d) / 2});
	EXPECT_NEAR(total_alignment_std(x, y, p), hand, 1e-15);
	EXPECT_NEAR(total_alignment_ind(x, y, p), hand, 1e-15);
}

TEST(TotalAlignment, MatchesExhaustiveEnumeration)
{
	Rng rng(Seed{77, 0});
	int cases = 0;
	for (Rational a : {Rational{1, 2}, Rational{3, 10}, Rational{4, 5}})
		for (std::size_t b = 1; b <= 5; ++b)
			for (std::size_t big_b = 1; big_b <= 4; ++big_b)
				for (int rep = 0; rep < 3; ++rep) {
					const std::size_t n = b * big_b;
					auto params = AlignmentParams::make(a.value(), b, n);
					Oracle oracle(a, b, big_b);
					auto x = random_bits(n, rng);
					const std::size_t m = rep == 0 ? n * a.num / a.den : rng.below(n + 1);
					auto y = random_bits(m, rng);
					for (bool standardized : {false, true}) {
						const double expect = oracle.best(x, y, standardized);
						const double got = standardized ? total_alignment_std(x, y, params)
						                                : total_alignment_ind(x, y, params);
						if (std::isinf(expect))
							EXPECT_EQ(got, kInfeasible);
						else
							EXPECT_NEAR(got, expect, 1e-12) << "b=" << b << " B=" << big_b << " m=" << m;
						++cases;
					}
				}
	EXPECT_GE(cases, 300);
}

TEST(TotalAlignment, DominatesAnyInducedPartition)
{
	auto p = AlignmentParams::make(0.5, 24, 24 * 20);
	Rng rng(Seed{5, 5});
	for (int t = 0; t < 20; ++t) {
		auto x = random_bits(480, rng);
		Partition part;
		for (std::size_t i = 0; i < 20; ++i)
			part.block_lengths.push_back(10 + rng.below(5));
		auto y = random_bits(part.total(), rng);
		ASSERT_TRUE(is_induced_near_equipartition(part, y.size(), p));
		EXPECT_GE(total_alignment_ind(x, y, p), average_alignment(x, y, part, p) - 1e-12);
	}
}

TEST(TotalAlignment, Errors)
{
	auto p = AlignmentParams::make(0.5, 4, 8);
	EXPECT_THROW(total_alignment_ind(BitString::constant(4, 0), BitString(), p), error);
	EXPECT_THROW(total_alignment_std(BitString::constant(8, 0), BitString::constant(9, 0), p), error);
}

TEST(IsGood, ThresholdAndLength)
{
	auto p = AlignmentParams::make(0.5, 8, 32);
	Rng rng(Seed{3, 3});
	for (int t = 0; t < 50; ++t) {
		auto x = random_bits(32, rng);
		auto y = random_bits(16, rng);
		EXPECT_EQ(is_good(x, y, p), total_alignment_ind(x, y, p) >= p.threshold());
	}
	try {
		is_good(BitString::constant(32, 1), BitString::constant(15, 1), p);
		FAIL();
	} catch (const error& e) {
		EXPECT_EQ(e.code(), errc::invalid_dimensions);
	}
}

TEST(IsGood, ConstantStringsAlign)
{
	auto p = AlignmentParams::make(0.5, 64, 640);
	EXPECT_TRUE(is_good(BitString::constant(640, 1), BitString::constant(320, 1), p));
	EXPECT_FALSE(is_good(BitString::constant(640, 1), BitString::constant(320, 0), p));
}

TEST(Standardize, FixedPoint)
{
	auto p = AlignmentParams::make(0.5, 8, 32);
	Partition part{{4, 4, 4, 4}};
	auto y = BitString::constant(16, 0);
	EXPECT_EQ(standardize(y, part, p), part);
}

TEST(Standardize, HandTracedSingleExceptional)
{
	// b = 8, alpha = 1/2: window lengths are 3, 4, 5; groups hold at most
	// ceil(8^(1/24)) = 2 regular blocks.
	auto p = AlignmentParams::make(0.5, 8, 32);
	auto y = BitString::constant(16, 1);
	EXPECT_EQ(standardize(y, Partition{{5, 5, 1, 5}}, p), (Partition{{4, 6, 1, 5}}));
	EXPECT_EQ(standardize(y, Partition{{1, 5, 5, 5}}, p), (Partition{{1, 4, 6, 5}}));
	EXPECT_EQ(standardize(y, Partition{{5, 1, 5, 5}}, p), (Partition{{5, 1, 4, 6}}));
	// Exceptional final block: copied, predecessor absorbs.
	EXPECT_EQ(standardize(y, Partition{{3, 3, 3, 7}}, p), (Partition{{4, 2, 3, 7}}));
}

TEST(Standardize, RejectsNonInduced)
{
	auto p = AlignmentParams::make(0.5, 8, 32);
	auto y = BitString::constant(16, 1);
	try {
		standardize(y, Partition{{0, 0, 8, 8}}, p);
		FAIL();
	} catch (const error& e) {
		EXPECT_EQ(e.code(), errc::invalid_input_partition);
	}
	EXPECT_THROW(standardize(y, Partition{{4, 4, 4}}, p), error);
	EXPECT_THROW(standardize(y, Partition{{4, 4, 4, 5}}, p), error);
}

TEST(Standardize, RandomInducedPartitionsValidate)
{
	const std::size_t big_b = 20, b = 24;
	auto p = AlignmentParams::make(0.5, b, big_b * b);
	Rng rng(Seed{42, 7});
	const auto budget = p.induced_budget();
	for (int t = 0; t < 1000; ++t) {
		Partition part;
		std::size_t exceptional = 0;
		for (std::size_t i = 0; i < big_b; ++i) {
			std::size_t len;
			if (exceptional < budget && rng.below(4) == 0) {
				len = rng.below(b + 1);
			} else {
				do
					len = 9 + rng.below(7);
				while (!p.induced_ok(len));
			}
			exceptional += !p.induced_ok(len);
			part.block_lengths.push_back(len);
		}
		auto y = random_bits(part.total(), rng);
		ASSERT_TRUE(is_induced_near_equipartition(part, y.size(), p));
		auto out = standardize(y, part, p);
		ASSERT_TRUE(is_standardized_near_equipartition(out, y.size(), p)) << t;
		ASSERT_TRUE(concatenation_preserved(part, out, y.size()));
		// Exceptional input blocks survive at their original offsets.
		auto in_off = part.offsets(), out_off = out.offsets();
		for (std::size_t i = 0; i < big_b; ++i)
			if (!p.induced_ok(part.block_lengths[i])) {
				EXPECT_EQ(out.block_lengths[i], part.block_lengths[i]);
				EXPECT_EQ(out_off[i], in_off[i]);
			}
	}
}

TEST(Standardize, OutOfRangeIsReported)
{
	// alpha = 0.9, b = 8: two maximal regular blocks force the absorbing block
	// beyond b.
	auto p = AlignmentParams::make(0.9, 8, 16);
	auto y = BitString::constant(16, 1);
	ASSERT_TRUE(is_induced_near_equipartition(Partition{{8, 8}}, 16, p));
	try {
		standardize(y, Partition{{8, 8}}, p);
		FAIL();
	} catch (const error& e) {
		EXPECT_EQ(e.code(), errc::standardization_out_of_range);
	}
}

TEST(Standardize, DistortionShrinksWithLength)
{
	const std::size_t b = 24;
	const double margin = beta_star(0.5) / 2;
	std::vector<double> fractions;
	for (std::size_t big_b : {5u, 40u, 320u}) {
		auto p = AlignmentParams::make(0.5, b, big_b * b);
		Rng rng(Seed{8, big_b});
		int bad = 0;
		const int trials = 300;
		for (int t = 0; t < trials; ++t) {
			Partition part;
			for (std::size_t i = 0; i < big_b; ++i)
				part.block_lengths.push_back(10 + rng.below(5));
			auto x = random_bits(big_b * b, rng);
			auto y = random_bits(part.total(), rng);
			auto out = standardize(y, part, p);
			bad += average_alignment(x, y, part, p) - average_alignment(x, y, out, p) > margin;
		}
		fractions.push_back(double(bad) / trials);
	}
	EXPECT_GE(fractions[0], fractions[1]);
	EXPECT_GE(fractions[1], fractions[2]);
}
