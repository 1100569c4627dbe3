#ifndef RSM_ALIGNMENT_HPP
#define RSM_ALIGNMENT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "capacity.hpp"
#include "core_model.hpp"
#include "error.hpp"

namespace rsm {

struct AlignmentParams {
	double alpha = 0.5;
	std::size_t b = 64;
	double epsilon = 1.0 / 24.0;
	double delta = 0.0;    // b^(-1/2 + epsilon)
	double gamma = 0.0;    // b^(-epsilon)
	std::size_t big_b = 0; // number of blocks, floor(N / b)
	double beta_star = 0.0;

	static AlignmentParams make(double alpha, std::size_t b, std::size_t n, double epsilon = 1.0 / 24.0)
	{
		detail::require(alpha > 0.0 && alpha < 1.0, errc::invalid_argument, "alpha must lie in (0, 1)");
		detail::require(b >= 1 && b <= n, errc::invalid_block_length, "block length must lie in [1, N]");
		detail::require(epsilon > 0.0 && epsilon < 0.5, errc::invalid_argument, "epsilon must lie in (0, 1/2)");
		AlignmentParams p;
		p.alpha = alpha;
		p.b = b;
		p.epsilon = epsilon;
		const auto bd = static_cast<double>(b);
		p.delta = std::pow(bd, -0.5 + epsilon);
		p.gamma = std::pow(bd, -epsilon);
		p.big_b = n / b;
		p.beta_star = rsm::beta_star(alpha);
		return p;
	}

	// delta * alpha * b >= 1 is needed for the induced window to contain more
	// than a single length.
	bool nondegenerate() const noexcept { return delta * alpha * static_cast<double>(b) >= 1.0; }

	double threshold() const noexcept { return 0.5 + beta_star; }

	// Budget of blocks outside [(1 - delta) alpha b, (1 + delta) alpha b].
	std::size_t induced_budget() const noexcept
	{
		return static_cast<std::size_t>(std::floor(gamma * static_cast<double>(big_b) + 1e-12));
	}

	// Budget of blocks whose length differs from the standard target.
	std::size_t standardized_budget() const noexcept
	{
		return static_cast<std::size_t>(std::floor(3.0 * gamma * static_cast<double>(big_b) + 1e-12));
	}

	bool induced_ok(std::size_t len) const noexcept
	{
		const double ab = alpha * static_cast<double>(b);
		const auto l = static_cast<double>(len);
		return l >= (1.0 - delta) * ab && l <= (1.0 + delta) * ab;
	}

	// Standard length of block i (0-based): floor((i+1) alpha b) - floor(i alpha b),
	// so every prefix sum stays within 1 of k alpha b.
	std::size_t target_length(std::size_t i) const noexcept
	{
		const double ab = alpha * static_cast<double>(b);
		auto prefix = [&](std::size_t k) {
			return static_cast<std::size_t>(std::floor(ab * static_cast<double>(k) + 1e-9));
		};
		return prefix(i + 1) - prefix(i);
	}
};

struct Partition {
	std::vector<std::size_t> block_lengths;

	std::size_t total() const noexcept
	{
		std::size_t s = 0;
		for (auto l : block_lengths)
			s += l;
		return s;
	}

	std::vector<std::size_t> offsets() const
	{
		std::vector<std::size_t> off(block_lengths.size() + 1, 0);
		for (std::size_t i = 0; i < block_lengths.size(); ++i)
			off[i + 1] = off[i] + block_lengths[i];
		return off;
	}

	friend bool operator==(const Partition&, const Partition&) = default;
};

inline constexpr double kInfeasible = std::numeric_limits<double>::lowest();

inline std::uint8_t majority(std::span<const std::uint8_t> z) noexcept
{
	std::size_t ones = 0;
	for (auto b : z)
		ones += b;
	return 2 * ones >= z.size() ? 1 : 0;
}

// 0 on disagreeing majorities (ties count as 1), else min(1, delta * displacement(y)).
inline double local_alignment(std::span<const std::uint8_t> x_block, std::span<const std::uint8_t> y_block,
                              double delta) noexcept
{
	if (majority(x_block) != majority(y_block))
		return 0.0;
	return std::min(1.0, delta * static_cast<double>(displacement(y_block)));
}

inline double local_alignment(const BitString& x_block, const BitString& y_block, double delta) noexcept
{
	return local_alignment(x_block.bits(), y_block.bits(), delta);
}

inline bool is_induced_near_equipartition(const Partition& part, std::size_t m, const AlignmentParams& params)
{
	if (part.block_lengths.size() != params.big_b || part.total() != m)
		return false;
	std::size_t off = 0;
	for (auto l : part.block_lengths) {
		if (l > params.b)
			return false;
		off += !params.induced_ok(l);
	}
	return off <= params.induced_budget();
}

inline bool is_standardized_near_equipartition(const Partition& part, std::size_t m,
                                               const AlignmentParams& params)
{
	if (part.block_lengths.size() != params.big_b || part.total() != m)
		return false;
	std::size_t off = 0;
	for (std::size_t i = 0; i < part.block_lengths.size(); ++i) {
		if (part.block_lengths[i] > params.b)
			return false;
		off += part.block_lengths[i] != params.target_length(i);
	}
	return off <= params.standardized_budget();
}

// Average local alignment of one specific partition.
inline double average_alignment(const BitString& x, const BitString& y, const Partition& part,
                                const AlignmentParams& params)
{
	detail::require(part.total() == y.size() && part.block_lengths.size() == params.big_b,
	                errc::invalid_dimensions, "partition does not match y");
	double sum = 0.0;
	std::size_t off = 0;
	for (std::size_t i = 0; i < part.block_lengths.size(); ++i) {
		sum += local_alignment(x.bits().subspan(i * params.b, params.b),
		                       y.bits().subspan(off, part.block_lengths[i]), params.delta);
		off += part.block_lengths[i];
	}
	return sum / static_cast<double>(params.big_b);
}

namespace detail {

inline void check_alignment_dims(const BitString& x, const BitString& y, const AlignmentParams& params)
{
	require(params.b >= 1 && x.size() / params.b == params.big_b && params.big_b >= 1,
	        errc::invalid_dimensions, "x does not split into B blocks of length b");
	require(y.size() <= params.big_b * params.b, errc::invalid_dimensions, "y is longer than B * b");
}

// Precomputed local-alignment scores: score(i, j, L) for x block i and y[j, j+L).
class ScoreTable {
public:
	ScoreTable(const BitString& x, const BitString& y, const AlignmentParams& params)
		: b_(params.b), delta_(params.delta), prefix_(y.size() + 1, 0)
	{
		for (std::size_t j = 0; j < y.size(); ++j)
			prefix_[j + 1] = prefix_[j] + y[j];
		xmaj_.resize(params.big_b);
		for (std::size_t i = 0; i < params.big_b; ++i)
			xmaj_[i] = majority(x.bits().subspan(i * b_, b_));
	}

	double operator()(std::size_t i, std::size_t j, std::size_t len) const noexcept
	{
		const auto ones = static_cast<std::ptrdiff_t>(prefix_[j + len] - prefix_[j]);
		const std::ptrdiff_t diff = 2 * ones - static_cast<std::ptrdiff_t>(len);
		const std::uint8_t ymaj = diff >= 0 ? 1 : 0;
		if (ymaj != xmaj_[i])
			return 0.0;
		return std::min(1.0, delta_ * static_cast<double>(diff < 0 ? -diff : diff));
	}

private:
	std::size_t b_;
	double delta_;
	std::vector<std::size_t> prefix_;
	std::vector<std::uint8_t> xmaj_;
};

constexpr double kDpNeg = -1e300;

// Exact maximum of the summed local alignment over partitions into B blocks
// of lengths in [0, b] with at most `budget` blocks flagged by off(i, L).
// State: (blocks placed, bits consumed, flagged blocks used); the last index
// is contiguous so the inner update vectorizes.
template <class Off>
double max_alignment_sum(const ScoreTable& score, std::size_t big_b, std::size_t b, std::size_t m,
                         std::size_t budget, Off off)
{
	const std::size_t w = budget + 1;
	std::vector<double> prev((m + 1) * w, kDpNeg), cur((m + 1) * w, kDpNeg);
	std::fill(prev.begin(), prev.begin() + static_cast<std::ptrdiff_t>(w), 0.0);
	std::size_t lo = 0, hi = 0; // feasible consumed range after i blocks
	for (std::size_t i = 0; i < big_b; ++i) {
		const std::size_t remaining = big_b - i - 1;
		const std::size_t new_lo = std::max(lo, m > remaining * b ? m - remaining * b : std::size_t{0});
		const std::size_t new_hi = std::min(m, hi + b);
		std::fill(cur.begin() + static_cast<std::ptrdiff_t>(new_lo * w),
		          cur.begin() + static_cast<std::ptrdiff_t>((new_hi + 1) * w), kDpNeg);
		for (std::size_t j = lo; j <= hi; ++j) {
			const double* src = &prev[j * w];
			if (src[budget] <= kDpNeg / 2)
				continue;
			const std::size_t lmin = j < new_lo ? new_lo - j : 0;
			const std::size_t lmax = std::min(b, new_hi - j);
			for (std::size_t len = lmin; len <= lmax; ++len) {
				const double s = score(i, j, len);
				double* dst = &cur[(j + len) * w];
				if (!off(i, len)) {
					for (std::size_t e = 0; e < w; ++e)
						dst[e] = std::max(dst[e], src[e] + s);
				} else {
					for (std::size_t e = 1; e < w; ++e)
						dst[e] = std::max(dst[e], src[e - 1] + s);
				}
			}
		}
		std::swap(prev, cur);
		lo = new_lo;
		hi = new_hi;
		if (lo > hi)
			return kInfeasible;
	}
	const double best = prev[m * w + budget];
	return best <= kDpNeg / 2 ? kInfeasible : best;
}

inline double finish(double sum, std::size_t big_b)
{
	return sum == kInfeasible ? kInfeasible : sum / static_cast<double>(big_b);
}

} // namespace detail

// Supremum of the average local alignment over induced near-equipartitions of
// y; kInfeasible if there are none.
inline double total_alignment_ind(const BitString& x, const BitString& y, const AlignmentParams& params)
{
	detail::check_alignment_dims(x, y, params);
	detail::ScoreTable score(x, y, params);
	const std::size_t budget = std::min(params.induced_budget(), params.big_b);
	return detail::finish(detail::max_alignment_sum(score, params.big_b, params.b, y.size(), budget,
	                                                [&](std::size_t, std::size_t len) {
		                                                return !params.induced_ok(len);
	                                                }),
	                      params.big_b);
}

inline double total_alignment_std(const BitString& x, const BitString& y, const AlignmentParams& params)
{
	detail::check_alignment_dims(x, y, params);
	detail::ScoreTable score(x, y, params);
	std::vector<std::size_t> target(params.big_b);
	for (std::size_t i = 0; i < params.big_b; ++i)
		target[i] = params.target_length(i);
	const std::size_t budget = std::min(params.standardized_budget(), params.big_b);
	return detail::finish(detail::max_alignment_sum(score, params.big_b, params.b, y.size(), budget,
	                                                [&](std::size_t i, std::size_t len) {
		                                                return len != target[i];
	                                                }),
	                      params.big_b);
}

// Membership of y in the good set of x: induced total alignment at least
// 1/2 + beta*. Two budget-free relaxations settle most instances before the
// exact search: with every length allowed the value can only go up, and with
// only in-window lengths it can only go down.
inline bool is_good(const BitString& x, const BitString& y, const AlignmentParams& params)
{
	detail::check_alignment_dims(x, y, params);
	const std::size_t expected =
	    static_cast<std::size_t>(std::floor(params.alpha * static_cast<double>(x.size()) + 1e-9));
	detail::require(y.size() == expected, errc::invalid_dimensions, "y must have length floor(alpha |x|)");
	const double thr = params.threshold() * static_cast<double>(params.big_b);
	detail::ScoreTable score(x, y, params);
	auto off = [&](std::size_t, std::size_t len) { return !params.induced_ok(len); };

	const double upper = detail::max_alignment_sum(score, params.big_b, params.b, y.size(), 0,
	                                               [](std::size_t, std::size_t) { return false; });
	if (upper == kInfeasible || upper < thr)
		return false;
	const double lower = detail::max_alignment_sum(score, params.big_b, params.b, y.size(), 0, off);
	if (lower != kInfeasible && lower >= thr)
		return true;
	const std::size_t budget = std::min(params.induced_budget(), params.big_b);
	const double exact = detail::max_alignment_sum(score, params.big_b, params.b, y.size(), budget, off);
	return exact != kInfeasible && exact >= thr;
}

// Maps an induced near-equipartition to a standardized one covering the same
// string. Blocks are read left to right in groups that end at the first
// exceptional block, after ceil(b^epsilon) regular blocks, or at the last
// block. An exceptional group end is copied and its predecessor absorbs the
// shift; otherwise the group end absorbs it. Every other block of the group
// takes its standard length.
inline Partition standardize(const BitString& y, const Partition& part, const AlignmentParams& params)
{
	detail::require(is_induced_near_equipartition(part, y.size(), params), errc::invalid_input_partition,
	                "input is not an induced near-equipartition of y");
	const std::size_t nb = params.big_b;
	const auto cap = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(params.b), params.epsilon) - 1e-12));
	const auto& in = part.block_lengths;
	const auto in_off = part.offsets();

	Partition out;
	out.block_lengths.assign(nb, 0);
	std::size_t i = 0; // blocks already processed
	while (i < nb) {
		std::size_t j = i;
		std::size_t regular = 0;
		bool exceptional_end = false;
		for (;;) {
			if (!params.induced_ok(in[j])) {
				exceptional_end = true;
				break;
			}
			++regular;
			if (regular == cap || j + 1 == nb)
				break;
			++j;
		}
		// Group is blocks i..j (0-based); prefix through j matches the input.
		const std::size_t group_end_offset = in_off[j + 1];
		std::size_t pos = in_off[i];
		const std::size_t last_fixed = exceptional_end ? j : j + 1; // first block not set to standard
		for (std::size_t k = i; k + 1 < last_fixed; ++k) {
			out.block_lengths[k] = params.target_length(k);
			pos += out.block_lengths[k];
		}
		auto set_absorbing = [&](std::size_t k, std::size_t end_offset) {
			detail::require(end_offset >= pos && end_offset - pos <= params.b,
			                errc::standardization_out_of_range,
			                "an adjusted block falls outside [0, b]");
			out.block_lengths[k] = end_offset - pos;
			pos = end_offset;
		};
		if (exceptional_end) {
			if (j > i)
				set_absorbing(j - 1, in_off[j]);
			out.block_lengths[j] = in[j];
			pos += in[j];
		} else {
			set_absorbing(j, group_end_offset);
		}
		i = j + 1;
	}
	detail::require(is_standardized_near_equipartition(out, y.size(), params), errc::standardization_out_of_range,
	                "standardized partition exceeds its budget");
	return out;
}

} // namespace rsm

#endif
