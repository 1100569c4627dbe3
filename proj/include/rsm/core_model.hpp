#ifndef RSM_CORE_MODEL_HPP
#define RSM_CORE_MODEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "rng.hpp"

namespace rsm {

// A binary string, one byte per bit. Positions are 0-based for indexing; the
// embedding types below use 1-based positions.
class BitString {
public:
	BitString() = default;

	explicit BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits))
	{
		for (auto b : bits_)
			detail::require(b <= 1, errc::invalid_argument, "bit values must be 0 or 1");
	}

	// Parses a literal such as "10110". The empty string is valid.
	static BitString parse(std::string_view text)
	{
		std::vector<std::uint8_t> bits;
		bits.reserve(text.size());
		for (char c : text) {
			detail::require(c == '0' || c == '1', errc::invalid_argument,
			                "bit strings may only contain '0' and '1'");
			bits.push_back(static_cast<std::uint8_t>(c - '0'));
		}
		return BitString(std::move(bits));
	}

	static BitString constant(std::size_t n, std::uint8_t bit)
	{
		return BitString(std::vector<std::uint8_t>(n, bit));
	}

	std::size_t size() const noexcept { return bits_.size(); }
	bool empty() const noexcept { return bits_.empty(); }
	std::uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }
	std::span<const std::uint8_t> bits() const noexcept { return bits_; }

	BitString substr(std::size_t pos, std::size_t len) const
	{
		auto first = bits_.begin() + static_cast<std::ptrdiff_t>(pos);
		return BitString(std::vector<std::uint8_t>(first, first + static_cast<std::ptrdiff_t>(len)));
	}

	void push_back(std::uint8_t bit)
	{
		detail::require(bit <= 1, errc::invalid_argument, "bit values must be 0 or 1");
		bits_.push_back(bit);
	}

	std::string to_string() const
	{
		std::string s(bits_.size(), '0');
		for (std::size_t i = 0; i < bits_.size(); ++i)
			s[i] = static_cast<char>('0' + bits_[i]);
		return s;
	}

	friend bool operator==(const BitString&, const BitString&) = default;

private:
	std::vector<std::uint8_t> bits_;
};

// Strictly increasing 1-based positions into the ambient string.
using Embedding = std::vector<std::size_t>;

enum class Law { Null, Planted, Channel };

struct Disorder {
	BitString x;
	BitString y;
	Law law = Law::Null;
	double deletion_probability = 0.0; // meaningful for Law::Channel only
	std::optional<Embedding> planted_embedding;
};

// x restricted to the 1-based positions of `sigma`.
inline BitString restrict_to(const BitString& x, std::span<const std::size_t> sigma)
{
	std::vector<std::uint8_t> out;
	out.reserve(sigma.size());
	for (auto pos : sigma)
		out.push_back(x[pos - 1]);
	return BitString(std::move(out));
}

inline BitString sample_uniform_string(std::size_t n, Seed seed)
{
	Rng rng(seed);
	std::vector<std::uint8_t> bits(n);
	std::size_t i = 0;
	while (i < n) {
		auto word = rng();
		for (int k = 0; k < 64 && i < n; ++k, ++i)
			bits[i] = static_cast<std::uint8_t>((word >> k) & 1U);
	}
	return BitString(std::move(bits));
}

// Uniform m-subset of {1..n}, returned in increasing order. Partial
// Fisher-Yates over an index array, then sort.
inline Embedding sample_subset(std::size_t n, std::size_t m, Rng& rng)
{
	detail::require(m <= n, errc::invalid_dimensions, "subset size exceeds ground set");
	std::vector<std::size_t> idx(n);
	std::iota(idx.begin(), idx.end(), std::size_t{1});
	for (std::size_t i = 0; i < m; ++i) {
		auto j = i + static_cast<std::size_t>(rng.below(n - i));
		std::swap(idx[i], idx[j]);
	}
	idx.resize(m);
	std::sort(idx.begin(), idx.end());
	return idx;
}

inline Disorder sample_null(std::size_t n, std::size_t m, Seed seed)
{
	detail::require(m <= n, errc::invalid_dimensions, "null disorder requires m <= n");
	Disorder d;
	d.x = sample_uniform_string(n, substream(seed, 0));
	d.y = sample_uniform_string(m, substream(seed, 1));
	d.law = Law::Null;
	return d;
}

inline Disorder sample_planted(std::size_t n, std::size_t m, Seed seed)
{
	detail::require(m <= n, errc::invalid_dimensions, "planted disorder requires m <= n");
	Disorder d;
	d.x = sample_uniform_string(n, substream(seed, 0));
	Rng rng(substream(seed, 1));
	d.planted_embedding = sample_subset(n, m, rng);
	d.y = restrict_to(d.x, *d.planted_embedding);
	d.law = Law::Planted;
	return d;
}

// Binary deletion channel: each bit is dropped independently with probability p.
inline BitString deletion_channel(const BitString& x, double p, Seed seed)
{
	detail::require(p >= 0.0 && p <= 1.0, errc::invalid_argument,
	                "deletion probability must lie in [0, 1]");
	Rng rng(seed);
	std::vector<std::uint8_t> out;
	out.reserve(x.size());
	for (std::size_t i = 0; i < x.size(); ++i) {
		if (!(rng.uniform01() < p))
			out.push_back(x[i]);
	}
	return BitString(std::move(out));
}

// X uniform, Y = BDC_p(X).
inline Disorder sample_channel(std::size_t n, double p, Seed seed)
{
	Disorder d;
	d.x = sample_uniform_string(n, substream(seed, 0));
	d.y = deletion_channel(d.x, p, substream(seed, 1));
	d.law = Law::Channel;
	d.deletion_probability = p;
	return d;
}

// |#ones - #zeros| of a contiguous range.
inline std::size_t displacement(std::span<const std::uint8_t> bits) noexcept
{
	std::ptrdiff_t ones = 0;
	for (auto b : bits)
		ones += b;
	auto diff = 2 * ones - static_cast<std::ptrdiff_t>(bits.size());
	return static_cast<std::size_t>(diff < 0 ? -diff : diff);
}

inline std::size_t displacement(const BitString& z) noexcept { return displacement(z.bits()); }

// At least a tenth of the floor(|x|/b) length-b blocks have displacement
// >= sqrt(b). Trailing bits past the last full block are ignored.
inline bool is_typical(const BitString& x, std::ptrdiff_t b)
{
	detail::require(b > 0 && static_cast<std::size_t>(b) <= x.size(), errc::invalid_block_length,
	                "block length must lie in [1, |x|]");
	auto len = static_cast<std::size_t>(b);
	std::size_t blocks = x.size() / len;
	std::size_t wide = 0;
	for (std::size_t i = 0; i < blocks; ++i) {
		auto d = displacement(x.bits().subspan(i * len, len));
		if (d * d >= len)
			++wide;
	}
	return 10 * wide >= blocks;
}

} // namespace rsm

#endif
