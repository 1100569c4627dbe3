#ifndef RSM_RNG_HPP
#define RSM_RNG_HPP

#include <cstdint>
#include <limits>

namespace rsm {

// Reproducibility handle. Every random draw in the library is a pure function
// of a Seed; parallel work derives one substream per work item.
struct Seed {
	std::uint64_t master = 42;
	std::uint64_t stream = 0;

	friend bool operator==(const Seed&, const Seed&) = default;
};

namespace detail {

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept
{
	z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
	z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
	return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

} // namespace detail

// Substream `index` of `parent`. Distinct indices give distinct streams.
constexpr Seed substream(Seed parent, std::uint64_t index) noexcept
{
	return Seed{parent.master,
	            detail::splitmix64_mix(parent.stream + detail::kGolden * (index + 1))};
}

// SplitMix64 generator; models std::uniform_random_bit_generator.
class Rng {
public:
	using result_type = std::uint64_t;

	explicit constexpr Rng(Seed seed) noexcept
		: state_(detail::splitmix64_mix(seed.master) ^
		         detail::splitmix64_mix(seed.stream ^ 0x6a09e667f3bcc909ULL))
	{
	}

	static constexpr result_type min() noexcept { return 0; }
	static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

	constexpr result_type operator()() noexcept
	{
		state_ += detail::kGolden;
		return detail::splitmix64_mix(state_);
	}

	// Uniform on [0, 1) with 53 random bits.
	constexpr double uniform01() noexcept
	{
		return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
	}

	// Uniform on {0, ..., bound - 1}; Lemire's unbiased multiply-shift.
	std::uint64_t below(std::uint64_t bound) noexcept
	{
		unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
		auto low = static_cast<std::uint64_t>(m);
		if (low < bound) {
			std::uint64_t threshold = (0 - bound) % bound;
			while (low < threshold) {
				m = static_cast<unsigned __int128>((*this)()) * bound;
				low = static_cast<std::uint64_t>(m);
			}
		}
		return static_cast<std::uint64_t>(m >> 64);
	}

private:
	std::uint64_t state_;
};

} // namespace rsm

#endif
