#ifndef RSM_LOG_DOMAIN_HPP
#define RSM_LOG_DOMAIN_HPP

#include <algorithm>
#include <cmath>
#include <limits>

namespace rsm {

// Natural log of a non-negative quantity. Zero is a dedicated sentinel
// rather than an IEEE infinity, so zero handling does not depend on the
// floating-point environment.
class LogWeight {
public:
	static constexpr double kZeroSentinel = std::numeric_limits<double>::lowest();

	constexpr LogWeight() noexcept = default;
	static constexpr LogWeight zero() noexcept { return LogWeight(kZeroSentinel); }
	static constexpr LogWeight one() noexcept { return LogWeight(0.0); }
	static constexpr LogWeight from_log(double value) noexcept { return LogWeight(value); }
	static LogWeight from_linear(double value) noexcept
	{
		return value > 0.0 ? LogWeight(std::log(value)) : zero();
	}

	constexpr bool is_zero() const noexcept { return value_ == kZeroSentinel; }
	constexpr double log() const noexcept { return value_; }
	double linear() const noexcept { return is_zero() ? 0.0 : std::exp(value_); }

	friend constexpr bool operator==(LogWeight, LogWeight) = default;

private:
	explicit constexpr LogWeight(double value) noexcept : value_(value) {}
	double value_ = kZeroSentinel;
};

namespace detail {

inline constexpr double kLogZero = LogWeight::kZeroSentinel;

// log(e^a + e^b) on raw sentinel-encoded values.
inline double logadd(double a, double b) noexcept
{
	if (a < b)
		std::swap(a, b);
	if (b == kLogZero)
		return a;
	double d = b - a;
	if (d < -40.0)
		return a;
	return a + std::log1p(std::exp(d));
}

inline double logmul(double a, double b) noexcept
{
	return (a == kLogZero || b == kLogZero) ? kLogZero : a + b;
}

} // namespace detail

inline LogWeight logadd(LogWeight a, LogWeight b) noexcept
{
	return LogWeight::from_log(detail::logadd(a.log(), b.log()));
}

inline LogWeight logmul(LogWeight a, LogWeight b) noexcept
{
	return LogWeight::from_log(detail::logmul(a.log(), b.log()));
}

} // namespace rsm

#endif
