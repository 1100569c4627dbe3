#ifndef RSM_ERROR_HPP
#define RSM_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace rsm {

enum class errc {
	invalid_dimensions,
	invalid_block_length,
	invalid_environment,
	invalid_embedding,
	invalid_argument,
	divergent_series,
	series_diverged,
	out_of_oracle_range,
	no_interior_minimum,
	invalid_input_partition,
	standardization_out_of_range,
};

constexpr std::string_view to_string(errc code) noexcept
{
	switch (code) {
	case errc::invalid_dimensions: return "invalid-dimensions";
	case errc::invalid_block_length: return "invalid-block-length";
	case errc::invalid_environment: return "invalid-environment";
	case errc::invalid_embedding: return "invalid-embedding";
	case errc::invalid_argument: return "invalid-argument";
	case errc::divergent_series: return "divergent-series";
	case errc::series_diverged: return "series-diverged";
	case errc::out_of_oracle_range: return "out-of-oracle-range";
	case errc::no_interior_minimum: return "no-interior-minimum";
	case errc::invalid_input_partition: return "invalid-input-partition";
	case errc::standardization_out_of_range: return "standardization-out-of-range";
	}
	return "unknown";
}

// Every precondition failure in the library is reported through this type.
class error : public std::runtime_error {
public:
	error(errc code, const std::string& what)
		: std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
	{
	}

	errc code() const noexcept { return code_; }

private:
	errc code_;
};

namespace detail {

inline void require(bool condition, errc code, const char* what)
{
	if (!condition)
		throw error(code, what);
}

} // namespace detail
} // namespace rsm

#endif
