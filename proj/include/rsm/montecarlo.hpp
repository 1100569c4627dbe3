#ifndef RSM_MONTECARLO_HPP
#define RSM_MONTECARLO_HPP

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "annealed.hpp"
#include "capacity.hpp"
#include "core_model.hpp"
#include "error.hpp"
#include "partition.hpp"
#include "rng.hpp"

namespace rsm {

enum class Model { Null, Planted, BernoulliMatching, StrictWeak };

inline const char* model_name(Model m) noexcept
{
	switch (m) {
	case Model::Null: return "null";
	case Model::Planted: return "planted";
	case Model::BernoulliMatching: return "bernoulli-matching";
	case Model::StrictWeak: return "strict-weak";
	}
	return "unknown";
}

struct ModelSpec {
	Model kind = Model::Null;
	double shape = 1.0; // StrictWeak only
	double scale = 0.5; // StrictWeak only

	static ModelSpec null() { return {Model::Null}; }
	static ModelSpec planted() { return {Model::Planted}; }
	static ModelSpec bernoulli_matching() { return {Model::BernoulliMatching}; }
	static ModelSpec strict_weak(double shape, double scale) { return {Model::StrictWeak, shape, scale}; }
};

struct FreeEnergyEstimate {
	double alpha = 0.0;
	std::size_t n = 0;
	std::size_t m = 0;
	ModelSpec model;
	std::size_t samples = 0;
	double mean = 0.0;   // average of (1/N) log Z, with log 0 taken as 0
	double std_error = 0.0; // sample standard deviation / sqrt(samples)
	double zero_fraction = 0.0;
	std::vector<double> per_sample; // (1/N) log Z per sample, in sample order
};

// Worker count: RSM_THREADS if set to a positive integer, otherwise the
// hardware concurrency.
inline std::size_t worker_count()
{
	if (const char* env = std::getenv("RSM_THREADS")) {
		char* end = nullptr;
		long v = std::strtol(env, &end, 10);
		if (end != env && v > 0)
			return static_cast<std::size_t>(v);
	}
	const unsigned hw = std::thread::hardware_concurrency();
	return hw == 0 ? 1 : hw;
}

// Runs body(i) for i in [0, count) on up to `workers` threads. The first
// exception raised by any task is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t count, Body&& body, std::size_t workers = 0)
{
	if (workers == 0)
		workers = worker_count();
	workers = std::min(workers, count);
	if (workers <= 1) {
		for (std::size_t i = 0; i < count; ++i)
			body(i);
		return;
	}
	std::atomic<std::size_t> next{0};
	std::exception_ptr failure;
	std::mutex failure_mutex;
	auto run = [&] {
		for (;;) {
			const std::size_t i = next.fetch_add(1);
			if (i >= count)
				return;
			try {
				body(i);
			} catch (...) {
				std::lock_guard lock(failure_mutex);
				if (!failure)
					failure = std::current_exception();
				next.store(count);
			}
		}
	};
	std::vector<std::thread> pool;
	pool.reserve(workers - 1);
	for (std::size_t t = 1; t < workers; ++t)
		pool.emplace_back(run);
	run();
	for (auto& th : pool)
		th.join();
	if (failure)
		std::rethrow_exception(failure);
}

// Pairwise summation; error grows like log(n) rather than n.
inline double pairwise_sum(std::span<const double> v) noexcept
{
	if (v.size() <= 8) {
		double s = 0.0;
		for (double x : v)
			s += x;
		return s;
	}
	const std::size_t half = v.size() / 2;
	return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// M = floor(alpha N), guarding against alpha N landing a hair below an integer.
inline std::size_t subsequence_length(double alpha, std::size_t n)
{
	detail::require(alpha >= 0.0 && alpha <= 1.0, errc::invalid_argument, "alpha must lie in [0, 1]");
	const double target = alpha * static_cast<double>(n);
	auto m = static_cast<std::size_t>(std::floor(target + 1e-9 * std::max(1.0, target)));
	return std::min(m, n);
}

// log Z for one draw of the model; zero partition functions come back as the
// sentinel.
inline LogWeight sample_log_partition(const ModelSpec& model, std::size_t n, std::size_t m, Seed seed)
{
	switch (model.kind) {
	case Model::Null: {
		auto d = sample_null(n, m, seed);
		return log_count_embeddings(d.x, d.y);
	}
	case Model::Planted: {
		auto d = sample_planted(n, m, seed);
		return log_count_embeddings(d.x, d.y);
	}
	case Model::BernoulliMatching:
		return log_count_embeddings(Environment(IidBernoulliHalf{n, m, seed}));
	case Model::StrictWeak:
		return log_count_embeddings(Environment(IidGamma{n, m, model.shape, model.scale, seed}));
	}
	throw error(errc::invalid_argument, "unknown model");
}

inline FreeEnergyEstimate estimate_quenched(const ModelSpec& model, double alpha, std::size_t n,
                                            std::size_t samples, Seed seed, std::size_t workers = 0)
{
	detail::require(n >= 1, errc::invalid_dimensions, "n must be at least 1");
	detail::require(samples >= 1, errc::invalid_argument, "at least one sample is required");
	detail::require(alpha >= 0.0 && alpha <= 1.0, errc::invalid_argument, "alpha must lie in [0, 1]");
	if (model.kind == Model::StrictWeak)
		detail::require(model.shape > 0.0 && model.scale > 0.0, errc::invalid_environment,
		                "gamma shape and scale must be positive");

	FreeEnergyEstimate est;
	est.alpha = alpha;
	est.n = n;
	est.m = subsequence_length(alpha, n);
	est.model = model;
	est.samples = samples;
	est.per_sample.assign(samples, 0.0);
	std::vector<std::uint8_t> zero(samples, 0);

	parallel_for(samples, [&](std::size_t i) {
		const LogWeight lz = sample_log_partition(model, n, est.m, substream(seed, i));
		if (lz.is_zero())
			zero[i] = 1;
		else
			est.per_sample[i] = lz.log() / static_cast<double>(n);
	}, workers);

	const double count = static_cast<double>(samples);
	est.mean = pairwise_sum(est.per_sample) / count;
	if (samples > 1) {
		std::vector<double> sq(samples);
		for (std::size_t i = 0; i < samples; ++i)
			sq[i] = (est.per_sample[i] - est.mean) * (est.per_sample[i] - est.mean);
		est.std_error = std::sqrt(pairwise_sum(sq) / (count - 1.0)) / std::sqrt(count);
	}
	std::size_t zeros = 0;
	for (auto z : zero)
		zeros += z;
	est.zero_fraction = static_cast<double>(zeros) / count;
	return est;
}

// Quenched estimate for an i.i.d. weight environment.
inline FreeEnergyEstimate estimate_polymer(const ModelSpec& env_kind, double alpha, std::size_t n,
                                           std::size_t samples, Seed seed, std::size_t workers = 0)
{
	detail::require(env_kind.kind == Model::BernoulliMatching || env_kind.kind == Model::StrictWeak,
	                errc::invalid_environment, "polymer estimates need an i.i.d. environment");
	return estimate_quenched(env_kind, alpha, n, samples, seed, workers);
}

// ---------------------------------------------------------------------------

struct CurveSpec {
	std::vector<double> grid;
	std::size_t n = 10000;
	std::size_t samples = 8;
	Seed seed;
};

namespace detail {

inline void validate_grid(const std::vector<double>& grid, double lo, double hi)
{
	require(!grid.empty(), errc::invalid_argument, "grid is empty");
	for (std::size_t i = 0; i < grid.size(); ++i) {
		require(grid[i] >= lo && grid[i] <= hi, errc::invalid_argument, "grid value out of range");
		if (i > 0)
			require(grid[i] > grid[i - 1], errc::invalid_argument, "grid must be strictly increasing");
	}
}

} // namespace detail

struct MutualInfoRow {
	double p = 0.0;
	double lower_dgv = 0.0;
	double mc_capacity = 0.0;
	double mc_stderr = 0.0;
	double upper_annealed = 0.0;
};

// Deletion-channel capacity curve: grid values are deletion probabilities p,
// each estimated from the planted model at alpha = 1 - p.
inline std::vector<MutualInfoRow> mutual_info_curve(const CurveSpec& spec, std::size_t workers = 0)
{
	detail::validate_grid(spec.grid, 0.0, 0.999999);
	std::vector<MutualInfoRow> rows(spec.grid.size());
	for (std::size_t k = 0; k < spec.grid.size(); ++k) {
		const double p = spec.grid[k];
		const double alpha = 1.0 - p;
		auto est = estimate_quenched(ModelSpec::planted(), alpha, spec.n, spec.samples,
		                             substream(spec.seed, k), workers);
		MutualInfoRow& r = rows[k];
		r.p = p;
		r.lower_dgv = dgv_lower_bound(p);
		r.mc_capacity = alpha * std::numbers::ln2 - binary_entropy(alpha) + est.mean;
		r.mc_stderr = est.std_error;
		r.upper_annealed = upper_bound_uniform_capacity(p);
	}
	return rows;
}

struct StrictWeakComparisonRow {
	double alpha = 0.0;
	double strict_weak_exact = 0.0;
	double null_mc = 0.0;
	double null_mc_stderr = 0.0;
	double null_zero_fraction = 0.0;
};

// Strict-Weak exact free energy against the null subsequence model, grid in alpha.
inline std::vector<StrictWeakComparisonRow> strict_weak_comparison_curve(const CurveSpec& spec,
                                                                          double shape = 1.0,
                                                                          double scale = 0.5,
                                                                          std::size_t workers = 0)
{
	detail::validate_grid(spec.grid, 1e-9, 0.5);
	std::vector<StrictWeakComparisonRow> rows(spec.grid.size());
	for (std::size_t k = 0; k < spec.grid.size(); ++k) {
		const double alpha = spec.grid[k];
		auto est = estimate_quenched(ModelSpec::null(), alpha, spec.n, spec.samples,
		                             substream(spec.seed, k), workers);
		auto& r = rows[k];
		r.alpha = alpha;
		r.strict_weak_exact = strict_weak_value(shape, scale, alpha);
		r.null_mc = est.mean;
		r.null_mc_stderr = est.std_error;
		r.null_zero_fraction = est.zero_fraction;
	}
	return rows;
}

// ---------------------------------------------------------------------------
// Planted versus null: size-biasing identity and the finite-N gap.

struct ExhaustiveGapReport {
	std::size_t n = 0;
	std::size_t m = 0;
	double planted_side = 0.0; // E[log Z] under the planted law
	double null_side = 0.0;    // (2^M / C(N,M)) E[Z log Z] under the null law
	double abs_diff = 0.0;
};

inline ExhaustiveGapReport null_planted_gap_exhaustive(std::size_t n, std::size_t m)
{
	detail::require(m <= n, errc::invalid_dimensions, "requires m <= n");
	detail::require(n <= 12, errc::out_of_oracle_range, "exhaustive enumeration is limited to n <= 12");

	std::vector<std::size_t> subset_masks;
	for (std::uint32_t mask = 0; mask < (1U << n); ++mask)
		if (static_cast<std::size_t>(std::popcount(mask)) == m)
			subset_masks.push_back(mask);
	const double choose = static_cast<double>(subset_masks.size());
	const double two_n = std::ldexp(1.0, static_cast<int>(n));

	auto bits_of = [](std::uint32_t word, std::size_t len) {
		std::vector<std::uint8_t> v(len);
		for (std::size_t i = 0; i < len; ++i)
			v[i] = static_cast<std::uint8_t>((word >> i) & 1U);
		return BitString(std::move(v));
	};

	std::vector<double> planted_terms;
	std::vector<double> null_terms;
	planted_terms.reserve((1U << n) * subset_masks.size());
	null_terms.reserve((std::size_t{1} << n) << m);
	for (std::uint32_t xw = 0; xw < (1U << n); ++xw) {
		const BitString x = bits_of(xw, n);
		for (auto mask : subset_masks) {
			Embedding sigma;
			for (std::size_t i = 0; i < n; ++i)
				if ((mask >> i) & 1U)
					sigma.push_back(i + 1);
			const BitString y = restrict_to(x, sigma);
			planted_terms.push_back(std::log(count_embeddings_exact(x, y).convert_to<double>()));
		}
		for (std::uint32_t yw = 0; yw < (1U << m); ++yw) {
			const double z = count_embeddings_exact(x, bits_of(yw, m)).convert_to<double>();
			null_terms.push_back(z > 0.0 ? z * std::log(z) : 0.0);
		}
	}

	ExhaustiveGapReport r;
	r.n = n;
	r.m = m;
	r.planted_side = pairwise_sum(planted_terms) / (two_n * choose);
	const double two_m = std::ldexp(1.0, static_cast<int>(m));
	r.null_side = (two_m / choose) * pairwise_sum(null_terms) / (two_n * two_m);
	r.abs_diff = std::abs(r.planted_side - r.null_side);
	return r;
}

struct SampledGapReport {
	FreeEnergyEstimate planted;
	FreeEnergyEstimate null;
	double null_annealed = 0.0;
	double margin = 0.0;        // planted.mean - null_annealed
	double margin_in_stderr = 0.0;
};

inline SampledGapReport null_planted_gap_sampled(double alpha, std::size_t n, std::size_t samples, Seed seed,
                                                 std::size_t workers = 0)
{
	SampledGapReport r;
	r.planted = estimate_quenched(ModelSpec::planted(), alpha, n, samples, substream(seed, 0), workers);
	r.null = estimate_quenched(ModelSpec::null(), alpha, n, samples, substream(seed, 1), workers);
	r.null_annealed = null_annealed(alpha);
	r.margin = r.planted.mean - r.null_annealed;
	r.margin_in_stderr = r.planted.std_error > 0.0 ? r.margin / r.planted.std_error : 0.0;
	return r;
}

} // namespace rsm

#endif
