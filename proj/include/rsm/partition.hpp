#ifndef RSM_PARTITION_HPP
#define RSM_PARTITION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "core_model.hpp"
#include "error.hpp"
#include "log_domain.hpp"
#include "rng.hpp"

namespace rsm {

using BigInt = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Weight environments for Z_{n,m} = Z_{n-1,m} + B_{n,m} Z_{n-1,m-1}.

// B_{n,m} = 1{x_n = y_m}.
struct RankOneIndicator {
	BitString x;
	BitString y;
};

// B_{n,m} i.i.d. uniform on {0, 1} (Bernoulli matching model).
struct IidBernoulliHalf {
	std::size_t n = 0;
	std::size_t m = 0;
	Seed seed;
};

// B_{n,m} i.i.d. Gamma with the given shape and scale, so E[B] = shape * scale.
// The strict-weak limit carries a `+ alpha log(scale)` term, which is why the
// second parameter is a scale: shape 1, scale 1/2 is the mean-1/2 exponential.
struct IidGamma {
	std::size_t n = 0;
	std::size_t m = 0;
	double shape = 1.0;
	double scale = 0.5;
	Seed seed;
};

// Dense row-major N x M weight matrix; B_{n,m} = weights[(n-1)*M + (m-1)].
struct ExplicitWeights {
	std::size_t n = 0;
	std::size_t m = 0;
	std::vector<double> weights;
};

class Environment {
public:
	using Kind = std::variant<RankOneIndicator, IidBernoulliHalf, IidGamma, ExplicitWeights>;

	Environment(Kind kind) : kind_(std::move(kind)) { validate(); }

	const Kind& kind() const noexcept { return kind_; }

	std::size_t rows() const noexcept
	{
		return std::visit([](const auto& k) -> std::size_t {
			if constexpr (std::is_same_v<std::decay_t<decltype(k)>, RankOneIndicator>)
				return k.x.size();
			else
				return k.n;
		}, kind_);
	}

	std::size_t cols() const noexcept
	{
		return std::visit([](const auto& k) -> std::size_t {
			if constexpr (std::is_same_v<std::decay_t<decltype(k)>, RankOneIndicator>)
				return k.y.size();
			else
				return k.m;
		}, kind_);
	}

	// log B_{n, 1..M} for the 1-based row n. Random rows are regenerated from
	// substream(seed, n), so any row can be materialized independently.
	void log_weight_row(std::size_t n, std::span<double> out) const
	{
		const std::size_t m = cols();
		std::visit([&](const auto& k) {
			using K = std::decay_t<decltype(k)>;
			if constexpr (std::is_same_v<K, RankOneIndicator>) {
				auto xn = k.x[n - 1];
				for (std::size_t j = 0; j < m; ++j)
					out[j] = k.y[j] == xn ? 0.0 : detail::kLogZero;
			} else if constexpr (std::is_same_v<K, IidBernoulliHalf>) {
				Rng rng(substream(k.seed, n));
				std::size_t j = 0;
				while (j < m) {
					auto word = rng();
					for (int b = 0; b < 64 && j < m; ++b, ++j)
						out[j] = ((word >> b) & 1U) ? 0.0 : detail::kLogZero;
				}
			} else if constexpr (std::is_same_v<K, IidGamma>) {
				Rng rng(substream(k.seed, n));
				std::gamma_distribution<double> gamma(k.shape, k.scale);
				for (std::size_t j = 0; j < m; ++j)
					out[j] = LogWeight::from_linear(gamma(rng)).log();
			} else {
				const double* row = k.weights.data() + (n - 1) * m;
				for (std::size_t j = 0; j < m; ++j)
					out[j] = LogWeight::from_linear(row[j]).log();
			}
		}, kind_);
	}

private:
	void validate() const
	{
		std::visit([](const auto& k) {
			using K = std::decay_t<decltype(k)>;
			if constexpr (std::is_same_v<K, IidGamma>) {
				detail::require(k.shape > 0.0 && k.scale > 0.0 && std::isfinite(k.shape) &&
				                    std::isfinite(k.scale),
				                errc::invalid_environment, "gamma shape and scale must be positive");
			} else if constexpr (std::is_same_v<K, ExplicitWeights>) {
				detail::require(k.weights.size() == k.n * k.m, errc::invalid_environment,
				                "weight matrix size does not match dimensions");
				for (double w : k.weights)
					detail::require(w >= 0.0 && std::isfinite(w), errc::invalid_environment,
					                "weights must be finite and non-negative");
			}
		}, kind_);
	}

	Kind kind_;
};

// ---------------------------------------------------------------------------

// Row state of the log-domain recurrence. Entry m holds log Z_{n,m}.
class LogDPTable {
public:
	explicit LogDPTable(std::size_t m) : row_(m + 1, detail::kLogZero) { row_[0] = 0.0; }

	std::size_t row_index() const noexcept { return n_; }
	std::size_t cols() const noexcept { return row_.size() - 1; }
	LogWeight at(std::size_t m) const noexcept { return LogWeight::from_log(row_[m]); }
	std::span<const double> raw_row() const noexcept { return row_; }

	// Advances to row n+1 given log B_{n+1, 1..M}.
	void advance(std::span<const double> log_weights)
	{
		const std::size_t hi = std::min(n_ + 1, cols());
		for (std::size_t m = hi; m >= 1; --m)
			row_[m] = detail::logadd(row_[m], detail::logmul(log_weights[m - 1], row_[m - 1]));
		++n_;
	}

private:
	std::vector<double> row_;
	std::size_t n_ = 0;
};

namespace detail {

inline void check_embedding_dims(std::size_t n, std::size_t m)
{
	require(m <= n, errc::invalid_dimensions, "subsequence is longer than the ambient string");
}

// Rank-one kernel restricted to the band of cells that can reach (N, M).
inline double log_count_rank_one(const BitString& x, const BitString& y)
{
	const std::size_t n = x.size();
	const std::size_t m = y.size();
	std::vector<double> row(m + 1, kLogZero);
	row[0] = 0.0;
	const std::uint8_t* yb = y.bits().data();
	for (std::size_t i = 1; i <= n; ++i) {
		const std::size_t lo = (m + i > n) ? m + i - n : 1;
		const std::size_t hi = std::min(i, m);
		const std::uint8_t xi = x[i - 1];
		for (std::size_t j = hi; j >= lo && j >= 1; --j) {
			if (yb[j - 1] == xi)
				row[j] = logadd(row[j], row[j - 1]);
		}
	}
	return row[m];
}

inline double log_count_general(const Environment& env)
{
	const std::size_t n = env.rows();
	const std::size_t m = env.cols();
	std::vector<double> row(m + 1, kLogZero);
	std::vector<double> weights(m);
	row[0] = 0.0;
	for (std::size_t i = 1; i <= n; ++i) {
		env.log_weight_row(i, weights);
		const std::size_t lo = (m + i > n) ? m + i - n : 1;
		const std::size_t hi = std::min(i, m);
		for (std::size_t j = hi; j >= lo && j >= 1; --j)
			row[j] = logadd(row[j], logmul(weights[j - 1], row[j - 1]));
	}
	return row[m];
}

} // namespace detail

// Exact |S_{x,y}| by the two-term recurrence on a single big-integer row.
inline BigInt count_embeddings_exact(const BitString& x, const BitString& y)
{
	detail::check_embedding_dims(x.size(), y.size());
	const std::size_t m = y.size();
	std::vector<BigInt> row(m + 1);
	row[0] = 1;
	for (std::size_t i = 1; i <= x.size(); ++i) {
		const std::size_t hi = std::min(i, m);
		for (std::size_t j = hi; j >= 1; --j) {
			if (y[j - 1] == x[i - 1])
				row[j] += row[j - 1];
		}
	}
	return row[m];
}

// log Z_{N,M} in O(M) memory and O(N * min(M, N - M + 1)) time.
inline LogWeight log_count_embeddings(const Environment& env)
{
	detail::check_embedding_dims(env.rows(), env.cols());
	if (const auto* r1 = std::get_if<RankOneIndicator>(&env.kind()))
		return LogWeight::from_log(detail::log_count_rank_one(r1->x, r1->y));
	return LogWeight::from_log(detail::log_count_general(env));
}

inline LogWeight log_count_embeddings(const BitString& x, const BitString& y)
{
	return log_count_embeddings(Environment(RankOneIndicator{x, y}));
}

// Leftmost embedding: each y_i goes to the first matching position after the
// previous one. Absent exactly when y is not a subsequence of x.
inline std::optional<Embedding> greedy_embed(const BitString& x, const BitString& y)
{
	Embedding tau;
	tau.reserve(y.size());
	std::size_t t = 0;
	for (std::size_t i = 0; i < y.size(); ++i) {
		while (t < x.size() && x[t] != y[i])
			++t;
		if (t == x.size())
			return std::nullopt;
		tau.push_back(++t);
	}
	return tau;
}

inline bool is_embedding(const BitString& x, const BitString& y, std::span<const std::size_t> sigma)
{
	if (sigma.size() != y.size())
		return false;
	std::size_t prev = 0;
	for (std::size_t i = 0; i < sigma.size(); ++i) {
		if (sigma[i] <= prev || sigma[i] > x.size() || x[sigma[i] - 1] != y[i])
			return false;
		prev = sigma[i];
	}
	return true;
}

using SkipVector = std::vector<std::size_t>;

// v_i counts the occurrences of y_i strictly after the first occurrence
// following sigma(i-1), up to and including sigma(i).
inline SkipVector skip_vector_of(const BitString& x, const BitString& y,
                                 std::span<const std::size_t> sigma)
{
	detail::require(is_embedding(x, y, sigma), errc::invalid_embedding,
	                "sigma is not an embedding of y into x");
	SkipVector v(y.size(), 0);
	std::size_t prev = 0;
	for (std::size_t i = 0; i < y.size(); ++i) {
		std::size_t t = prev; // 0-based scan position
		while (x[t] != y[i])
			++t;
		std::size_t skips = 0;
		for (std::size_t s = t + 1; s < sigma[i]; ++s)
			skips += (x[s] == y[i]);
		v[i] = skips;
		prev = sigma[i];
	}
	return v;
}

// Inverse of skip_vector_of: replays the skips positionally and reports the
// embedding, or nothing if the replay runs past the end of x.
inline std::optional<Embedding> embedding_from_skip_vector(const BitString& x, const BitString& y,
                                                           std::span<const std::size_t> v)
{
	if (v.size() != y.size())
		return std::nullopt;
	Embedding sigma;
	sigma.reserve(y.size());
	std::size_t t = 0;
	for (std::size_t i = 0; i < y.size(); ++i) {
		std::size_t needed = v[i] + 1;
		while (t < x.size()) {
			if (x[t] == y[i] && --needed == 0)
				break;
			++t;
		}
		if (t == x.size())
			return std::nullopt;
		sigma.push_back(++t);
	}
	return sigma;
}

// Number of pairs (sigma1, sigma2) of length-m embeddings with equal images.
// Two (|x2|+1) x (m+1) planes; O(|x1| |x2| m) time.
inline BigInt count_common_subsequences(const BitString& x1, const BitString& x2, std::size_t m)
{
	detail::require(m <= std::min(x1.size(), x2.size()), errc::invalid_dimensions,
	                "m exceeds the shorter string");
	const std::size_t n2 = x2.size();
	const std::size_t w = m + 1;
	std::vector<BigInt> prev(w * (n2 + 1)), cur(w * (n2 + 1));
	for (std::size_t j = 0; j <= n2; ++j)
		prev[j * w] = 1;
	for (std::size_t i = 1; i <= x1.size(); ++i) {
		for (std::size_t k = 0; k < w; ++k)
			cur[k] = (k == 0) ? 1 : 0;
		for (std::size_t j = 1; j <= n2; ++j) {
			const bool match = x1[i - 1] == x2[j - 1];
			BigInt* c = &cur[j * w];
			const BigInt* cl = &cur[(j - 1) * w];
			const BigInt* p = &prev[j * w];
			const BigInt* pl = &prev[(j - 1) * w];
			c[0] = 1;
			for (std::size_t k = 1; k < w; ++k) {
				c[k] = p[k] + cl[k] - pl[k];
				if (match)
					c[k] += pl[k - 1];
			}
		}
		std::swap(prev, cur);
	}
	return prev[n2 * w + m];
}

inline std::size_t lcs_length(const BitString& x1, const BitString& x2)
{
	std::vector<std::size_t> prev(x2.size() + 1, 0), cur(x2.size() + 1, 0);
	for (std::size_t i = 1; i <= x1.size(); ++i) {
		for (std::size_t j = 1; j <= x2.size(); ++j) {
			cur[j] = x1[i - 1] == x2[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
		}
		std::swap(prev, cur);
	}
	return prev[x2.size()];
}

} // namespace rsm

#endif
