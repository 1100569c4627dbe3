#ifndef RSM_VERIFY_HPP
#define RSM_VERIFY_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "alignment.hpp"
#include "annealed.hpp"
#include "capacity.hpp"
#include "core_model.hpp"
#include "montecarlo.hpp"
#include "partition.hpp"
#include "report.hpp"

namespace rsm::verify {

enum class Level { Fast, Full };

struct Options {
	Level level = Level::Fast;
	Seed seed;
	bool corrupt_constant = false; // perturbs one reference constant; the suite must then fail
};

struct CheckResult {
	std::string id;   // module/operation
	bool pass = false;
	std::string detail;
};

namespace detail {

inline BitString random_bits(std::size_t n, Rng& rng)
{
	std::vector<std::uint8_t> v(n);
	for (auto& b : v)
		b = static_cast<std::uint8_t>(rng() & 1U);
	return BitString(std::move(v));
}

// Subset enumeration: counts masks of popcount |y| whose restriction equals y.
inline std::uint64_t brute_count(const BitString& x, const BitString& y)
{
	std::uint64_t count = 0;
	const std::size_t n = x.size();
	for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
		if (static_cast<std::size_t>(std::popcount(mask)) != y.size())
			continue;
		std::size_t k = 0;
		bool ok = true;
		for (std::size_t i = 0; i < n && ok; ++i)
			if ((mask >> i) & 1U)
				ok = x[i] == y[k++];
		count += ok;
	}
	return count;
}

inline std::vector<Embedding> all_subsets(std::size_t n, std::size_t m)
{
	std::vector<Embedding> out;
	for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
		if (static_cast<std::size_t>(std::popcount(mask)) != m)
			continue;
		Embedding e;
		for (std::size_t i = 0; i < n; ++i)
			if ((mask >> i) & 1U)
				e.push_back(i + 1);
		out.push_back(std::move(e));
	}
	return out;
}

inline void for_each_partition(std::size_t blocks, std::size_t b, std::size_t m,
                               const std::function<void(const Partition&)>& f)
{
	Partition p;
	p.block_lengths.assign(blocks, 0);
	std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
		if (i == blocks) {
			if (left == 0)
				f(p);
			return;
		}
		for (std::size_t l = 0; l <= std::min(b, left); ++l) {
			p.block_lengths[i] = l;
			rec(i + 1, left - l);
		}
	};
	rec(0, m);
}

} // namespace detail

inline std::vector<CheckResult> run(const Options& opt)
{
	std::vector<CheckResult> out;
	auto add = [&](std::string id, bool pass, std::string detail) {
		out.push_back({std::move(id), pass, std::move(detail)});
	};
	using report::format_number;
	Rng rng(substream(opt.seed, 0xC0FFEE));

	// partition ----------------------------------------------------------
	{
		bool ok = true;
		double worst = 0.0;
		for (int t = 0; t < 200; ++t) {
			const std::size_t n = 1 + rng.below(10);
			const std::size_t m = rng.below(n + 1);
			auto x = detail::random_bits(n, rng);
			auto y = detail::random_bits(m, rng);
			const auto exact = count_embeddings_exact(x, y);
			ok &= exact == detail::brute_count(x, y);
			const auto lz = log_count_embeddings(x, y);
			if (exact == 0) {
				ok &= lz.is_zero();
			} else {
				const double e = exact.convert_to<double>();
				worst = std::max(worst, std::abs(std::exp(lz.log()) - e) / e);
			}
			ok &= greedy_embed(x, y).has_value() == (exact != 0);
		}
		add("partition/count_embeddings_exact", ok, "200 random pairs against subset enumeration");
		add("partition/log_count_embeddings", worst < 1e-10, "max relative error " + format_number(worst));
	}
	{
		bool ok = true;
		for (int t = 0; t < 30; ++t) {
			const std::size_t n = 1 + rng.below(9);
			auto x = detail::random_bits(n, rng);
			auto y = detail::random_bits(rng.below(n + 1), rng);
			std::set<SkipVector> seen;
			std::size_t members = 0;
			for (const auto& s : detail::all_subsets(n, y.size())) {
				if (!is_embedding(x, y, s))
					continue;
				++members;
				auto v = skip_vector_of(x, y, s);
				ok &= embedding_from_skip_vector(x, y, v) == std::optional<Embedding>(s);
				seen.insert(v);
			}
			ok &= seen.size() == members;
		}
		add("partition/skip_vector_of", ok, "injective and invertible on exhaustive embedding sets");
	}
	{
		bool ok = true;
		for (int t = 0; t < 30; ++t) {
			auto x1 = detail::random_bits(1 + rng.below(7), rng);
			auto x2 = detail::random_bits(1 + rng.below(7), rng);
			const std::size_t lim = std::min(x1.size(), x2.size());
			std::size_t longest = 0;
			for (std::size_t m = 0; m <= lim; ++m) {
				std::uint64_t brute = 0;
				for (const auto& s1 : detail::all_subsets(x1.size(), m))
					for (const auto& s2 : detail::all_subsets(x2.size(), m))
						brute += restrict_to(x1, s1) == restrict_to(x2, s2);
				ok &= count_common_subsequences(x1, x2, m) == brute;
				if (brute > 0)
					longest = m;
			}
			ok &= lcs_length(x1, x2) == longest;
		}
		add("partition/count_common_subsequences", ok, "30 random pairs against pair enumeration");
	}

	// annealed ------------------------------------------------------------
	{
		double worst_z = 0.0, worst_i = 0.0, worst_q = 0.0, worst_rho = 0.0;
		for (int k = 1; k <= 19; ++k) {
			const double alpha = 0.05 * k;
			auto s = planted_annealed(alpha);
			double x = s.x;
			if (opt.corrupt_constant)
				x *= 1.0 + 1e-6;
			const double z = pair_mgf_closed_form(x, s.y);
			const double c = 1.0 / alpha;
			worst_z = std::max(worst_z, std::abs(z - 1.0));
			worst_i = std::max(worst_i, std::abs(x * x * (1 - 2 * s.y) - 2 * x * (1 + s.y) + 1));
			worst_q = std::max(worst_q, std::abs(c * x * x + 3 * x - (c - 1)));
			worst_rho = std::max(worst_rho, std::abs(x_of_rho(alpha, s.rho_star) - x));
			add("annealed/planted_annealed[alpha=" + format_number(alpha) + "]",
			    std::abs(z - 1.0) < 1e-10, "Z(x,y)-1 = " + format_number(z - 1.0));
		}
		add("annealed/constraint_residual", worst_i < 1e-10, "max residual " + format_number(worst_i));
		add("annealed/quadratic_residual", worst_q < 1e-10, "max residual " + format_number(worst_q));
		add("annealed/x_of_rho", worst_rho < 1e-10, "max |x(rho*) - x| " + format_number(worst_rho));
	}
	{
		double worst = 0.0;
		for (double x : {0.05, 0.1, 0.15, 0.2})
			for (double y : {0.1, 0.5, 1.0, 1.5, 2.0}) {
				if (x * (1 + std::sqrt(y)) * (1 + std::sqrt(y)) >= 0.85)
					continue;
				const double c = pair_mgf_closed_form(x, y);
				worst = std::max(worst, std::abs(pair_mgf_series(x, y) - c) / c);
			}
		add("annealed/pair_mgf_series", worst < 1e-9, "max relative difference " + format_number(worst));
	}
	{
		bool ok = true;
		for (std::size_t n = 1; n <= 6; ++n)
			for (std::size_t m = 1; m <= n; ++m) {
				boost::multiprecision::cpp_int direct = 0;
				auto subs = detail::all_subsets(n, m);
				for (const auto& s : subs)
					for (const auto& t : subs) {
						std::size_t overlap = 0;
						for (std::size_t i = 0; i < m; ++i)
							overlap += s[i] == t[i];
						direct += boost::multiprecision::cpp_int(1) << overlap;
					}
				ok &= barZ_exact(n, m) == direct;
			}
		add("annealed/barZ_exact", ok, "composition sum against pair enumeration, n <= 6");
	}
	{
		double worst = 0.0;
		for (double alpha : {0.2, 0.5, 0.8})
			for (int k = 1; k <= 7; ++k) {
				const double rho = k / 8.0;
				const double h = 1e-5;
				const double fd = (variational_point(alpha, rho + h).objective -
				                   variational_point(alpha, rho - h).objective) /
				                  (2 * h);
				worst = std::max(worst, std::abs(fd - alpha * std::log(z_of_rho(alpha, rho))));
			}
		add("annealed/envelope_identity", worst < 1e-5, "max deviation " + format_number(worst));
	}
	{
		const double psi1 = digamma(1.0);
		add("annealed/digamma", std::abs(psi1 + 0.57721566490153286) < 1e-10,
		    "psi(1) = " + format_number(psi1));
		double worst = 0.0;
		for (double alpha : {0.1, 0.3, 0.5})
			worst = std::max(worst, std::abs(strict_weak_solve(1.0, 0.5, alpha).residual));
		add("annealed/strict_weak_value", worst < 1e-8, "max stationarity residual " + format_number(worst));
	}

	// capacity ------------------------------------------------------------
	{
		const double l10 = log_explicit_lower_bound(0.5) / std::numbers::ln10;
		add("capacity/log_explicit_lower_bound", std::abs(l10 + 1860.0) <= 1.0, "log10 bound " + format_number(l10));
		const double b = beta_alpha(0.5);
		const double oracle = 0.5 * std::erf(1.0 / std::numbers::sqrt2);
		add("capacity/beta_alpha", std::abs(b - oracle) < 1e-12 && std::abs(b - 0.34134) < 1e-5,
		    "beta(0.5) = " + format_number(b));
		bool ok = std::abs(upper_bound_uniform_capacity(0.0) - std::numbers::ln2) == 0.0;
		for (int k = 1; k < 49; ++k) {
			const double p = 0.02 * k;
			const double up = upper_bound_uniform_capacity(p);
			ok &= dgv_lower_bound(p) <= up && std::exp(log_explicit_lower_bound(p)) <= up && up > 0.0;
		}
		add("capacity/bound_sandwich", ok, "0.02 grid of p");
	}

	// alignment -----------------------------------------------------------
	{
		bool ok = true;
		std::size_t cases = 0;
		for (std::size_t b = 2; b <= 5; ++b)
			for (std::size_t blocks = 1; blocks <= 3; ++blocks) {
				const std::size_t n = b * blocks;
				auto params = AlignmentParams::make(0.5, b, n);
				auto x = detail::random_bits(n, rng);
				auto y = detail::random_bits(rng.below(n + 1), rng);
				double best_ind = kInfeasible, best_std = kInfeasible;
				detail::for_each_partition(blocks, b, y.size(), [&](const Partition& p) {
					const double v = average_alignment(x, y, p, params);
					if (is_induced_near_equipartition(p, y.size(), params))
						best_ind = std::max(best_ind, v);
					if (is_standardized_near_equipartition(p, y.size(), params))
						best_std = std::max(best_std, v);
				});
				ok &= std::abs(total_alignment_ind(x, y, params) - best_ind) < 1e-12 ||
				      total_alignment_ind(x, y, params) == best_ind;
				ok &= std::abs(total_alignment_std(x, y, params) - best_std) < 1e-12 ||
				      total_alignment_std(x, y, params) == best_std;
				++cases;
			}
		add("alignment/total_alignment", ok, format_number(static_cast<double>(cases)) + " exhaustive cases");
	}

	// montecarlo ----------------------------------------------------------
	{
		double worst = 0.0;
		for (auto [n, m] : {std::pair<std::size_t, std::size_t>{4, 2}, {6, 3}, {6, 0}}) {
			auto r = null_planted_gap_exhaustive(n, m);
			worst = std::max(worst, r.abs_diff);
		}
		add("montecarlo/null_planted_gap_exhaustive", worst < 1e-12, "max |difference| " + format_number(worst));
	}

	if (opt.level == Level::Full) {
		auto null = estimate_quenched(ModelSpec::null(), 0.25, 10000, 8, substream(opt.seed, 1));
		add("montecarlo/estimate_quenched[null,alpha=0.25]",
		    null.mean >= 0.34657 - 3 * null.std_error && null.mean <= 0.38905,
		    "mean " + format_number(null.mean) + " stderr " + format_number(null.std_error));
		auto pl = estimate_quenched(ModelSpec::planted(), 0.5, 10000, 8, substream(opt.seed, 2));
		const double up = planted_annealed(0.5).value, lo = null_annealed(0.5);
		add("montecarlo/estimate_quenched[planted,alpha=0.5]",
		    pl.mean + 3 * pl.std_error < up && pl.mean - 3 * pl.std_error > lo,
		    "mean " + format_number(pl.mean) + " stderr " + format_number(pl.std_error));
		auto sw = estimate_polymer(ModelSpec::strict_weak(1.0, 0.5), 0.3, 4000, 16, substream(opt.seed, 3));
		const double exact = strict_weak_value(1.0, 0.5, 0.3);
		add("montecarlo/estimate_polymer[strict-weak,alpha=0.3]", std::abs(sw.mean - exact) / exact < 0.05,
		    "mc " + format_number(sw.mean) + " exact " + format_number(exact));
	}
	return out;
}

} // namespace rsm::verify

#endif
