// rsm: command-line front end for the random subsequence model library.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <rsm/rsm.hpp>

#ifndef RSM_VERSION
#define RSM_VERSION "unknown"
#endif

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

struct OutputOptions {
	std::string out_path;
	std::string format = "csv";
	std::string plot_path;
	bool bits = false;
};

std::vector<double> parse_grid(const std::string& text)
{
	std::vector<double> grid;
	std::stringstream ss(text);
	std::string item;
	while (std::getline(ss, item, ',')) {
		if (item.find_first_not_of(" \t") == std::string::npos)
			continue;
		std::size_t used = 0;
		double v = 0;
		try {
			v = std::stod(item, &used);
		} catch (const std::exception&) {
			throw UsageError("cannot parse grid value '" + item + "'");
		}
		if (item.find_first_not_of(" \t", used) != std::string::npos)
			throw UsageError("cannot parse grid value '" + item + "'");
		grid.push_back(v);
	}
	return grid;
}

std::vector<double> linear_grid(double lo, double hi, double step)
{
	std::vector<double> g;
	const auto count = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
	for (int k = 0; k <= count; ++k)
		g.push_back(std::round((lo + k * step) * 1e12) / 1e12);
	return g;
}

void write_text(const std::string& path, const std::string& text)
{
	if (path.empty() || path == "-") {
		std::cout << text;
		return;
	}
	std::ofstream f(path, std::ios::binary);
	if (!f)
		throw UsageError("cannot open '" + path + "' for writing");
	f << text;
}

std::string render_table(const rsm::report::Table& t, const std::string& command, const nlohmann::json& config,
                         const std::string& format)
{
	if (format == "json") {
		nlohmann::json doc;
		doc["command"] = command;
		doc["version"] = RSM_VERSION;
		doc["config"] = config;
		doc["columns"] = t.columns;
		auto rows = nlohmann::json::array();
		for (const auto& r : t.rows) {
			nlohmann::json row = nlohmann::json::object();
			for (std::size_t c = 0; c < t.columns.size(); ++c)
				row[t.columns[c]] = r[c];
			rows.push_back(row);
		}
		doc["rows"] = rows;
		return doc.dump(2) + "\n";
	}
	std::ostringstream os;
	rsm::report::write_csv(os, t);
	return os.str();
}

std::vector<double> column(const rsm::report::Table& t, const std::string& name)
{
	std::vector<double> v;
	for (std::size_t c = 0; c < t.columns.size(); ++c)
		if (t.columns[c] == name)
			for (const auto& r : t.rows)
				v.push_back(r[c]);
	return v;
}

void add_output_options(CLI::App* cmd, OutputOptions& o)
{
	cmd->add_option("-o,--out", o.out_path, "Output file (default: stdout)");
	cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
	cmd->add_option("--plot", o.plot_path, "Write an SVG figure to this path");
	cmd->add_flag("--bits", o.bits, "Report free energies and capacities in bits instead of nats");
}

// ---------------------------------------------------------------------------

int cmd_count(const std::string& xs, const std::string& ys, bool bits)
{
	rsm::BitString x, y;
	try {
		x = rsm::BitString::parse(xs);
		y = rsm::BitString::parse(ys);
	} catch (const rsm::error& e) {
		throw UsageError(e.what());
	}
	if (y.size() > x.size())
		throw UsageError("y is longer than x");
	const auto count = rsm::count_embeddings_exact(x, y);
	const auto lz = rsm::log_count_embeddings(x, y);
	std::cout << "count " << count.str() << '\n';
	if (lz.is_zero())
		std::cout << "log_count -inf\n";
	else
		std::cout << "log_count " << rsm::report::format_number(bits ? lz.log() / std::numbers::ln2 : lz.log())
		          << '\n';
	return kExitOk;
}

struct CurveOptions {
	std::string grid;
	std::size_t n = 10000;
	std::size_t samples = 8;
};

int cmd_figure1(const CurveOptions& c, const OutputOptions& o, std::uint64_t seed, bool grid_given)
{
	rsm::CurveSpec spec;
	spec.grid = grid_given ? parse_grid(c.grid) : linear_grid(0.0, 0.95, 0.05);
	if (spec.grid.empty())
		throw UsageError("grid is empty");
	spec.n = c.n;
	spec.samples = c.samples;
	spec.seed = rsm::Seed{seed, 0};
	const auto rows = rsm::mutual_info_curve(spec);

	rsm::report::Table t;
	t.columns = {"p", "dgv_lower", "mc_capacity", "mc_stderr", "upper_annealed"};
	for (const auto& r : rows)
		t.rows.push_back({r.p, r.lower_dgv, r.mc_capacity, r.mc_stderr, r.upper_annealed});
	if (o.bits)
		t.scale_columns({"dgv_lower", "mc_capacity", "mc_stderr", "upper_annealed"}, 1.0 / std::numbers::ln2);

	nlohmann::json config = {{"grid", spec.grid}, {"n", spec.n}, {"samples", spec.samples},
	                         {"seed", seed}, {"units", o.bits ? "bits" : "nats"}};
	write_text(o.out_path, render_table(t, "figure1", config, o.format));
	if (!o.plot_path.empty()) {
		const auto p = column(t, "p");
		write_text(o.plot_path,
		           rsm::report::render_svg(
		               {"Uniform capacity of the deletion channel", "deletion probability p",
		                o.bits ? "bits" : "nats"},
		               {{"lower (ln 2 - h(p))", "#2ca02c", p, column(t, "dgv_lower")},
		                {"simulation", "#ff7f0e", p, column(t, "mc_capacity")},
		                {"upper (annealed)", "#1f77b4", p, column(t, "upper_annealed")}}));
	}
	return kExitOk;
}

int cmd_figure2(const CurveOptions& c, const OutputOptions& o, std::uint64_t seed, bool grid_given)
{
	rsm::CurveSpec spec;
	spec.grid = grid_given ? parse_grid(c.grid) : linear_grid(0.05, 0.5, 0.05);
	if (spec.grid.empty())
		throw UsageError("grid is empty");
	for (double a : spec.grid)
		if (!(a > 0.0 && a <= 0.5))
			throw UsageError("alpha grid values must lie in (0, 1/2]");
	spec.n = c.n;
	spec.samples = c.samples;
	spec.seed = rsm::Seed{seed, 0};
	const auto rows = rsm::strict_weak_comparison_curve(spec);

	rsm::report::Table t;
	t.columns = {"alpha", "strict_weak_exact", "null_mc", "null_mc_stderr", "null_zero_fraction"};
	for (const auto& r : rows)
		t.rows.push_back({r.alpha, r.strict_weak_exact, r.null_mc, r.null_mc_stderr, r.null_zero_fraction});
	if (o.bits)
		t.scale_columns({"strict_weak_exact", "null_mc", "null_mc_stderr"}, 1.0 / std::numbers::ln2);

	nlohmann::json config = {{"grid", spec.grid}, {"n", spec.n}, {"samples", spec.samples},
	                         {"seed", seed}, {"units", o.bits ? "bits" : "nats"},
	                         {"strict_weak", {{"shape", 1.0}, {"scale", 0.5}}}};
	write_text(o.out_path, render_table(t, "figure2", config, o.format));
	if (!o.plot_path.empty()) {
		const auto a = column(t, "alpha");
		write_text(o.plot_path,
		           rsm::report::render_svg({"Strict-Weak polymer vs null subsequence model", "alpha",
		                                    o.bits ? "bits" : "nats"},
		                                   {{"Strict-Weak exact (a=1, b=1/2)", "#1f77b4", a,
		                                     column(t, "strict_weak_exact")},
		                                    {"null model simulation", "#ff7f0e", a, column(t, "null_mc")}}));
	}
	return kExitOk;
}

int cmd_verify(const std::string& level, bool corrupt, std::uint64_t seed)
{
	rsm::verify::Options opt;
	opt.level = level == "full" ? rsm::verify::Level::Full : rsm::verify::Level::Fast;
	opt.seed = rsm::Seed{seed, 0};
	opt.corrupt_constant = corrupt;
	const auto results = rsm::verify::run(opt);
	std::size_t failed = 0;
	for (const auto& r : results) {
		std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << "  " << r.detail << '\n';
		failed += !r.pass;
	}
	std::cout << (results.size() - failed) << "/" << results.size() << " checks passed\n";
	return failed == 0 ? kExitOk : kExitVerifyFailed;
}

struct AlignmentOptions {
	double alpha = 0.5;
	std::size_t b = 64;
	std::size_t n = 6400;
	std::size_t trials = 100;
	bool exact = false;
};

int cmd_alignment(const AlignmentOptions& a, const OutputOptions& o, std::uint64_t seed)
{
	const auto params = rsm::AlignmentParams::make(a.alpha, a.b, a.n);
	if (!params.nondegenerate())
		std::cerr << "warning: delta * alpha * b < 1, the induced window is degenerate\n";
	const std::size_t m = rsm::subsequence_length(a.alpha, a.n);
	rsm::report::Table t;
	t.columns = {"law", "trials", "typical_fraction", "good_fraction", "mean_total_alignment_ind"};
	for (int law = 0; law < 2; ++law) {
		std::vector<std::uint8_t> good(a.trials, 0), typical(a.trials, 0);
		std::vector<double> value(a.trials, 0.0);
		const rsm::Seed base = rsm::substream(rsm::Seed{seed, 0}, static_cast<std::uint64_t>(law));
		rsm::parallel_for(a.trials, [&](std::size_t i) {
			const auto s = rsm::substream(base, i);
			const auto d = law == 0 ? rsm::sample_planted(a.n, m, s) : rsm::sample_null(a.n, m, s);
			typical[i] = rsm::is_typical(d.x, static_cast<std::ptrdiff_t>(a.b));
			good[i] = rsm::is_good(d.x, d.y, params);
			if (a.exact)
				value[i] = rsm::total_alignment_ind(d.x, d.y, params);
		});
		double g = 0, ty = 0;
		for (std::size_t i = 0; i < a.trials; ++i) {
			g += good[i];
			ty += typical[i];
		}
		const double trials = static_cast<double>(a.trials);
		const double mean = a.exact ? rsm::pairwise_sum(value) / trials : std::nan("");
		t.rows.push_back({static_cast<double>(law), trials, ty / trials, g / trials, mean});
	}
	nlohmann::json config = {{"alpha", a.alpha}, {"b", a.b}, {"n", a.n}, {"trials", a.trials},
	                         {"seed", seed}, {"law_codes", {{"0", "planted"}, {"1", "null"}}},
	                         {"delta", params.delta}, {"gamma", params.gamma}, {"threshold", params.threshold()}};
	write_text(o.out_path, render_table(t, "alignment-experiment", config, o.format));
	return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Random subsequence model laboratory"};
	app.set_version_flag("--version", std::string(RSM_VERSION));
	app.require_subcommand(1);
	app.fallthrough();

	std::uint64_t seed = 42;
	app.add_option("--seed", seed, "Master seed")->capture_default_str();

	auto* count = app.add_subcommand("count", "Exact and log count of embeddings of y into x");
	std::string xs, ys;
	bool count_bits = false;
	count->add_option("x", xs, "Ambient bit string")->required();
	count->add_option("y", ys, "Candidate subsequence (may be empty)")->required();
	count->add_flag("--bits", count_bits, "Print the log count in bits");

	CurveOptions c1, c2;
	OutputOptions o1, o2, oa;
	auto* fig1 = app.add_subcommand("figure1", "Deletion-channel capacity bounds and simulation");
	auto* g1 = fig1->add_option("--grid", c1.grid, "Comma-separated deletion probabilities");
	fig1->add_option("--n", c1.n, "Ambient length N")->capture_default_str()->check(CLI::PositiveNumber);
	fig1->add_option("--samples", c1.samples, "Samples per grid point")->capture_default_str()->check(CLI::PositiveNumber);
	add_output_options(fig1, o1);

	auto* fig2 = app.add_subcommand("figure2", "Strict-Weak exact solution against the null model");
	auto* g2 = fig2->add_option("--grid", c2.grid, "Comma-separated densities in (0, 1/2]");
	fig2->add_option("--n", c2.n, "Ambient length N")->capture_default_str()->check(CLI::PositiveNumber);
	fig2->add_option("--samples", c2.samples, "Samples per grid point")->capture_default_str()->check(CLI::PositiveNumber);
	add_output_options(fig2, o2);

	auto* ver = app.add_subcommand("verify", "Run the built-in oracle suite");
	std::string level = "fast";
	bool corrupt = false;
	ver->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));
	ver->add_flag("--corrupt-constant", corrupt)->group("");

	auto* align = app.add_subcommand("alignment-experiment", "Good-set frequencies for planted and null pairs");
	AlignmentOptions ao;
	align->add_option("--alpha", ao.alpha, "Density")->capture_default_str();
	align->add_option("--b", ao.b, "Block length")->capture_default_str()->check(CLI::PositiveNumber);
	align->add_option("--n", ao.n, "Ambient length N")->capture_default_str()->check(CLI::PositiveNumber);
	align->add_option("--trials", ao.trials, "Trials per law")->capture_default_str()->check(CLI::PositiveNumber);
	align->add_flag("--exact", ao.exact, "Also report the mean induced total alignment (slow)");
	add_output_options(align, oa);

	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp& e) {
		return app.exit(e);
	} catch (const CLI::CallForAllHelp& e) {
		return app.exit(e);
	} catch (const CLI::CallForVersion& e) {
		return app.exit(e);
	} catch (const CLI::ParseError& e) {
		app.exit(e);
		return kExitUsage;
	}

	try {
		if (*count)
			return cmd_count(xs, ys, count_bits);
		if (*fig1)
			return cmd_figure1(c1, o1, seed, g1->count() > 0);
		if (*fig2)
			return cmd_figure2(c2, o2, seed, g2->count() > 0);
		if (*ver)
			return cmd_verify(level, corrupt, seed);
		if (*align)
			return cmd_alignment(ao, oa, seed);
	} catch (const UsageError& e) {
		std::cerr << "error: " << e.what() << '\n';
		return kExitUsage;
	} catch (const rsm::error& e) {
		std::cerr << "error: " << e.what() << '\n';
		return kExitUsage;
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << '\n';
		return kExitVerifyFailed;
	}
	return kExitUsage;
}
