#ifndef RSM_REPORT_HPP
#define RSM_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace rsm::report {

// Twelve significant digits, locale independent.
inline std::string format_number(double v)
{
	if (std::isnan(v))
		return "nan";
	if (std::isinf(v))
		return v > 0 ? "inf" : "-inf";
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.12g", v);
	return buf;
}

struct Table {
	std::vector<std::string> columns;
	std::vector<std::vector<double>> rows;

	void scale_columns(const std::vector<std::string>& names, double factor)
	{
		for (const auto& name : names) {
			auto it = std::find(columns.begin(), columns.end(), name);
			if (it == columns.end())
				continue;
			const auto c = static_cast<std::size_t>(it - columns.begin());
			for (auto& r : rows)
				r[c] *= factor;
		}
	}
};

// Header row plus one line per row, comma separated, '\n' terminated.
inline void write_csv(std::ostream& os, const Table& t)
{
	for (std::size_t c = 0; c < t.columns.size(); ++c)
		os << (c ? "," : "") << t.columns[c];
	os << '\n';
	for (const auto& row : t.rows) {
		for (std::size_t c = 0; c < row.size(); ++c)
			os << (c ? "," : "") << format_number(row[c]);
		os << '\n';
	}
}

struct Series {
	std::string label;
	std::string color;
	std::vector<double> x;
	std::vector<double> y;
};

struct PlotSpec {
	std::string title;
	std::string x_label;
	std::string y_label;
	int width = 640;
	int height = 420;
};

inline std::string escape_xml(const std::string& s)
{
	std::string out;
	for (char c : s) {
		switch (c) {
		case '&': out += "&amp;"; break;
		case '<': out += "&lt;"; break;
		case '>': out += "&gt;"; break;
		case '"': out += "&quot;"; break;
		default: out += c;
		}
	}
	return out;
}

// Line chart with axes, five ticks per axis and a legend. Non-finite points
// are skipped.
inline std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series)
{
	double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
	double ymin = xmin, ymax = -xmin;
	for (const auto& s : series)
		for (std::size_t i = 0; i < s.x.size(); ++i) {
			if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
				continue;
			xmin = std::min(xmin, s.x[i]);
			xmax = std::max(xmax, s.x[i]);
			ymin = std::min(ymin, s.y[i]);
			ymax = std::max(ymax, s.y[i]);
		}
	if (!std::isfinite(xmin)) {
		xmin = 0;
		xmax = 1;
		ymin = 0;
		ymax = 1;
	}
	ymin = std::min(ymin, 0.0);
	if (xmax == xmin)
		xmax = xmin + 1;
	if (ymax == ymin)
		ymax = ymin + 1;

	const double left = 70, right = 20, top = 40, bottom = 55;
	const double pw = spec.width - left - right;
	const double ph = spec.height - top - bottom;
	auto sx = [&](double v) { return left + (v - xmin) / (xmax - xmin) * pw; };
	auto sy = [&](double v) { return top + ph - (v - ymin) / (ymax - ymin) * ph; };

	std::ostringstream o;
	o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
	  << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
	o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
	o << "<text x=\"" << spec.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
	  << escape_xml(spec.title) << "</text>\n";
	o << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
	  << "\" stroke=\"black\"/>\n";
	o << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
	  << "\" stroke=\"black\"/>\n";
	for (int k = 0; k <= 5; ++k) {
		const double xv = xmin + (xmax - xmin) * k / 5.0;
		const double yv = ymin + (ymax - ymin) * k / 5.0;
		o << "<text x=\"" << sx(xv) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
		  << format_number(std::round(xv * 1e4) / 1e4) << "</text>\n";
		o << "<text x=\"" << left - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">"
		  << format_number(std::round(yv * 1e4) / 1e4) << "</text>\n";
	}
	o << "<text x=\"" << left + pw / 2 << "\" y=\"" << spec.height - 12 << "\" text-anchor=\"middle\">"
	  << escape_xml(spec.x_label) << "</text>\n";
	o << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
	  << top + ph / 2 << ")\">" << escape_xml(spec.y_label) << "</text>\n";

	for (std::size_t si = 0; si < series.size(); ++si) {
		const auto& s = series[si];
		o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
		for (std::size_t i = 0; i < s.x.size(); ++i)
			if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
				o << sx(s.x[i]) << ',' << sy(s.y[i]) << ' ';
		o << "\"/>\n";
		const double ly = top + 14 + 16.0 * static_cast<double>(si);
		o << "<line x1=\"" << left + pw - 150 << "\" y1=\"" << ly << "\" x2=\"" << left + pw - 130 << "\" y2=\""
		  << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
		o << "<text x=\"" << left + pw - 124 << "\" y=\"" << ly + 4 << "\">" << escape_xml(s.label)
		  << "</text>\n";
	}
	o << "</svg>\n";
	return o.str();
}

} // namespace rsm::report

#endif
