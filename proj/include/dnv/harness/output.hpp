#pragma once

#include "dnv/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace dnv::harness {

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline std::string format_int(std::int64_t x) { return std::to_string(x); }

inline std::string format_bool(bool b) { return b ? "1" : "0"; }

/// Quotes a CSV field when it contains a separator, quote or newline.
inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> row) {
        if (row.size() != header_.size()) throw IoError("csv: row width does not match header");
        rows_.push_back(std::move(row));
    }
    std::size_t size() const { return rows_.size(); }
    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

    std::string str() const {
        std::string out;
        append_line(out, header_);
        for (const auto& r : rows_) append_line(out, r);
        return out;
    }

private:
    static void append_line(std::string& out, const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(cells[i]);
        }
        out += '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + path.string());
    f << text;
    f.flush();
    if (!f) throw IoError("write failed: " + path.string());
}

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    double floor = 1e-12;  ///< values below are drawn at this level
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string fixed(double x, int prec = 2) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(prec);
    os << x;
    return os.str();
}

}  // namespace detail

/// Line chart with a log10 vertical axis.
inline std::string render_svg(const ChartSpec& spec, const std::vector<Series>& series) {
    constexpr double W = 720, Hh = 460, L = 80, R = 170, T = 40, B = 60;
    const double pw = W - L - R;
    const double ph = Hh - T - B;
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    const auto tx = [&](double x) { return spec.log_x ? std::log10(std::max(x, spec.floor)) : x; };
    const auto ty = [&](double y) {
        return std::log10(std::isfinite(y) ? std::max(y, spec.floor) : spec.floor);
    };
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x)) continue;
            xmin = std::min(xmin, tx(x));
            xmax = std::max(xmax, tx(x));
            ymin = std::min(ymin, ty(y));
            ymax = std::max(ymax, ty(y));
        }
    }
    if (!(xmin < xmax)) {
        xmin = std::isfinite(xmin) ? xmin - 1 : 0;
        xmax = xmin + 2;
    }
    ymin = std::floor(std::isfinite(ymin) ? ymin : -1);
    ymax = std::ceil(std::isfinite(ymax) ? ymax : 0);
    if (ymin == ymax) ymax = ymin + 1;
    const auto px = [&](double x) { return L + (tx(x) - xmin) / (xmax - xmin) * pw; };
    const auto py = [&](double y) { return T + ph - (ty(y) - ymin) / (ymax - ymin) * ph; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << Hh
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << detail::xml_escape(spec.title) << "</text>\n";
    os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double e = ymin; e <= ymax + 1e-9; e += 1.0) {
        const double y = T + ph - (e - ymin) / (ymax - ymin) * ph;
        os << "<line x1=\"" << L << "\" x2=\"" << L + pw << "\" y1=\"" << y << "\" y2=\"" << y
           << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << L - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e"
           << static_cast<int>(e) << "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        const double v = xmin + (xmax - xmin) * i / 5.0;
        const double x = L + pw * i / 5.0;
        const double shown = spec.log_x ? std::pow(10.0, v) : v;
        os << "<text x=\"" << x << "\" y=\"" << T + ph + 18 << "\" text-anchor=\"middle\">"
           << (std::fabs(shown) >= 1000 || (shown != 0 && std::fabs(shown) < 0.01)
                   ? format_double(shown)
                   : detail::fixed(shown))
           << "</text>\n";
    }
    os << "<text x=\"" << L + pw / 2 << "\" y=\"" << Hh - 18 << "\" text-anchor=\"middle\">"
       << detail::xml_escape(spec.x_label) << "</text>\n";
    os << "<text transform=\"translate(18," << T + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
       << detail::xml_escape(spec.y_label) << " (log scale)</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = palette[s % 10];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : series[s].points) {
            if (!std::isfinite(x)) continue;
            os << detail::fixed(px(x)) << ',' << detail::fixed(py(y)) << ' ';
        }
        os << "\"/>\n";
        const double ly = T + 16 + 18.0 * static_cast<double>(s);
        os << "<line x1=\"" << L + pw + 12 << "\" x2=\"" << L + pw + 32 << "\" y1=\"" << ly
           << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << L + pw + 38 << "\" y=\"" << ly + 4 << "\">"
           << detail::xml_escape(series[s].name) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace dnv::harness
