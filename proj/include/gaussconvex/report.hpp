#pragma once

// CSV rows with RFC 4180 quoting, and small self-contained SVG line charts.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace gaussconvex::report {

// quote a field when it holds a comma, quote, or line break; quotes are doubled
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os), width_(header.size()) {
        row(header);
    }
    void row(const std::vector<std::string>& fields) {
        require_param(fields.size() == width_, "csv: row width does not match the header");
        for (std::size_t i = 0; i < fields.size(); ++i) os_ << (i ? "," : "") << csv_field(fields[i]);
        os_ << "\r\n";
    }

private:
    std::ostream& os_;
    std::size_t width_;
};

// reads back what CsvWriter emits
inline std::vector<std::vector<std::string>> csv_parse(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        any = true;
        if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            row.push_back(field);
            field.clear();
        } else if (ch == '\n' || ch == '\r') {
            if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            row.push_back(field);
            field.clear();
            rows.push_back(row);
            row.clear();
            any = false;
        } else {
            field += ch;
        }
    }
    require_param(!quoted, "csv: unterminated quoted field");
    if (any) {
        row.push_back(field);
        rows.push_back(row);
    }
    return rows;
}

struct Series {
    std::string label;
    std::vector<double> x, y;
    std::string color;
};

struct Chart {
    std::string title, x_label, y_label;
    std::vector<Series> series;
    double width = 640, height = 420;
    bool zero_line = false;
};

namespace detail {

inline std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

// about five round tick values covering [lo, hi]
inline std::vector<double> ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    std::vector<double> t;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return t;
}

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

} // namespace detail

inline std::string svg(const Chart& c) {
    require_param(!c.series.empty(), "svg: no series");
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
    for (const auto& s : c.series) {
        require_param(s.x.size() == s.y.size() && s.x.size() >= 2, "svg: series needs matching x and y");
        for (double v : s.x) xlo = std::min(xlo, v), xhi = std::max(xhi, v);
        for (double v : s.y) ylo = std::min(ylo, v), yhi = std::max(yhi, v);
    }
    if (c.zero_line) ylo = std::min(ylo, 0.0), yhi = std::max(yhi, 0.0);
    if (yhi == ylo) yhi = ylo + 1.0;
    const double pad = 0.04 * (yhi - ylo);
    ylo -= pad;
    yhi += pad;
    const double L = 70, R = 20, T = 40, B = 50;
    const double pw = c.width - L - R, ph = c.height - T - B;
    auto X = [&](double v) { return L + (v - xlo) / (xhi - xlo) * pw; };
    auto Y = [&](double v) { return T + (yhi - v) / (yhi - ylo) * ph; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << c.width << "\" height=\""
       << c.height << "\" viewBox=\"0 0 " << c.width << " " << c.height << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << c.width << "\" height=\"" << c.height << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << c.width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
       << detail::escape(c.title) << "</text>\n";
    os << "<g stroke=\"#ddd\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (double t : detail::ticks(xlo, xhi))
        os << "<line x1=\"" << X(t) << "\" y1=\"" << T << "\" x2=\"" << X(t) << "\" y2=\"" << T + ph << "\"/>"
           << "<text stroke=\"none\" x=\"" << X(t) << "\" y=\"" << T + ph + 16 << "\" text-anchor=\"middle\">"
           << detail::fmt(t) << "</text>\n";
    for (double t : detail::ticks(ylo, yhi))
        os << "<line x1=\"" << L << "\" y1=\"" << Y(t) << "\" x2=\"" << L + pw << "\" y2=\"" << Y(t) << "\"/>"
           << "<text stroke=\"none\" x=\"" << L - 6 << "\" y=\"" << Y(t) + 4 << "\" text-anchor=\"end\">"
           << detail::fmt(t) << "</text>\n";
    os << "</g>\n";
    os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"#333\"/>\n";
    if (c.zero_line && ylo < 0.0 && yhi > 0.0)
        os << "<line x1=\"" << L << "\" y1=\"" << Y(0) << "\" x2=\"" << L + pw << "\" y2=\"" << Y(0)
           << "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
    os << "<text x=\"" << L + pw / 2 << "\" y=\"" << c.height - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << detail::escape(c.x_label)
       << "</text>\n";
    os << "<text x=\"16\" y=\"" << T + ph / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\""
       << " transform=\"rotate(-90 16 " << T + ph / 2 << ")\">" << detail::escape(c.y_label) << "</text>\n";
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    for (std::size_t k = 0; k < c.series.size(); ++k) {
        const auto& s = c.series[k];
        const std::string col = s.color.empty() ? palette[k % 5] : s.color;
        os << "<polyline class=\"series\" data-label=\"" << detail::escape(s.label) << "\" fill=\"none\" stroke=\""
           << col << "\" stroke-width=\"1.6\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", X(s.x[i]), Y(s.y[i]));
            os << buf;
        }
        os << "\"/>\n";
        os << "<line x1=\"" << L + 12 << "\" y1=\"" << T + 14 + 16 * k << "\" x2=\"" << L + 36 << "\" y2=\""
           << T + 14 + 16 * k << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>";
        os << "<text x=\"" << L + 42 << "\" y=\"" << T + 18 + 16 * k
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << detail::escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace gaussconvex::report
