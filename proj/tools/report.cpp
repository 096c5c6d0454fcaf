#include "report.hpp"
#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace pep::cli {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string time_label(double t) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, t);
    return std::string(buf, res.ptr);
}

std::string CsvTable::render() const {
    std::string out;
    const auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("missing input file " + path);
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first) {
            t.header = cells;
            first = false;
        } else {
            t.rows.push_back(cells);
        }
    }
    if (first) throw ConfigError("empty input file " + path);
    return t;
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

namespace {

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

}  // namespace

std::string render_svg(const std::string& title, const std::vector<Series>& series, bool log_x,
                       bool log_y) {
    const double W = 640, H = 400, L = 60, R = 20, T = 40, Bm = 40;
    const auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
    const auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const Series& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if ((log_x && !(s.x[i] > 0)) || (log_y && !(s.y[i] > 0))) continue;
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, tx(s.x[i]));
            x1 = std::max(x1, tx(s.x[i]));
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    const auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - R); };
    const auto py = [&](double v) { return H - Bm - (ty(v) - y0) / (y1 - y0) * (H - T - Bm); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
    os << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    os << "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
       << title << "</text>\n";
    os << "<rect x=\"" << fixed(L) << "\" y=\"" << fixed(T) << "\" width=\"" << fixed(W - L - R)
       << "\" height=\"" << fixed(H - T - Bm) << "\" fill=\"none\" stroke=\"black\"/>\n";
    const auto label = [&](double v, bool log) { return format_number(log ? std::pow(10.0, v) : v); };
    os << "<text x=\"" << fixed(L) << "\" y=\"" << fixed(H - 20) << "\" font-family=\"sans-serif\" font-size=\"10\">"
       << label(x0, log_x) << "</text>\n";
    os << "<text x=\"" << fixed(W - R) << "\" y=\"" << fixed(H - 20)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << label(x1, log_x) << "</text>\n";
    os << "<text x=\"" << fixed(L - 4) << "\" y=\"" << fixed(H - Bm)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << label(y0, log_y) << "</text>\n";
    os << "<text x=\"" << fixed(L - 4) << "\" y=\"" << fixed(T + 10)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << label(y1, log_y) << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const Series& s = series[k];
        const char* color = kColors[k % (sizeof kColors / sizeof kColors[0])];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool have_prev = false;
        double prev_y = 0;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if ((log_x && !(s.x[i] > 0)) || (log_y && !(s.y[i] > 0))) continue;
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (s.step && have_prev) os << fixed(px(s.x[i])) << ',' << fixed(py(prev_y)) << ' ';
            os << fixed(px(s.x[i])) << ',' << fixed(py(s.y[i])) << ' ';
            prev_y = s.y[i];
            have_prev = true;
        }
        os << "\"/>\n";
        os << "<text x=\"" << fixed(W - R - 4) << "\" y=\"" << fixed(T + 14 + 14 * k)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">"
           << s.name << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace pep::cli
