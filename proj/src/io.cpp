#include "nst/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace nst::io {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_sig(double v, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

void write_csv(const std::string& path, const Csv& csv) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    for (size_t i = 0; i < csv.header.size(); ++i) {
        if (i) out << ',';
        out << csv.header[i];
    }
    out << '\n';
    for (const auto& row : csv.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_double(row[i]);
        }
        out << '\n';
    }
    for (const auto& c : csv.comments) out << "# " << c << '\n';
    if (!out) throw IoError("write failed: " + path);
}

Csv read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    Csv csv;
    std::string line;
    int lineno = 0;
    bool in_comments = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            in_comments = true;
            std::string c = line.substr(1);
            if (!c.empty() && c[0] == ' ') c.erase(0, 1);
            csv.comments.push_back(c);
            continue;
        }
        if (in_comments)
            throw CsvError("data after comment block", lineno);
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (lineno == 1) {
            csv.header = cells;
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            double v;
            const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
            if (res.ec != std::errc{} || res.ptr != c.data() + c.size())
                throw CsvError("malformed number '" + c + "'", lineno);
            row.push_back(v);
        }
        if (row.size() != csv.header.size())
            throw CsvError("column count mismatch", lineno);
        csv.rows.push_back(std::move(row));
    }
    if (csv.header.empty()) throw CsvError("missing header", 1);
    return csv;
}

namespace {

const char* kPalette[10] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                            "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                            "#bcbd22", "#17becf"};

std::string fmt_px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace

std::string render_svg(const std::vector<Series>& series) {
    constexpr double W = 900, H = 600;
    constexpr double ml = 70, mr = 160, mt = 30, mb = 50;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool any = false;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (!any) {
                xmin = xmax = x;
                ymin = ymax = y;
                any = true;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    const double pw = W - ml - mr, ph = H - mt - mb;
    const auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    const auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
        << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H
        << "\">\n";
    svg << "<rect width=\"" << W << "\" height=\"" << H
        << "\" fill=\"white\"/>\n";
    // axes
    svg << "<line x1=\"" << fmt_px(ml) << "\" y1=\"" << fmt_px(mt + ph)
        << "\" x2=\"" << fmt_px(ml + pw) << "\" y2=\"" << fmt_px(mt + ph)
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << fmt_px(ml) << "\" y1=\"" << fmt_px(mt) << "\" x2=\""
        << fmt_px(ml) << "\" y2=\"" << fmt_px(mt + ph)
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        svg << "<text x=\"" << fmt_px(px(xv)) << "\" y=\"" << fmt_px(mt + ph + 20)
            << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt_tick(xv)
            << "</text>\n";
        svg << "<text x=\"" << fmt_px(ml - 8) << "\" y=\"" << fmt_px(py(yv) + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">" << fmt_tick(yv)
            << "</text>\n";
    }
    for (size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % 10];
        if (!series[s].points.empty()) {
            svg << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& [x, y] : series[s].points)
                svg << fmt_px(px(x)) << ',' << fmt_px(py(y)) << ' ';
            svg << "\"/>\n";
        }
        const double ly = mt + 16 + 18 * s;
        svg << "<line x1=\"" << fmt_px(W - mr + 10) << "\" y1=\"" << fmt_px(ly - 4)
            << "\" x2=\"" << fmt_px(W - mr + 34) << "\" y2=\"" << fmt_px(ly - 4)
            << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
        svg << "<text x=\"" << fmt_px(W - mr + 40) << "\" y=\"" << fmt_px(ly)
            << "\" font-size=\"12\">" << series[s].label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace nst::io
