#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Flat-file emission: CSV with shortest round-trip numbers, simple SVG line
// plots. Everything is a pure function of its inputs so repeated runs give
// byte-identical files.

namespace nst::io {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CsvError : std::runtime_error {
    CsvError(const std::string& what, int line_)
        : std::runtime_error(what), line(line_) {}
    int line;
};

// Shortest representation that parses back to the same double.
std::string format_double(double v);

// Fixed significant digits (console output).
std::string format_sig(double v, int digits);

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> comments;  // '#'-prefixed, end of file only
};

void write_csv(const std::string& path, const Csv& csv);
Csv read_csv(const std::string& path);

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

std::string render_svg(const std::vector<Series>& series);

}  // namespace nst::io
