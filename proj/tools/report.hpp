#pragma once

#include <string>
#include <vector>

namespace pep::cli {

std::string format_number(double v);
/// Shortest round-trip decimal, used in file names.
std::string time_label(double t);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string render() const;
    int column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
void write_atomic(const std::string& path, const std::string& content);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    bool step = false;
};

std::string render_svg(const std::string& title, const std::vector<Series>& series, bool log_x,
                       bool log_y);

}  // namespace pep::cli
