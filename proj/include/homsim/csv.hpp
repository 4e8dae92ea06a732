#pragma once

#include <string>
#include <vector>

#include "homsim/focksim.hpp"

namespace homsim::csv {

// Splits one CSV line; no quoting support (none of our formats need it).
std::vector<std::string> split_line(const std::string& line);

struct Table {
    std::vector<std::string> comments;  // '#' lines, in order
    std::vector<std::string> header;    // first non-comment row
    std::vector<std::vector<double>> rows;
};

// Reads a numeric CSV with '#' comments and one header row.
Table read_table(const std::string& path);

void write_count_record(const focksim::CountRecord& rec, const std::string& path,
                        const std::vector<std::string>& header_lines = {});

focksim::CountRecord read_count_record(const std::string& path);

// Two-column (position_um, counts) series for fitting; also accepts a
// count-record CSV, picking `column` (e.g. "triples", "doubles_d1d2").
struct Series {
    std::vector<double> position_um;
    std::vector<double> counts;
};
Series read_fit_input(const std::string& path, const std::string& column = "triples");

}  // namespace homsim::csv
