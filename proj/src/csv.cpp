#include "homsim/csv.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "homsim/errors.hpp"

namespace homsim::csv {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& cell, const std::string& path) {
    try {
        std::size_t used = 0;
        const std::string t = trim(cell);
        const double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(path + ": malformed numeric cell '" + cell + "'");
    }
}

}  // namespace

Table read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    Table t;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            t.comments.push_back(line);
            continue;
        }
        const auto cells = split_line(line);
        if (t.header.empty()) {
            t.header = cells;
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_number(c, path));
        if (row.size() != t.header.size())
            throw ConfigError(path + ": row width differs from header");
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty()) throw ConfigError(path + ": no header row found");
    return t;
}

void write_count_record(const focksim::CountRecord& rec, const std::string& path,
                        const std::vector<std::string>& header_lines) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    for (const auto& h : header_lines) out << "# " << h << "\n";
    out << "# seed=" << rec.seed << "\n";
    out << "delay_s,path_um,pulses,singles_i,singles_d1,singles_d2,doubles_d1d2,triples\n";
    out.precision(12);
    for (const auto& r : rec.rows) {
        out << r.delay_s << ',' << r.path_um << ',' << r.pulses << ',' << r.singles_idler << ','
            << r.singles_d1 << ',' << r.singles_d2 << ',' << r.doubles_d1d2 << ',' << r.triples
            << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

focksim::CountRecord read_count_record(const std::string& path) {
    const Table t = read_table(path);
    const std::vector<std::string> expect = {"delay_s",     "path_um",    "pulses",
                                             "singles_i",   "singles_d1", "singles_d2",
                                             "doubles_d1d2", "triples"};
    if (t.header != expect) throw ConfigError(path + ": not a count-record CSV");
    focksim::CountRecord rec;
    for (const auto& c : t.comments) {
        const std::string tag = "# seed=";
        if (c.rfind(tag, 0) == 0) rec.seed = std::stoull(c.substr(tag.size()));
    }
    for (const auto& row : t.rows) {
        focksim::CountRecord::Row r;
        r.delay_s = row[0];
        r.path_um = row[1];
        r.pulses = static_cast<std::uint64_t>(row[2]);
        r.singles_idler = static_cast<std::uint64_t>(row[3]);
        r.singles_d1 = static_cast<std::uint64_t>(row[4]);
        r.singles_d2 = static_cast<std::uint64_t>(row[5]);
        r.doubles_d1d2 = static_cast<std::uint64_t>(row[6]);
        r.triples = static_cast<std::uint64_t>(row[7]);
        rec.rows.push_back(r);
    }
    return rec;
}

Series read_fit_input(const std::string& path, const std::string& column) {
    const Table t = read_table(path);
    Series s;
    if (t.header.size() == 2) {  // bare (position_um, counts)
        for (const auto& row : t.rows) {
            s.position_um.push_back(row[0]);
            s.counts.push_back(row[1]);
        }
        return s;
    }
    const auto pos_it = std::find(t.header.begin(), t.header.end(), "path_um");
    const auto col_it = std::find(t.header.begin(), t.header.end(), column);
    if (pos_it == t.header.end() || col_it == t.header.end())
        throw ConfigError(path + ": expected columns 'path_um' and '" + column +
                          "', or a two-column (position_um, counts) file");
    const std::size_t pi = pos_it - t.header.begin();
    const std::size_t ci = col_it - t.header.begin();
    for (const auto& row : t.rows) {
        s.position_um.push_back(row[pi]);
        s.counts.push_back(row[ci]);
    }
    return s;
}

}  // namespace homsim::csv
