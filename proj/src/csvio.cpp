#include "flocksim/csvio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace flocksim {

const char* tool_version() { return "flocksim 0.1.0"; }

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double back = std::strtod(buf, nullptr);
    if (back == v) {
        // prefer the shortest representation that still round-trips
        for (int prec = 1; prec < 17; ++prec) {
            char probe[64];
            std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
            if (std::strtod(probe, nullptr) == v) return probe;
        }
    }
    return buf;
}

int CsvTable::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return int(i);
    return -1;
}

Series CsvTable::series(const std::string& t_column, const std::string& y_column) const {
    const int ti = column_index(t_column);
    const int yi = column_index(y_column);
    if (ti < 0) raise(Errc::column_missing, "no column named '" + t_column + "'");
    if (yi < 0) raise(Errc::column_missing, "no column named '" + y_column + "'");
    Series s;
    for (const auto& row : rows) {
        const double t = row[ti];
        const double y = row[yi];
        if (std::isnan(t) || std::isnan(y)) continue;
        s.push_back({t, y});
    }
    return s;
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows,
               const std::map<std::string, std::string>& meta) {
    std::ofstream out(path);
    if (!out) raise(Errc::bad_argument, "cannot open output file: " + path);
    out << "# tool: " << tool_version() << "\n";
    for (const auto& [k, v] : meta)
        if (k != "tool") out << "# " << k << ": " << v << "\n";
    for (size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << "\n";
    }
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::config_parse, "cannot open csv file: " + path);
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(':');
            if (colon != std::string::npos) {
                std::string key = line.substr(1, colon - 1);
                std::string val = line.substr(colon + 1);
                auto trim = [](std::string& s) {
                    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
                    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
                };
                trim(key);
                trim(val);
                table.meta[key] = val;
            }
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        if (!have_header) {
            while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
            have_header = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            if (cell == "nan" || cell.empty())
                row.push_back(std::numeric_limits<double>::quiet_NaN());
            else
                row.push_back(std::strtod(cell.c_str(), nullptr));
        }
        if (row.size() != table.columns.size())
            raise(Errc::config_parse, "csv row arity mismatch in " + path);
        table.rows.push_back(std::move(row));
    }
    if (!have_header) raise(Errc::config_parse, "csv file has no header row: " + path);
    return table;
}

void write_frames_csv(const std::string& path, const std::vector<TrajectoryRecord>& records,
                      const std::map<std::string, std::string>& meta) {
    std::vector<std::vector<double>> rows;
    rows.reserve(records.size());
    for (const auto& rec : records) rows.push_back(rec.frame.row());
    write_csv(path, DiagnosticsFrame::columns(), rows, meta);
}

void write_final_state_csv(const std::string& path, const Ensemble& e,
                           const std::map<std::string, std::string>& meta) {
    std::vector<std::string> columns;
    for (int k = 0; k < e.dim; ++k) columns.push_back("x" + std::to_string(k + 1));
    for (int k = 0; k < e.dim; ++k) columns.push_back("v" + std::to_string(k + 1));
    columns.push_back("m");
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < e.size(); ++i) {
        std::vector<double> row;
        for (int k = 0; k < e.dim; ++k) row.push_back(e.positions[size_t(i) * e.dim + k]);
        for (int k = 0; k < e.dim; ++k) row.push_back(e.velocities[size_t(i) * e.dim + k]);
        row.push_back(e.weights[i]);
        rows.push_back(std::move(row));
    }
    write_csv(path, columns, rows, meta);
}

}  // namespace flocksim
