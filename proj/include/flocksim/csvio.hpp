#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "flocksim/dynamics.hpp"
#include "flocksim/ratefit.hpp"

namespace flocksim {

const char* tool_version();
std::uint64_t fnv1a(const std::string& text);
std::string format_double(double v);  // shortest round-trip form

struct CsvTable {
    std::map<std::string, std::string> meta;  // parsed "# key: value" comment lines
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column_index(const std::string& name) const;  // -1 if missing

    /// (t, y) pairs from two columns; rows with NaN in either are skipped.
    Series series(const std::string& t_column, const std::string& y_column) const;
};

/// Every output file starts with "# tool: ...", "# manifest: <hash>", "# seed: ...".
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows,
               const std::map<std::string, std::string>& meta);

CsvTable read_csv(const std::string& path);

void write_frames_csv(const std::string& path, const std::vector<TrajectoryRecord>& records,
                      const std::map<std::string, std::string>& meta);

void write_final_state_csv(const std::string& path, const Ensemble& e,
                           const std::map<std::string, std::string>& meta);

}  // namespace flocksim
