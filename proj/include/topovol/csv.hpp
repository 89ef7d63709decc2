#ifndef TOPOVOL_CSV_HPP
#define TOPOVOL_CSV_HPP

#include "topovol/series.hpp"

#include <string>
#include <vector>

namespace topovol {

// Shortest round-trippable decimal representation (%.17g), used by every
// emitted table so outputs are byte-stable and re-ingestable.
std::string format_double(double v);

// Splits one CSV record; handles double-quoted fields with embedded commas.
std::vector<std::string> split_csv_line(const std::string& line);

// Two-column table "date,<name>" with ISO dates, LF endings.
void write_series_csv(const std::string& path, const ReturnSeries& s,
                      const std::string& value_column);

// Reads a two-column date,value table written by write_series_csv.
ReturnSeries read_series_csv(const std::string& path);

// Generic table: header row + stringified cells, LF endings.
void write_table_csv(const std::string& path,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace topovol

#endif
