#pragma once

#include <string>
#include <vector>

namespace qaction {

/// Column-oriented result container shared by the CLI subcommands. All cell
/// values are preformatted strings (reals at 17 significant digits) so CSV
/// and JSON output are deterministic byte-for-byte; timings live outside the
/// hashed region.
struct Report {
  std::string schema = "qaction-csv-v1";
  std::string command;
  std::vector<std::string> meta;     // sorted config echo and notes
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  double elapsed_seconds = 0;        // excluded from the deterministic body

  bool operator==(const Report& other) const {
    return schema == other.schema && command == other.command &&
           meta == other.meta && columns == other.columns && rows == other.rows;
  }
};

std::string fmt17(double v);

/// Deterministic CSV body: schema/meta comments, header row, data rows.
std::string to_csv(const Report& r);

/// CSV body plus a trailing timing comment (non-deterministic tail).
std::string to_csv_with_timing(const Report& r);

std::string to_json_text(const Report& r);
Report report_from_json_text(const std::string& text);

/// Fixed-width human-readable table.
std::string to_table_text(const Report& r);

std::string render(const Report& r, const std::string& format);

}  // namespace qaction
