#include "qaction/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "qaction/errors.hpp"

namespace qaction {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const Report& r) {
  std::ostringstream out;
  out << "# " << r.schema << " " << r.command << "\n";
  for (const auto& m : r.meta) out << "# " << m << "\n";
  for (std::size_t i = 0; i < r.columns.size(); ++i)
    out << (i ? "," : "") << r.columns[i];
  out << "\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << row[i];
    out << "\n";
  }
  return out.str();
}

std::string to_csv_with_timing(const Report& r) {
  return to_csv(r) + "# timing: " + fmt17(r.elapsed_seconds) + " s\n";
}

std::string to_json_text(const Report& r) {
  nlohmann::json j;
  j["schema"] = r.schema;
  j["command"] = r.command;
  j["meta"] = r.meta;
  j["columns"] = r.columns;
  j["rows"] = r.rows;
  return j.dump(2) + "\n";
}

Report report_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Report r;
  r.schema = j.at("schema").get<std::string>();
  r.command = j.at("command").get<std::string>();
  r.meta = j.at("meta").get<std::vector<std::string>>();
  r.columns = j.at("columns").get<std::vector<std::string>>();
  r.rows = j.at("rows").get<std::vector<std::vector<std::string>>>();
  return r;
}

std::string to_table_text(const Report& r) {
  std::vector<std::size_t> widths(r.columns.size());
  for (std::size_t i = 0; i < r.columns.size(); ++i)
    widths[i] = r.columns[i].size();
  for (const auto& row : r.rows)
    for (std::size_t i = 0; i < row.size() && i < widths.size(); ++i)
      widths[i] = std::max(widths[i], row[i].size());

  std::ostringstream out;
  out << "== " << r.command << " ==\n";
  for (const auto& m : r.meta) out << "   " << m << "\n";
  auto emit_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "  " : "");
      out << row[i];
      for (std::size_t k = row[i].size(); k < widths[i]; ++k) out << ' ';
    }
    out << "\n";
  };
  emit_row(r.columns);
  for (const auto& row : r.rows) emit_row(row);
  return out.str();
}

std::string render(const Report& r, const std::string& format) {
  if (format == "csv") return to_csv_with_timing(r);
  if (format == "json") return to_json_text(r);
  if (format == "table") return to_table_text(r);
  throw ConfigError("unknown format '" + format + "'");
}

}  // namespace qaction
