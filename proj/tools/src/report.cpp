#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gptwb/errors.hpp"

namespace gptwb::cli {

using json = nlohmann::ordered_json;

Format parse_format(const std::string& name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  if (name == "text") return Format::Text;
  throw InvalidArgument("unknown format '" + name + "'");
}

namespace {

std::string fmt_g12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void flatten(const json& v, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) flatten(x, prefix.empty() ? k : prefix + "." + k, out);
  } else if (v.is_array() && !v.empty() && (v.front().is_array() || v.front().is_object())) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out.emplace_back(prefix, scalar_text(v));
  }
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string render_rows(const json& rows, Format format) {
  std::vector<std::string> columns;
  for (const auto& [k, v] : rows.front().items()) columns.push_back(k);
  std::ostringstream out;
  const char* sep = format == Format::Csv ? "," : "\t";
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? sep : "") << columns[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      auto cell = row.contains(columns[c]) ? scalar_text(row[columns[c]]) : std::string();
      out << (c ? sep : "") << (format == Format::Csv ? csv_cell(cell) : cell);
    }
    out << '\n';
  }
  return out.str();
}

// Rounds floats to 12 significant digits so round-off does not leak into reports.
void tidy(json& v) {
  if (v.is_number_float()) {
    const double x = v.get<double>();
    v = std::abs(x) < 1e-12 ? 0.0 : std::stod(fmt_g12(x));
  } else if (v.is_structured()) {
    for (auto& x : v) tidy(x);
  }
}

}  // namespace

std::string render(const json& raw, Format format) {
  json report = raw;
  tidy(report);
  if (format == Format::Json) return report.dump(2) + "\n";
  if (report.contains("rows") && report["rows"].is_array() && !report["rows"].empty())
    return render_rows(report["rows"], format);
  std::vector<std::pair<std::string, std::string>> kv;
  flatten(report, "", kv);
  std::ostringstream out;
  for (const auto& [k, v] : kv) {
    if (format == Format::Csv)
      out << csv_cell(k) << ',' << csv_cell(v) << '\n';
    else
      out << k << ": " << v << '\n';
  }
  return out.str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write '" + path + "'");
  f << text;
}

}  // namespace gptwb::cli
