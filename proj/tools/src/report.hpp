#pragma once

#include <string>

#include "json.hpp"

namespace gptwb::cli {

enum class Format { Json, Csv, Text };

Format parse_format(const std::string& name);

/// Renders a report. Tables ({"rows": [...]}) become one CSV/text line per row;
/// other reports are flattened to key/value lines.
std::string render(const nlohmann::ordered_json& report, Format format);

/// Writes to `path`, or stdout when it is empty.
void emit(const std::string& text, const std::string& path);

}  // namespace gptwb::cli
