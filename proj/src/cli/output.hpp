#pragma once

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vlambda::cli {

using json = nlohmann::ordered_json;

enum class Format { json, csv, text };

Format parse_format(const std::string& s);

struct Row {
    json inputs = json::object();
    json outputs = json::object();
    json diagnostics = json::object();
    std::optional<std::string> error_code;
    std::string error_message;
};

struct Report {
    json config = json::object();
    json summary; // null unless set
    std::vector<Row> rows;
};

/// Doubles with 17 significant digits; NaN and infinities as null.
std::string format_double(double v);

void write_report(const Report& report, Format format, std::ostream& out);

} // namespace vlambda::cli
