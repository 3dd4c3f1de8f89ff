#include "output.hpp"

#include "vlambda/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace vlambda::cli {

inline constexpr const char* version_string = "0.1.0";

Format parse_format(const std::string& s)
{
    if (s == "json")
        return Format::json;
    if (s == "csv")
        return Format::csv;
    if (s == "text")
        return Format::text;
    throw Error(ErrorCode::invalid_argument, "unknown output format '" + s + "'");
}

std::string format_double(double v)
{
    if (!std::isfinite(v))
        return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string scalar_text(const json& v)
{
    if (v.is_number_float())
        return format_double(v.get<double>());
    if (v.is_string())
        return v.get<std::string>();
    return v.dump();
}

void write_json_value(const json& v, std::ostream& out, int indent, int depth)
{
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    if (v.is_number_float()) {
        out << format_double(v.get<double>());
    } else if (v.is_object()) {
        if (v.empty()) {
            out << "{}";
            return;
        }
        out << "{\n";
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first)
                out << ",\n";
            first = false;
            out << pad << json(it.key()).dump() << ": ";
            write_json_value(it.value(), out, indent, depth + 1);
        }
        out << "\n" << close_pad << "}";
    } else if (v.is_array()) {
        if (v.empty()) {
            out << "[]";
            return;
        }
        out << "[\n";
        bool first = true;
        for (const auto& e : v) {
            if (!first)
                out << ",\n";
            first = false;
            out << pad;
            write_json_value(e, out, indent, depth + 1);
        }
        out << "\n" << close_pad << "]";
    } else {
        out << v.dump();
    }
}

json row_json(const Row& r)
{
    json j = json::object();
    j["inputs"] = r.inputs;
    j["outputs"] = r.outputs;
    j["diagnostics"] = r.diagnostics;
    if (r.error_code)
        j["error"] = json{{"code", *r.error_code}, {"message", r.error_message}};
    return j;
}

json flatten(const Row& r)
{
    json flat = json::object();
    for (const char* section : {"inputs", "outputs", "diagnostics"}) {
        const json& obj = section[0] == 'i' ? r.inputs : section[0] == 'o' ? r.outputs : r.diagnostics;
        for (auto it = obj.begin(); it != obj.end(); ++it)
            flat[std::string(section) + "." + it.key()] = it.value();
    }
    if (r.error_code) {
        flat["error.code"] = *r.error_code;
        flat["error.message"] = r.error_message;
    }
    return flat;
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"')
            q += '"';
        q += c;
    }
    return q + "\"";
}

} // namespace

void write_report(const Report& report, Format format, std::ostream& out)
{
    switch (format) {
    case Format::json: {
        json doc = json::object();
        json meta = json::object();
        meta["version"] = version_string;
        meta["config"] = report.config;
        if (!report.summary.is_null())
            meta["summary"] = report.summary;
        doc["meta"] = meta;
        json rows = json::array();
        for (const auto& r : report.rows)
            rows.push_back(row_json(r));
        doc["rows"] = rows;
        write_json_value(doc, out, 2, 0);
        out << "\n";
        break;
    }
    case Format::csv: {
        std::vector<json> flat;
        std::vector<std::string> columns;
        for (const auto& r : report.rows) {
            flat.push_back(flatten(r));
            for (auto it = flat.back().begin(); it != flat.back().end(); ++it) {
                if (std::find(columns.begin(), columns.end(), it.key()) == columns.end())
                    columns.push_back(it.key());
            }
        }
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << (i ? "," : "") << csv_escape(columns[i]);
        out << "\n";
        for (const auto& f : flat) {
            for (std::size_t i = 0; i < columns.size(); ++i) {
                if (i)
                    out << ",";
                if (f.contains(columns[i]))
                    out << csv_escape(scalar_text(f[columns[i]]));
            }
            out << "\n";
        }
        break;
    }
    case Format::text: {
        std::size_t index = 0;
        for (const auto& r : report.rows) {
            out << "[" << index++ << "]";
            for (auto it = r.inputs.begin(); it != r.inputs.end(); ++it)
                out << " " << it.key() << "=" << scalar_text(it.value());
            out << "\n";
            for (auto it = r.outputs.begin(); it != r.outputs.end(); ++it)
                out << "    " << it.key() << " = " << scalar_text(it.value()) << "\n";
            for (auto it = r.diagnostics.begin(); it != r.diagnostics.end(); ++it)
                out << "    (" << it.key() << ") " << scalar_text(it.value()) << "\n";
            if (r.error_code)
                out << "    error: " << *r.error_code << ": " << r.error_message << "\n";
        }
        if (!report.summary.is_null()) {
            out << "summary:";
            for (auto it = report.summary.begin(); it != report.summary.end(); ++it)
                out << " " << it.key() << "=" << scalar_text(it.value());
            out << "\n";
        }
        break;
    }
    }
}

} // namespace vlambda::cli
