#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_set>
#include <vector>

#include "dataset.hpp"
#include "error.hpp"

namespace sdmcts {

namespace csv {

/// Splits RFC-4180 records. Quoted fields may contain commas, doubled quotes
/// and line breaks.
inline std::vector<std::vector<std::string>> parse(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, field_started = false, any = false;
    char ch;
    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
        row.clear();
    };
    while (in.get(ch)) {
        any = true;
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get(ch);
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                if (!field_started && field.empty()) quoted = true;
                else field.push_back(ch);
                field_started = true;
                break;
            case ',': end_field(); break;
            case '\r':
                if (in.peek() == '\n') in.get(ch);
                end_row();
                break;
            case '\n': end_row(); break;
            default:
                field.push_back(ch);
                field_started = true;
        }
    }
    if (quoted) throw LoadError(LoadErrorKind::malformed_row, "unterminated quoted field");
    if (any && (field_started || !field.empty() || !row.empty())) end_row();
    return rows;
}

inline std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << quote(fields[i]);
    }
    out << '\n';
}

}  // namespace csv

enum class ColumnRole { nominal, numerical, label };

struct SchemaEntry {
    std::string column;
    ColumnRole role;
};

/// Column kinds plus the label column. Columns absent from the schema are ignored.
struct Schema {
    std::vector<SchemaEntry> entries;

    std::string label_column() const {
        for (const auto& e : entries)
            if (e.role == ColumnRole::label) return e.column;
        return {};
    }

    /// Parses `column=nominal|numerical|label` lines; blank lines and `#` comments are skipped.
    static Schema parse(std::istream& in) {
        Schema s;
        std::string line;
        std::unordered_set<std::string> seen;
        int labels = 0;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos || line[first] == '#') continue;
            auto eq = line.rfind('=');
            if (eq == std::string::npos) throw LoadError(LoadErrorKind::bad_schema, "expected column=kind: " + line);
            auto trim = [](std::string v) {
                auto b = v.find_first_not_of(" \t");
                auto e = v.find_last_not_of(" \t");
                return b == std::string::npos ? std::string{} : v.substr(b, e - b + 1);
            };
            std::string col = trim(line.substr(0, eq));
            std::string kind = trim(line.substr(eq + 1));
            ColumnRole role;
            if (kind == "nominal") role = ColumnRole::nominal;
            else if (kind == "numerical") role = ColumnRole::numerical;
            else if (kind == "label") role = ColumnRole::label, ++labels;
            else throw LoadError(LoadErrorKind::bad_schema, "unknown column kind '" + kind + "'");
            if (col.empty() || !seen.insert(col).second)
                throw LoadError(LoadErrorKind::bad_schema, "empty or repeated column '" + col + "' in schema");
            s.entries.push_back({col, role});
        }
        if (labels != 1) throw LoadError(LoadErrorKind::bad_schema, "schema must name exactly one label column");
        return s;
    }

    static Schema load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw LoadError(LoadErrorKind::io, "cannot open schema " + path.string());
        return parse(in);
    }
};

inline Dataset load_csv(std::istream& in, const Schema& schema, std::string name = "data") {
    auto rows = csv::parse(in);
    if (rows.empty()) throw LoadError(LoadErrorKind::empty_file, "no header row");
    const auto& header = rows.front();
    {
        std::unordered_set<std::string> names;
        for (const auto& h : header)
            if (!names.insert(h).second) throw LoadError(LoadErrorKind::duplicate_column, "'" + h + "'");
    }
    auto find_col = [&](const std::string& c) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == c) return i;
        throw LoadError(LoadErrorKind::missing_column, "'" + c + "'");
    };
    const std::string label_col = schema.label_column();
    if (label_col.empty()) throw LoadError(LoadErrorKind::bad_schema, "no label column");
    const std::size_t label_idx = find_col(label_col);
    if (rows.size() == 1) throw LoadError(LoadErrorKind::empty_dataset, "header only, zero data rows");

    std::vector<RawColumn> columns;
    std::vector<std::size_t> source;
    for (std::size_t i = 0; i < header.size(); ++i) {
        for (const auto& e : schema.entries) {
            if (e.column != header[i] || e.role == ColumnRole::label) continue;
            RawColumn c;
            c.name = e.column;
            c.kind = e.role == ColumnRole::numerical ? AttributeKind::numerical : AttributeKind::nominal;
            columns.push_back(std::move(c));
            source.push_back(i);
        }
    }
    for (const auto& e : schema.entries) find_col(e.column);

    std::vector<std::string> labels;
    labels.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size())
            throw LoadError(LoadErrorKind::malformed_row, "data row " + std::to_string(r) + " has " +
                                                              std::to_string(row.size()) + " fields, expected " +
                                                              std::to_string(header.size()));
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const auto& tok = row[source[c]];
            if (columns[c].kind == AttributeKind::numerical)
                columns[c].numbers.push_back(parse_decimal(tok, columns[c].name, r - 1));
            else
                columns[c].text.push_back(tok);
        }
        labels.push_back(row[label_idx]);
    }
    return Dataset::from_columns(std::move(name), std::move(columns), labels);
}

inline Dataset load_csv(const std::filesystem::path& path, const Schema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError(LoadErrorKind::io, "cannot open " + path.string());
    return load_csv(in, schema, path.stem().string());
}

}  // namespace sdmcts
