#include "clmn/csv.hpp"

#include <fstream>

#include "clmn/errors.hpp"

namespace clmn {

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw ParseError("csv: missing column '" + name + "'");
}

CsvTable parse_csv(const std::string& content, const std::string& origin) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t row_no = 1;

    auto end_field = [&]() {
        record.push_back(field);
        field.clear();
        field_started = false;
    };
    auto end_record = [&]() {
        end_field();
        // skip records that are completely empty (trailing newline)
        if (record.size() > 1 || !record[0].empty()) records.push_back(record);
        record.clear();
        ++row_no;
    };

    for (std::size_t i = 0; i < content.size(); ++i) {
        const char c = content[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field.empty() && !field_started) {
                    quoted = true;
                    field_started = true;
                } else {
                    throw ParseError(origin + ": row " + std::to_string(row_no) +
                                     ": stray quote inside an unquoted field");
                }
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < content.size() && content[i + 1] == '\n') break;  // CRLF
                end_record();
                break;
            case '\n':
                end_record();
                break;
            default:
                field.push_back(c);
                field_started = true;
        }
    }
    if (quoted)
        throw ParseError(origin + ": row " + std::to_string(row_no) +
                         ": unterminated quoted field");
    if (!field.empty() || field_started || !record.empty()) end_record();

    if (records.empty()) throw ParseError(origin + ": empty file");
    CsvTable table;
    table.header = records.front();
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size())
            throw ParseError(origin + ": row " + std::to_string(r + 1) + ": expected " +
                             std::to_string(table.header.size()) + " fields, got " +
                             std::to_string(records[r].size()));
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    return parse_csv(content, path);
}

std::string csv_escape(const std::string& field) {
    const bool needs_quotes = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

std::string write_csv(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    auto write_record = [&](const std::vector<std::string>& record) {
        for (std::size_t i = 0; i < record.size(); ++i) {
            if (i) out.push_back(',');
            out += csv_escape(record[i]);
        }
        out.push_back('\n');
    };
    write_record(header);
    for (const auto& row : rows) write_record(row);
    return out;
}

}  // namespace clmn
