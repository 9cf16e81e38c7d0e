#pragma once

#include <string>
#include <vector>

namespace clmn {

/// RFC-4180 table: quoted fields may hold commas, quotes (doubled), and
/// newlines. The first record is the header.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column position by header name; ParseError when absent.
    std::size_t column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& content, const std::string& origin);
CsvTable read_csv_file(const std::string& path);

std::string csv_escape(const std::string& field);
std::string write_csv(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

}  // namespace clmn
