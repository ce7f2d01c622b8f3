// Minimal header-keyed CSV reading: comma separated, optional double
// quotes, no embedded newlines.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lteaudio {

class CsvTable {
public:
    static CsvTable parse(std::string_view text);
    static CsvTable load(const std::string& path);

    const std::vector<std::string>& header() const { return header_; }
    std::size_t rows() const { return rows_.size(); }
    /// Throws if the column is missing from the header.
    std::size_t column(const std::string& name) const;
    bool has_column(const std::string& name) const;
    const std::string& at(std::size_t row, std::size_t col) const { return rows_[row][col]; }
    /// 1-based line number of a row in the source text.
    int line(std::size_t row) const { return lines_[row]; }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<int> lines_;
};

std::vector<std::string> split_csv_line(std::string_view line);

/// Empty (after trimming) means absent. Throws on non-numeric text.
std::optional<double> parse_optional_number(const std::string& field);

}  // namespace lteaudio
