#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace dephaselab::cli {

/// %.17g; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double x);

/// In-memory CSV table: comma separated, LF line endings, cells quoted only
/// when they contain a comma, quote or newline.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    using Cell = std::optional<std::string>;

    void add_row(std::vector<Cell> cells);
    static Cell number(double x) { return format_number(x); }
    static Cell empty() { return std::nullopt; }

    std::size_t rows() const noexcept { return rows_.size(); }
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<Cell>> rows_;
};

/// Writes bytes verbatim (binary mode); throws std::runtime_error on failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace dephaselab::cli
