#include "csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dephaselab::cli {
namespace {

std::string quoted(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) throw std::invalid_argument("CsvTable: empty header");
}

void CsvTable::add_row(std::vector<Cell> cells) {
    if (cells.size() != header_.size()) throw std::invalid_argument("CsvTable: row width mismatch");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
    std::string out;
    for (std::size_t c = 0; c < header_.size(); ++c) {
        if (c) out += ',';
        out += quoted(header_[c]);
    }
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            if (row[c]) out += quoted(*row[c]);
        }
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace dephaselab::cli
