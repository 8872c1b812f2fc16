#include "aplab/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace aplab {

std::string fmt_g(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string fmt_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : path_(path), out_(path), ncols_(columns.size()) {
    if (!out_) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    }
}

void CsvWriter::comment(const std::string& line) {
    out_ << "# " << line << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != ncols_) {
        throw std::runtime_error("csv row width mismatch in " + path_);
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
    }
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace aplab
