#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace aplab {

// Fixed-format float printing.  Reports must be byte-identical for a given
// seed regardless of thread count, so all numeric output funnels through
// these helpers.
std::string fmt_g(double v, int digits = 12);
std::string fmt_full(double v); // round-trip precision, for data files

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);

    void comment(const std::string& line);
    void row(const std::vector<std::string>& cells);

    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ofstream out_;
    std::size_t ncols_;
};

// FNV-1a over raw bytes; used for the config hash in run manifests.
std::uint64_t fnv1a(const std::string& bytes);

} // namespace aplab
