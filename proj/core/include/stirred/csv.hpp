#pragma once

#include <string>
#include <vector>

namespace stirred::io {

/// Shortest round-trip decimal form of x ("nan", "inf", "-inf" for
/// non-finite values).
std::string fmt(double x);
std::string fmt(long x);
inline std::string fmt(int x) { return fmt(static_cast<long>(x)); }

/// Comma-separated table with a header row and LF line endings.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row);
    std::string str() const;
    void write(const std::string& path) const;
};

/// Write text to a file, throwing std::runtime_error on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace stirred::io
