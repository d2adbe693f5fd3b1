#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bsseries::bench {

/// Shortest decimal that round-trips to the same binary64, '.' radix.
std::string csv_number(double x);

/// Header plus rows of pre-formatted cells. Written with ',' separators and
/// '\n' line ends; the header is always emitted.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void write(std::ostream& out) const;
    std::string str() const;
};

} // namespace bsseries::bench
