#include "bsseries/bench/csv.hpp"

#include <array>
#include <charconv>
#include <ostream>
#include <sstream>

namespace bsseries::bench {

std::string csv_number(double x) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{}) {
        return "nan";
    }
    return std::string(buf.data(), end);
}

namespace {

void write_line(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << cells[i];
    }
    out << '\n';
}

} // namespace

void CsvTable::write(std::ostream& out) const {
    write_line(out, header);
    for (const auto& row : rows) {
        write_line(out, row);
    }
}

std::string CsvTable::str() const {
    std::ostringstream out;
    write(out);
    return out.str();
}

} // namespace bsseries::bench
