#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "twostep/numerics.hpp"

namespace twostep {

struct CsvTable {
    std::vector<std::string> header;
    Matrix values;  // rows x header.size()
};

/// Mixed text/number output table; cells are already formatted.
struct TextTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Header row required; every other field must parse as a double.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(std::istream& in, const std::string& source = "<stream>");

/// Single-column response file.
Vector read_response_csv(const std::string& path);

void write_csv(const std::string& path, const CsvTable& table);
void write_csv(std::ostream& out, const CsvTable& table);
void write_csv(const std::string& path, const TextTable& table);
void write_csv(std::ostream& out, const TextTable& table);

/// printf %.17g, so values round-trip exactly; "NA" for NaN.
std::string format_double(double x);

}  // namespace twostep
