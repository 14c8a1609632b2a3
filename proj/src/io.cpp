#include "twostep/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "twostep/errors.hpp"

namespace twostep {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    for (auto& f : fields) {
        const auto b = f.find_first_not_of(" \t");
        const auto e = f.find_last_not_of(" \t");
        f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
    }
    return fields;
}

double parse_double(const std::string& field, const std::string& where) {
    if (field.empty()) throw InputError(where + ": empty field");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size() || errno == ERANGE)
        throw InputError(where + ": cannot parse '" + field + "' as a number");
    return v;
}

}  // namespace

CsvTable parse_csv(std::istream& in, const std::string& source) {
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw InputError(source + ": missing header row");
    t.header = split_line(line);
    std::vector<std::vector<double>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = split_line(line);
        if (fields.size() != t.header.size())
            throw InputError(source + ":" + std::to_string(lineno) + ": expected " + std::to_string(t.header.size()) +
                             " fields, found " + std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (std::size_t k = 0; k < fields.size(); ++k)
            row.push_back(parse_double(fields[k], source + ":" + std::to_string(lineno)));
        rows.push_back(std::move(row));
    }
    t.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(t.header.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return t;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return parse_csv(in, path);
}

Vector read_response_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    if (t.header.size() != 1) throw InputError(path + ": response file must have exactly one column");
    return t.values.col(0);
}

std::string format_double(double x) {
    if (std::isnan(x)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(std::ostream& out, const CsvTable& table) {
    for (std::size_t j = 0; j < table.header.size(); ++j) out << (j ? "," : "") << table.header[j];
    out << '\n';
    for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < table.values.cols(); ++j) out << (j ? "," : "") << format_double(table.values(i, j));
        out << '\n';
    }
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    write_csv(out, table);
}

void write_csv(std::ostream& out, const TextTable& table) {
    for (std::size_t j = 0; j < table.header.size(); ++j) out << (j ? "," : "") << table.header[j];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
        out << '\n';
    }
}

void write_csv(const std::string& path, const TextTable& table) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    write_csv(out, table);
}

}  // namespace twostep
