#include "twostep/features.hpp"

#include <algorithm>

#include "twostep/errors.hpp"

namespace twostep {

void FeatureExpansionSpec::validate(int columns) const {
    std::vector<int> seen(static_cast<std::size_t>(std::max(columns, 0)), 0);
    auto mark = [&](int j, const char* list) {
        if (j < 0 || j >= columns)
            throw InputError(std::string(list) + " column " + std::to_string(j) + " out of range (have " +
                             std::to_string(columns) + " columns)");
        if (seen[static_cast<std::size_t>(j)]++) throw InputError("column " + std::to_string(j) + " listed twice");
    };
    for (int j : continuous) mark(j, "continuous");
    for (int j : binary) mark(j, "binary");
    for (int j = 0; j < columns; ++j)
        if (!seen[static_cast<std::size_t>(j)]) throw InputError("column " + std::to_string(j) + " is not classified");
}

int FeatureExpansionSpec::output_columns() const {
    const int c = static_cast<int>(continuous.size());
    return c + static_cast<int>(binary.size()) + c + c * (c - 1) / 2;
}

namespace {

std::vector<int> resolve(const nlohmann::json& list, const std::vector<std::string>& header, const char* key) {
    if (!list.is_array()) throw InputError(std::string(key) + ": must be a list");
    std::vector<int> out;
    for (const auto& e : list) {
        if (e.is_number_integer()) {
            out.push_back(e.get<int>());
        } else if (e.is_string()) {
            const auto name = e.get<std::string>();
            const auto it = std::find(header.begin(), header.end(), name);
            if (it == header.end()) throw InputError(std::string(key) + ": no column named '" + name + "'");
            out.push_back(static_cast<int>(it - header.begin()));
        } else {
            throw InputError(std::string(key) + ": entries must be names or indices");
        }
    }
    return out;
}

}  // namespace

FeatureExpansionSpec parse_expansion_spec(const nlohmann::json& j, const std::vector<std::string>& header) {
    if (!j.is_object()) throw InputError("expansion spec must be a JSON object");
    FeatureExpansionSpec spec;
    if (j.contains("binary")) spec.binary = resolve(j["binary"], header, "binary");
    if (j.contains("continuous")) {
        spec.continuous = resolve(j["continuous"], header, "continuous");
    } else {
        for (int c = 0; c < static_cast<int>(header.size()); ++c)
            if (std::find(spec.binary.begin(), spec.binary.end(), c) == spec.binary.end()) spec.continuous.push_back(c);
    }
    if (j.contains("columns")) {
        const auto names = j["columns"].get<std::vector<std::string>>();
        if (names != header) throw InputError("input header does not match the columns listed in the spec");
    }
    spec.validate(static_cast<int>(header.size()));
    return spec;
}

CsvTable expand_features(const CsvTable& raw, const FeatureExpansionSpec& spec) {
    const int cols = static_cast<int>(raw.values.cols());
    if (static_cast<int>(raw.header.size()) != cols) throw InputError("header/value width mismatch");
    spec.validate(cols);
    const Eigen::Index n = raw.values.rows();
    CsvTable out;
    out.values.resize(n, spec.output_columns());
    int k = 0;
    for (int j = 0; j < cols; ++j) {
        out.header.push_back(raw.header[static_cast<std::size_t>(j)]);
        out.values.col(k++) = raw.values.col(j);
    }
    for (int j : spec.continuous) {
        out.header.push_back(raw.header[static_cast<std::size_t>(j)] + "^2");
        out.values.col(k++) = raw.values.col(j).array().square();
    }
    const auto& c = spec.continuous;
    for (std::size_t a = 0; a < c.size(); ++a)
        for (std::size_t b = a + 1; b < c.size(); ++b) {
            out.header.push_back(raw.header[static_cast<std::size_t>(c[a])] + "*" +
                                 raw.header[static_cast<std::size_t>(c[b])]);
            out.values.col(k++) = raw.values.col(c[a]).cwiseProduct(raw.values.col(c[b]));
        }
    return out;
}

}  // namespace twostep
