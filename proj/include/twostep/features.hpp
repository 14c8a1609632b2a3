#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "twostep/io.hpp"

namespace twostep {

// Which input columns are continuous and which are binary. Together they must
// cover every input column exactly once.
struct FeatureExpansionSpec {
    std::vector<int> continuous;
    std::vector<int> binary;

    /// Throws InputError unless the two lists are disjoint and cover [0, columns).
    void validate(int columns) const;
    int output_columns() const;
};

/// Accepts {"continuous": [...], "binary": [...]} with column names or
/// indices; "binary" alone means every other column is continuous.
FeatureExpansionSpec parse_expansion_spec(const nlohmann::json& j, const std::vector<std::string>& header);

/// Main effects in input order, then squares of the continuous columns, then
/// products x_a * x_b of continuous pairs a < b.
CsvTable expand_features(const CsvTable& raw, const FeatureExpansionSpec& spec);

}  // namespace twostep
