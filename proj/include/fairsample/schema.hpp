#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fairsample {

enum class ColumnKind { Numeric, Categorical };

/// Declares how a CSV maps onto a binary-classification dataset: which
/// columns are used and with what kind, which column carries the label,
/// which raw value counts as favorable, and the same for the protected
/// group column.
struct Schema {
    std::vector<std::pair<std::string, ColumnKind>> columns;
    std::string label_column;
    std::string favorable_value;
    std::string protected_column;
    std::string privileged_value;

    bool has_column(const std::string& name) const;
    ColumnKind kind_of(const std::string& name) const;

    /// Parses the key/value schema format:
    ///
    ///   label_column     = outcome
    ///   favorable_value  = yes
    ///   protected_column = group
    ///   privileged_value = A
    ///   numeric          = score1, aux
    ///   categorical      = dept, group, outcome
    ///
    /// `numeric` and `categorical` may repeat and accept comma-separated
    /// lists; `#` starts a comment. Column order is declaration order.
    static Schema parse(std::istream& in, const std::string& origin);
    static Schema parse_file(const std::string& path);
};

}  // namespace fairsample
