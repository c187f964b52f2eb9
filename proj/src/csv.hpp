#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "sample.hpp"

namespace cpd {

enum class HeaderMode { Auto, Yes, No };

/// Parse failure with 1-based file location.
class CsvError : public std::runtime_error {
public:
    CsvError(const std::string& message, int row, int col)
        : std::runtime_error("csv row " + std::to_string(row) + ", column " +
                             std::to_string(col) + ": " + message),
          row(row),
          col(col) {}

    int row;
    int col;
};

/// Comma-separated numeric matrix with an optional single header row.
/// Rectangular body required; ragged rows, non-numeric cells, n < 2 or
/// d < 2 raise CsvError with the offending location.
Sample read_csv_text(std::string_view text, HeaderMode header = HeaderMode::Auto);

Sample read_csv(const std::string& path, HeaderMode header = HeaderMode::Auto);

}  // namespace cpd
