#pragma once

// Locale-independent number formatting for reports.

#include <string>
#include <string_view>

namespace curvatura {

/// 17 significant digits, "nan"/"inf"/"-inf" for non-finite values.
std::string format_double(double value);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(std::string_view text);

}  // namespace curvatura
