#pragma once

#include <string>
#include <string_view>

namespace xamm {

/// Shortest decimal string that parses back to exactly `x`.
std::string format_decimal(double x);

/// Parses a full decimal string (no surrounding junk). Throws DomainError.
double parse_decimal(std::string_view text);

}  // namespace xamm
