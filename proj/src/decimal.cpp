#include "xamm/decimal.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "xamm/errors.hpp"

namespace xamm {

std::string format_decimal(double x) {
    if (x == 0.0) return "0";  // folds -0
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{}) throw DomainError("cannot format number");
    return std::string(buf.data(), end);
}

double parse_decimal(std::string_view text) {
    double out = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last || text.empty() || !std::isfinite(out)) {
        throw DomainError("'" + std::string(text) + "' is not a decimal number");
    }
    return out;
}

}  // namespace xamm
