#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lingshift::csv {

// RFC 4180 quoting: fields containing a comma, quote or line break are quoted.
std::string field(std::string_view value);

// Splits one CSV record; quoted fields may contain commas and doubled quotes.
std::vector<std::string> split(std::string_view line);

// printf-style %.*g rendering.
std::string number(double value, int significant_digits);

}  // namespace lingshift::csv
