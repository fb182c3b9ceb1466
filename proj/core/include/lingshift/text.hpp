#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lingshift::text {

// Splits on ASCII whitespace; empty fields are dropped.
std::vector<std::string_view> split_whitespace(std::string_view line);

// Unicode simple lowercase mapping of a UTF-8 string. Invalid byte sequences
// are copied through unchanged.
std::string to_lower_utf8(std::string_view s);

}  // namespace lingshift::text
