#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hetpredict::csv {

// Splits one comma-delimited record. Fields are taken verbatim; quoting is not
// part of any schema this project reads or writes.
std::vector<std::string_view> split(std::string_view line);

// Strips a trailing '\r' so files written on Windows parse the same way.
std::string_view chomp(std::string_view line);

std::optional<std::int64_t> parse_int(std::string_view field);
std::optional<double> parse_double(std::string_view field);

// Fixed-point rendering used by every numeric CSV column this project emits.
std::string fixed(double value, int decimals);

}  // namespace hetpredict::csv
