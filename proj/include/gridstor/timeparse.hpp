#pragma once

#include <cstdint>
#include <string>

namespace gridstor {

// Parses "YYYY-MM-DDTHH:MM:SS" (optional trailing 'Z'), interpreted as UTC,
// to Unix seconds. Throws std::invalid_argument on malformed input.
std::int64_t parse_iso8601_utc(const std::string& text);

// Inverse of parse_iso8601_utc; always emits the 'Z' suffix form.
std::string format_iso8601_utc(std::int64_t unix_seconds);

}  // namespace gridstor
