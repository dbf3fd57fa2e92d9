#pragma once

// Internal helpers shared by the library translation units.

#include "ersmeta/error.hpp"
#include "json.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace ersmeta::detail {

using ordered_json = nlohmann::ordered_json;

/// Parses JSON, rethrowing nlohmann errors as ParseError with line/column.
nlohmann::json parse_json(std::string_view text);
ordered_json parse_ordered_json(std::string_view text);

/// Two-space indented UTF-8 rendering with a trailing newline.
std::string dump_document(const ordered_json &doc);

/// scheme ":" rest, with no whitespace or characters forbidden in IRIs.
bool is_absolute_iri(std::string_view text);

/// YYYY-MM-DD with a valid proleptic Gregorian calendar day.
bool is_iso_date(std::string_view text);

std::uint64_t fnv1a64(std::string_view text);

std::string hex64(std::uint64_t value);

/// Shortest decimal rendering that parses back to the same double.
std::string format_double(double value);

} // namespace ersmeta::detail
