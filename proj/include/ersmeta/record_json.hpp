#pragma once

#include "ersmeta/record.hpp"
#include "ersmeta/schema.hpp"
#include "json.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace ersmeta {

/// How parsers treat keys/predicates the schema does not declare.
enum class Strictness { strict, lax };

/// An undeclared key kept aside by a lax parse. `path` is dotted for nested
/// fields; `raw` is the original JSON text or Turtle object term.
struct UnknownField {
  std::string path;
  std::string raw;

  friend bool operator==(const UnknownField &, const UnknownField &) = default;
};

struct ParsedRecord {
  MetadataRecord record;
  std::vector<UnknownField> unknowns;
};

/// Canonical JSON record: "@context" first, then element keys in schema
/// declaration order. Single-valued elements with one value are scalars,
/// everything else is an array. Two-space indent, trailing newline.
/// Throws SerializationError for elements or fields the schema lacks.
std::string to_json(const MetadataRecord &record,
                    const SchemaDefinition &schema);

nlohmann::ordered_json record_to_document(const MetadataRecord &record,
                                          const SchemaDefinition &schema);

/// The "@context" object: namespace prefixes, then one compact IRI per
/// top-level element and sub-schema field id.
nlohmann::ordered_json json_context(const SchemaDefinition &schema);

/// Inverse of to_json. Keys starting with '@' are JSON-LD keywords and are
/// skipped. Throws ParseError, TypeMismatchError, or (strict) UnknownElementError.
ParsedRecord from_json(std::string_view text, const SchemaDefinition &schema,
                       Strictness strictness = Strictness::strict);

ParsedRecord record_from_document(const nlohmann::json &doc,
                                  const SchemaDefinition &schema,
                                  Strictness strictness = Strictness::strict);

/// Encodes a single value the way it appears inside a record document.
nlohmann::ordered_json encode_value(const Value &v,
                                    const SchemaDefinition &schema);

} // namespace ersmeta
