#pragma once

#include "ersmeta/record.hpp"
#include "ersmeta/record_json.hpp"
#include "ersmeta/schema.hpp"

#include <string>
#include <string_view>

namespace ersmeta {

inline constexpr std::string_view kRecordClass =
    "http://schema.org/SoftwareSourceCode";

/// Subject IRI for a record: the `identifier` element when it holds an
/// absolute IRI, otherwise urn:ersmeta:record:<schemaId>:<fnv1a64(name)>.
std::string record_subject(const MetadataRecord &record,
                           const SchemaDefinition &schema);

/// One subject node typed as kRecordClass, one predicate group per element in
/// schema order, nested values as [ ... ] blank nodes. Prefixes are emitted
/// for the namespaces actually used. Throws SerializationError like to_json.
std::string to_turtle(const MetadataRecord &record,
                      const SchemaDefinition &schema);

/// Inverse of to_turtle. The document must have exactly one non-blank
/// subject. Predicates the schema does not map are errors in strict mode and
/// collected as unknowns in lax mode.
ParsedRecord from_turtle(std::string_view text, const SchemaDefinition &schema,
                         Strictness strictness = Strictness::strict);

} // namespace ersmeta
