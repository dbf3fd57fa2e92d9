#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ersmeta {

enum class Tier { mandatory, recommended, optional };

enum class ValueKind {
  text,
  iri,
  date,
  integer,
  number,
  boolean,
  vocabularyTerm,
  subSchemaRef
};

/// Where an element definition was reused from.
enum class Provenance {
  schemaOrg,
  codemeta,
  softwareDescriptionOntology,
  ontosoft,
  oeo,
  m4i,
  newElement
};

enum class VocabularyKind { closedList, ontologyClass };

std::string_view to_string(Tier tier);
std::string_view to_string(ValueKind kind);
std::string_view to_string(Provenance provenance);
std::string_view to_string(VocabularyKind kind);

std::optional<Tier> parse_tier(std::string_view text);
std::optional<ValueKind> parse_value_kind(std::string_view text);
std::optional<Provenance> parse_provenance(std::string_view text);
std::optional<VocabularyKind> parse_vocabulary_kind(std::string_view text);

inline constexpr Tier kAllTiers[] = {Tier::mandatory, Tier::recommended,
                                     Tier::optional};

struct ValueType {
  ValueKind kind = ValueKind::text;
  /// Sub-schema id; only meaningful for ValueKind::subSchemaRef.
  std::string subSchema;

  friend bool operator==(const ValueType &, const ValueType &) = default;
};

struct ThematicArea {
  std::string id;
  std::string label;
  std::string description;

  friend bool operator==(const ThematicArea &, const ThematicArea &) = default;
};

/// One schema element. Sub-schema fields reuse this type with an empty area.
struct ElementDefinition {
  std::string id;
  std::string label;
  std::string description;
  Tier tier = Tier::optional;
  std::string area;
  ValueType valueType;
  bool multiValued = false;
  std::optional<std::string> vocabularyRef;
  Provenance provenance = Provenance::newElement;
  std::optional<std::string> sourceIri;

  friend bool operator==(const ElementDefinition &,
                         const ElementDefinition &) = default;
};

struct SubSchema {
  std::string id;
  std::vector<ElementDefinition> fields;

  const ElementDefinition *field(std::string_view field_id) const;

  friend bool operator==(const SubSchema &, const SubSchema &) = default;
};

struct Term {
  std::string label;
  std::optional<std::string> iri;

  friend bool operator==(const Term &, const Term &) = default;
};

struct Vocabulary {
  std::string id;
  VocabularyKind kind = VocabularyKind::closedList;
  std::vector<Term> terms;
  std::string sourceNote;

  friend bool operator==(const Vocabulary &, const Vocabulary &) = default;
};

/// The element registry. Immutable after load; safe to share across threads.
struct SchemaDefinition {
  std::string id;
  std::string version;
  std::vector<ThematicArea> areas;
  std::vector<ElementDefinition> elements;
  std::vector<SubSchema> subSchemas;
  std::vector<Vocabulary> vocabularies;
  /// prefix -> IRI base, in declaration order. The entry keyed by the schema
  /// id is the namespace for elements with provenance "new".
  std::vector<std::pair<std::string, std::string>> namespaces;

  const ThematicArea *area(std::string_view area_id) const;
  const SubSchema *sub_schema(std::string_view sub_schema_id) const;
  const Vocabulary *vocabulary(std::string_view vocabulary_id) const;
  const std::string *namespace_iri(std::string_view prefix) const;

  /// IRI used as predicate/context term for an element or sub-schema field:
  /// its sourceIri, or the schema's own namespace + id.
  std::string term_iri(const ElementDefinition &element) const;

  friend bool operator==(const SchemaDefinition &,
                         const SchemaDefinition &) = default;
};

struct SchemaStats {
  std::map<Tier, std::size_t> perTier;
  /// Area id -> top-level element count, in area declaration order.
  std::vector<std::pair<std::string, std::size_t>> perArea;
  std::map<Provenance, std::size_t> perProvenance;
  std::size_t topLevelCount = 0;
  std::size_t subSchemaCount = 0;
  std::size_t subSchemaFieldCount = 0;
  /// Tier counts when every sub-schema-typed element contributes its
  /// sub-schema fields again (recursively), i.e. the number of slots a
  /// curator is presented with.
  std::map<Tier, std::size_t> perTierInstantiated;

  friend bool operator==(const SchemaStats &, const SchemaStats &) = default;
};

/// Parses and checks a canonical schema-definition document. Vocabulary
/// entries given as strings are file paths relative to `base_dir`.
/// Throws ParseError on malformed input and ConsistencyError listing every
/// violated invariant.
SchemaDefinition load_schema(std::string_view document,
                             const std::filesystem::path &base_dir = {});

SchemaDefinition load_schema_file(const std::filesystem::path &path);

/// Writes the canonical document with all vocabularies inlined.
std::string serialize_schema(const SchemaDefinition &schema);

/// Returns every violated invariant; empty means consistent.
std::vector<std::string> check_schema(const SchemaDefinition &schema);

const ElementDefinition *element_by_id(const SchemaDefinition &schema,
                                       std::string_view id);

SchemaStats schema_stats(const SchemaDefinition &schema);

/// Exact, case-sensitive match on label or IRI.
const Term *resolve_term(const Vocabulary &vocabulary, std::string_view value);

} // namespace ersmeta
