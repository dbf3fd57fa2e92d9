#pragma once

#include "ersmeta/record.hpp"
#include "ersmeta/schema.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ersmeta {

enum class TransformKind {
  identity,
  rename,
  personSplit,
  personJoin,
  listJoin,
  constant
};

std::string_view to_string(TransformKind kind);
std::optional<TransformKind> parse_transform(std::string_view text);

/// One mapping rule. Paths are top-level element ids; identity/rename rules
/// may also use `element.field` paths to rename fields inside the nested
/// values of a mapped sub-schema element. `constant` rules have no source.
struct MappingRule {
  std::string sourcePath;
  std::string targetPath;
  TransformKind transform = TransformKind::identity;
  /// listJoin separator or constant value.
  std::string arg;

  bool is_field_rule() const;

  friend bool operator==(const MappingRule &, const MappingRule &) = default;
};

struct Crosswalk {
  std::string sourceSchemaId;
  std::string targetSchemaId;
  std::vector<MappingRule> rules;

  /// Top-level rule for a source element, if any.
  const MappingRule *rule_for(std::string_view source_element) const;
};

struct ConversionReport {
  std::vector<std::pair<std::string, std::string>> mapped;
  std::vector<std::string> dropped;
  std::vector<std::string> synthesized;

  friend bool operator==(const ConversionReport &,
                         const ConversionReport &) = default;
};

enum class TargetFormat { codemetaJson, cffYamlLike, ersmeta };

std::string_view to_string(TargetFormat format);
/// Accepts "codemeta-json", "cff-yaml-like", "ersmeta" and the short CLI
/// names "codemeta" and "cff".
std::optional<TargetFormat> parse_target_format(std::string_view text);

/// Parses a mapping file and resolves every rule against both schemas.
/// Throws ParseError or ConfigurationError naming the offending rule.
Crosswalk load_crosswalk(std::string_view document,
                         const SchemaDefinition &source,
                         const SchemaDefinition &target);

/// Record-level conversion; fills `report`. Throws Error when the record's
/// schema id differs from the crosswalk source.
MetadataRecord apply_crosswalk(const MetadataRecord &record,
                               const Crosswalk &crosswalk,
                               const SchemaDefinition &source,
                               const SchemaDefinition &target,
                               ConversionReport &report);

struct ConversionResult {
  MetadataRecord record;
  std::string document;
  ConversionReport report;
};

ConversionResult convert(const MetadataRecord &record,
                         const Crosswalk &crosswalk,
                         const SchemaDefinition &source,
                         const SchemaDefinition &target, TargetFormat format);

/// CodeMeta JSON-LD rendering of a record in the target (codemeta) schema.
std::string render_codemeta(const MetadataRecord &record,
                            const SchemaDefinition &schema);

/// CITATION.cff-style YAML rendering of a record in the target (cff) schema.
std::string render_cff(const MetadataRecord &record,
                       const SchemaDefinition &schema);

std::string to_json(const ConversionReport &report);

/// personSplit heuristic: given names are every token but the last.
std::pair<std::string, std::string> split_person_name(std::string_view name);

} // namespace ersmeta
