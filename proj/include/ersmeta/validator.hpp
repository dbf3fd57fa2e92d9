#pragma once

#include "ersmeta/record.hpp"
#include "ersmeta/record_json.hpp"
#include "ersmeta/schema.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ersmeta {

enum class Constraint {
  missingMandatory,
  missingRecommended,
  datatypeMismatch,
  notInVocabulary,
  nestedShapeViolation,
  unknownElement,
  cardinalityExceeded
};

enum class Severity { violation, warning, info };

std::string_view to_string(Constraint constraint);
std::string_view to_string(Severity severity);

/// Severity table:
///   missingMandatory -> violation, missingRecommended -> warning,
///   datatype/vocabulary/shape/cardinality -> violation,
///   unknownElement -> violation (strict) or warning (lax).
Severity severity_for(Constraint constraint,
                      Strictness strictness = Strictness::strict);

struct Finding {
  /// Dotted for nested fields (author.familyName). Elements holding several
  /// values index them: author[1].familyName.
  std::string elementPath;
  Constraint constraint = Constraint::datatypeMismatch;
  Severity severity = Severity::violation;
  std::string message;

  friend bool operator==(const Finding &, const Finding &) = default;
};

struct ValidationReport {
  std::vector<Finding> findings;
  bool conformant = true;

  std::size_t count(Severity severity) const;
  std::size_t count(Constraint constraint) const;

  friend bool operator==(const ValidationReport &,
                         const ValidationReport &) = default;
};

struct ValidateOptions {
  Strictness strictness = Strictness::strict;
  /// Undeclared keys already split off by a lax parse; reported as
  /// unknownElement findings after the record's own findings.
  std::vector<UnknownField> unknowns;
};

/// Never throws for record content: every problem becomes a finding.
/// Findings follow schema declaration order, then path.
ValidationReport validate(const MetadataRecord &record,
                          const SchemaDefinition &schema,
                          const ValidateOptions &options = {});

struct FillCount {
  std::size_t filled = 0;
  std::size_t total = 0;

  friend bool operator==(const FillCount &, const FillCount &) = default;
};

struct CompletenessReport {
  std::map<Tier, FillCount> perTier;
  /// Area id -> fill count, in area declaration order.
  std::vector<std::pair<std::string, FillCount>> perArea;
  bool mandatoryComplete = true;

  friend bool operator==(const CompletenessReport &,
                         const CompletenessReport &) = default;
};

/// Fill ratios over top-level elements. Totals come from the schema.
CompletenessReport completeness(const MetadataRecord &record,
                                const SchemaDefinition &schema);

bool quality_gate(const CompletenessReport &report);

/// {"findings": [...], "conformant": bool}, two-space indent, trailing newline.
std::string to_json(const ValidationReport &report);
nlohmann::ordered_json report_to_document(const ValidationReport &report);

std::string to_json(const CompletenessReport &report);
nlohmann::ordered_json report_to_document(const CompletenessReport &report);

} // namespace ersmeta
