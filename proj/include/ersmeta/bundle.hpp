#pragma once

#include "ersmeta/crosswalk.hpp"
#include "ersmeta/forge.hpp"
#include "ersmeta/schema.hpp"

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

namespace ersmeta {

struct ConversionTarget {
  TargetFormat format = TargetFormat::codemetaJson;
  SchemaDefinition schema;
  Crosswalk crosswalk;
  /// Mapping back into the main schema, when the bundle ships one.
  std::optional<Crosswalk> reverse;
};

/// The immutable data set a CLI run or a server works from.
struct Bundle {
  SchemaDefinition schema;
  ForgeMapping forgeMapping;
  std::vector<ConversionTarget> targets;

  /// Accepts the names understood by parse_target_format.
  const ConversionTarget *target(std::string_view name) const;
};

/// Loads `schema_file` plus, from `data_dir`:
///   targets/<id>.schema.json      target schemas (id names the format)
///   crosswalks/<schema>-<id>.json forward mapping (target skipped if absent)
///   crosswalks/<id>-<schema>.json optional reverse mapping
///   extraction/<schema>.forge-mapping.json
Bundle load_bundle(const std::filesystem::path &schema_file,
                   const std::filesystem::path &data_dir);

/// data_dir/schema/ersmeta.schema.json with the rest of data_dir.
Bundle load_default_bundle(const std::filesystem::path &data_dir);

} // namespace ersmeta
