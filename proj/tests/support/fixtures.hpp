#pragma once

#include "ersmeta/bundle.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef ERSMETA_SOURCE_DIR
#error "ERSMETA_SOURCE_DIR must point at the source tree"
#endif

namespace ersmeta::support {

inline std::filesystem::path source_dir() { return ERSMETA_SOURCE_DIR; }
inline std::filesystem::path data_dir() { return source_dir() / "data"; }
inline std::filesystem::path forge_fixtures() {
  return source_dir() / "tests" / "fixtures" / "forge";
}
inline std::filesystem::path golden(const std::string &name) {
  return source_dir() / "tests" / "golden" / name;
}

inline std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// The bundled data set, loaded once per process.
inline const Bundle &bundle() {
  static const Bundle b = load_default_bundle(data_dir());
  return b;
}

inline const SchemaDefinition &schema() { return bundle().schema; }

inline const ConversionTarget &target(const char *name) {
  const ConversionTarget *t = bundle().target(name);
  if (t == nullptr) {
    throw std::runtime_error(std::string("bundle lacks target ") + name);
  }
  return *t;
}

} // namespace ersmeta::support
