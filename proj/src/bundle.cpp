#include "ersmeta/bundle.hpp"

#include "ersmeta/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ersmeta {

namespace {

namespace fs = std::filesystem;

std::string read_text(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename F> auto in_file(const fs::path &path, F &&f) {
  try {
    return f(read_text(path));
  } catch (const ParseError &e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ConfigurationError &e) {
    throw ConfigurationError(path.string() + ": " + e.what());
  }
}

} // namespace

const ConversionTarget *Bundle::target(std::string_view name) const {
  auto format = parse_target_format(name);
  if (!format) {
    return nullptr;
  }
  for (const auto &t : targets) {
    if (t.format == *format) {
      return &t;
    }
  }
  return nullptr;
}

Bundle load_bundle(const fs::path &schema_file, const fs::path &data_dir) {
  Bundle bundle;
  bundle.schema = load_schema_file(schema_file);
  const std::string &id = bundle.schema.id;

  fs::path mapping = data_dir / "extraction" / (id + ".forge-mapping.json");
  if (fs::is_regular_file(mapping)) {
    bundle.forgeMapping = in_file(mapping, [&](const std::string &text) {
      return load_forge_mapping(text, bundle.schema);
    });
  }

  std::vector<fs::path> target_files;
  if (fs::is_directory(data_dir / "targets")) {
    for (const auto &entry : fs::directory_iterator(data_dir / "targets")) {
      std::string name = entry.path().filename().string();
      if (name.size() > 12 && name.compare(name.size() - 12, 12, ".schema.json") == 0) {
        target_files.push_back(entry.path());
      }
    }
  }
  std::sort(target_files.begin(), target_files.end());
  for (const auto &file : target_files) {
    ConversionTarget target;
    target.schema = load_schema_file(file);
    auto format = parse_target_format(target.schema.id);
    if (!format) {
      throw ConfigurationError(file.string() + ": no output format is named '" +
                               target.schema.id + "'");
    }
    target.format = *format;
    fs::path forward = data_dir / "crosswalks" / (id + "-" + target.schema.id + ".json");
    if (!fs::is_regular_file(forward)) {
      continue;
    }
    target.crosswalk = in_file(forward, [&](const std::string &text) {
      return load_crosswalk(text, bundle.schema, target.schema);
    });
    fs::path back = data_dir / "crosswalks" / (target.schema.id + "-" + id + ".json");
    if (fs::is_regular_file(back)) {
      target.reverse = in_file(back, [&](const std::string &text) {
        return load_crosswalk(text, target.schema, bundle.schema);
      });
    }
    bundle.targets.push_back(std::move(target));
  }
  return bundle;
}

Bundle load_default_bundle(const fs::path &data_dir) {
  return load_bundle(data_dir / "schema" / "ersmeta.schema.json", data_dir);
}

} // namespace ersmeta
