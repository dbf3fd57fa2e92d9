#include "ersmeta/bundle.hpp"
#include "ersmeta/crosswalk.hpp"
#include "ersmeta/error.hpp"
#include "ersmeta/forge.hpp"
#include "ersmeta/record_json.hpp"
#include "ersmeta/record_turtle.hpp"
#include "ersmeta/service.hpp"
#include "ersmeta/validator.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef ERSMETA_DEFAULT_DATA_DIR
#define ERSMETA_DEFAULT_DATA_DIR "data"
#endif

namespace {

using namespace ersmeta;
namespace fs = std::filesystem;

enum Exit { kOk = 0, kNonconformant = 1, kUsage = 2, kIo = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string &path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) {
    throw IoError("cannot write " + path);
  }
}

// Left-aligned ASCII table; the last column is not padded.
std::string table(const std::vector<std::string> &head,
                  const std::vector<std::vector<std::string>> &rows) {
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = head[c].size();
    for (const auto &row : rows) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::string out;
  auto line = [&](const std::vector<std::string> &cells) {
    std::string text;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      text += cells[c];
      if (c + 1 < cells.size()) {
        text += std::string(width[c] - cells[c].size() + 2, ' ');
      }
    }
    out += text + "\n";
  };
  line(head);
  std::vector<std::string> rule;
  for (auto w : width) {
    rule.emplace_back(w, '-');
  }
  line(rule);
  for (const auto &row : rows) {
    line(row);
  }
  return out;
}

struct Context {
  std::string schemaPath;
  std::string dataDir = ERSMETA_DEFAULT_DATA_DIR;

  Bundle load() const {
    fs::path data(dataDir);
    std::string schema = schemaPath;
    if (schema.empty()) {
      if (const char *env = std::getenv("ERSMETA_SCHEMA"); env && *env) {
        schema = env;
      }
    }
    if (schema.empty()) {
      return load_default_bundle(data);
    }
    return load_bundle(schema, data);
  }
};

ParsedRecord read_record(const std::string &path, const std::string &format,
                         const SchemaDefinition &schema) {
  std::string text = read_input(path);
  bool turtle = format == "turtle" ||
                (format.empty() && fs::path(path).extension() == ".ttl");
  return turtle ? from_turtle(text, schema, Strictness::lax)
                : from_json(text, schema, Strictness::lax);
}

std::string ratio(const FillCount &c) {
  std::ostringstream ss;
  ss << c.filled << "/" << c.total;
  return ss.str();
}

std::string percent(const FillCount &c) {
  if (c.total == 0) {
    return "-";
  }
  return std::to_string((c.filled * 100 + c.total / 2) / c.total) + "%";
}

int run_extract(const Context &ctx, const std::string &url,
                const std::string &out, const std::string &fixtures, bool json) {
  Bundle bundle = ctx.load();
  std::unique_ptr<Transport> transport;
  if (fixtures.empty()) {
    transport = std::make_unique<HttpTransport>();
  } else {
    transport = std::make_unique<FixtureTransport>(fixtures);
  }
  Extraction x;
  try {
    x = extract(url, *transport, bundle.schema, bundle.forgeMapping);
  } catch (const UnsupportedForgeError &e) {
    throw UsageError(e.what());
  } catch (const MalformedUrlError &e) {
    throw UsageError(e.what());
  } catch (const RateLimitError &e) {
    std::string hint = e.retry_after() >= 0
                           ? " (retry after " + std::to_string(e.retry_after()) + " s)"
                           : std::string{};
    throw IoError(e.what() + hint);
  } catch (const Error &e) {
    if (dynamic_cast<const NotFoundError *>(&e) ||
        dynamic_cast<const AuthError *>(&e) ||
        dynamic_cast<const TransportError *>(&e)) {
      throw IoError(e.what());
    }
    throw;
  }
  write_output(out, to_json(x.record, bundle.schema));
  if (json) {
    std::cerr << to_json(x.report);
  } else {
    std::vector<std::vector<std::string>> rows;
    for (const auto &[element, source] : x.report.extracted) {
      rows.push_back({element, source});
    }
    std::cerr << "extracted " << x.report.extracted.size() << " elements\n"
              << table({"element", "source"}, rows);
    for (const auto &[field, reason] : x.report.skipped) {
      std::cerr << "skipped " << field << ": " << reason << "\n";
    }
  }
  return kOk;
}

int run_validate(const Context &ctx, const std::string &in,
                 const std::string &format, bool lax, bool json) {
  Bundle bundle = ctx.load();
  ParsedRecord parsed = read_record(in, format, bundle.schema);
  ValidateOptions options;
  options.strictness = lax ? Strictness::lax : Strictness::strict;
  options.unknowns = parsed.unknowns;
  ValidationReport report = validate(parsed.record, bundle.schema, options);
  if (json) {
    std::cout << to_json(report);
  } else {
    std::vector<std::vector<std::string>> rows;
    for (const auto &f : report.findings) {
      rows.push_back({std::string(to_string(f.severity)),
                      std::string(to_string(f.constraint)), f.elementPath,
                      f.message});
    }
    if (!rows.empty()) {
      std::cout << table({"severity", "constraint", "path", "message"}, rows);
    }
    std::cout << (report.conformant ? "conformant" : "not conformant") << ": "
              << report.count(Severity::violation) << " violation(s), "
              << report.count(Severity::warning) << " warning(s)\n";
  }
  return report.conformant ? kOk : kNonconformant;
}

int run_score(const Context &ctx, const std::string &in,
              const std::string &format, bool json) {
  Bundle bundle = ctx.load();
  ParsedRecord parsed = read_record(in, format, bundle.schema);
  CompletenessReport report = completeness(parsed.record, bundle.schema);
  if (json) {
    std::cout << to_json(report);
    return kOk;
  }
  std::vector<std::vector<std::string>> tiers;
  for (Tier t : kAllTiers) {
    const FillCount &c = report.perTier.at(t);
    tiers.push_back({std::string(to_string(t)), std::to_string(c.filled),
                     std::to_string(c.total), percent(c)});
  }
  std::cout << table({"tier", "filled", "total", "ratio"}, tiers) << "\n";
  std::vector<std::vector<std::string>> areas;
  for (const auto &[area, c] : report.perArea) {
    areas.push_back({area, ratio(c), percent(c)});
  }
  std::cout << table({"area", "filled", "ratio"}, areas);
  std::cout << "mandatory complete: " << (report.mandatoryComplete ? "yes" : "no")
            << "\n";
  return kOk;
}

int run_convert(const Context &ctx, const std::string &in,
                const std::string &format, const std::string &to,
                const std::string &out, bool json) {
  Bundle bundle = ctx.load();
  const ConversionTarget *target = bundle.target(to);
  if (target == nullptr) {
    throw UsageError("unknown conversion target '" + to + "'");
  }
  ParsedRecord parsed = read_record(in, format, bundle.schema);
  ConversionResult result = convert(parsed.record, target->crosswalk,
                                    bundle.schema, target->schema, target->format);
  write_output(out, result.document);
  if (json) {
    std::cerr << to_json(result.report);
  } else {
    std::cerr << "mapped " << result.report.mapped.size() << ", dropped "
              << result.report.dropped.size() << ", synthesized "
              << result.report.synthesized.size() << "\n";
    for (const auto &d : result.report.dropped) {
      std::cerr << "dropped " << d << "\n";
    }
  }
  return kOk;
}

int run_stats(const Context &ctx, bool json) {
  Bundle bundle = ctx.load();
  SchemaStats s = schema_stats(bundle.schema);
  if (json) {
    nlohmann::ordered_json doc;
    doc["topLevelCount"] = s.topLevelCount;
    doc["subSchemaCount"] = s.subSchemaCount;
    doc["subSchemaFieldCount"] = s.subSchemaFieldCount;
    for (Tier t : kAllTiers) {
      doc["perTier"][std::string(to_string(t))] = s.perTier[t];
    }
    for (const auto &[area, n] : s.perArea) {
      doc["perArea"][area] = n;
    }
    for (const auto &[p, n] : s.perProvenance) {
      doc["perProvenance"][std::string(to_string(p))] = n;
    }
    for (Tier t : kAllTiers) {
      doc["perTierInstantiated"][std::string(to_string(t))] = s.perTierInstantiated[t];
    }
    std::cout << doc.dump(2) << "\n";
    return kOk;
  }
  std::cout << "schema " << bundle.schema.id << " " << bundle.schema.version
            << ": " << s.topLevelCount << " elements, " << s.subSchemaCount
            << " sub-schemas with " << s.subSchemaFieldCount << " fields\n\n";
  std::vector<std::vector<std::string>> rows;
  for (Tier t : kAllTiers) {
    rows.push_back({std::string(to_string(t)), std::to_string(s.perTier[t]),
                    std::to_string(s.perTierInstantiated[t])});
  }
  std::cout << table({"tier", "declared", "instantiated"}, rows) << "\n";
  rows.clear();
  for (const auto &[area, n] : s.perArea) {
    rows.push_back({area, std::to_string(n)});
  }
  std::cout << table({"area", "elements"}, rows);
  return kOk;
}

int run_serve(const Context &ctx, const std::string &host, int port,
              const std::string &fixtures, const std::string &origin) {
  Bundle bundle = ctx.load();
  std::unique_ptr<Transport> transport;
  if (fixtures.empty()) {
    transport = std::make_unique<HttpTransport>();
  } else {
    transport = std::make_unique<FixtureTransport>(fixtures);
  }
  ServiceOptions options;
  options.allowOrigin = origin;
  Service service(bundle, *transport, options);
  Server server(service);
  int bound = 0;
  try {
    bound = server.bind(host, port);
  } catch (const Error &e) {
    throw IoError(e.what());
  }
  std::cerr << "serving " << bundle.schema.id << " on http://" << host << ":"
            << bound << (fixtures.empty() ? "" : " (fixture mode)") << "\n";
  server.serve();
  return kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Create, validate, convert and score research-software metadata"};
  app.require_subcommand(1);
  Context ctx;
  app.add_option("--schema", ctx.schemaPath,
                 "Schema-definition file (default: $ERSMETA_SCHEMA or the bundled schema)");
  app.add_option("--data", ctx.dataDir,
                 "Directory with targets, crosswalks and extraction mapping")
      ->capture_default_str();

  std::string url, out, fixtures, in, format, to, host = "127.0.0.1",
                                                  origin = "*";
  bool json = false, lax = false;
  int port = 8080;

  auto *extract_cmd = app.add_subcommand("extract", "Extract a record from a GitHub/GitLab repository");
  extract_cmd->add_option("--url", url, "Repository URL")->required();
  extract_cmd->add_option("--out", out, "Output file (default: standard output)");
  extract_cmd->add_option("--fixtures", fixtures, "Serve API responses from recorded fixtures");
  extract_cmd->add_flag("--json", json, "Print the extraction report as JSON");

  auto *validate_cmd = app.add_subcommand("validate", "Validate a record");
  validate_cmd->add_option("--in", in, "Record file, or - for standard input")->required();
  validate_cmd->add_option("--format", format, "json or turtle (default: by extension)")
      ->check(CLI::IsMember({"json", "turtle"}));
  validate_cmd->add_flag("--lax", lax, "Report undeclared elements as warnings");
  validate_cmd->add_flag("--json", json, "Print the report as JSON");

  auto *score_cmd = app.add_subcommand("score", "Completeness per tier and area");
  score_cmd->add_option("--in", in, "Record file, or - for standard input")->required();
  score_cmd->add_option("--format", format, "json or turtle (default: by extension)")
      ->check(CLI::IsMember({"json", "turtle"}));
  score_cmd->add_flag("--json", json, "Print the report as JSON");

  auto *convert_cmd = app.add_subcommand("convert", "Convert a record through a crosswalk");
  convert_cmd->add_option("--in", in, "Record file, or - for standard input")->required();
  convert_cmd->add_option("--format", format, "json or turtle (default: by extension)")
      ->check(CLI::IsMember({"json", "turtle"}));
  convert_cmd->add_option("--to", to, "codemeta or cff")->required();
  convert_cmd->add_option("--out", out, "Output file (default: standard output)");
  convert_cmd->add_flag("--json", json, "Print the conversion report as JSON");

  auto *stats_cmd = app.add_subcommand("stats", "Schema element counts");
  stats_cmd->add_flag("--json", json, "Print the counts as JSON");

  auto *serve_cmd = app.add_subcommand("serve", "Run the HTTP backend");
  serve_cmd->add_option("--port", port, "Port, 0 for any free port")->capture_default_str();
  serve_cmd->add_option("--host", host, "Listen address")->capture_default_str();
  serve_cmd->add_option("--fixtures", fixtures, "Serve forge API responses from recorded fixtures");
  serve_cmd->add_option("--allow-origin", origin, "CORS allowed origin")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*extract_cmd) {
      return run_extract(ctx, url, out, fixtures, json);
    }
    if (*validate_cmd) {
      return run_validate(ctx, in, format, lax, json);
    }
    if (*score_cmd) {
      return run_score(ctx, in, format, json);
    }
    if (*convert_cmd) {
      return run_convert(ctx, in, format, to, out, json);
    }
    if (*stats_cmd) {
      return run_stats(ctx, json);
    }
    return run_serve(ctx, host, port, fixtures, origin);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ConsistencyError &e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto &p : e.problems()) {
      std::cerr << "  " << p << "\n";
    }
    return kIo;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
}
