// Acceptance gate: one PASS/FAIL line per primary criterion, exit status 1 if
// any fails. Each check carries its own time budget.

#include "ersmeta/crosswalk.hpp"
#include "ersmeta/forge.hpp"
#include "ersmeta/record_json.hpp"
#include "ersmeta/record_turtle.hpp"
#include "ersmeta/service.hpp"
#include "ersmeta/validator.hpp"

#include "fixtures.hpp"
#include "generators.hpp"

#include <json.hpp>

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace ersmeta;
using ersmeta::support::schema;
using json = nlohmann::json;

namespace {

struct Check {
  std::string name;
  std::chrono::milliseconds budget;
  std::function<std::string()> run; // empty string means success
};

std::string schema_structure() {
  json manifest = json::parse(
      support::read_file(support::data_dir() / "schema" / "ersmeta.manifest.json"));
  SchemaStats s = schema_stats(schema());
  std::ostringstream why;
  auto expect = [&](const std::string &what, std::size_t got, std::size_t want) {
    if (got != want && why.str().empty()) {
      why << what << " " << got << " != " << want;
    }
  };
  expect("topLevelCount", s.topLevelCount, manifest["topLevelCount"]);
  expect("subSchemaCount", s.subSchemaCount, manifest["subSchemaCount"]);
  expect("subSchemaFieldCount", s.subSchemaFieldCount, manifest["subSchemaFieldCount"]);
  for (Tier t : kAllTiers) {
    std::string key(to_string(t));
    expect("perTier." + key, s.perTier[t], manifest["perTier"][key]);
    expect("perTierInstantiated." + key, s.perTierInstantiated[t],
           manifest["perTierInstantiated"][key]);
  }
  expect("areas", s.perArea.size(), manifest["areas"].size());
  expect("areas", s.perArea.size(), 10);
  for (const auto &[area, n] : s.perArea) {
    expect("perArea." + area, n, manifest["perArea"].value(area, std::size_t{0}));
  }
  for (const auto &[p, n] : s.perProvenance) {
    std::string key(to_string(p));
    expect("perProvenance." + key, n, manifest["perProvenance"].value(key, std::size_t{0}));
  }
  return why.str();
}

std::string single_removal() {
  std::size_t mandatory = 0;
  for (std::uint32_t seed = 1; seed <= 10; ++seed) {
    MetadataRecord base = support::RecordGenerator(schema(), seed).full();
    if (!validate(base, schema()).conformant) {
      return "generated base record is not conformant";
    }
    for (const auto &el : schema().elements) {
      if (el.tier != Tier::mandatory) {
        continue;
      }
      ++mandatory;
      MetadataRecord r = base;
      auto saved = *r.values.find(el.id);
      r.values.erase(el.id);
      ValidationReport rep = validate(r, schema());
      if (rep.findings.size() != 1 || rep.count(Severity::violation) != 1 ||
          rep.findings[0].constraint != Constraint::missingMandatory ||
          rep.findings[0].elementPath != el.id || rep.conformant) {
        return "removing " + el.id + " gave " + std::to_string(rep.findings.size()) +
               " finding(s)";
      }
      r.values.set(el.id, saved);
      if (!validate(r, schema()).conformant) {
        return "restoring " + el.id + " did not restore conformance";
      }
    }
  }
  return mandatory == 0 ? "schema has no mandatory elements" : "";
}

std::string dual_round_trip() {
  support::RecordGenerator gen(schema(), 2024);
  for (int i = 0; i < 500; ++i) {
    MetadataRecord r = i % 5 == 0 ? gen.full() : gen.random(0.1 + 0.2 * (i % 5));
    MetadataRecord viaJson = from_json(to_json(r, schema()), schema()).record;
    if (!(viaJson == r)) {
      return "JSON round trip differs at record " + std::to_string(i);
    }
    MetadataRecord viaTurtle = from_turtle(to_turtle(r, schema()), schema()).record;
    if (!(viaTurtle == r)) {
      return "Turtle round trip differs at record " + std::to_string(i);
    }
  }
  return "";
}

std::string crosswalk_accounting() {
  support::RecordGenerator gen(schema(), 77);
  for (int i = 0; i < 200; ++i) {
    MetadataRecord r = gen.random(0.5);
    std::set<std::string> filled;
    for (const auto &[key, list] : r.values.entries()) {
      filled.insert(key);
    }
    for (const auto &t : support::bundle().targets) {
      ConversionReport rep;
      apply_crosswalk(r, t.crosswalk, schema(), t.schema, rep);
      std::set<std::string> covered;
      for (const auto &[src, dst] : rep.mapped) {
        covered.insert(src);
      }
      covered.insert(rep.dropped.begin(), rep.dropped.end());
      if (rep.mapped.size() + rep.dropped.size() != filled.size() || covered != filled) {
        return "accounting mismatch for " + std::string(to_string(t.format)) + " at record " +
               std::to_string(i);
      }
      if (!t.reverse) {
        continue;
      }
      MetadataRecord core;
      core.schemaId = r.schemaId;
      for (const auto &[key, list] : r.values.entries()) {
        const MappingRule *fwd = t.crosswalk.rule_for(key);
        if (fwd == nullptr || (fwd->transform != TransformKind::identity &&
                               fwd->transform != TransformKind::rename)) {
          continue;
        }
        const MappingRule *back = t.reverse->rule_for(fwd->targetPath);
        if (back != nullptr && back->targetPath == key &&
            (back->transform == TransformKind::identity ||
             back->transform == TransformKind::rename)) {
          core.values.set(key, list);
        }
      }
      ConversionReport there;
      ConversionReport back;
      MetadataRecord out = apply_crosswalk(core, t.crosswalk, schema(), t.schema, there);
      MetadataRecord again = apply_crosswalk(out, *t.reverse, t.schema, schema(), back);
      if (!(again == core)) {
        return "bidirectional core differs for " + std::string(to_string(t.format)) +
               " at record " + std::to_string(i);
      }
    }
  }
  return "";
}

std::string extraction_golden() {
  FixtureTransport transport(support::forge_fixtures());
  FetchOptions options;
  options.token = "fixture-token";
  Extraction x = extract("https://github.com/acme/grid-sim", transport, schema(),
                         support::bundle().forgeMapping, options);
  if (to_json(x.record, schema()) !=
      support::read_file(support::golden("acme-grid-sim.record.json"))) {
    return "record differs from golden file";
  }
  std::set<std::string> attributed;
  for (const auto &[element, source] : x.report.extracted) {
    attributed.insert(element);
  }
  for (const auto &[key, list] : x.record.values.entries()) {
    if (!attributed.count(key)) {
      return "element " + key + " lacks attribution";
    }
  }
  return "";
}

std::string completeness_oracle() {
  // Tier table read straight from the schema file, bypassing the loader.
  json raw = json::parse(
      support::read_file(support::data_dir() / "schema" / "ersmeta.schema.json"));
  std::map<std::string, std::string> tierOf;
  std::map<std::string, std::size_t> totals;
  for (const auto &el : raw["elements"]) {
    tierOf[el["id"]] = el["tier"];
    ++totals[el["tier"].get<std::string>()];
  }
  support::RecordGenerator gen(schema(), 4242);
  for (int i = 0; i < 100; ++i) {
    MetadataRecord r = gen.random(0.02 * i);
    json doc = json::parse(to_json(r, schema()));
    std::map<std::string, std::size_t> filled;
    for (const auto &[key, value] : doc.items()) {
      auto it = tierOf.find(key);
      if (it != tierOf.end()) {
        ++filled[it->second];
      }
    }
    CompletenessReport c = completeness(r, schema());
    for (Tier t : kAllTiers) {
      std::string key(to_string(t));
      const FillCount &fc = c.perTier.at(t);
      if (fc.filled != filled[key] || fc.total != totals[key]) {
        return "tier " + key + " mismatch at record " + std::to_string(i);
      }
    }
    bool complete = filled["mandatory"] == totals["mandatory"];
    if (c.mandatoryComplete != complete) {
      return "mandatoryComplete mismatch at record " + std::to_string(i);
    }
  }
  return "";
}

std::string service_parity() {
  FixtureTransport transport(support::forge_fixtures());
  ServiceOptions options;
  options.fetch.token = "fixture-token";
  options.fetch.maxRetryWait = std::chrono::seconds(0);
  Service service(support::bundle(), transport, options);
  const SchemaDefinition &s = schema();

  auto expect = [](const Response &r, const std::string &want, const std::string &what) {
    if (r.status != 200) {
      return what + " answered " + std::to_string(r.status);
    }
    return r.body == want ? std::string{} : what + " body differs";
  };
  std::string why = expect(service.handle("GET", "/api/schema", ""), serialize_schema(s),
                           "GET /api/schema");
  if (!why.empty()) {
    return why;
  }

  FixtureTransport direct(support::forge_fixtures());
  for (const char *url : {"https://github.com/acme/grid-sim", "https://github.com/acme/no-release",
                          "https://gitlab.com/energy/grids/flowtool"}) {
    Extraction x = extract(url, direct, s, support::bundle().forgeMapping, options.fetch);
    nlohmann::ordered_json doc;
    doc["record"] = record_to_document(x.record, s);
    doc["extractionReport"] = report_to_document(x.report);
    why = expect(service.handle("POST", "/api/extract", json{{"url", url}}.dump()),
                 doc.dump(2) + "\n", std::string("extract ") + url);
    if (!why.empty()) {
      return why;
    }
  }

  support::RecordGenerator gen(s, 31337);
  for (int i = 0; i < 50; ++i) {
    MetadataRecord r = gen.random(0.1 + 0.018 * i);
    json body = {{"record", json::parse(to_json(r, s))}};
    why = expect(service.handle("POST", "/api/validate", body.dump()),
                 to_json(validate(r, s, {Strictness::lax, {}})), "validate");
    if (why.empty()) {
      why = expect(service.handle("POST", "/api/completeness", body.dump()),
                   to_json(completeness(r, s)), "completeness");
    }
    if (why.empty()) {
      why = expect(service.handle("POST", "/api/export", body.dump()), to_json(r, s), "export");
    }
    for (const auto &t : support::bundle().targets) {
      if (!why.empty()) {
        break;
      }
      body["target"] = std::string(to_string(t.format));
      ConversionResult res = convert(r, t.crosswalk, s, t.schema, t.format);
      nlohmann::ordered_json doc;
      doc["document"] = res.document;
      doc["conversionReport"] = nlohmann::ordered_json::parse(to_json(res.report));
      why = expect(service.handle("POST", "/api/convert", body.dump()), doc.dump(2) + "\n",
                   "convert " + std::string(to_string(t.format)));
    }
    if (!why.empty()) {
      return why + " at record " + std::to_string(i);
    }
  }
  return "";
}

} // namespace

int main() {
  using std::chrono::milliseconds;
  const std::vector<Check> checks = {
      {"schema-structure (desk-scale manifest)", milliseconds(1000), schema_structure},
      {"validator-single-removal", milliseconds(5000), single_removal},
      {"dual-format-round-trip x500", milliseconds(30000), dual_round_trip},
      {"crosswalk-accounting x200", milliseconds(10000), crosswalk_accounting},
      {"extraction-golden", milliseconds(1000), extraction_golden},
      {"completeness-oracle x100", milliseconds(5000), completeness_oracle},
      {"service-parity", milliseconds(10000), service_parity},
  };
  // Loading the bundle is shared setup, not part of any budget.
  (void)support::bundle();

  int failures = 0;
  for (const auto &check : checks) {
    auto start = std::chrono::steady_clock::now();
    std::string why;
    try {
      why = check.run();
    } catch (const std::exception &e) {
      why = std::string("threw: ") + e.what();
    }
    auto took = std::chrono::duration_cast<milliseconds>(std::chrono::steady_clock::now() - start);
    if (why.empty() && took > check.budget) {
      why = "over time budget";
    }
    bool ok = why.empty();
    failures += ok ? 0 : 1;
    std::cout << (ok ? "PASS " : "FAIL ") << check.name << " (" << took.count() << " ms, budget "
              << check.budget.count() << " ms)";
    if (!ok) {
      std::cout << ": " << why;
    }
    std::cout << "\n";
  }
  return failures == 0 ? 0 : 1;
}
