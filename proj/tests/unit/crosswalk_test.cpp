#include "ersmeta/crosswalk.hpp"
#include "ersmeta/error.hpp"

#include "fixtures.hpp"
#include "generators.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <set>

using namespace ersmeta;
using ersmeta::support::schema;
using ersmeta::support::target;

namespace {

MetadataRecord record_with(std::initializer_list<std::pair<const char *, Value>> values) {
  MetadataRecord r;
  r.schemaId = schema().id;
  for (const auto &[k, v] : values) {
    r.values.add(k, v);
  }
  return r;
}

ConversionResult to_target(const MetadataRecord &r, const char *name) {
  const ConversionTarget &t = target(name);
  return convert(r, t.crosswalk, schema(), t.schema, t.format);
}

Crosswalk load_rules(const char *target_name, const nlohmann::json &rules) {
  nlohmann::json doc = {{"source", "ersmeta"}, {"target", target_name}, {"rules", rules}};
  return load_crosswalk(doc.dump(), schema(), target(target_name).schema);
}

bool is_plain(TransformKind k) {
  return k == TransformKind::identity || k == TransformKind::rename;
}

/// Source elements with identity/rename rules in both directions.
std::vector<std::string> bidirectional_core(const ConversionTarget &t) {
  std::vector<std::string> core;
  if (!t.reverse) {
    return core;
  }
  for (const auto &el : schema().elements) {
    const MappingRule *fwd = t.crosswalk.rule_for(el.id);
    if (fwd == nullptr || !is_plain(fwd->transform)) {
      continue;
    }
    const MappingRule *back = t.reverse->rule_for(fwd->targetPath);
    if (back != nullptr && is_plain(back->transform) && back->targetPath == el.id) {
      core.push_back(el.id);
    }
  }
  return core;
}

} // namespace

TEST(Crosswalk, NameMapsToCodemetaName) {
  ConversionResult res = to_target(record_with({{"name", Value::text("demo")}}), "codemeta");
  auto doc = nlohmann::json::parse(res.document);
  EXPECT_EQ(doc["name"], "demo");
  EXPECT_EQ(doc["@type"], "SoftwareSourceCode");
  EXPECT_NE(std::find(res.report.mapped.begin(), res.report.mapped.end(),
                      std::pair<std::string, std::string>{"name", "name"}),
            res.report.mapped.end());
}

TEST(Crosswalk, AuthorBecomesCffAuthorsEntry) {
  ValueMap ada;
  ada.set("givenName", {Value::text("Ada")});
  ada.set("familyName", {Value::text("Lovelace")});
  ConversionResult res =
      to_target(record_with({{"author", Value::nested("person", ada)}}), "cff");
  EXPECT_NE(res.document.find("authors:\n"), std::string::npos) << res.document;
  EXPECT_NE(res.document.find("given-names: Ada"), std::string::npos) << res.document;
  EXPECT_NE(res.document.find("family-names: Lovelace"), std::string::npos)
      << res.document;
  EXPECT_EQ(res.document.rfind("cff-version: \"1.2.0\"\n", 0), 0u) << res.document;
}

TEST(Crosswalk, EnergyComponentIsDroppedForCodemeta) {
  const Term &t = schema().vocabulary("energyComponents")->terms.front();
  ConversionResult res = to_target(
      record_with({{"name", Value::text("demo")},
                   {"energyComponent", Value::term(t.label, t.iri)}}),
      "codemeta");
  EXPECT_EQ(res.document.find("energyComponent"), std::string::npos);
  EXPECT_EQ(res.report.dropped, std::vector<std::string>{"energyComponent"});
}

TEST(Crosswalk, BundledCodemetaMappingHasIdentityForName) {
  const MappingRule *r = target("codemeta").crosswalk.rule_for("name");
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->transform, TransformKind::identity);
}

TEST(Crosswalk, DanglingSourcePathNamesTheRule) {
  try {
    load_rules("codemeta", {{{"sourcePath", "ghost"}, {"targetPath", "name"},
                             {"transform", "identity"}}});
    FAIL() << "expected ConfigurationError";
  } catch (const ConfigurationError &e) {
    EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos) << e.what();
  }
}

TEST(Crosswalk, DanglingTargetPathIsRejected) {
  EXPECT_THROW(load_rules("codemeta", {{{"sourcePath", "name"},
                                        {"targetPath", "ghost"},
                                        {"transform", "identity"}}}),
               ConfigurationError);
  EXPECT_THROW(load_rules("cff", {{{"sourcePath", "author.ghost"},
                                   {"targetPath", "authors.alias"},
                                   {"transform", "rename"}}}),
               ConfigurationError);
}

TEST(Crosswalk, UnknownTransformAndMalformedFile) {
  EXPECT_THROW(load_rules("codemeta", {{{"sourcePath", "name"},
                                        {"targetPath", "name"},
                                        {"transform", "teleport"}}}),
               ConfigurationError);
  EXPECT_THROW(load_crosswalk("{not json", schema(), target("codemeta").schema),
               ParseError);
  EXPECT_THROW(load_crosswalk(R"({"source":"ersmeta","target":"codemeta"})", schema(),
                              target("codemeta").schema),
               ParseError);
}

TEST(Crosswalk, SchemaIdMismatchIsAConfigurationError) {
  nlohmann::json doc = {{"source", "other"}, {"target", "codemeta"}, {"rules", nlohmann::json::array()}};
  EXPECT_THROW(load_crosswalk(doc.dump(), schema(), target("codemeta").schema),
               ConfigurationError);
}

TEST(Crosswalk, DuplicateSourceRuleIsRejected) {
  nlohmann::json rule = {{"sourcePath", "name"}, {"targetPath", "name"}, {"transform", "identity"}};
  EXPECT_THROW(load_rules("codemeta", {rule, rule}), ConfigurationError);
}

TEST(Crosswalk, SharedTargetWithoutMergeIsRejected) {
  EXPECT_THROW(load_rules("codemeta", {{{"sourcePath", "name"}, {"targetPath", "name"},
                                        {"transform", "identity"}},
                                       {{"sourcePath", "description"},
                                        {"targetPath", "name"},
                                        {"transform", "rename"}}}),
               ConfigurationError);
}

TEST(Crosswalk, EmptyRulesDropEverything) {
  Crosswalk cw = load_rules("codemeta", nlohmann::json::array());
  EXPECT_TRUE(cw.rules.empty());
  MetadataRecord r = support::RecordGenerator(schema(), 4).full();
  ConversionReport report;
  MetadataRecord out = apply_crosswalk(r, cw, schema(), target("codemeta").schema, report);
  EXPECT_TRUE(out.values.empty());
  EXPECT_TRUE(report.mapped.empty());
  EXPECT_EQ(report.dropped.size(), r.values.size());
}

TEST(Crosswalk, ConstantRulesAreSynthesized) {
  ConversionResult res = to_target(record_with({{"name", Value::text("demo")}}), "cff");
  std::set<std::string> synth(res.report.synthesized.begin(), res.report.synthesized.end());
  EXPECT_TRUE(synth.count("cff-version"));
  EXPECT_TRUE(synth.count("message"));
  EXPECT_NE(res.document.find("title: demo\n"), std::string::npos) << res.document;
}

TEST(Crosswalk, WrongSourceSchemaThrows) {
  MetadataRecord r = record_with({{"name", Value::text("x")}});
  r.schemaId = "codemeta";
  ConversionReport report;
  EXPECT_THROW(apply_crosswalk(r, target("codemeta").crosswalk, schema(),
                               target("codemeta").schema, report),
               Error);
}

TEST(Crosswalk, PersonSplitAndJoin) {
  nlohmann::json split = {{{"sourcePath", "name"}, {"targetPath", "authors"},
                           {"transform", "personSplit"}}};
  Crosswalk cw = load_rules("cff", split);
  ConversionReport report;
  MetadataRecord out = apply_crosswalk(record_with({{"name", Value::text("Grace Brewster Hopper")}}),
                                       cw, schema(), target("cff").schema, report);
  const auto *authors = out.values.find("authors");
  ASSERT_NE(authors, nullptr);
  const auto *person = authors->front().get_if<value::Nested>();
  ASSERT_NE(person, nullptr);
  EXPECT_EQ(person->fields.find("given-names")->front(), Value::text("Grace Brewster"));
  EXPECT_EQ(person->fields.find("family-names")->front(), Value::text("Hopper"));

  nlohmann::json join = {{{"sourcePath", "author"}, {"targetPath", "title"},
                          {"transform", "personJoin"}}};
  Crosswalk jw = load_rules("cff", join);
  ValueMap ada;
  ada.set("givenName", {Value::text("Ada")});
  ada.set("familyName", {Value::text("Lovelace")});
  ConversionReport r2;
  MetadataRecord joined = apply_crosswalk(record_with({{"author", Value::nested("person", ada)}}),
                                          jw, schema(), target("cff").schema, r2);
  EXPECT_EQ(joined.values.find("title")->front(), Value::text("Ada Lovelace"));
}

TEST(Crosswalk, SplitPersonName) {
  using P = std::pair<std::string, std::string>;
  EXPECT_EQ(split_person_name("Ada Lovelace"), (P{"Ada", "Lovelace"}));
  EXPECT_EQ(split_person_name("  Grace Brewster  Hopper "), (P{"Grace Brewster", "Hopper"}));
  EXPECT_EQ(split_person_name("Plato"), (P{"", "Plato"}));
  EXPECT_EQ(split_person_name("Ludwig van Beethoven"), (P{"Ludwig van", "Beethoven"}));
  EXPECT_EQ(split_person_name(""), (P{"", ""}));
}

TEST(Crosswalk, TransformAndFormatNames) {
  for (TransformKind k : {TransformKind::identity, TransformKind::rename,
                          TransformKind::personSplit, TransformKind::personJoin,
                          TransformKind::listJoin, TransformKind::constant}) {
    EXPECT_EQ(parse_transform(to_string(k)), k);
  }
  EXPECT_EQ(parse_target_format("cff"), TargetFormat::cffYamlLike);
  EXPECT_EQ(parse_target_format("codemeta-json"), TargetFormat::codemetaJson);
  EXPECT_FALSE(parse_target_format("bibtex").has_value());
}

TEST(CrosswalkProperty, MappedPlusDroppedCoversFilledElements) {
  support::RecordGenerator gen(schema(), 17);
  for (int i = 0; i < 200; ++i) {
    MetadataRecord r = gen.random(0.5);
    for (const char *name : {"codemeta", "cff"}) {
      ConversionResult res = to_target(r, name);
      std::set<std::string> covered;
      for (const auto &[src, dst] : res.report.mapped) {
        covered.insert(src);
      }
      covered.insert(res.report.dropped.begin(), res.report.dropped.end());
      std::set<std::string> filled;
      for (const auto &[key, list] : r.values.entries()) {
        filled.insert(key);
      }
      EXPECT_EQ(covered, filled) << name;
      EXPECT_EQ(res.report.mapped.size() + res.report.dropped.size(), filled.size())
          << name;
    }
  }
}

TEST(CrosswalkProperty, OutputIsDeterministicAndWellFormed) {
  support::RecordGenerator gen(schema(), 23);
  for (int i = 0; i < 50; ++i) {
    MetadataRecord r = gen.random(0.6);
    ConversionResult a = to_target(r, "codemeta");
    EXPECT_EQ(a.document, to_target(r, "codemeta").document);
    EXPECT_TRUE(nlohmann::json::accept(a.document));
    EXPECT_EQ(to_target(r, "cff").document, to_target(r, "cff").document);
  }
}

TEST(CrosswalkProperty, BidirectionalCoreRoundTrips) {
  for (const char *name : {"codemeta"}) {
    const ConversionTarget &t = target(name);
    ASSERT_TRUE(t.reverse.has_value()) << name;
    std::vector<std::string> core = bidirectional_core(t);
    ASSERT_GE(core.size(), 5u) << name;
    support::RecordGenerator gen(schema(), 31);
    for (int i = 0; i < 200; ++i) {
      MetadataRecord full = gen.random(0.8);
      MetadataRecord r;
      r.schemaId = schema().id;
      for (const auto &id : core) {
        if (const auto *list = full.values.find(id)) {
          r.values.set(id, *list);
        }
      }
      ConversionReport fwd;
      MetadataRecord there = apply_crosswalk(r, t.crosswalk, schema(), t.schema, fwd);
      ConversionReport back;
      MetadataRecord again = apply_crosswalk(there, *t.reverse, t.schema, schema(), back);
      EXPECT_EQ(again, r) << name << " record " << i;
      EXPECT_TRUE(fwd.dropped.empty());
      EXPECT_TRUE(back.dropped.empty());
    }
  }
}
