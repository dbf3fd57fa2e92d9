#include "ersmeta/crosswalk.hpp"
#include "ersmeta/forge.hpp"
#include "ersmeta/record_json.hpp"
#include "ersmeta/record_turtle.hpp"
#include "ersmeta/validator.hpp"

#include "fixtures.hpp"
#include "generators.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace ersmeta;
using ersmeta::support::schema;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("ersmeta-cli-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string quote(const std::string &s) {
  std::string q = "'";
  for (char c : s) {
    q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  }
  return q + "'";
}

Outcome cli(const std::vector<std::string> &args) {
  fs::path out = scratch() / "stdout.txt";
  fs::path err = scratch() / "stderr.txt";
  std::string cmd = quote(ERSMETA_CLI);
  for (const auto &a : args) {
    cmd += " " + quote(a);
  }
  cmd += " >" + quote(out.string()) + " 2>" + quote(err.string()) + " </dev/null";
  int status = std::system(cmd.c_str());
  Outcome r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = support::read_file(out);
  r.err = support::read_file(err);
  return r;
}

fs::path write(const std::string &name, const std::string &content) {
  fs::path p = scratch() / name;
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

MetadataRecord full_record() { return support::RecordGenerator(schema(), 7).full(); }

std::string fixtures() { return support::forge_fixtures().string(); }

} // namespace

TEST(Cli, ExtractFixtureUrlWritesGoldenRecord) {
  fs::path out = scratch() / "extracted.json";
  Outcome r = cli({"extract", "--url", "https://github.com/acme/grid-sim", "--fixtures", fixtures(),
               "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(support::read_file(out),
            support::read_file(support::golden("acme-grid-sim.record.json")));
  EXPECT_NE(r.err.find("extracted"), std::string::npos);
}

TEST(Cli, ExtractJsonReportMatchesLibrary) {
  Outcome r = cli({"extract", "--url", "https://github.com/acme/grid-sim", "--fixtures", fixtures(),
               "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  FixtureTransport t(support::forge_fixtures());
  Extraction x = extract("https://github.com/acme/grid-sim", t, schema(),
                         support::bundle().forgeMapping);
  EXPECT_EQ(r.out, to_json(x.record, schema()));
  EXPECT_EQ(r.err, to_json(x.report));
}

TEST(Cli, ExtractFailures) {
  Outcome noUrl = cli({"extract"});
  EXPECT_EQ(noUrl.code, 2);
  EXPECT_NE(noUrl.err.find("--url"), std::string::npos) << noUrl.err;

  EXPECT_EQ(cli({"extract", "--url", "https://bitbucket.org/x/y", "--fixtures", fixtures()}).code,
            2);
  EXPECT_EQ(cli({"extract", "--url", "https://github.com/acme/ghost", "--fixtures", fixtures()})
                .code,
            3);
  Outcome throttled =
      cli({"extract", "--url", "https://github.com/acme/throttled", "--fixtures", fixtures()});
  EXPECT_EQ(throttled.code, 3);
  EXPECT_NE(throttled.err.find("120"), std::string::npos) << throttled.err;

  EXPECT_EQ(cli({"extract", "--url", "https://github.com/acme/grid-sim", "--fixtures", fixtures(),
                 "--out", "/nonexistent-dir/x/record.json"})
                .code,
            3);
}

TEST(Cli, ValidateMissingNameExitsOneWithOneViolation) {
  MetadataRecord rec = full_record();
  rec.values.erase("name");
  fs::path in = write("no-name.json", to_json(rec, schema()));
  Outcome r = cli({"validate", "--in", in.string()});
  EXPECT_EQ(r.code, 1);
  std::size_t lines = 0;
  std::istringstream table(r.out);
  for (std::string line; std::getline(table, line);) {
    lines += line.rfind("violation ", 0) == 0 ? 1 : 0;
  }
  EXPECT_EQ(lines, 1u) << r.out;
  EXPECT_NE(r.out.find("not conformant: 1 violation"), std::string::npos) << r.out;
}

TEST(Cli, ValidateConformantRecordExitsZero) {
  fs::path json_in = write("full.json", to_json(full_record(), schema()));
  EXPECT_EQ(cli({"validate", "--in", json_in.string()}).code, 0);
  fs::path ttl_in = write("full.ttl", to_turtle(full_record(), schema()));
  Outcome ttl = cli({"validate", "--in", ttl_in.string()});
  EXPECT_EQ(ttl.code, 0) << ttl.err << ttl.out;
}

TEST(Cli, ValidateJsonMatchesLibrary) {
  support::RecordGenerator gen(schema(), 55);
  for (int i = 0; i < 5; ++i) {
    MetadataRecord rec = gen.random(0.5);
    fs::path in = write("random.json", to_json(rec, schema()));
    Outcome strict = cli({"validate", "--in", in.string(), "--json"});
    ValidationReport expected = validate(rec, schema());
    EXPECT_EQ(strict.out, to_json(expected));
    EXPECT_EQ(strict.code, expected.conformant ? 0 : 1);
    Outcome lax = cli({"validate", "--in", in.string(), "--json", "--lax"});
    EXPECT_EQ(lax.out, to_json(validate(rec, schema(), {Strictness::lax, {}})));
  }
}

TEST(Cli, ValidateUnreadableInputs) {
  EXPECT_EQ(cli({"validate", "--in", (scratch() / "absent.json").string()}).code, 3);
  fs::path junk = write("junk.json", "{\"name\": ");
  EXPECT_EQ(cli({"validate", "--in", junk.string()}).code, 3);
  EXPECT_EQ(cli({"validate", "--in", junk.string(), "--format", "yaml"}).code, 2);
}

TEST(Cli, ScoreMandatoryRowIsFull) {
  MetadataRecord rec = support::RecordGenerator(schema(), 3).conformant(0.0);
  fs::path in = write("mandatory.json", to_json(rec, schema()));
  Outcome r = cli({"score", "--in", in.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  CompletenessReport c = completeness(rec, schema());
  const FillCount &m = c.perTier.at(Tier::mandatory);
  EXPECT_NE(r.out.find("mandatory"), std::string::npos);
  EXPECT_EQ(m.filled, m.total);
  EXPECT_NE(r.out.find(std::to_string(m.total) + " "), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("mandatory complete: yes"), std::string::npos) << r.out;

  Outcome j = cli({"score", "--in", in.string(), "--json"});
  EXPECT_EQ(j.out, to_json(c));
}

TEST(Cli, ConvertToCffWritesFamilyNames) {
  MetadataRecord rec = full_record();
  ValueMap ada;
  ada.set("givenName", {Value::text("Ada")});
  ada.set("familyName", {Value::text("Lovelace")});
  rec.values.set("author", {Value::nested("person", ada)});
  fs::path in = write("with-author.json", to_json(rec, schema()));
  fs::path out = scratch() / "CITATION.cff";
  Outcome r = cli({"convert", "--in", in.string(), "--to", "cff", "--out", out.string(), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::string cff = support::read_file(out);
  EXPECT_NE(cff.find("family-names: Lovelace"), std::string::npos) << cff;

  const ConversionTarget &t = support::target("cff");
  ConversionResult expected = convert(rec, t.crosswalk, schema(), t.schema, t.format);
  EXPECT_EQ(cff, expected.document);
  EXPECT_EQ(r.err, to_json(expected.report));
}

TEST(Cli, ConvertUnknownTargetIsUsageError) {
  fs::path in = write("full2.json", to_json(full_record(), schema()));
  EXPECT_EQ(cli({"convert", "--in", in.string(), "--to", "bibtex"}).code, 2);
}

TEST(Cli, StatsJsonAndEnvironmentSchema) {
  Outcome r = cli({"stats", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["topLevelCount"], schema().elements.size());

  Outcome bad = cli({"--schema", (scratch() / "nope.schema.json").string(), "stats"});
  EXPECT_EQ(bad.code, 3);

  std::string env = "ERSMETA_SCHEMA=" + quote((scratch() / "nope.schema.json").string()) + " ";
  int status = std::system((env + quote(ERSMETA_CLI) + " stats >/dev/null 2>&1").c_str());
  EXPECT_EQ(WEXITSTATUS(status), 3);
}

TEST(Cli, UnknownSubcommandIsUsageError) {
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"validate", "--bogus"}).code, 2);
}
