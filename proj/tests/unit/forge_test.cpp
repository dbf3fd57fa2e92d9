#include "ersmeta/error.hpp"
#include "ersmeta/forge.hpp"
#include "ersmeta/record_json.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <deque>
#include <future>
#include <mutex>
#include <set>

using namespace ersmeta;
using ersmeta::support::schema;

namespace {

const ForgeMapping &mapping() { return support::bundle().forgeMapping; }

FetchOptions quick() {
  FetchOptions o;
  o.backoff = std::chrono::milliseconds(0);
  o.maxRetryWait = std::chrono::seconds(0);
  o.token = "fixture-token";
  return o;
}

/// Fixture transport that counts calls and can be told to misbehave per URL.
class ScriptedTransport : public Transport {
public:
  explicit ScriptedTransport(std::filesystem::path root = support::forge_fixtures())
      : fixtures_(std::move(root)) {}

  void script(const std::string &url_suffix, std::deque<HttpResponse> responses) {
    std::lock_guard<std::mutex> lock(mutex_);
    scripts_.emplace_back(url_suffix, std::move(responses));
  }

  void fail_next(const std::string &url_suffix, int times) {
    std::lock_guard<std::mutex> lock(mutex_);
    failures_.emplace_back(url_suffix, times);
  }

  HttpResponse get(const std::string &url, const HttpHeaders &headers) override {
    ++calls;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      seen_headers_ = headers;
      urls_.push_back(url);
      for (auto &[suffix, times] : failures_) {
        if (ends_with(url, suffix) && times > 0) {
          --times;
          throw TransportError("connection reset");
        }
      }
      for (auto &[suffix, queue] : scripts_) {
        if (ends_with(url, suffix) && !queue.empty()) {
          HttpResponse r = queue.front();
          queue.pop_front();
          return r;
        }
      }
    }
    return fixtures_.get(url, headers);
  }

  std::size_t count_for(const std::string &suffix) const {
    std::lock_guard<std::mutex> lock(mutex_);
    return static_cast<std::size_t>(std::count_if(
        urls_.begin(), urls_.end(), [&](const std::string &u) { return ends_with(u, suffix); }));
  }

  HttpHeaders last_headers() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return seen_headers_;
  }

  std::atomic<int> calls{0};

private:
  static bool ends_with(const std::string &s, const std::string &suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
  }

  FixtureTransport fixtures_;
  mutable std::mutex mutex_;
  std::vector<std::pair<std::string, std::deque<HttpResponse>>> scripts_;
  std::vector<std::pair<std::string, int>> failures_;
  std::vector<std::string> urls_;
  HttpHeaders seen_headers_;
};

HttpResponse status(int code, std::map<std::string, std::string> headers = {}) {
  return {code, "", std::move(headers)};
}

ForgeRef grid_sim() { return parse_repo_url("https://github.com/acme/grid-sim"); }

} // namespace

TEST(RepoUrl, GithubExample) {
  EXPECT_EQ(parse_repo_url("https://github.com/acme/grid-sim"),
            (ForgeRef{Forge::github, "github.com", "acme", "grid-sim"}));
}

TEST(RepoUrl, GitlabNestedGroupsFoldIntoOwner) {
  EXPECT_EQ(parse_repo_url("https://gitlab.com/a/b/c"),
            (ForgeRef{Forge::gitlab, "gitlab.com", "a/b", "c"}));
}

TEST(RepoUrl, BitbucketIsUnsupported) {
  EXPECT_THROW(parse_repo_url("https://bitbucket.org/x/y"), UnsupportedForgeError);
}

TEST(RepoUrl, SuffixesAreStripped) {
  ForgeRef expected{Forge::github, "github.com", "acme", "grid-sim"};
  for (const char *url : {"https://github.com/acme/grid-sim.git",
                          "https://github.com/acme/grid-sim/",
                          "https://github.com/acme/grid-sim/tree/main/src",
                          "https://github.com/acme/grid-sim/blob/main/README.md",
                          "http://github.com/acme/grid-sim"}) {
    EXPECT_EQ(parse_repo_url(url), expected) << url;
  }
  EXPECT_EQ(parse_repo_url("https://gitlab.com/energy/grids/flowtool/-/tree/main"),
            (ForgeRef{Forge::gitlab, "gitlab.com", "energy/grids", "flowtool"}));
}

TEST(RepoUrl, SelfHostedGitlab) {
  EXPECT_EQ(parse_repo_url("https://gitlab.example.org/team/tool").forge, Forge::gitlab);
  EXPECT_EQ(parse_repo_url("https://code.lab.org/team/tool", {"code.lab.org"}).host,
            "code.lab.org");
  EXPECT_THROW(parse_repo_url("https://code.lab.org/team/tool"), UnsupportedForgeError);
}

TEST(RepoUrl, MalformedUrls) {
  for (const char *url : {"", "github.com", "https://github.com/acme",
                          "https://github.com/", "ftp://github.com/a/b",
                          "not a url at all"}) {
    EXPECT_THROW(parse_repo_url(url), Error) << url;
  }
  EXPECT_THROW(parse_repo_url("https://github.com/acme"), MalformedUrlError);
}

TEST(FetchRaw, GridSimFixture) {
  ScriptedTransport t;
  RawForgeData raw = fetch_raw(grid_sim(), t, quick());
  EXPECT_EQ(raw.topics, (std::vector<std::string>{"energy", "simulation"}));
  EXPECT_TRUE(raw.licenseInfo.has_value());
  EXPECT_TRUE(raw.latestRelease.has_value());
  EXPECT_EQ(raw.contributors.size(), 2u);
  EXPECT_TRUE(raw.absent.empty());
  EXPECT_EQ(raw.repoInfo["name"], "grid-sim");
}

TEST(FetchRaw, NoReleaseIsToleratedAndNoted) {
  ScriptedTransport t;
  RawForgeData raw = fetch_raw(parse_repo_url("https://github.com/acme/no-release"), t, quick());
  EXPECT_FALSE(raw.latestRelease.has_value());
  std::set<std::string> absent(raw.absent.begin(), raw.absent.end());
  EXPECT_TRUE(absent.count("latestRelease"));
  EXPECT_FALSE(raw.combined().contains("latestRelease"));
}

TEST(FetchRaw, MissingRepoIsNotFound) {
  ScriptedTransport t;
  EXPECT_THROW(fetch_raw(parse_repo_url("https://github.com/acme/ghost"), t, quick()),
               NotFoundError);
}

TEST(FetchRaw, RateLimitSurfacesRetryAfter) {
  ScriptedTransport t;
  try {
    fetch_raw(parse_repo_url("https://github.com/acme/throttled"), t, quick());
    FAIL() << "expected RateLimitError";
  } catch (const RateLimitError &e) {
    EXPECT_EQ(e.retry_after(), 120);
  }
}

TEST(FetchRaw, ShortRateLimitIsRetriedOnce) {
  ScriptedTransport t;
  t.script("/repos/acme/grid-sim", {status(429, {{"retry-after", "0"}})});
  RawForgeData raw = fetch_raw(grid_sim(), t, quick());
  EXPECT_EQ(raw.repoInfo["name"], "grid-sim");
  EXPECT_EQ(t.count_for("/repos/acme/grid-sim"), 2u);
}

TEST(FetchRaw, SecondRateLimitIsFinal) {
  ScriptedTransport t;
  t.script("/repos/acme/grid-sim", {status(429, {{"retry-after", "0"}}),
                                    status(429, {{"retry-after", "0"}})});
  EXPECT_THROW(fetch_raw(grid_sim(), t, quick()), RateLimitError);
}

TEST(FetchRaw, ExhaustedQuotaOn403IsARateLimit) {
  ScriptedTransport t;
  t.script("/repos/acme/grid-sim",
           {status(403, {{"x-ratelimit-remaining", "0"}, {"retry-after", "60"}})});
  try {
    fetch_raw(grid_sim(), t, quick());
    FAIL() << "expected RateLimitError";
  } catch (const RateLimitError &e) {
    EXPECT_EQ(e.retry_after(), 60);
  }
}

TEST(FetchRaw, AuthFailuresAreNotRetried) {
  for (int code : {401, 403}) {
    ScriptedTransport t;
    t.script("/repos/acme/grid-sim", {status(code)});
    EXPECT_THROW(fetch_raw(grid_sim(), t, quick()), AuthError) << code;
    EXPECT_EQ(t.count_for("/repos/acme/grid-sim"), 1u);
  }
}

TEST(FetchRaw, ServerErrorIsRetriedOnce) {
  ScriptedTransport t;
  t.script("/repos/acme/grid-sim", {status(503)});
  EXPECT_NO_THROW(fetch_raw(grid_sim(), t, quick()));
  EXPECT_EQ(t.count_for("/repos/acme/grid-sim"), 2u);

  ScriptedTransport t2;
  t2.script("/repos/acme/grid-sim", {status(502), status(500)});
  EXPECT_THROW(fetch_raw(grid_sim(), t2, quick()), TransportError);
}

TEST(FetchRaw, TransportFailureIsRetriedOnce) {
  ScriptedTransport t;
  t.fail_next("/repos/acme/grid-sim", 1);
  EXPECT_NO_THROW(fetch_raw(grid_sim(), t, quick()));

  ScriptedTransport t2;
  t2.fail_next("/repos/acme/grid-sim", 2);
  EXPECT_THROW(fetch_raw(grid_sim(), t2, quick()), TransportError);
}

TEST(FetchRaw, OtherClientErrorsAreNotRetried) {
  ScriptedTransport t;
  t.script("/repos/acme/grid-sim", {status(400)});
  EXPECT_THROW(fetch_raw(grid_sim(), t, quick()), TransportError);
  EXPECT_EQ(t.count_for("/repos/acme/grid-sim"), 1u);
}

TEST(FetchRaw, UnreadableBodyIsATransportError) {
  ScriptedTransport t;
  t.script("/repos/acme/grid-sim", {{200, "{oops", {}}});
  EXPECT_THROW(fetch_raw(grid_sim(), t, quick()), TransportError);
}

TEST(FetchRaw, TokenIsSentAsBearer) {
  ScriptedTransport t;
  fetch_raw(grid_sim(), t, quick());
  HttpHeaders h = t.last_headers();
  EXPECT_NE(std::find(h.begin(), h.end(),
                      std::pair<std::string, std::string>{"Authorization",
                                                          "Bearer fixture-token"}),
            h.end());
}

TEST(FetchRaw, ConcurrentExtractionsShareOneTransport) {
  ScriptedTransport t;
  std::vector<std::future<std::string>> jobs;
  for (int i = 0; i < 8; ++i) {
    jobs.push_back(std::async(std::launch::async, [&] {
      return to_json(extract("https://github.com/acme/grid-sim", t, schema(), mapping(), quick())
                         .record,
                     schema());
    }));
  }
  std::string expected = support::read_file(support::golden("acme-grid-sim.record.json"));
  for (auto &j : jobs) {
    EXPECT_EQ(j.get(), expected);
  }
}

TEST(MapToRecord, NameKeywordsAndAttribution) {
  ScriptedTransport t;
  Extraction ex = map_to_record(fetch_raw(grid_sim(), t, quick()), schema(), mapping());
  EXPECT_EQ(ex.record.values.find("name")->front(), Value::text("grid-sim"));
  EXPECT_EQ(*ex.record.values.find("keywords"),
            (std::vector<Value>{Value::text("energy"), Value::text("simulation")}));
  auto it = std::find_if(ex.report.extracted.begin(), ex.report.extracted.end(),
                         [](const auto &p) { return p.first == "name"; });
  ASSERT_NE(it, ex.report.extracted.end());
  EXPECT_EQ(it->second, "repoInfo.name");
}

TEST(MapToRecord, ContributorLoginIsTheFallbackName) {
  ScriptedTransport t;
  Extraction ex = map_to_record(fetch_raw(grid_sim(), t, quick()), schema(), mapping());
  const auto *authors = ex.record.values.find("author");
  ASSERT_NE(authors, nullptr);
  std::set<std::string> names;
  for (const auto &a : *authors) {
    const auto *n = a.get_if<value::Nested>();
    ASSERT_NE(n, nullptr);
    names.insert(display(n->fields.find("name")->front()));
  }
  EXPECT_TRUE(names.count("ada-l"));
}

TEST(MapToRecord, MissingLicenseIsSkippedAsAbsent) {
  ScriptedTransport t;
  RawForgeData raw = fetch_raw(grid_sim(), t, quick());
  raw.licenseInfo.reset();
  raw.absent.push_back("licenseInfo");
  Extraction ex = map_to_record(raw, schema(), mapping());
  EXPECT_FALSE(ex.record.values.contains("license"));
  EXPECT_NE(std::find(ex.report.skipped.begin(), ex.report.skipped.end(),
                      std::pair<std::string, std::string>{"licenseInfo", "absent"}),
            ex.report.skipped.end());
}

TEST(MapToRecord, GitlabFixture) {
  ScriptedTransport t;
  Extraction ex = extract("https://gitlab.com/energy/grids/flowtool", t, schema(), mapping(),
                          quick());
  EXPECT_TRUE(ex.record.values.contains("name"));
  EXPECT_TRUE(ex.record.values.contains("keywords"));
  std::set<std::string> attributed;
  for (const auto &[element, source] : ex.report.extracted) {
    attributed.insert(element);
  }
  for (const auto &[key, list] : ex.record.values.entries()) {
    EXPECT_TRUE(attributed.count(key)) << key;
  }
}

TEST(Extract, FixtureUrlMatchesGoldenRecord) {
  ScriptedTransport t;
  Extraction ex = extract("https://github.com/acme/grid-sim", t, schema(), mapping(), quick());
  EXPECT_EQ(to_json(ex.record, schema()),
            support::read_file(support::golden("acme-grid-sim.record.json")));
}

TEST(Extract, EveryRecordElementIsAttributed) {
  for (const char *url : {"https://github.com/acme/grid-sim", "https://github.com/acme/no-release",
                          "https://gitlab.com/energy/grids/flowtool"}) {
    ScriptedTransport t;
    Extraction ex = extract(url, t, schema(), mapping(), quick());
    std::set<std::string> attributed;
    for (const auto &[element, source] : ex.report.extracted) {
      EXPECT_NE(element_by_id(schema(), element), nullptr) << element;
      attributed.insert(element);
    }
    for (const auto &[key, list] : ex.record.values.entries()) {
      EXPECT_TRUE(attributed.count(key)) << url << " " << key;
    }
    EXPECT_EQ(attributed.size(), ex.record.values.size()) << url;
  }
}

TEST(Extract, UnsupportedUrlMakesNoTransportCall) {
  ScriptedTransport t;
  EXPECT_THROW(extract("https://bitbucket.org/x/y", t, schema(), mapping(), quick()),
               UnsupportedForgeError);
  EXPECT_THROW(extract("https://github.com/only-owner", t, schema(), mapping(), quick()),
               MalformedUrlError);
  EXPECT_EQ(t.calls.load(), 0);
}

TEST(Extract, IsAPureFunctionOfFixtures) {
  ScriptedTransport a;
  ScriptedTransport b;
  Extraction x = extract("https://github.com/acme/no-release", a, schema(), mapping(), quick());
  Extraction y = extract("https://github.com/acme/no-release", b, schema(), mapping(), quick());
  EXPECT_EQ(x.record, y.record);
  EXPECT_EQ(x.report, y.report);
}

TEST(ForgeMappingFile, DanglingElementIsRejected) {
  EXPECT_THROW(load_forge_mapping(R"({"github": [{"element": "ghost", "source": "repoInfo.name"}],
                                      "gitlab": []})",
                                  schema()),
               ConfigurationError);
  EXPECT_THROW(load_forge_mapping(R"({"github": [{"element": "name", "source": "elsewhere.name"}],
                                      "gitlab": []})",
                                  schema()),
               ConfigurationError);
  EXPECT_THROW(load_forge_mapping("[", schema()), ParseError);
}

TEST(FixtureTransportTest, MissingFileIs404AndMetaOverrides) {
  FixtureTransport t(support::forge_fixtures());
  EXPECT_EQ(t.get("https://api.github.com/repos/nobody/nothing", {}).status, 404);
  HttpResponse r = t.get("https://api.github.com/repos/acme/throttled", {});
  EXPECT_EQ(r.status, 429);
  EXPECT_EQ(r.headers["retry-after"], "120");
}
