#pragma once

#include "ersmeta/record.hpp"
#include "ersmeta/schema.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ersmeta {

enum class Forge { github, gitlab };

std::string_view to_string(Forge forge);

struct ForgeRef {
  Forge forge = Forge::github;
  std::string host;
  /// Nested GitLab groups are folded in: "group/subgroup".
  std::string owner;
  std::string repo;

  friend bool operator==(const ForgeRef &, const ForgeRef &) = default;
};

/// Recognizes github.com/{owner}/{repo} and GitLab hosts (gitlab.com, any
/// host whose first label is "gitlab", plus `gitlab_hosts`).
/// Throws UnsupportedForgeError or MalformedUrlError.
ForgeRef parse_repo_url(std::string_view url,
                        const std::vector<std::string> &gitlab_hosts = {});

struct HttpResponse {
  int status = 0;
  std::string body;
  /// Header names lower-cased.
  std::map<std::string, std::string> headers;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

/// Must be safe to call from several threads at once. Throws TransportError
/// when no response could be obtained.
class Transport {
public:
  virtual ~Transport() = default;
  virtual HttpResponse get(const std::string &url,
                           const HttpHeaders &headers) = 0;
};

/// Serves recorded responses: `https://host/a/b?q` is read from
/// `<root>/host/a/b.json`; an optional `<root>/host/a/b.meta.json` holding
/// {"status": N, "headers": {...}} overrides status and headers. Missing
/// files answer 404.
class FixtureTransport : public Transport {
public:
  explicit FixtureTransport(std::filesystem::path root);
  HttpResponse get(const std::string &url, const HttpHeaders &headers) override;

private:
  std::filesystem::path root_;
};

/// Real network access over HTTP(S).
class HttpTransport : public Transport {
public:
  explicit HttpTransport(std::chrono::seconds timeout = std::chrono::seconds(20));
  HttpResponse get(const std::string &url, const HttpHeaders &headers) override;

private:
  std::chrono::seconds timeout_;
};

struct RawForgeData {
  ForgeRef ref;
  nlohmann::json repoInfo;
  std::optional<nlohmann::json> licenseInfo;
  std::vector<std::string> topics;
  std::optional<nlohmann::json> latestRelease;
  nlohmann::json contributors = nlohmann::json::array();
  /// Endpoints that answered 404, by field name.
  std::vector<std::string> absent;

  /// {"repoInfo", "licenseInfo", "topics", "latestRelease", "contributors"}
  /// with absent endpoints left out; mapping paths address this document.
  nlohmann::json combined() const;
};

struct FetchOptions {
  /// Bearer token; empty means anonymous.
  std::string token;
  /// Rate-limited requests are retried once when Retry-After is at most this.
  std::chrono::seconds maxRetryWait{5};
  /// Delay before the single retry of a transient failure.
  std::chrono::milliseconds backoff{500};
  std::vector<std::string> gitlabHosts;
};

/// Token from ERSMETA_GITHUB_TOKEN / ERSMETA_GITLAB_TOKEN, if set.
std::string token_from_environment(Forge forge);

/// Endpoint URLs for a repository in fetch order: repoInfo, licenseInfo,
/// topics, latestRelease, contributors (GitLab serves license and topics
/// inside repoInfo, so those two are empty).
std::vector<std::pair<std::string, std::string>> endpoint_urls(const ForgeRef &ref);

/// Throws NotFoundError, AuthError, RateLimitError, TransportError.
RawForgeData fetch_raw(const ForgeRef &ref, Transport &transport,
                       const FetchOptions &options = {});

struct MappingEntry {
  std::string element;
  /// Path into RawForgeData::combined(): dotted keys, `[]` iterates arrays.
  std::string source;

  friend bool operator==(const MappingEntry &, const MappingEntry &) = default;
};

struct ForgeMapping {
  std::vector<MappingEntry> github;
  std::vector<MappingEntry> gitlab;

  const std::vector<MappingEntry> &for_forge(Forge forge) const;
};

/// Throws ParseError, or ConfigurationError when an entry names an element
/// the schema does not declare or a source outside the raw document.
ForgeMapping load_forge_mapping(std::string_view document,
                                const SchemaDefinition &schema);

struct ExtractionReport {
  /// elementId -> source path, in schema order.
  std::vector<std::pair<std::string, std::string>> extracted;
  /// (apiField, reason)
  std::vector<std::pair<std::string, std::string>> skipped;

  friend bool operator==(const ExtractionReport &,
                         const ExtractionReport &) = default;
};

struct Extraction {
  MetadataRecord record;
  ExtractionReport report;
};

Extraction map_to_record(const RawForgeData &raw, const SchemaDefinition &schema,
                         const ForgeMapping &mapping);

/// parse_repo_url, fetch_raw and map_to_record. The URL is parsed before any
/// transport call.
Extraction extract(std::string_view url, Transport &transport,
                   const SchemaDefinition &schema, const ForgeMapping &mapping,
                   FetchOptions options = {});

std::string to_json(const ExtractionReport &report);
nlohmann::ordered_json report_to_document(const ExtractionReport &report);

} // namespace ersmeta
