#include "ersmeta/forge.hpp"

#include "ersmeta/crosswalk.hpp"
#include "ersmeta/error.hpp"
#include "util.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

namespace ersmeta {

using detail::ordered_json;
using nlohmann::json;

namespace {

constexpr const char *kRoots[] = {"repoInfo", "licenseInfo", "topics",
                                  "latestRelease", "contributors"};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) {
      return parts;
    }
    start = pos + 1;
  }
}

struct UrlParts {
  std::string scheme;
  std::string authority;
  std::string path;
};

UrlParts split_url(std::string_view url) {
  UrlParts parts;
  auto sep = url.find("://");
  if (sep == std::string_view::npos) {
    throw MalformedUrlError("'" + std::string(url) + "' has no scheme");
  }
  parts.scheme = lower(std::string(url.substr(0, sep)));
  std::string_view rest = url.substr(sep + 3);
  auto cut = rest.find_first_of("?#");
  rest = rest.substr(0, cut);
  auto slash = rest.find('/');
  parts.authority = std::string(rest.substr(0, slash));
  parts.path = slash == std::string_view::npos ? "/" : std::string(rest.substr(slash));
  return parts;
}

bool is_gitlab_host(const std::string &host,
                    const std::vector<std::string> &extra) {
  if (host == "gitlab.com" || host.rfind("gitlab.", 0) == 0) {
    return true;
  }
  return std::any_of(extra.begin(), extra.end(),
                     [&](const std::string &h) { return lower(h) == host; });
}

std::string percent_encode(std::string_view text) {
  static const char *kHex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string header(const HttpResponse &r, const std::string &name) {
  auto it = r.headers.find(name);
  return it != r.headers.end() ? it->second : std::string{};
}

long parse_seconds(const std::string &text) {
  if (text.empty()) {
    return -1;
  }
  char *end = nullptr;
  long v = std::strtol(text.c_str(), &end, 10);
  return (end != nullptr && *end == '\0' && v >= 0) ? v : -1;
}

class Fetcher {
public:
  Fetcher(Transport &transport, const FetchOptions &options, HttpHeaders headers)
      : transport_(transport), options_(options), headers_(std::move(headers)) {}

  // nullopt on 404.
  std::optional<json> get(const std::string &url) {
    bool retried = false;
    while (true) {
      HttpResponse r;
      try {
        r = transport_.get(url, headers_);
      } catch (const TransportError &e) {
        if (retried) {
          throw;
        }
        retried = true;
        std::this_thread::sleep_for(options_.backoff);
        continue;
      }
      if (r.status >= 200 && r.status < 300) {
        if (r.body.empty()) {
          return json();
        }
        try {
          return detail::parse_json(r.body);
        } catch (const ParseError &e) {
          throw TransportError(url + ": unreadable response body: " + e.what());
        }
      }
      if (r.status == 404) {
        return std::nullopt;
      }
      bool limited = r.status == 429 ||
                     (r.status == 403 && header(r, "x-ratelimit-remaining") == "0");
      if (limited) {
        long wait = parse_seconds(header(r, "retry-after"));
        if (!retried && wait >= 0 && wait <= options_.maxRetryWait.count()) {
          retried = true;
          std::this_thread::sleep_for(std::chrono::seconds(wait));
          continue;
        }
        throw RateLimitError(url + ": rate limit exceeded", wait);
      }
      if (r.status == 401 || r.status == 403) {
        throw AuthError(url + ": access denied (HTTP " +
                        std::to_string(r.status) + ")");
      }
      if (r.status >= 500 && !retried) {
        retried = true;
        std::this_thread::sleep_for(options_.backoff);
        continue;
      }
      throw TransportError(url + ": HTTP " + std::to_string(r.status));
    }
  }

private:
  Transport &transport_;
  const FetchOptions &options_;
  HttpHeaders headers_;
};

// Resolves a mapping path against the combined raw document. Returns the
// reached values; `[]` fans out over arrays.
void walk(const json &node, const std::vector<std::string> &segments,
          std::size_t i, std::vector<const json *> &out) {
  if (i == segments.size()) {
    out.push_back(&node);
    return;
  }
  std::string key = segments[i];
  bool iterate = key.size() >= 2 && key.compare(key.size() - 2, 2, "[]") == 0;
  if (iterate) {
    key.resize(key.size() - 2);
  }
  if (!node.is_object()) {
    return;
  }
  auto it = node.find(key);
  if (it == node.end() || it->is_null()) {
    return;
  }
  if (iterate) {
    if (it->is_array()) {
      for (const auto &item : *it) {
        walk(item, segments, i + 1, out);
      }
    }
    return;
  }
  walk(*it, segments, i + 1, out);
}

std::string root_of(const std::string &source) {
  auto end = source.find_first_of(".[");
  return source.substr(0, end);
}

const ElementDefinition *field_with_iri(const SchemaDefinition &schema,
                                        const SubSchema &sub,
                                        std::string_view iri) {
  for (const auto &f : sub.fields) {
    if (schema.term_iri(f) == iri) {
      return &f;
    }
  }
  return nullptr;
}

std::string scalar_text(const json &v) {
  if (v.is_string()) {
    return v.get<std::string>();
  }
  if (v.is_number() || v.is_boolean()) {
    return v.dump();
  }
  return {};
}

// Converts one raw value; an empty optional carries the skip reason.
struct Converted {
  std::optional<Value> value;
  std::string reason;
};

Converted convert(const json &raw, const ElementDefinition &def,
                  const SchemaDefinition &schema) {
  auto text = scalar_text(raw);
  switch (def.valueType.kind) {
  case ValueKind::text:
    if (text.empty()) {
      return {std::nullopt, "empty"};
    }
    return {Value::text(text), {}};
  case ValueKind::iri:
    if (text.empty()) {
      return {std::nullopt, "empty"};
    }
    if (!detail::is_absolute_iri(text)) {
      return {std::nullopt, "not an absolute IRI"};
    }
    return {Value::iri(text), {}};
  case ValueKind::date:
    if (text.size() >= 10 && detail::is_iso_date(std::string_view(text).substr(0, 10))) {
      return {Value::date(text.substr(0, 10)), {}};
    }
    return {std::nullopt, text.empty() ? "empty" : "not a date"};
  case ValueKind::integer:
    if (raw.is_number_integer()) {
      return {Value::integer(raw.get<std::int64_t>()), {}};
    }
    return {std::nullopt, "not an integer"};
  case ValueKind::number:
    if (raw.is_number()) {
      return {Value::number(raw.get<double>()), {}};
    }
    return {std::nullopt, "not a number"};
  case ValueKind::boolean:
    if (raw.is_boolean()) {
      return {Value::boolean(raw.get<bool>()), {}};
    }
    return {std::nullopt, "not a boolean"};
  case ValueKind::vocabularyTerm: {
    if (text.empty()) {
      return {std::nullopt, "empty"};
    }
    const Vocabulary *vocab =
        def.vocabularyRef ? schema.vocabulary(*def.vocabularyRef) : nullptr;
    const Term *term = vocab != nullptr ? resolve_term(*vocab, text) : nullptr;
    if (term != nullptr) {
      return {Value::term(term->label, term->iri), {}};
    }
    return {Value::term(text), {}};
  }
  case ValueKind::subSchemaRef: {
    const SubSchema *sub = schema.sub_schema(def.valueType.subSchema);
    if (sub == nullptr || !raw.is_object()) {
      return {std::nullopt, "not an object"};
    }
    const ElementDefinition *name = field_with_iri(schema, *sub, "http://schema.org/name");
    const ElementDefinition *given = field_with_iri(schema, *sub, "http://schema.org/givenName");
    const ElementDefinition *family = field_with_iri(schema, *sub, "http://schema.org/familyName");
    auto string_field = [&](const char *key) {
      auto it = raw.find(key);
      return it != raw.end() && it->is_string() ? it->get<std::string>()
                                                : std::string{};
    };
    ValueMap fields;
    std::string full = string_field("name");
    if (!full.empty() && given != nullptr && family != nullptr) {
      if (name != nullptr) {
        fields.set(name->id, {Value::text(full)});
      }
      auto [g, f] = split_person_name(full);
      if (!g.empty()) {
        fields.set(given->id, {Value::text(g)});
      }
      fields.set(family->id, {Value::text(f)});
    } else {
      std::string login = string_field("login");
      if (login.empty()) {
        login = string_field("username");
      }
      if (login.empty() || name == nullptr) {
        return {std::nullopt, "no name or login"};
      }
      fields.set(name->id, {Value::text(login)});
    }
    return {Value::nested(sub->id, std::move(fields)), {}};
  }
  }
  return {std::nullopt, "unsupported"};
}

std::vector<MappingEntry> read_entries(const json &doc, const char *key,
                                       const SchemaDefinition &schema) {
  std::vector<MappingEntry> entries;
  auto it = doc.find(key);
  if (it == doc.end()) {
    return entries;
  }
  if (!it->is_array()) {
    throw ParseError(std::string("mapping.") + key + ": expected array");
  }
  for (std::size_t i = 0; i < it->size(); ++i) {
    const auto &e = (*it)[i];
    std::string where = std::string(key) + "[" + std::to_string(i) + "]";
    if (!e.is_object() || !e.contains("element") || !e.contains("source") ||
        !e["element"].is_string() || !e["source"].is_string()) {
      throw ParseError("mapping." + where +
                       ": expected {\"element\": string, \"source\": string}");
    }
    MappingEntry entry{e["element"].get<std::string>(),
                       e["source"].get<std::string>()};
    if (element_by_id(schema, entry.element) == nullptr) {
      throw ConfigurationError(where + ": element '" + entry.element +
                               "' is not declared by schema '" + schema.id +
                               "'");
    }
    std::string root = root_of(entry.source);
    if (std::none_of(std::begin(kRoots), std::end(kRoots),
                     [&](const char *r) { return root == r; })) {
      throw ConfigurationError(where + ": source '" + entry.source +
                               "' does not start with a raw field");
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

} // namespace

std::string_view to_string(Forge forge) {
  return forge == Forge::github ? "github" : "gitlab";
}

ForgeRef parse_repo_url(std::string_view url,
                        const std::vector<std::string> &gitlab_hosts) {
  std::string trimmed(url);
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) {
    trimmed.pop_back();
  }
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front()))) {
    trimmed.erase(trimmed.begin());
  }
  if (trimmed.find("://") == std::string::npos) {
    trimmed = "https://" + trimmed;
  }
  if (std::any_of(trimmed.begin(), trimmed.end(), [](unsigned char c) {
        return std::isspace(c) || c < 0x20;
      })) {
    throw MalformedUrlError("'" + std::string(url) + "' contains whitespace");
  }
  UrlParts parts = split_url(trimmed);
  if (parts.scheme != "http" && parts.scheme != "https") {
    throw MalformedUrlError("'" + std::string(url) + "' is not an http(s) URL");
  }
  std::string host = lower(parts.authority);
  if (auto at = host.rfind('@'); at != std::string::npos) {
    host = host.substr(at + 1);
  }
  if (host.empty()) {
    throw MalformedUrlError("'" + std::string(url) + "' has no host");
  }
  std::string bare_host = host.substr(0, host.find(':'));

  ForgeRef ref;
  if (bare_host == "github.com" || bare_host == "www.github.com") {
    ref.forge = Forge::github;
    ref.host = "github.com";
  } else if (is_gitlab_host(bare_host, gitlab_hosts)) {
    ref.forge = Forge::gitlab;
    ref.host = host;
  } else {
    throw UnsupportedForgeError("unsupported forge host '" + bare_host + "'");
  }

  std::vector<std::string> segments;
  for (auto &s : split(parts.path, '/')) {
    if (!s.empty()) {
      segments.push_back(std::move(s));
    }
  }
  if (ref.forge == Forge::github) {
    if (segments.size() > 2) {
      segments.resize(2);
    }
  } else {
    for (std::size_t i = 0; i < segments.size(); ++i) {
      bool tree = i >= 2 && (segments[i] == "tree" || segments[i] == "blob");
      if (segments[i] == "-" || tree) {
        segments.resize(i);
        break;
      }
    }
  }
  if (!segments.empty()) {
    auto &last = segments.back();
    if (last.size() > 4 && last.compare(last.size() - 4, 4, ".git") == 0) {
      last.resize(last.size() - 4);
    }
  }
  if (segments.size() < 2) {
    throw MalformedUrlError("'" + std::string(url) +
                            "' does not name an owner and a repository");
  }
  ref.repo = segments.back();
  segments.pop_back();
  for (std::size_t i = 0; i < segments.size(); ++i) {
    ref.owner += (i > 0 ? "/" : "") + segments[i];
  }
  return ref;
}

FixtureTransport::FixtureTransport(std::filesystem::path root)
    : root_(std::move(root)) {}

HttpResponse FixtureTransport::get(const std::string &url, const HttpHeaders &) {
  UrlParts parts = split_url(url);
  std::filesystem::path base = root_ / lower(parts.authority);
  for (const auto &s : split(parts.path, '/')) {
    if (s.empty() || s == "." || s == "..") {
      continue;
    }
    base /= s;
  }
  HttpResponse r;
  auto body = base;
  body += ".json";
  auto meta = base;
  meta += ".meta.json";
  bool has_body = std::filesystem::is_regular_file(body);
  bool has_meta = std::filesystem::is_regular_file(meta);
  if (!has_body && !has_meta) {
    r.status = 404;
    r.body = R"({"message":"Not Found"})";
    return r;
  }
  r.status = 200;
  if (has_body) {
    r.body = read_file(body);
  }
  if (has_meta) {
    json m;
    try {
      m = detail::parse_json(read_file(meta));
    } catch (const ParseError &e) {
      throw TransportError(meta.string() + ": " + e.what());
    }
    if (m.contains("status") && m["status"].is_number_integer()) {
      r.status = m["status"].get<int>();
    }
    if (m.contains("headers") && m["headers"].is_object()) {
      for (auto it = m["headers"].begin(); it != m["headers"].end(); ++it) {
        r.headers[lower(it.key())] = scalar_text(it.value());
      }
    }
  }
  return r;
}

json RawForgeData::combined() const {
  json doc = json::object();
  doc["repoInfo"] = repoInfo;
  if (licenseInfo) {
    doc["licenseInfo"] = *licenseInfo;
  }
  doc["topics"] = topics;
  if (latestRelease) {
    doc["latestRelease"] = *latestRelease;
  }
  doc["contributors"] = contributors;
  return doc;
}

std::string token_from_environment(Forge forge) {
  const char *value = std::getenv(forge == Forge::github ? "ERSMETA_GITHUB_TOKEN"
                                                         : "ERSMETA_GITLAB_TOKEN");
  return value != nullptr ? std::string(value) : std::string{};
}

std::vector<std::pair<std::string, std::string>> endpoint_urls(const ForgeRef &ref) {
  if (ref.forge == Forge::github) {
    std::string base = "https://api.github.com/repos/" + ref.owner + "/" + ref.repo;
    return {{"repoInfo", base},
            {"licenseInfo", base + "/license"},
            {"topics", base + "/topics"},
            {"latestRelease", base + "/releases/latest"},
            {"contributors", base + "/contributors"}};
  }
  std::string base = "https://" + ref.host + "/api/v4/projects/" +
                     percent_encode(ref.owner + "/" + ref.repo);
  return {{"repoInfo", base + "?license=true"},
          {"licenseInfo", ""},
          {"topics", ""},
          {"latestRelease", base + "/releases"},
          {"contributors", base + "/members"}};
}

RawForgeData fetch_raw(const ForgeRef &ref, Transport &transport,
                       const FetchOptions &options) {
  HttpHeaders headers = {{"User-Agent", "ersmeta"}};
  if (ref.forge == Forge::github) {
    headers.emplace_back("Accept", "application/vnd.github+json");
  }
  if (!options.token.empty()) {
    headers.emplace_back("Authorization", "Bearer " + options.token);
  }
  Fetcher fetcher(transport, options, headers);
  auto urls = endpoint_urls(ref);

  std::vector<std::future<std::optional<json>>> pending;
  for (const auto &[field, url] : urls) {
    if (url.empty()) {
      pending.emplace_back();
      continue;
    }
    pending.push_back(std::async(std::launch::async,
                                 [&fetcher, u = url] { return fetcher.get(u); }));
  }
  std::vector<std::optional<json>> results(urls.size());
  std::exception_ptr first_error;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    if (!pending[i].valid()) {
      continue;
    }
    try {
      results[i] = pending[i].get();
    } catch (...) {
      if (!first_error) {
        first_error = std::current_exception();
      }
    }
  }
  if (!results[0] && !first_error) {
    throw NotFoundError("repository " + ref.host + "/" + ref.owner + "/" +
                        ref.repo + " not found");
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }

  RawForgeData raw;
  raw.ref = ref;
  raw.repoInfo = std::move(*results[0]);
  auto note_absent = [&](const std::string &field) {
    raw.absent.push_back(field);
  };

  if (ref.forge == Forge::github) {
    if (results[1]) {
      raw.licenseInfo = std::move(*results[1]);
    } else {
      note_absent("licenseInfo");
    }
    if (results[2] && results[2]->contains("names") &&
        (*results[2])["names"].is_array()) {
      for (const auto &t : (*results[2])["names"]) {
        if (t.is_string()) {
          raw.topics.push_back(t.get<std::string>());
        }
      }
    } else if (!results[2]) {
      note_absent("topics");
    }
    if (results[3]) {
      raw.latestRelease = std::move(*results[3]);
    } else {
      note_absent("latestRelease");
    }
  } else {
    auto license = raw.repoInfo.find("license");
    if (license != raw.repoInfo.end() && license->is_object()) {
      raw.licenseInfo = *license;
    } else {
      note_absent("licenseInfo");
    }
    auto topics = raw.repoInfo.find("topics");
    if (topics != raw.repoInfo.end() && topics->is_array()) {
      for (const auto &t : *topics) {
        if (t.is_string()) {
          raw.topics.push_back(t.get<std::string>());
        }
      }
    }
    if (results[3] && results[3]->is_array() && !results[3]->empty()) {
      raw.latestRelease = (*results[3])[0];
    } else {
      note_absent("latestRelease");
    }
  }
  if (results[4] && results[4]->is_array()) {
    raw.contributors = std::move(*results[4]);
  } else if (!results[4]) {
    note_absent("contributors");
  }
  return raw;
}

const std::vector<MappingEntry> &ForgeMapping::for_forge(Forge forge) const {
  return forge == Forge::github ? github : gitlab;
}

ForgeMapping load_forge_mapping(std::string_view document,
                                const SchemaDefinition &schema) {
  json doc = detail::parse_json(document);
  if (!doc.is_object()) {
    throw ParseError("forge mapping must be a JSON object");
  }
  ForgeMapping mapping;
  mapping.github = read_entries(doc, "github", schema);
  mapping.gitlab = read_entries(doc, "gitlab", schema);
  return mapping;
}

Extraction map_to_record(const RawForgeData &raw, const SchemaDefinition &schema,
                         const ForgeMapping &mapping) {
  Extraction result;
  result.record.schemaId = schema.id;
  json doc = raw.combined();
  std::map<std::string, std::string> attributed;
  ValueMap values;

  for (const auto &field : raw.absent) {
    result.report.skipped.emplace_back(field, "absent");
  }
  for (const auto &entry : mapping.for_forge(raw.ref.forge)) {
    std::string root = root_of(entry.source);
    if (std::find(raw.absent.begin(), raw.absent.end(), root) != raw.absent.end()) {
      continue;
    }
    const ElementDefinition *def = element_by_id(schema, entry.element);
    if (def == nullptr || attributed.count(entry.element) != 0) {
      result.report.skipped.emplace_back(entry.source, "element already filled");
      continue;
    }
    std::vector<const json *> found;
    walk(doc, split(entry.source, '.'), 0, found);
    // A bare path reaching an array (topics) yields its items.
    std::vector<const json *> items;
    for (const json *node : found) {
      if (node->is_array() && def->valueType.kind != ValueKind::subSchemaRef) {
        for (const auto &item : *node) {
          items.push_back(&item);
        }
      } else {
        items.push_back(node);
      }
    }
    std::vector<Value> produced;
    std::string reason = items.empty() ? "empty" : "";
    for (const json *item : items) {
      Converted c = convert(*item, *def, schema);
      if (c.value) {
        produced.push_back(std::move(*c.value));
      } else if (reason.empty()) {
        reason = c.reason;
      }
    }
    if (produced.empty()) {
      result.report.skipped.emplace_back(entry.source, reason);
      continue;
    }
    if (!def->multiValued && produced.size() > 1) {
      produced.resize(1);
    }
    values.set(def->id, std::move(produced));
    attributed[def->id] = entry.source;
  }
  for (const auto &el : schema.elements) {
    if (const auto *list = values.find(el.id)) {
      result.record.values.set(el.id, *list);
      result.report.extracted.emplace_back(el.id, attributed[el.id]);
    }
  }
  return result;
}

Extraction extract(std::string_view url, Transport &transport,
                   const SchemaDefinition &schema, const ForgeMapping &mapping,
                   FetchOptions options) {
  ForgeRef ref = parse_repo_url(url, options.gitlabHosts);
  if (options.token.empty()) {
    options.token = token_from_environment(ref.forge);
  }
  return map_to_record(fetch_raw(ref, transport, options), schema, mapping);
}

ordered_json report_to_document(const ExtractionReport &report) {
  ordered_json doc;
  doc["extracted"] = ordered_json::object();
  for (const auto &[element, source] : report.extracted) {
    doc["extracted"][element] = source;
  }
  doc["skipped"] = ordered_json::array();
  for (const auto &[field, reason] : report.skipped) {
    doc["skipped"].push_back({{"apiField", field}, {"reason", reason}});
  }
  return doc;
}

std::string to_json(const ExtractionReport &report) {
  return detail::dump_document(report_to_document(report));
}

} // namespace ersmeta
