#include "ersmeta/service.hpp"

#include "ersmeta/error.hpp"
#include "ersmeta/record_json.hpp"
#include "ersmeta/validator.hpp"
#include "util.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>

namespace ersmeta {

using detail::ordered_json;
using nlohmann::json;

namespace {

constexpr const char *kVocabPrefix = "/api/vocabularies/";

json parse_body(const std::string &body) {
  try {
    return detail::parse_json(body.empty() ? std::string_view("{}") : body);
  } catch (const ParseError &e) {
    throw std::runtime_error(e.what());
  }
}

Response ok(std::string body) {
  Response r;
  r.body = std::move(body);
  return r;
}

class BadRequest : public std::exception {
public:
  explicit BadRequest(Response r) : response(std::move(r)) {}
  Response response;
};

const json &require(const json &body, const char *field) {
  auto it = body.find(field);
  if (!body.is_object() || it == body.end() || it->is_null()) {
    throw BadRequest(api_error(400, "missing_field",
                               std::string("request body lacks '") + field + "'",
                               {{"field", field}}));
  }
  return *it;
}

ParsedRecord parse_record(const json &body, const SchemaDefinition &schema) {
  const json &doc = require(body, "record");
  try {
    return record_from_document(doc, schema, Strictness::lax);
  } catch (const TypeMismatchError &e) {
    throw BadRequest(api_error(400, "invalid_record", e.what(), {{"path", e.path()}}));
  } catch (const Error &e) {
    throw BadRequest(api_error(400, "invalid_record", e.what()));
  }
}

} // namespace

const std::string *Response::header(std::string_view name) const {
  for (const auto &[k, v] : headers) {
    if (k.size() == name.size() &&
        std::equal(k.begin(), k.end(), name.begin(), [](char a, char b) {
          return std::tolower(static_cast<unsigned char>(a)) ==
                 std::tolower(static_cast<unsigned char>(b));
        })) {
      return &v;
    }
  }
  return nullptr;
}

Response api_error(int status, const std::string &code,
                   const std::string &message, const ordered_json &detail) {
  ordered_json doc;
  doc["code"] = code;
  doc["message"] = message;
  if (!detail.is_null()) {
    doc["detail"] = detail;
  }
  Response r;
  r.status = status;
  r.body = detail::dump_document(doc);
  return r;
}

std::string export_filename(const MetadataRecord &record) {
  std::string name;
  if (const auto *values = record.values.find("name")) {
    for (char c : display(values->front())) {
      auto u = static_cast<unsigned char>(c);
      bool keep = std::isalnum(u) || c == '.' || c == '_' || c == '-';
      if (keep) {
        name += c;
      } else if (!name.empty() && name.back() != '-') {
        name += '-';
      }
    }
  }
  while (!name.empty() && (name.back() == '-' || name.back() == '.')) {
    name.pop_back();
  }
  while (!name.empty() && (name.front() == '-' || name.front() == '.')) {
    name.erase(name.begin());
  }
  return (name.empty() ? std::string("record") : name) + ".metadata.json";
}

Service::Service(const Bundle &bundle, Transport &transport,
                 ServiceOptions options)
    : bundle_(bundle), transport_(transport), options_(std::move(options)) {
  schemaBody_ = serialize_schema(bundle_.schema);
  vocabularies_ = detail::parse_ordered_json(schemaBody_)["vocabularies"];
}

Response Service::handle(const std::string &method, const std::string &path,
                         const std::string &body) const {
  Response r;
  if (method == "OPTIONS") {
    r.status = 204;
    r.contentType.clear();
    r.headers.emplace_back("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    r.headers.emplace_back("Access-Control-Allow-Headers", "Content-Type");
    r.headers.emplace_back("Access-Control-Max-Age", "600");
  } else {
    try {
      r = route(method, path, body);
    } catch (const BadRequest &e) {
      r = e.response;
    }
  }
  r.headers.emplace(r.headers.begin(), "Access-Control-Allow-Origin",
                    options_.allowOrigin);
  if (options_.allowOrigin != "*") {
    r.headers.emplace_back("Vary", "Origin");
  }
  return r;
}

Response Service::route(const std::string &method, const std::string &path,
                        const std::string &raw) const {
  const SchemaDefinition &schema = bundle_.schema;
  bool get = method == "GET";
  bool post = method == "POST";

  if (path == "/api/schema" || path == "/api/vocabularies" ||
      path.rfind(kVocabPrefix, 0) == 0) {
    if (!get) {
      return api_error(405, "method_not_allowed", method + " " + path);
    }
    if (path == "/api/schema") {
      return ok(schemaBody_);
    }
    if (path == "/api/vocabularies") {
      return ok(detail::dump_document(vocabularies_));
    }
    std::string id = path.substr(std::char_traits<char>::length(kVocabPrefix));
    for (const auto &v : vocabularies_) {
      if (v["id"] == id) {
        return ok(detail::dump_document(v));
      }
    }
    return api_error(404, "not_found", "no vocabulary '" + id + "'",
                     {{"vocabulary", id}});
  }

  static const char *kPosts[] = {"/api/extract", "/api/validate",
                                 "/api/completeness", "/api/convert",
                                 "/api/export"};
  if (std::none_of(std::begin(kPosts), std::end(kPosts),
                   [&](const char *p) { return path == p; })) {
    return api_error(404, "not_found", "no endpoint " + path);
  }
  if (!post) {
    return api_error(405, "method_not_allowed", method + " " + path);
  }
  json body;
  try {
    body = parse_body(raw);
  } catch (const std::exception &e) {
    return api_error(400, "invalid_json", e.what());
  }
  if (!body.is_object()) {
    return api_error(400, "invalid_json", "request body must be a JSON object");
  }

  if (path == "/api/extract") {
    const json &url = require(body, "url");
    if (!url.is_string()) {
      return api_error(400, "missing_field", "'url' must be a string",
                       {{"field", "url"}});
    }
    try {
      Extraction x = extract(url.get<std::string>(), transport_, schema,
                             bundle_.forgeMapping, options_.fetch);
      ordered_json doc;
      doc["record"] = record_to_document(x.record, schema);
      doc["extractionReport"] = report_to_document(x.report);
      return ok(detail::dump_document(doc));
    } catch (const UnsupportedForgeError &e) {
      return api_error(400, "unsupported_forge", e.what());
    } catch (const MalformedUrlError &e) {
      return api_error(400, "malformed_url", e.what());
    } catch (const NotFoundError &e) {
      return api_error(404, "not_found", e.what());
    } catch (const RateLimitError &e) {
      Response r;
      if (e.retry_after() >= 0) {
        r = api_error(429, "rate_limited", e.what(),
                      {{"retryAfter", e.retry_after()}});
        r.headers.emplace_back("Retry-After", std::to_string(e.retry_after()));
      } else {
        r = api_error(429, "rate_limited", e.what());
      }
      return r;
    } catch (const AuthError &e) {
      return api_error(401, "auth", e.what());
    } catch (const TransportError &e) {
      return api_error(502, "transport", e.what());
    }
  }

  ParsedRecord parsed = parse_record(body, schema);
  if (path == "/api/validate") {
    ValidateOptions options;
    options.strictness = Strictness::lax;
    options.unknowns = parsed.unknowns;
    return ok(to_json(validate(parsed.record, schema, options)));
  }
  if (path == "/api/completeness") {
    return ok(to_json(completeness(parsed.record, schema)));
  }
  if (path == "/api/export") {
    Response r = ok(to_json(parsed.record, schema));
    r.headers.emplace_back("Content-Disposition",
                           "attachment; filename=\"" +
                               export_filename(parsed.record) + "\"");
    return r;
  }
  // /api/convert
  const json &target_name = require(body, "target");
  const ConversionTarget *target =
      target_name.is_string() ? bundle_.target(target_name.get<std::string>())
                              : nullptr;
  if (target == nullptr) {
    json names = json::array();
    for (const auto &t : bundle_.targets) {
      names.push_back(to_string(t.format));
    }
    return api_error(400, "unknown_target",
                     "unknown conversion target " + target_name.dump(),
                     {{"available", names}});
  }
  ConversionResult result = convert(parsed.record, target->crosswalk, schema,
                                    target->schema, target->format);
  ordered_json doc;
  doc["document"] = result.document;
  doc["conversionReport"] = detail::parse_ordered_json(to_json(result.report));
  return ok(detail::dump_document(doc));
}

struct Server::Impl {
  const Service &service;
  httplib::Server server;

  explicit Impl(const Service &s) : service(s) {
    auto handler = [this](const httplib::Request &req, httplib::Response &res) {
      Response r = service.handle(req.method, req.path, req.body);
      res.status = r.status;
      for (const auto &[k, v] : r.headers) {
        res.set_header(k, v);
      }
      if (!r.contentType.empty()) {
        res.set_content(r.body, r.contentType + "; charset=utf-8");
      }
    };
    server.Get(R"(/.*)", handler);
    server.Post(R"(/.*)", handler);
    server.Options(R"(/.*)", handler);
  }
};

Server::Server(const Service &service) : impl_(std::make_unique<Impl>(service)) {}

Server::~Server() = default;

int Server::bind(const std::string &host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                        : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void Server::serve() { impl_->server.listen_after_bind(); }

void Server::stop() { impl_->server.stop(); }

} // namespace ersmeta
