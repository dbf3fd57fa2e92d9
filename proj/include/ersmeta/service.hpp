#pragma once

#include "ersmeta/bundle.hpp"
#include "ersmeta/forge.hpp"

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace ersmeta {

struct ServiceOptions {
  /// Value of Access-Control-Allow-Origin on every response.
  std::string allowOrigin = "*";
  FetchOptions fetch;
};

struct Response {
  int status = 200;
  std::string contentType = "application/json";
  /// Extra headers (CORS, Content-Disposition, Retry-After).
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;

  const std::string *header(std::string_view name) const;
};

/// Stateless request handling over an immutable bundle. `handle` is what the
/// HTTP server calls, so tests can exercise every endpoint without a socket.
class Service {
public:
  /// `transport` serves /api/extract; it must outlive the service.
  Service(const Bundle &bundle, Transport &transport, ServiceOptions options = {});

  Response handle(const std::string &method, const std::string &path,
                  const std::string &body) const;

private:
  Response route(const std::string &method, const std::string &path,
                 const std::string &body) const;

  const Bundle &bundle_;
  Transport &transport_;
  ServiceOptions options_;
  std::string schemaBody_;
  nlohmann::ordered_json vocabularies_;
};

/// {"code", "message"[, "detail"]}
Response api_error(int status, const std::string &code,
                   const std::string &message,
                   const nlohmann::ordered_json &detail = nullptr);

/// "<name>.metadata.json" with the name reduced to [A-Za-z0-9._-], or
/// "record.metadata.json" when nothing usable remains.
std::string export_filename(const MetadataRecord &record);

/// HTTP/1.1 front end for a Service.
class Server {
public:
  explicit Server(const Service &service);
  ~Server();
  Server(const Server &) = delete;
  Server &operator=(const Server &) = delete;

  /// Binds without serving; port 0 picks a free port. Returns the bound
  /// port. Throws Error when binding fails.
  int bind(const std::string &host, int port);
  /// Serves until stop(); call after bind().
  void serve();
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace ersmeta
