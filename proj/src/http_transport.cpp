#include "ersmeta/error.hpp"
#include "ersmeta/forge.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>

namespace ersmeta {

HttpTransport::HttpTransport(std::chrono::seconds timeout) : timeout_(timeout) {}

HttpResponse HttpTransport::get(const std::string &url,
                                const HttpHeaders &headers) {
  auto sep = url.find("://");
  auto path_start = url.find('/', sep == std::string::npos ? 0 : sep + 3);
  if (sep == std::string::npos) {
    throw TransportError("'" + url + "' is not an absolute URL");
  }
  std::string origin = url.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(origin);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_follow_location(true);
  httplib::Headers h;
  for (const auto &[name, value] : headers) {
    h.emplace(name, value);
  }
  auto result = client.Get(path, h);
  if (!result) {
    throw TransportError(url + ": " + httplib::to_string(result.error()));
  }
  HttpResponse response;
  response.status = result->status;
  response.body = result->body;
  for (const auto &[name, value] : result->headers) {
    std::string key = name;
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    response.headers[key] = value;
  }
  return response;
}

} // namespace ersmeta
