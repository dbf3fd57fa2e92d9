#include "ersmeta/error.hpp"

#include <utility>

namespace ersmeta {

namespace {

std::string with_position(const std::string &what, std::size_t line,
                          std::size_t column) {
  if (line == 0) {
    return what;
  }
  return "line " + std::to_string(line) + ", column " +
         std::to_string(column) + ": " + what;
}

std::string join_problems(const std::vector<std::string> &problems) {
  std::string out = "schema consistency check failed";
  for (const auto &p : problems) {
    out += "\n  - " + p;
  }
  return out;
}

} // namespace

ParseError::ParseError(const std::string &what, std::size_t line,
                       std::size_t column)
    : Error(with_position(what, line, column)), line_(line), column_(column) {}

ConsistencyError::ConsistencyError(std::vector<std::string> problems)
    : Error(join_problems(problems)), problems_(std::move(problems)) {}

TypeMismatchError::TypeMismatchError(std::string path, const std::string &what)
    : Error(path + ": " + what), path_(std::move(path)) {}

UnknownElementError::UnknownElementError(std::string element)
    : Error("unknown element '" + element + "'"), element_(std::move(element)) {
}

RateLimitError::RateLimitError(const std::string &what,
                               long retry_after_seconds)
    : Error(what), retry_after_(retry_after_seconds) {}

} // namespace ersmeta
