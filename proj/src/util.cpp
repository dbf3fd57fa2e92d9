#include "util.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace ersmeta::detail {

namespace {

void locate(std::string_view text, std::size_t byte, std::size_t &line,
            std::size_t &column) {
  line = 1;
  column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
}

template <typename Json> Json parse_impl(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error &e) {
    std::size_t line = 0;
    std::size_t column = 0;
    // nlohmann reports the byte index just past the offending character.
    locate(text, e.byte == 0 ? 0 : e.byte - 1, line, column);
    throw ParseError(std::string("malformed JSON: ") + e.what(), line, column);
  }
}

} // namespace

nlohmann::json parse_json(std::string_view text) {
  return parse_impl<nlohmann::json>(text);
}

ordered_json parse_ordered_json(std::string_view text) {
  return parse_impl<ordered_json>(text);
}

std::string dump_document(const ordered_json &doc) {
  return doc.dump(2, ' ', false, nlohmann::json::error_handler_t::strict) +
         "\n";
}

bool is_absolute_iri(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0 ||
      colon + 1 == text.size()) {
    return false;
  }
  auto is_alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  };
  if (!is_alpha(text[0])) {
    return false;
  }
  for (std::size_t i = 1; i < colon; ++i) {
    char c = text[i];
    if (!(is_alpha(c) || (c >= '0' && c <= '9') || c == '+' || c == '-' ||
          c == '.')) {
      return false;
    }
  }
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' ||
        c == '}' || c == '|' || c == '\\' || c == '^' || c == '`') {
      return false;
    }
  }
  return true;
}

bool is_iso_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    return false;
  }
  int parts[3] = {0, 0, 0};
  const std::array<std::pair<std::size_t, std::size_t>, 3> spans{
      {{0, 4}, {5, 2}, {8, 2}}};
  for (std::size_t p = 0; p < 3; ++p) {
    auto [pos, len] = spans[p];
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (text[i] < '0' || text[i] > '9') {
        return false;
      }
      parts[p] = parts[p] * 10 + (text[i] - '0');
    }
  }
  int year = parts[0];
  int month = parts[1];
  int day = parts[2];
  if (month < 1 || month > 12 || day < 1) {
    return false;
  }
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30,
                                  31, 31, 30, 31, 30, 31};
  bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  int limit = kDays[month - 1] + (month == 2 && leap ? 1 : 0);
  return day <= limit;
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) {
    return "0";
  }
  return std::string(buf.data(), end);
}

} // namespace ersmeta::detail
