#include "ersmeta/turtle.hpp"

#include "ersmeta/error.hpp"

#include <cctype>
#include <map>
#include <set>

namespace ersmeta {

namespace {

bool is_pn_start(unsigned char c) {
  return std::isalpha(c) != 0 || c >= 0x80;
}

bool is_pn_char(unsigned char c) {
  return std::isalnum(c) != 0 || c == '_' || c == '-' || c >= 0x80;
}

void append_utf8(std::string &out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  TripleDocument run() {
    skip_ws();
    while (!at_end()) {
      statement();
      skip_ws();
    }
    return std::move(doc_);
  }

private:
  // Cursor -------------------------------------------------------------------

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  [[noreturn]] void fail(const std::string &what) const {
    throw ParseError(what, line_, column_);
  }

  [[noreturn]] void unsupported(const std::string &what) const {
    throw UnsupportedConstructError(what + " is not supported", line_, column_);
  }

  void skip_ws() {
    while (!at_end()) {
      char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') {
          advance();
        }
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) {
      fail(std::string("expected '") + c + "'");
    }
    advance();
  }

  bool match_keyword(std::string_view word, bool case_insensitive) {
    if (pos_ + word.size() > text_.size()) {
      return false;
    }
    for (std::size_t i = 0; i < word.size(); ++i) {
      char a = text_[pos_ + i];
      char b = word[i];
      if (case_insensitive
              ? std::tolower(static_cast<unsigned char>(a)) !=
                    std::tolower(static_cast<unsigned char>(b))
              : a != b) {
        return false;
      }
    }
    auto next = pos_ + word.size() < text_.size()
                    ? static_cast<unsigned char>(text_[pos_ + word.size()])
                    : ' ';
    if (is_pn_char(next) || next == ':') {
      return false;
    }
    for (std::size_t i = 0; i < word.size(); ++i) {
      advance();
    }
    return true;
  }

  // Grammar ------------------------------------------------------------------

  void statement() {
    if (peek() == '@') {
      if (match_keyword("@prefix", false)) {
        prefix_decl(true);
        return;
      }
      if (match_keyword("@base", false)) {
        unsupported("@base");
      }
      fail("unknown directive");
    }
    if (match_keyword("PREFIX", true)) {
      prefix_decl(false);
      return;
    }
    if (match_keyword("BASE", true)) {
      unsupported("BASE");
    }
    if (match_keyword("GRAPH", true)) {
      unsupported("named graph");
    }
    triples();
    expect('.');
  }

  void prefix_decl(bool needs_dot) {
    skip_ws();
    std::string prefix;
    if (!at_end() && is_pn_start(static_cast<unsigned char>(peek()))) {
      prefix = pn_prefix();
    }
    if (peek() != ':') {
      fail("expected ':' after prefix name");
    }
    advance();
    skip_ws();
    std::string iri = iri_ref();
    for (auto &[p, base] : doc_.prefixes) {
      if (p == prefix) {
        base = iri;
        prefixes_[prefix] = iri;
        if (needs_dot) {
          expect('.');
        }
        return;
      }
    }
    doc_.prefixes.emplace_back(prefix, iri);
    prefixes_[prefix] = iri;
    if (needs_dot) {
      expect('.');
    }
  }

  void triples() {
    skip_ws();
    if (peek() == '[') {
      RdfNode subject = blank_property_list();
      skip_ws();
      if (peek() != '.') {
        predicate_object_list(subject);
      }
      return;
    }
    RdfNode subject = subject_node();
    predicate_object_list(subject);
  }

  RdfNode subject_node() {
    skip_ws();
    char c = peek();
    if (c == '(') {
      unsupported("RDF collection");
    }
    if (c == '{') {
      unsupported("graph block");
    }
    if (c == '<') {
      return RdfNode::iri(iri_ref());
    }
    if (c == '_' && peek(1) == ':') {
      return blank_label();
    }
    if (c == '"' || c == '\'') {
      fail("literal cannot be a subject");
    }
    return RdfNode::iri(prefixed_name());
  }

  void predicate_object_list(const RdfNode &subject) {
    for (;;) {
      skip_ws();
      std::string predicate = verb();
      object_list(subject, predicate);
      skip_ws();
      if (peek() != ';') {
        return;
      }
      while (peek() == ';') {
        advance();
        skip_ws();
      }
      // A trailing ';' may close the list.
      if (peek() == '.' || peek() == ']' || at_end()) {
        return;
      }
    }
  }

  std::string verb() {
    skip_ws();
    if (peek() == 'a') {
      auto next = static_cast<unsigned char>(peek(1));
      if (!is_pn_char(next) && next != ':' && next != '.') {
        advance();
        return std::string(kRdfType);
      }
    }
    if (peek() == '<') {
      return iri_ref();
    }
    if (peek() == '[' || peek() == '"' || peek() == '_') {
      fail("expected predicate IRI");
    }
    return prefixed_name();
  }

  void object_list(const RdfNode &subject, const std::string &predicate) {
    for (;;) {
      RdfNode obj = object();
      doc_.triples.push_back({subject, predicate, std::move(obj)});
      skip_ws();
      if (peek() != ',') {
        return;
      }
      advance();
    }
  }

  RdfNode object() {
    skip_ws();
    char c = peek();
    if (at_end()) {
      fail("unexpected end of input, expected object");
    }
    if (c == '(') {
      unsupported("RDF collection");
    }
    if (c == '{') {
      unsupported("graph block");
    }
    if (c == '<') {
      return RdfNode::iri(iri_ref());
    }
    if (c == '_' && peek(1) == ':') {
      return blank_label();
    }
    if (c == '[') {
      return blank_property_list();
    }
    if (c == '"' || c == '\'') {
      return literal();
    }
    if (c == '+' || c == '-' || c == '.' ||
        std::isdigit(static_cast<unsigned char>(c)) != 0) {
      return numeric();
    }
    if (match_keyword("true", false)) {
      return RdfNode::literal("true", std::string(kXsd) + "boolean");
    }
    if (match_keyword("false", false)) {
      return RdfNode::literal("false", std::string(kXsd) + "boolean");
    }
    return RdfNode::iri(prefixed_name());
  }

  RdfNode blank_property_list() {
    expect('[');
    RdfNode node = RdfNode::blank("genid" + std::to_string(++fresh_));
    skip_ws();
    if (peek() == ']') {
      advance();
      return node;
    }
    predicate_object_list(node);
    expect(']');
    return node;
  }

  RdfNode blank_label() {
    advance(); // _
    advance(); // :
    std::string label;
    while (!at_end()) {
      auto c = static_cast<unsigned char>(peek());
      if (is_pn_char(c) ||
          (c == '.' && is_pn_char(static_cast<unsigned char>(peek(1))))) {
        label += advance();
      } else {
        break;
      }
    }
    if (label.empty()) {
      fail("empty blank node label");
    }
    return RdfNode::blank(std::move(label));
  }

  std::string iri_ref() {
    skip_ws();
    if (peek() != '<') {
      fail("expected IRI");
    }
    advance();
    std::string out;
    for (;;) {
      if (at_end()) {
        fail("unterminated IRI");
      }
      char c = advance();
      if (c == '>') {
        break;
      }
      if (c == '\\') {
        if (peek() == 'u' || peek() == 'U') {
          append_utf8(out, unicode_escape());
          continue;
        }
        fail("invalid escape in IRI");
      }
      auto u = static_cast<unsigned char>(c);
      if (u <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' ||
          c == '|' || c == '^' || c == '`') {
        fail("invalid character in IRI");
      }
      out += c;
    }
    return out;
  }

  std::string pn_prefix() {
    std::string out;
    while (!at_end()) {
      auto c = static_cast<unsigned char>(peek());
      if (is_pn_char(c) ||
          (c == '.' && is_pn_char(static_cast<unsigned char>(peek(1))))) {
        out += advance();
      } else {
        break;
      }
    }
    return out;
  }

  std::string prefixed_name() {
    std::size_t line = line_;
    std::size_t column = column_;
    std::string prefix;
    if (!at_end() && is_pn_start(static_cast<unsigned char>(peek()))) {
      prefix = pn_prefix();
    }
    if (peek() != ':') {
      throw ParseError("expected IRI, prefixed name, blank node or literal",
                       line, column);
    }
    advance();
    std::string local;
    while (!at_end()) {
      auto c = static_cast<unsigned char>(peek());
      if (is_pn_char(c) || c == ':') {
        local += advance();
      } else if (c == '.' &&
                 (is_pn_char(static_cast<unsigned char>(peek(1))) ||
                  peek(1) == ':')) {
        local += advance();
      } else if (c == '%') {
        local += advance();
        for (int i = 0; i < 2; ++i) {
          if (std::isxdigit(static_cast<unsigned char>(peek())) == 0) {
            fail("invalid percent escape in prefixed name");
          }
          local += advance();
        }
      } else if (c == '\\') {
        advance();
        if (at_end()) {
          fail("dangling escape in prefixed name");
        }
        local += advance();
      } else {
        break;
      }
    }
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) {
      throw ParseError("undeclared prefix '" + prefix + ":'", line, column);
    }
    return it->second + local;
  }

  unsigned long unicode_escape() {
    char kind = advance();
    int digits = kind == 'u' ? 4 : 8;
    unsigned long cp = 0;
    for (int i = 0; i < digits; ++i) {
      char h = at_end() ? '\0' : advance();
      if (std::isxdigit(static_cast<unsigned char>(h)) == 0) {
        fail("invalid unicode escape");
      }
      cp = cp * 16 + static_cast<unsigned long>(
                         std::isdigit(static_cast<unsigned char>(h)) != 0
                             ? h - '0'
                             : std::tolower(static_cast<unsigned char>(h)) -
                                   'a' + 10);
    }
    if (cp > 0x10FFFF) {
      fail("unicode escape out of range");
    }
    return cp;
  }

  RdfNode literal() {
    char quote = advance();
    bool long_form = peek() == quote && peek(1) == quote;
    if (long_form) {
      advance();
      advance();
    }
    std::string out;
    for (;;) {
      if (at_end()) {
        fail("unterminated string literal");
      }
      char c = peek();
      if (c == quote) {
        if (!long_form) {
          advance();
          break;
        }
        if (peek(1) == quote && peek(2) == quote) {
          advance();
          advance();
          advance();
          // A long literal may end with up to two extra quote characters.
          while (peek() == quote) {
            out += advance();
          }
          break;
        }
        out += advance();
        continue;
      }
      if (!long_form && (c == '\n' || c == '\r')) {
        fail("newline in short string literal");
      }
      advance();
      if (c != '\\') {
        out += c;
        continue;
      }
      if (at_end()) {
        fail("unterminated escape");
      }
      char e = peek();
      switch (e) {
      case 't': out += '\t'; advance(); break;
      case 'b': out += '\b'; advance(); break;
      case 'n': out += '\n'; advance(); break;
      case 'r': out += '\r'; advance(); break;
      case 'f': out += '\f'; advance(); break;
      case '"': out += '"'; advance(); break;
      case '\'': out += '\''; advance(); break;
      case '\\': out += '\\'; advance(); break;
      case 'u':
      case 'U': append_utf8(out, unicode_escape()); break;
      default: fail(std::string("invalid escape '\\") + e + "'");
      }
    }
    if (peek() == '@') {
      advance();
      std::string lang;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) !=
                               0 ||
                           peek() == '-')) {
        lang += advance();
      }
      if (lang.empty()) {
        fail("empty language tag");
      }
      return RdfNode::literal(std::move(out), {}, std::move(lang));
    }
    if (peek() == '^' && peek(1) == '^') {
      advance();
      advance();
      std::string datatype = peek() == '<' ? iri_ref() : prefixed_name();
      return RdfNode::literal(std::move(out), std::move(datatype));
    }
    return RdfNode::literal(std::move(out));
  }

  RdfNode numeric() {
    std::string out;
    if (peek() == '+' || peek() == '-') {
      out += advance();
    }
    bool digits = false;
    while (std::isdigit(static_cast<unsigned char>(peek())) != 0) {
      out += advance();
      digits = true;
    }
    bool decimal = false;
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1))) != 0) {
      decimal = true;
      out += advance();
      while (std::isdigit(static_cast<unsigned char>(peek())) != 0) {
        out += advance();
        digits = true;
      }
    }
    bool exponent = false;
    if (digits && (peek() == 'e' || peek() == 'E')) {
      exponent = true;
      out += advance();
      if (peek() == '+' || peek() == '-') {
        out += advance();
      }
      if (std::isdigit(static_cast<unsigned char>(peek())) == 0) {
        fail("malformed exponent");
      }
      while (std::isdigit(static_cast<unsigned char>(peek())) != 0) {
        out += advance();
      }
    }
    if (!digits) {
      fail("malformed numeric literal");
    }
    std::string type = exponent ? "double" : decimal ? "decimal" : "integer";
    return RdfNode::literal(std::move(out), std::string(kXsd) + type);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  unsigned fresh_ = 0;
  std::map<std::string, std::string> prefixes_;
  TripleDocument doc_;
};

bool simple_local_name(std::string_view local) {
  if (local.empty()) {
    return false;
  }
  for (char c : local) {
    auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) != 0 || c == '_' || c == '-')) {
      return false;
    }
  }
  return local.front() != '-';
}

std::string compact(const TripleDocument &doc, const std::string &iri) {
  for (const auto &[prefix, base] : doc.prefixes) {
    if (iri.size() > base.size() && iri.compare(0, base.size(), base) == 0 &&
        simple_local_name(std::string_view(iri).substr(base.size()))) {
      return prefix + ":" + iri.substr(base.size());
    }
  }
  return "<" + iri + ">";
}

std::string render(const TripleDocument &doc, const RdfNode &node) {
  switch (node.kind) {
  case RdfNode::Kind::iri:
    return compact(doc, node.value);
  case RdfNode::Kind::blank:
    return "_:" + node.value;
  case RdfNode::Kind::literal: {
    std::string out = "\"" + escape_turtle_string(node.value) + "\"";
    if (!node.language.empty()) {
      out += "@" + node.language;
    } else if (!node.datatype.empty()) {
      out += "^^" + compact(doc, node.datatype);
    }
    return out;
  }
  }
  return {};
}

} // namespace

std::string escape_turtle_string(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
    case '\\': out += "\\\\"; break;
    case '"': out += "\\\""; break;
    case '\n': out += "\\n"; break;
    case '\r': out += "\\r"; break;
    case '\t': out += "\\t"; break;
    default:
      if (static_cast<unsigned char>(c) < 0x20) {
        static const char *kHex = "0123456789ABCDEF";
        out += "\\u00";
        out += kHex[(static_cast<unsigned char>(c) >> 4) & 0xF];
        out += kHex[static_cast<unsigned char>(c) & 0xF];
      } else {
        out += c;
      }
    }
  }
  return out;
}

TripleDocument parse_turtle(std::string_view text) {
  return Parser(text).run();
}

std::string to_ntriples(const RdfNode &node) {
  TripleDocument empty;
  return render(empty, node);
}

std::string write_turtle(const TripleDocument &doc) {
  std::string out;
  for (const auto &[prefix, base] : doc.prefixes) {
    out += "@prefix " + prefix + ": <" + base + "> .\n";
  }
  if (!doc.prefixes.empty() && !doc.triples.empty()) {
    out += "\n";
  }
  std::vector<const RdfNode *> subjects;
  std::set<RdfNode> seen;
  for (const auto &t : doc.triples) {
    if (seen.insert(t.subject).second) {
      subjects.push_back(&t.subject);
    }
  }
  for (const RdfNode *subject : subjects) {
    out += render(doc, *subject);
    bool first = true;
    std::string last_predicate;
    for (const auto &t : doc.triples) {
      if (t.subject != *subject) {
        continue;
      }
      std::string obj = render(doc, t.object);
      if (first) {
        out += " " + (t.predicate == kRdfType ? std::string("a")
                                             : compact(doc, t.predicate)) +
               " " + obj;
        first = false;
      } else if (t.predicate == last_predicate) {
        out += ", " + obj;
      } else {
        out += " ;\n    " +
               (t.predicate == kRdfType ? std::string("a")
                                        : compact(doc, t.predicate)) +
               " " + obj;
      }
      last_predicate = t.predicate;
    }
    out += " .\n";
  }
  return out;
}

} // namespace ersmeta
