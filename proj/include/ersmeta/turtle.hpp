#pragma once

// Turtle subset: @prefix/PREFIX, IRIs, prefixed names, `a`, labeled and
// anonymous ([ ... ]) blank nodes, string literals (short and long forms) with
// language tags or ^^ datatypes, numeric and boolean shorthand literals,
// predicate lists (;) and object lists (,). Collections, graphs and @base are
// rejected with UnsupportedConstructError. IRIs are taken verbatim; relative
// IRIs are not resolved.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ersmeta {

inline constexpr std::string_view kRdfType =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";

struct RdfNode {
  enum class Kind { iri, blank, literal };

  Kind kind = Kind::iri;
  /// IRI text, blank node label (without "_:"), or literal lexical form.
  std::string value;
  /// Literal datatype IRI; empty for plain and language-tagged literals.
  std::string datatype;
  std::string language;

  static RdfNode iri(std::string v) { return {Kind::iri, std::move(v), {}, {}}; }
  static RdfNode blank(std::string label) {
    return {Kind::blank, std::move(label), {}, {}};
  }
  static RdfNode literal(std::string lexical, std::string datatype = {},
                         std::string language = {}) {
    return {Kind::literal, std::move(lexical), std::move(datatype),
            std::move(language)};
  }

  friend auto operator<=>(const RdfNode &, const RdfNode &) = default;
};

struct Triple {
  RdfNode subject;
  std::string predicate;
  RdfNode object;

  friend auto operator<=>(const Triple &, const Triple &) = default;
};

struct TripleDocument {
  /// prefix -> IRI base, in declaration order.
  std::vector<std::pair<std::string, std::string>> prefixes;
  std::vector<Triple> triples;
};

/// Throws ParseError (with line/column) or UnsupportedConstructError.
TripleDocument parse_turtle(std::string_view text);

/// Writes prefixes, then triples grouped by subject in first-appearance order.
std::string write_turtle(const TripleDocument &doc);

/// N-Triples style rendering of a single node.
std::string to_ntriples(const RdfNode &node);

/// Escapes a string for use inside a double-quoted Turtle literal.
std::string escape_turtle_string(std::string_view text);

} // namespace ersmeta
