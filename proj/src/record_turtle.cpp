#include "ersmeta/record_turtle.hpp"

#include "ersmeta/error.hpp"
#include "ersmeta/turtle.hpp"
#include "util.hpp"

#include <charconv>
#include <map>
#include <set>
#include <unordered_map>

namespace ersmeta {

namespace {

const std::string kXsdPrefix = "xsd";

bool simple_local(std::string_view local) {
  if (local.empty() || local.front() == '-') {
    return false;
  }
  for (char c : local) {
    auto u = static_cast<unsigned char>(c);
    if (!((u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') ||
          (u >= '0' && u <= '9') || c == '_' || c == '-')) {
      return false;
    }
  }
  return true;
}

class Writer {
public:
  explicit Writer(const SchemaDefinition &schema) : schema_(schema) {}

  std::string compact(const std::string &iri) {
    for (const auto &[prefix, base] : schema_.namespaces) {
      if (iri.size() > base.size() && iri.compare(0, base.size(), base) == 0 &&
          simple_local(std::string_view(iri).substr(base.size()))) {
        used_.insert(prefix);
        return prefix + ":" + iri.substr(base.size());
      }
    }
    if (iri.compare(0, kXsd.size(), kXsd) == 0 &&
        simple_local(std::string_view(iri).substr(kXsd.size()))) {
      uses_xsd_ = true;
      return kXsdPrefix + ":" + iri.substr(kXsd.size());
    }
    return "<" + iri + ">";
  }

  std::string typed(const std::string &lexical, const char *type) {
    return "\"" + escape_turtle_string(lexical) + "\"^^" +
           compact(std::string(kXsd) + type);
  }

  std::string value(const Value &v, int depth) {
    if (const auto *t = v.get_if<value::Text>()) {
      return "\"" + escape_turtle_string(t->content) + "\"";
    }
    if (const auto *i = v.get_if<value::Iri>()) {
      return "<" + i->iri + ">";
    }
    if (const auto *d = v.get_if<value::Date>()) {
      return typed(d->iso, "date");
    }
    if (const auto *n = v.get_if<std::int64_t>()) {
      return typed(std::to_string(*n), "integer");
    }
    if (const auto *x = v.get_if<double>()) {
      return typed(detail::format_double(*x), "double");
    }
    if (const auto *b = v.get_if<bool>()) {
      return typed(*b ? "true" : "false", "boolean");
    }
    if (const auto *term = v.get_if<value::Term>()) {
      if (term->iri) {
        return "<" + *term->iri + ">";
      }
      return "\"" + escape_turtle_string(term->label) + "\"";
    }
    const auto &nested = std::get<value::Nested>(v.data);
    const SubSchema *sub = schema_.sub_schema(nested.subSchema);
    if (sub == nullptr) {
      throw SerializationError("unknown sub-schema '" + nested.subSchema + "'");
    }
    for (const auto &[key, values] : nested.fields.entries()) {
      if (sub->field(key) == nullptr) {
        throw SerializationError("field '" + key +
                                 "' is not declared by sub-schema '" +
                                 nested.subSchema + "'");
      }
    }
    std::string body = group(sub->fields, nested.fields, depth + 1);
    if (body.empty()) {
      return "[]";
    }
    return "[\n" + body + "\n" + indent(depth) + "]";
  }

  /// Predicate groups for the declared fields present in `values`, joined
  /// with " ;\n". Each line is indented one level below `depth - 1`.
  std::string group(const std::vector<ElementDefinition> &defs,
                    const ValueMap &values, int depth) {
    std::string out;
    for (const auto &def : defs) {
      const auto *list = values.find(def.id);
      if (list == nullptr) {
        continue;
      }
      if (!out.empty()) {
        out += " ;\n";
      }
      out += indent(depth) + compact(schema_.term_iri(def)) + " ";
      for (std::size_t i = 0; i < list->size(); ++i) {
        if (i > 0) {
          out += ", ";
        }
        out += value((*list)[i], depth);
      }
    }
    return out;
  }

  std::string header() const {
    std::string out;
    for (const auto &[prefix, base] : schema_.namespaces) {
      if (used_.count(prefix) != 0) {
        out += "@prefix " + prefix + ": <" + base + "> .\n";
      }
    }
    if (uses_xsd_) {
      out += "@prefix " + kXsdPrefix + ": <" + std::string(kXsd) + "> .\n";
    }
    return out;
  }

private:
  static std::string indent(int depth) {
    return std::string(static_cast<std::size_t>(depth) * 4, ' ');
  }

  const SchemaDefinition &schema_;
  std::set<std::string> used_;
  bool uses_xsd_ = false;
};

class Reader {
public:
  Reader(const SchemaDefinition &schema, Strictness strictness,
         const TripleDocument &doc, std::vector<UnknownField> &unknowns)
      : schema_(schema), strictness_(strictness), unknowns_(unknowns) {
    for (const auto &t : doc.triples) {
      if (t.subject.kind == RdfNode::Kind::blank) {
        blank_[t.subject.value].push_back(&t);
      }
    }
  }

  void read_node(const std::vector<const Triple *> &triples,
                 const std::vector<ElementDefinition> &defs,
                 const std::string &prefix, ValueMap &out) {
    std::unordered_map<std::string, const ElementDefinition *> by_iri;
    for (const auto &d : defs) {
      by_iri.emplace(schema_.term_iri(d), &d);
    }
    for (const Triple *t : triples) {
      if (t->predicate == kRdfType) {
        continue;
      }
      auto it = by_iri.find(t->predicate);
      if (it == by_iri.end()) {
        std::string path =
            prefix.empty() ? t->predicate : prefix + "." + t->predicate;
        if (strictness_ == Strictness::strict) {
          throw UnknownElementError(path);
        }
        unknowns_.push_back({path, to_ntriples(t->object)});
        continue;
      }
      const ElementDefinition &def = *it->second;
      std::string path = prefix.empty() ? def.id : prefix + "." + def.id;
      out.add(def.id, decode(t->object, def, path));
    }
  }

  std::set<std::string> visited_blanks() const { return visited_; }
  const std::map<std::string, std::vector<const Triple *>> &blanks() const {
    return blank_;
  }

private:
  static bool has_type(const RdfNode &node,
                       std::initializer_list<const char *> types) {
    if (node.datatype.empty()) {
      return false;
    }
    for (const char *t : types) {
      if (node.datatype == std::string(kXsd) + t) {
        return true;
      }
    }
    return false;
  }

  Value decode(const RdfNode &node, const ElementDefinition &def,
               const std::string &path) {
    auto mismatch = [&](const char *expected) {
      return TypeMismatchError(path, std::string("expected ") + expected +
                                         " for valueType " +
                                         std::string(to_string(
                                             def.valueType.kind)) +
                                         ", got " + to_ntriples(node));
    };
    bool literal = node.kind == RdfNode::Kind::literal;
    switch (def.valueType.kind) {
    case ValueKind::text:
      if (!literal || !(node.datatype.empty() || has_type(node, {"string"}))) {
        throw mismatch("string literal");
      }
      return Value::text(node.value);
    case ValueKind::iri:
      if (node.kind == RdfNode::Kind::iri) {
        return Value::iri(node.value);
      }
      if (literal && has_type(node, {"anyURI"})) {
        return Value::iri(node.value);
      }
      throw mismatch("IRI");
    case ValueKind::date:
      if (!literal || !(node.datatype.empty() || has_type(node, {"date"}))) {
        throw mismatch("xsd:date literal");
      }
      return Value::date(node.value);
    case ValueKind::integer: {
      if (!literal ||
          !has_type(node, {"integer", "int", "long", "short", "byte",
                           "nonNegativeInteger", "positiveInteger"})) {
        throw mismatch("xsd:integer literal");
      }
      std::string_view lex = node.value;
      if (!lex.empty() && lex.front() == '+') {
        lex.remove_prefix(1);
      }
      std::int64_t v = 0;
      auto [end, ec] = std::from_chars(lex.data(), lex.data() + lex.size(), v);
      if (ec != std::errc{} || end != lex.data() + lex.size()) {
        throw mismatch("xsd:integer literal");
      }
      return Value::integer(v);
    }
    case ValueKind::number: {
      if (!literal ||
          !has_type(node, {"double", "float", "decimal", "integer"})) {
        throw mismatch("numeric literal");
      }
      std::string_view lex = node.value;
      if (!lex.empty() && lex.front() == '+') {
        lex.remove_prefix(1);
      }
      double v = 0;
      auto [end, ec] = std::from_chars(lex.data(), lex.data() + lex.size(), v);
      if (ec != std::errc{} || end != lex.data() + lex.size()) {
        throw mismatch("numeric literal");
      }
      return Value::number(v);
    }
    case ValueKind::boolean:
      if (literal && has_type(node, {"boolean"})) {
        if (node.value == "true" || node.value == "1") {
          return Value::boolean(true);
        }
        if (node.value == "false" || node.value == "0") {
          return Value::boolean(false);
        }
      }
      throw mismatch("xsd:boolean literal");
    case ValueKind::vocabularyTerm:
      if (node.kind == RdfNode::Kind::iri) {
        const Vocabulary *vocab =
            def.vocabularyRef ? schema_.vocabulary(*def.vocabularyRef) : nullptr;
        const Term *term =
            vocab != nullptr ? resolve_term(*vocab, node.value) : nullptr;
        return Value::term(term != nullptr ? term->label : std::string{},
                           node.value);
      }
      if (literal) {
        return Value::term(node.value);
      }
      throw mismatch("term IRI or label");
    case ValueKind::subSchemaRef: {
      if (node.kind != RdfNode::Kind::blank) {
        throw mismatch("blank node");
      }
      if (!visited_.insert(node.value).second) {
        throw ParseError(path + ": blank node _:" + node.value +
                         " is referenced more than once");
      }
      const SubSchema *sub = schema_.sub_schema(def.valueType.subSchema);
      ValueMap fields;
      auto it = blank_.find(node.value);
      if (sub != nullptr && it != blank_.end()) {
        read_node(it->second, sub->fields, path, fields);
      } else if (it != blank_.end()) {
        static const std::vector<ElementDefinition> kNone;
        read_node(it->second, kNone, path, fields);
      }
      return Value::nested(def.valueType.subSchema, std::move(fields));
    }
    }
    throw mismatch("value");
  }

  const SchemaDefinition &schema_;
  Strictness strictness_;
  std::vector<UnknownField> &unknowns_;
  std::map<std::string, std::vector<const Triple *>> blank_;
  std::set<std::string> visited_;
};

} // namespace

std::string record_subject(const MetadataRecord &record,
                           const SchemaDefinition &schema) {
  const ElementDefinition *id_el = element_by_id(schema, "identifier");
  if (id_el != nullptr && id_el->valueType.kind == ValueKind::iri) {
    if (const auto *values = record.values.find("identifier")) {
      if (const auto *iri = values->front().get_if<value::Iri>()) {
        if (detail::is_absolute_iri(iri->iri)) {
          return iri->iri;
        }
      }
    }
  }
  std::string name;
  if (const auto *values = record.values.find("name")) {
    name = display(values->front());
  }
  return "urn:ersmeta:record:" + schema.id + ":" +
         detail::hex64(detail::fnv1a64(name));
}

std::string to_turtle(const MetadataRecord &record,
                      const SchemaDefinition &schema) {
  for (const auto &[key, values] : record.values.entries()) {
    if (element_by_id(schema, key) == nullptr) {
      throw SerializationError("element '" + key +
                               "' is not declared by schema '" + schema.id +
                               "'");
    }
  }
  Writer writer(schema);
  std::string subject = "<" + record_subject(record, schema) + ">";
  std::string type = writer.compact(std::string(kRecordClass));
  std::string body = writer.group(schema.elements, record.values, 1);

  std::string out = writer.header();
  out += "\n" + subject + " a " + type;
  if (!body.empty()) {
    out += " ;\n" + body;
  }
  out += " .\n";
  return out;
}

ParsedRecord from_turtle(std::string_view text, const SchemaDefinition &schema,
                         Strictness strictness) {
  TripleDocument doc = parse_turtle(text);

  std::vector<std::string> subjects;
  std::vector<const Triple *> root;
  for (const auto &t : doc.triples) {
    if (t.subject.kind != RdfNode::Kind::iri) {
      continue;
    }
    if (subjects.empty() || subjects.front() != t.subject.value) {
      bool known = false;
      for (const auto &s : subjects) {
        known = known || s == t.subject.value;
      }
      if (!known) {
        subjects.push_back(t.subject.value);
      }
    }
  }
  if (subjects.size() != 1) {
    throw ParseError("expected exactly one non-blank subject, found " +
                     std::to_string(subjects.size()));
  }
  for (const auto &t : doc.triples) {
    if (t.subject.kind == RdfNode::Kind::iri) {
      root.push_back(&t);
    }
  }

  ParsedRecord result;
  result.record.schemaId = schema.id;
  Reader reader(schema, strictness, doc, result.unknowns);
  reader.read_node(root, schema.elements, "", result.record.values);

  auto visited = reader.visited_blanks();
  for (const auto &[label, triples] : reader.blanks()) {
    if (visited.count(label) != 0) {
      continue;
    }
    if (strictness == Strictness::strict) {
      throw ParseError("blank node _:" + label +
                       " is not reachable from the record subject");
    }
    for (const Triple *t : triples) {
      result.unknowns.push_back(
          {"_:" + label + " " + t->predicate, to_ntriples(t->object)});
    }
  }

  ValueMap ordered;
  for (const auto &el : schema.elements) {
    if (const auto *values = result.record.values.find(el.id)) {
      ordered.set(el.id, *values);
    }
  }
  result.record.values = std::move(ordered);
  return result;
}

} // namespace ersmeta
