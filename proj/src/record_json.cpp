#include "ersmeta/record_json.hpp"

#include "ersmeta/error.hpp"
#include "util.hpp"

#include <limits>

namespace ersmeta {

using detail::ordered_json;

namespace {

std::string compact_iri(const SchemaDefinition &schema, const std::string &iri) {
  for (const auto &[prefix, base] : schema.namespaces) {
    if (iri.size() > base.size() && iri.compare(0, base.size(), base) == 0) {
      return prefix + ":" + iri.substr(base.size());
    }
  }
  return iri;
}

ordered_json encode_values(const std::vector<Value> &values, bool multi,
                           const SchemaDefinition &schema) {
  if (!multi && values.size() == 1) {
    return encode_value(values.front(), schema);
  }
  ordered_json arr = ordered_json::array();
  for (const auto &v : values) {
    arr.push_back(encode_value(v, schema));
  }
  return arr;
}

class Decoder {
public:
  Decoder(const SchemaDefinition &schema, Strictness strictness,
          std::vector<UnknownField> &unknowns)
      : schema_(schema), strictness_(strictness), unknowns_(unknowns) {}

  void decode_entries(const nlohmann::json &object,
                      const std::vector<ElementDefinition> &defs,
                      const std::string &prefix, ValueMap &out) {
    for (const auto &[key, raw] : object.items()) {
      if (!key.empty() && key.front() == '@') {
        continue;
      }
      std::string path = prefix.empty() ? key : prefix + "." + key;
      const ElementDefinition *def = nullptr;
      for (const auto &d : defs) {
        if (d.id == key) {
          def = &d;
          break;
        }
      }
      if (def == nullptr) {
        if (strictness_ == Strictness::strict) {
          throw UnknownElementError(path);
        }
        unknowns_.push_back({path, raw.dump()});
        continue;
      }
      if (raw.is_null()) {
        continue;
      }
      std::vector<Value> values;
      if (raw.is_array()) {
        for (std::size_t i = 0; i < raw.size(); ++i) {
          values.push_back(decode(raw[i], *def,
                                  path + "[" + std::to_string(i) + "]"));
        }
      } else {
        values.push_back(decode(raw, *def, path));
      }
      out.set(key, std::move(values));
    }
  }

private:
  Value decode(const nlohmann::json &j, const ElementDefinition &def,
               const std::string &path) {
    auto mismatch = [&](const char *expected) -> TypeMismatchError {
      return TypeMismatchError(path, std::string("expected ") + expected +
                                         " for valueType " +
                                         std::string(to_string(
                                             def.valueType.kind)) +
                                         ", got " + j.type_name());
    };
    switch (def.valueType.kind) {
    case ValueKind::text:
      if (!j.is_string()) {
        throw mismatch("string");
      }
      return Value::text(j.get<std::string>());
    case ValueKind::iri:
      if (!j.is_string()) {
        throw mismatch("string");
      }
      return Value::iri(j.get<std::string>());
    case ValueKind::date:
      if (!j.is_string()) {
        throw mismatch("string");
      }
      return Value::date(j.get<std::string>());
    case ValueKind::integer:
      if (j.is_number_integer() && !j.is_number_unsigned()) {
        return Value::integer(j.get<std::int64_t>());
      }
      if (j.is_number_unsigned() &&
          j.get<std::uint64_t>() <=
              static_cast<std::uint64_t>(
                  std::numeric_limits<std::int64_t>::max())) {
        return Value::integer(static_cast<std::int64_t>(j.get<std::uint64_t>()));
      }
      throw mismatch("integer");
    case ValueKind::number:
      if (!j.is_number()) {
        throw mismatch("number");
      }
      return Value::number(j.get<double>());
    case ValueKind::boolean:
      if (!j.is_boolean()) {
        throw mismatch("boolean");
      }
      return Value::boolean(j.get<bool>());
    case ValueKind::vocabularyTerm:
      if (j.is_string()) {
        return Value::term(j.get<std::string>());
      }
      if (j.is_object() && j.contains("@id") && j.at("@id").is_string()) {
        std::string iri = j.at("@id").get<std::string>();
        std::string label;
        if (j.contains("name")) {
          if (!j.at("name").is_string()) {
            throw TypeMismatchError(path + ".name", "expected string");
          }
          label = j.at("name").get<std::string>();
        }
        return Value::term(std::move(label), std::move(iri));
      }
      throw mismatch("term label or {\"@id\", \"name\"} object");
    case ValueKind::subSchemaRef: {
      if (!j.is_object()) {
        throw mismatch("object");
      }
      const SubSchema *sub = schema_.sub_schema(def.valueType.subSchema);
      ValueMap fields;
      static const std::vector<ElementDefinition> kNone;
      decode_entries(j, sub != nullptr ? sub->fields : kNone, path, fields);
      return Value::nested(def.valueType.subSchema, std::move(fields));
    }
    }
    throw mismatch("value");
  }

  const SchemaDefinition &schema_;
  Strictness strictness_;
  std::vector<UnknownField> &unknowns_;
};

} // namespace

ordered_json encode_value(const Value &v, const SchemaDefinition &schema) {
  struct Visitor {
    const SchemaDefinition &schema;
    ordered_json operator()(const value::Text &t) const { return t.content; }
    ordered_json operator()(const value::Iri &i) const { return i.iri; }
    ordered_json operator()(const value::Date &d) const { return d.iso; }
    ordered_json operator()(std::int64_t i) const { return i; }
    ordered_json operator()(double d) const { return d; }
    ordered_json operator()(bool b) const { return b; }
    ordered_json operator()(const value::Term &t) const {
      if (!t.iri) {
        return t.label;
      }
      ordered_json j;
      j["@id"] = *t.iri;
      j["name"] = t.label;
      return j;
    }
    ordered_json operator()(const value::Nested &n) const {
      ordered_json j;
      j["@type"] = n.subSchema;
      const SubSchema *sub = schema.sub_schema(n.subSchema);
      if (sub == nullptr) {
        throw SerializationError("unknown sub-schema '" + n.subSchema + "'");
      }
      for (const auto &[key, values] : n.fields.entries()) {
        if (sub->field(key) == nullptr) {
          throw SerializationError("field '" + key +
                                   "' is not declared by sub-schema '" +
                                   n.subSchema + "'");
        }
      }
      for (const auto &f : sub->fields) {
        if (const auto *values = n.fields.find(f.id)) {
          j[f.id] = encode_values(*values, f.multiValued, schema);
        }
      }
      return j;
    }
  };
  return std::visit(Visitor{schema}, v.data);
}

ordered_json json_context(const SchemaDefinition &schema) {
  ordered_json ctx = ordered_json::object();
  for (const auto &[prefix, base] : schema.namespaces) {
    ctx[prefix] = base;
  }
  for (const auto &el : schema.elements) {
    ctx[el.id] = compact_iri(schema, schema.term_iri(el));
  }
  for (const auto &sub : schema.subSchemas) {
    for (const auto &f : sub.fields) {
      if (!ctx.contains(f.id)) {
        ctx[f.id] = compact_iri(schema, schema.term_iri(f));
      }
    }
  }
  return ctx;
}

ordered_json record_to_document(const MetadataRecord &record,
                                const SchemaDefinition &schema) {
  for (const auto &[key, values] : record.values.entries()) {
    if (element_by_id(schema, key) == nullptr) {
      throw SerializationError("element '" + key +
                               "' is not declared by schema '" + schema.id +
                               "'");
    }
  }
  ordered_json doc;
  doc["@context"] = json_context(schema);
  for (const auto &el : schema.elements) {
    if (const auto *values = record.values.find(el.id)) {
      doc[el.id] = encode_values(*values, el.multiValued, schema);
    }
  }
  return doc;
}

std::string to_json(const MetadataRecord &record,
                    const SchemaDefinition &schema) {
  return detail::dump_document(record_to_document(record, schema));
}

ParsedRecord record_from_document(const nlohmann::json &doc,
                                  const SchemaDefinition &schema,
                                  Strictness strictness) {
  if (!doc.is_object()) {
    throw ParseError("record document must be a JSON object");
  }
  ParsedRecord result;
  result.record.schemaId = schema.id;
  Decoder decoder(schema, strictness, result.unknowns);
  decoder.decode_entries(doc, schema.elements, "", result.record.values);
  // Keep schema declaration order regardless of document key order.
  ValueMap ordered;
  for (const auto &el : schema.elements) {
    if (const auto *values = result.record.values.find(el.id)) {
      ordered.set(el.id, *values);
    }
  }
  result.record.values = std::move(ordered);
  return result;
}

ParsedRecord from_json(std::string_view text, const SchemaDefinition &schema,
                       Strictness strictness) {
  return record_from_document(detail::parse_json(text), schema, strictness);
}

} // namespace ersmeta
