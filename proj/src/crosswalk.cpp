#include "ersmeta/crosswalk.hpp"

#include "ersmeta/error.hpp"
#include "ersmeta/record_json.hpp"
#include "util.hpp"

#include <charconv>
#include <map>
#include <set>

namespace ersmeta {

using detail::ordered_json;

namespace {

constexpr std::string_view kGivenNameIri = "http://schema.org/givenName";
constexpr std::string_view kFamilyNameIri = "http://schema.org/familyName";
constexpr std::string_view kCodemetaContext =
    "https://doi.org/10.5063/schema/codemeta-2.0";

constexpr std::pair<TransformKind, std::string_view> kTransformNames[] = {
    {TransformKind::identity, "identity"},
    {TransformKind::rename, "rename"},
    {TransformKind::personSplit, "personSplit"},
    {TransformKind::personJoin, "personJoin"},
    {TransformKind::listJoin, "listJoin"},
    {TransformKind::constant, "constant"}};

std::pair<std::string, std::string> split_path(const std::string &path) {
  auto dot = path.find('.');
  if (dot == std::string::npos) {
    return {path, {}};
  }
  return {path.substr(0, dot), path.substr(dot + 1)};
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

bool is_person_like(const SchemaDefinition &schema, const ElementDefinition &el) {
  if (el.valueType.kind != ValueKind::subSchemaRef) {
    return false;
  }
  const SubSchema *sub = schema.sub_schema(el.valueType.subSchema);
  return sub != nullptr && field_with_iri(schema, *sub, kGivenNameIri) &&
         field_with_iri(schema, *sub, kFamilyNameIri);
}

bool scalar(ValueKind kind) { return kind != ValueKind::subSchemaRef; }

// Field rules of one top-level source element: source field -> target field.
using FieldRenames = std::map<std::string, std::string>;

class Loader {
public:
  Loader(const SchemaDefinition &source, const SchemaDefinition &target)
      : source_(source), target_(target) {}

  Crosswalk load(std::string_view document) {
    auto doc = detail::parse_json(document);
    if (!doc.is_object()) {
      throw ParseError("mapping document must be a JSON object");
    }
    Crosswalk cw;
    cw.sourceSchemaId = string_at(doc, "source", "mapping");
    cw.targetSchemaId = string_at(doc, "target", "mapping");
    if (cw.sourceSchemaId != source_.id) {
      throw ConfigurationError("mapping source '" + cw.sourceSchemaId +
                               "' does not match schema '" + source_.id + "'");
    }
    if (cw.targetSchemaId != target_.id) {
      throw ConfigurationError("mapping target '" + cw.targetSchemaId +
                               "' does not match schema '" + target_.id + "'");
    }
    auto rules = doc.find("rules");
    if (rules == doc.end() || !rules->is_array()) {
      throw ParseError("mapping.rules: expected array");
    }
    for (std::size_t i = 0; i < rules->size(); ++i) {
      cw.rules.push_back(read_rule((*rules)[i], i));
    }
    check(cw);
    return cw;
  }

private:
  static std::string string_at(const nlohmann::json &j, const char *key,
                               const std::string &where) {
    auto it = j.find(key);
    if (it == j.end()) {
      throw ParseError(where + ": missing key '" + key + "'");
    }
    if (!it->is_string()) {
      throw ParseError(where + "." + key + ": expected string");
    }
    return it->get<std::string>();
  }

  static MappingRule read_rule(const nlohmann::json &j, std::size_t index) {
    std::string where = "rules[" + std::to_string(index) + "]";
    if (!j.is_object()) {
      throw ParseError(where + ": expected object");
    }
    MappingRule rule;
    std::string transform = string_at(j, "transform", where);
    auto kind = parse_transform(transform);
    if (!kind) {
      throw ConfigurationError(where + ": unknown transform '" + transform +
                               "'");
    }
    rule.transform = *kind;
    if (j.contains("sourcePath")) {
      rule.sourcePath = string_at(j, "sourcePath", where);
    }
    rule.targetPath = string_at(j, "targetPath", where);
    if (j.contains("arg")) {
      rule.arg = string_at(j, "arg", where);
    } else if (rule.transform == TransformKind::listJoin) {
      rule.arg = ", ";
    }
    return rule;
  }

  static std::string describe(const MappingRule &r) {
    return "rule " + (r.sourcePath.empty() ? std::string("(constant)")
                                           : "'" + r.sourcePath + "'") +
           " -> '" + r.targetPath + "' (" + std::string(to_string(r.transform)) +
           ")";
  }

  [[noreturn]] static void fail(const MappingRule &r, const std::string &why) {
    throw ConfigurationError(describe(r) + ": " + why);
  }

  void check(const Crosswalk &cw) {
    std::set<std::string> sources;
    std::map<std::string, std::vector<const MappingRule *>> targets;
    std::map<std::string, FieldRenames> field_rules;
    std::map<std::string, const MappingRule *> parents;

    for (const auto &r : cw.rules) {
      if (r.is_field_rule()) {
        continue;
      }
      if (r.transform == TransformKind::constant) {
        if (!r.sourcePath.empty()) {
          fail(r, "constant rules take no sourcePath");
        }
      } else {
        if (element_by_id(source_, r.sourcePath) == nullptr) {
          fail(r, "dangling source path '" + r.sourcePath + "' in schema '" +
                      source_.id + "'");
        }
        if (!sources.insert(r.sourcePath).second) {
          fail(r, "source element already mapped by another rule");
        }
        parents[r.sourcePath] = &r;
      }
      if (r.targetPath.find('.') != std::string::npos ||
          element_by_id(target_, r.targetPath) == nullptr) {
        fail(r, "dangling target path '" + r.targetPath + "' in schema '" +
                    target_.id + "'");
      }
      targets[r.targetPath].push_back(&r);
    }

    for (const auto &r : cw.rules) {
      if (!r.is_field_rule()) {
        continue;
      }
      auto [src_el, src_field] = split_path(r.sourcePath);
      auto [tgt_el, tgt_field] = split_path(r.targetPath);
      if (r.transform != TransformKind::identity &&
          r.transform != TransformKind::rename) {
        fail(r, "field rules must be identity or rename");
      }
      auto parent = parents.find(src_el);
      if (parent == parents.end() ||
          (parent->second->transform != TransformKind::identity &&
           parent->second->transform != TransformKind::rename)) {
        fail(r, "no identity/rename rule maps element '" + src_el + "'");
      }
      if (parent->second->targetPath != tgt_el) {
        fail(r, "target element '" + tgt_el + "' differs from '" +
                    parent->second->targetPath + "' mapped for '" + src_el +
                    "'");
      }
      const SubSchema *src_sub = nested_of(source_, src_el);
      const SubSchema *tgt_sub = nested_of(target_, tgt_el);
      if (src_sub == nullptr || src_sub->field(src_field) == nullptr) {
        fail(r, "dangling source path '" + r.sourcePath + "'");
      }
      if (tgt_sub == nullptr || tgt_sub->field(tgt_field) == nullptr) {
        fail(r, "dangling target path '" + r.targetPath + "'");
      }
      if (!field_rules[src_el].emplace(src_field, tgt_field).second) {
        fail(r, "source field already mapped by another rule");
      }
    }

    for (const auto &[target, rules] : targets) {
      if (rules.size() < 2) {
        continue;
      }
      const ElementDefinition *t = element_by_id(target_, target);
      for (const MappingRule *r : rules) {
        if (r->transform != TransformKind::listJoin || !t->multiValued) {
          fail(*r, "target '" + target +
                       "' is shared; only listJoin rules into a multi-valued "
                       "target may merge");
        }
      }
    }

    for (const auto &r : cw.rules) {
      if (r.is_field_rule()) {
        continue;
      }
      const ElementDefinition &tgt = *element_by_id(target_, r.targetPath);
      const ElementDefinition *src =
          r.sourcePath.empty() ? nullptr : element_by_id(source_, r.sourcePath);
      switch (r.transform) {
      case TransformKind::identity:
        if (r.sourcePath != r.targetPath) {
          fail(r, "identity requires equal source and target paths");
        }
        [[fallthrough]];
      case TransformKind::rename: {
        auto renames = field_rules[r.sourcePath];
        std::string why = compatible(*src, tgt, renames, 0);
        if (!why.empty()) {
          fail(r, why);
        }
        break;
      }
      case TransformKind::personSplit:
        if (src->valueType.kind != ValueKind::text || !is_person_like(target_, tgt)) {
          fail(r, "personSplit maps a text name onto a person-typed element "
                  "with givenName/familyName fields");
        }
        break;
      case TransformKind::personJoin:
        if (!is_person_like(source_, *src) || tgt.valueType.kind != ValueKind::text) {
          fail(r, "personJoin maps a person-typed element with "
                  "givenName/familyName fields onto text");
        }
        break;
      case TransformKind::listJoin:
        if (!scalar(src->valueType.kind) || tgt.valueType.kind != ValueKind::text) {
          fail(r, "listJoin maps scalar values onto text");
        }
        break;
      case TransformKind::constant:
        if (!scalar(tgt.valueType.kind)) {
          fail(r, "constant target must be scalar");
        }
        try {
          constant_value(r.arg, tgt.valueType.kind);
        } catch (const Error &e) {
          fail(r, e.what());
        }
        break;
      }
    }
  }

  static const SubSchema *nested_of(const SchemaDefinition &schema,
                                    const std::string &element) {
    const ElementDefinition *el = element_by_id(schema, element);
    if (el == nullptr || el->valueType.kind != ValueKind::subSchemaRef) {
      return nullptr;
    }
    return schema.sub_schema(el->valueType.subSchema);
  }

  // Returns an empty string when values of `src` convert to `tgt` without
  // loss of any field, else the reason they do not.
  std::string compatible(const ElementDefinition &src,
                         const ElementDefinition &tgt,
                         const FieldRenames &renames, int depth) const {
    ValueKind s = src.valueType.kind;
    ValueKind t = tgt.valueType.kind;
    if (s == ValueKind::subSchemaRef || t == ValueKind::subSchemaRef) {
      if (s != t) {
        return "cannot map " + std::string(to_string(s)) + " onto " +
               std::string(to_string(t));
      }
      const SubSchema *ss = source_.sub_schema(src.valueType.subSchema);
      const SubSchema *ts = target_.sub_schema(tgt.valueType.subSchema);
      for (const auto &f : ss->fields) {
        auto it = depth == 0 ? renames.find(f.id) : renames.end();
        std::string tid = it != renames.end() ? it->second : f.id;
        const ElementDefinition *tf = ts->field(tid);
        if (tf == nullptr) {
          return "field '" + ss->id + "." + f.id + "' has no counterpart in "
                 "sub-schema '" + ts->id + "'";
        }
        std::string why = compatible(f, *tf, {}, depth + 1);
        if (!why.empty()) {
          return why;
        }
      }
      return {};
    }
    if (s == t || t == ValueKind::text ||
        (s == ValueKind::text && t == ValueKind::vocabularyTerm)) {
      return {};
    }
    return "cannot map " + std::string(to_string(s)) + " onto " +
           std::string(to_string(t));
  }

public:
  static Value constant_value(const std::string &arg, ValueKind kind) {
    switch (kind) {
    case ValueKind::text:
      return Value::text(arg);
    case ValueKind::iri:
      return Value::iri(arg);
    case ValueKind::date:
      return Value::date(arg);
    case ValueKind::vocabularyTerm:
      return Value::term(arg);
    case ValueKind::boolean:
      if (arg == "true" || arg == "false") {
        return Value::boolean(arg == "true");
      }
      break;
    case ValueKind::integer: {
      std::int64_t v = 0;
      auto [end, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), v);
      if (ec == std::errc{} && end == arg.data() + arg.size()) {
        return Value::integer(v);
      }
      break;
    }
    case ValueKind::number: {
      double v = 0;
      auto [end, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), v);
      if (ec == std::errc{} && end == arg.data() + arg.size()) {
        return Value::number(v);
      }
      break;
    }
    case ValueKind::subSchemaRef:
      break;
    }
    throw Error("constant '" + arg + "' does not fit valueType " +
                std::string(to_string(kind)));
  }

private:
  const SchemaDefinition &source_;
  const SchemaDefinition &target_;
};

class Converter {
public:
  Converter(const Crosswalk &cw, const SchemaDefinition &source,
            const SchemaDefinition &target)
      : source_(source), target_(target) {
    for (const auto &r : cw.rules) {
      if (r.is_field_rule()) {
        auto [src_el, src_field] = split_path(r.sourcePath);
        auto [tgt_el, tgt_field] = split_path(r.targetPath);
        renames_[src_el][src_field] = tgt_field;
      }
    }
  }

  Value convert(const Value &v, const ElementDefinition &src,
                const ElementDefinition &tgt, const FieldRenames *renames) const {
    ValueKind t = tgt.valueType.kind;
    if (const auto *nested = v.get_if<value::Nested>()) {
      if (t != ValueKind::subSchemaRef) {
        return Value::text(display(v));
      }
      const SubSchema *ss = source_.sub_schema(nested->subSchema);
      const SubSchema *ts = target_.sub_schema(tgt.valueType.subSchema);
      ValueMap fields;
      for (const auto &[key, list] : nested->fields.entries()) {
        std::string tid = key;
        if (renames != nullptr) {
          if (auto it = renames->find(key); it != renames->end()) {
            tid = it->second;
          }
        }
        const ElementDefinition *sf = ss != nullptr ? ss->field(key) : nullptr;
        const ElementDefinition *tf = ts != nullptr ? ts->field(tid) : nullptr;
        std::vector<Value> out;
        for (const auto &item : list) {
          out.push_back(sf != nullptr && tf != nullptr
                            ? convert(item, *sf, *tf, nullptr)
                            : item);
        }
        fields.set(tid, std::move(out));
      }
      return Value::nested(tgt.valueType.subSchema, std::move(fields));
    }
    if (t == ValueKind::text && src.valueType.kind != ValueKind::text) {
      const auto *term = v.get_if<value::Term>();
      if (term != nullptr && term->label.empty() && term->iri) {
        return Value::text(*term->iri);
      }
      return Value::text(display(v));
    }
    if (t == ValueKind::vocabularyTerm) {
      if (const auto *text = v.get_if<value::Text>()) {
        const Vocabulary *vocab =
            tgt.vocabularyRef ? target_.vocabulary(*tgt.vocabularyRef) : nullptr;
        const Term *term =
            vocab != nullptr ? resolve_term(*vocab, text->content) : nullptr;
        if (term != nullptr) {
          return Value::term(term->label, term->iri);
        }
        return Value::term(text->content);
      }
    }
    return v;
  }

  MetadataRecord apply(const MetadataRecord &record, const Crosswalk &cw,
                       ConversionReport &report) const {
    MetadataRecord out;
    out.schemaId = target_.id;

    for (const auto &el : source_.elements) {
      const auto *values = record.values.find(el.id);
      if (values == nullptr) {
        continue;
      }
      const MappingRule *rule = cw.rule_for(el.id);
      if (rule == nullptr) {
        report.dropped.push_back(el.id);
        continue;
      }
      report.mapped.emplace_back(rule->sourcePath, rule->targetPath);
      const ElementDefinition &tgt = *element_by_id(target_, rule->targetPath);
      std::vector<Value> produced = transform(*rule, el, tgt, *values);
      for (auto &v : produced) {
        out.values.add(tgt.id, std::move(v));
      }
    }
    for (const auto &[key, values] : record.values.entries()) {
      if (element_by_id(source_, key) == nullptr) {
        report.dropped.push_back(key);
      }
    }
    for (const auto &rule : cw.rules) {
      if (rule.transform == TransformKind::constant) {
        const ElementDefinition &tgt = *element_by_id(target_, rule.targetPath);
        out.values.add(tgt.id,
                       Loader::constant_value(rule.arg, tgt.valueType.kind));
        report.synthesized.push_back(rule.targetPath);
      }
    }

    ValueMap ordered;
    for (const auto &el : target_.elements) {
      if (const auto *values = out.values.find(el.id)) {
        ordered.set(el.id, *values);
      }
    }
    out.values = std::move(ordered);
    return out;
  }

private:
  std::vector<Value> transform(const MappingRule &rule,
                               const ElementDefinition &src,
                               const ElementDefinition &tgt,
                               const std::vector<Value> &values) const {
    std::vector<Value> out;
    switch (rule.transform) {
    case TransformKind::identity:
    case TransformKind::rename: {
      auto it = renames_.find(src.id);
      const FieldRenames *renames = it != renames_.end() ? &it->second : nullptr;
      for (const auto &v : values) {
        out.push_back(convert(v, src, tgt, renames));
      }
      break;
    }
    case TransformKind::personSplit: {
      const SubSchema *sub = target_.sub_schema(tgt.valueType.subSchema);
      const ElementDefinition *given = field_with_iri(target_, *sub, kGivenNameIri);
      const ElementDefinition *family =
          field_with_iri(target_, *sub, kFamilyNameIri);
      for (const auto &v : values) {
        auto [given_names, family_name] = split_person_name(display(v));
        ValueMap fields;
        if (!given_names.empty()) {
          fields.set(given->id, {Value::text(given_names)});
        }
        if (!family_name.empty()) {
          fields.set(family->id, {Value::text(family_name)});
        }
        out.push_back(Value::nested(sub->id, std::move(fields)));
      }
      break;
    }
    case TransformKind::personJoin: {
      const SubSchema *sub = source_.sub_schema(src.valueType.subSchema);
      const ElementDefinition *given = field_with_iri(source_, *sub, kGivenNameIri);
      const ElementDefinition *family =
          field_with_iri(source_, *sub, kFamilyNameIri);
      const ElementDefinition *name =
          field_with_iri(source_, *sub, "http://schema.org/name");
      for (const auto &v : values) {
        const auto *nested = v.get_if<value::Nested>();
        if (nested == nullptr) {
          out.push_back(Value::text(display(v)));
          continue;
        }
        auto first = [&](const ElementDefinition *f) -> std::string {
          if (f == nullptr) {
            return {};
          }
          const auto *list = nested->fields.find(f->id);
          return list != nullptr ? display(list->front()) : std::string{};
        };
        std::string joined = first(given);
        std::string fam = first(family);
        if (!fam.empty()) {
          joined += joined.empty() ? fam : " " + fam;
        }
        if (joined.empty()) {
          joined = first(name);
        }
        out.push_back(Value::text(std::move(joined)));
      }
      break;
    }
    case TransformKind::listJoin: {
      std::string joined;
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
          joined += rule.arg;
        }
        joined += display(values[i]);
      }
      out.push_back(Value::text(std::move(joined)));
      break;
    }
    case TransformKind::constant:
      break;
    }
    return out;
  }

  const SchemaDefinition &source_;
  const SchemaDefinition &target_;
  std::map<std::string, FieldRenames> renames_;
};

bool yaml_needs_quotes(std::string_view s) {
  if (s.empty()) {
    return true;
  }
  static const std::set<std::string_view> kReserved = {
      "true", "false", "yes", "no", "on", "off", "null", "~",
      "True", "False", "Yes", "No", "On", "Off", "Null", "TRUE",
      "FALSE", "YES", "NO", "ON", "OFF", "NULL"};
  if (kReserved.count(s) != 0) {
    return true;
  }
  if (s.front() == ' ' || s.back() == ' ') {
    return true;
  }
  static const std::string_view kIndicators = "-?:,[]{}#&*!|>'\"%@`";
  if (kIndicators.find(s.front()) != std::string_view::npos) {
    return true;
  }
  if (s.find(": ") != std::string_view::npos ||
      s.find(" #") != std::string_view::npos || s.back() == ':') {
    return true;
  }
  bool numeric_like = true;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (u < 0x20 || u == 0x7F) {
      return true;
    }
    if (!((c >= '0' && c <= '9') || c == '.' || c == 'e' || c == 'E' ||
          c == '+' || c == '-')) {
      numeric_like = false;
    }
  }
  return numeric_like || detail::is_iso_date(s);
}

std::string yaml_scalar(const Value &v) {
  if (v.get_if<std::int64_t>() != nullptr || v.get_if<double>() != nullptr ||
      v.get_if<bool>() != nullptr || v.get_if<value::Date>() != nullptr) {
    return display(v);
  }
  std::string text = display(v);
  if (!yaml_needs_quotes(text)) {
    return text;
  }
  // Double-quoted YAML accepts JSON string escapes.
  return nlohmann::json(text).dump();
}

class YamlWriter {
public:
  explicit YamlWriter(const SchemaDefinition &schema) : schema_(schema) {}

  void entries(const std::vector<ElementDefinition> &defs,
               const ValueMap &values, std::size_t indent, bool first_inline) {
    bool first = true;
    for (const auto &def : defs) {
      const auto *list = values.find(def.id);
      if (list == nullptr) {
        continue;
      }
      std::string pad =
          (first && first_inline) ? std::string{} : std::string(indent, ' ');
      first = false;
      out_ += pad + def.id + ":";
      if (!def.multiValued && list->size() == 1) {
        const Value &v = list->front();
        if (const auto *n = v.get_if<value::Nested>()) {
          out_ += "\n";
          nested(*n, indent + 2, false);
        } else {
          out_ += " " + yaml_scalar(v) + "\n";
        }
        continue;
      }
      out_ += "\n";
      for (const auto &v : *list) {
        out_ += std::string(indent + 2, ' ') + "- ";
        if (const auto *n = v.get_if<value::Nested>()) {
          if (n->fields.empty()) {
            out_ += "{}\n";
          } else {
            nested(*n, indent + 4, true);
          }
        } else {
          out_ += yaml_scalar(v) + "\n";
        }
      }
    }
  }

  std::string take() { return std::move(out_); }

private:
  void nested(const value::Nested &n, std::size_t indent, bool first_inline) {
    const SubSchema *sub = schema_.sub_schema(n.subSchema);
    if (sub == nullptr) {
      throw SerializationError("unknown sub-schema '" + n.subSchema + "'");
    }
    entries(sub->fields, n.fields, indent, first_inline);
  }

  const SchemaDefinition &schema_;
  std::string out_;
};

} // namespace

std::string_view to_string(TransformKind kind) {
  for (const auto &[k, name] : kTransformNames) {
    if (k == kind) {
      return name;
    }
  }
  return "?";
}

std::optional<TransformKind> parse_transform(std::string_view text) {
  for (const auto &[k, name] : kTransformNames) {
    if (name == text) {
      return k;
    }
  }
  return std::nullopt;
}

bool MappingRule::is_field_rule() const {
  return sourcePath.find('.') != std::string::npos;
}

const MappingRule *Crosswalk::rule_for(std::string_view source_element) const {
  for (const auto &r : rules) {
    if (!r.is_field_rule() && r.transform != TransformKind::constant &&
        r.sourcePath == source_element) {
      return &r;
    }
  }
  return nullptr;
}

std::string_view to_string(TargetFormat format) {
  switch (format) {
  case TargetFormat::codemetaJson:
    return "codemeta-json";
  case TargetFormat::cffYamlLike:
    return "cff-yaml-like";
  case TargetFormat::ersmeta:
    return "ersmeta";
  }
  return "?";
}

std::optional<TargetFormat> parse_target_format(std::string_view text) {
  if (text == "codemeta-json" || text == "codemeta") {
    return TargetFormat::codemetaJson;
  }
  if (text == "cff-yaml-like" || text == "cff") {
    return TargetFormat::cffYamlLike;
  }
  if (text == "ersmeta") {
    return TargetFormat::ersmeta;
  }
  return std::nullopt;
}

Crosswalk load_crosswalk(std::string_view document,
                         const SchemaDefinition &source,
                         const SchemaDefinition &target) {
  return Loader(source, target).load(document);
}

MetadataRecord apply_crosswalk(const MetadataRecord &record,
                               const Crosswalk &crosswalk,
                               const SchemaDefinition &source,
                               const SchemaDefinition &target,
                               ConversionReport &report) {
  if (record.schemaId != crosswalk.sourceSchemaId) {
    throw Error("record schema '" + record.schemaId +
                "' does not match crosswalk source '" +
                crosswalk.sourceSchemaId + "'");
  }
  return Converter(crosswalk, source, target).apply(record, crosswalk, report);
}

std::string render_codemeta(const MetadataRecord &record,
                            const SchemaDefinition &schema) {
  ordered_json doc;
  doc["@context"] = kCodemetaContext;
  doc["@type"] = "SoftwareSourceCode";
  ordered_json body = record_to_document(record, schema);
  for (auto it = body.begin(); it != body.end(); ++it) {
    if (it.key() != "@context") {
      doc[it.key()] = it.value();
    }
  }
  return detail::dump_document(doc);
}

std::string render_cff(const MetadataRecord &record,
                       const SchemaDefinition &schema) {
  for (const auto &[key, values] : record.values.entries()) {
    if (element_by_id(schema, key) == nullptr) {
      throw SerializationError("element '" + key +
                               "' is not declared by schema '" + schema.id +
                               "'");
    }
  }
  YamlWriter writer(schema);
  writer.entries(schema.elements, record.values, 0, false);
  return writer.take();
}

ConversionResult convert(const MetadataRecord &record,
                         const Crosswalk &crosswalk,
                         const SchemaDefinition &source,
                         const SchemaDefinition &target, TargetFormat format) {
  ConversionResult result;
  result.record =
      apply_crosswalk(record, crosswalk, source, target, result.report);
  switch (format) {
  case TargetFormat::codemetaJson:
    result.document = render_codemeta(result.record, target);
    break;
  case TargetFormat::cffYamlLike:
    result.document = render_cff(result.record, target);
    break;
  case TargetFormat::ersmeta:
    result.document = to_json(result.record, target);
    break;
  }
  return result;
}

std::string to_json(const ConversionReport &report) {
  ordered_json doc;
  doc["mapped"] = ordered_json::array();
  for (const auto &[source, target] : report.mapped) {
    doc["mapped"].push_back({{"sourcePath", source}, {"targetPath", target}});
  }
  doc["dropped"] = report.dropped;
  doc["synthesized"] = report.synthesized;
  return detail::dump_document(doc);
}

std::pair<std::string, std::string> split_person_name(std::string_view name) {
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  };
  while (!name.empty() && is_space(name.front())) {
    name.remove_prefix(1);
  }
  while (!name.empty() && is_space(name.back())) {
    name.remove_suffix(1);
  }
  std::size_t last = std::string_view::npos;
  for (std::size_t i = name.size(); i-- > 0;) {
    if (is_space(name[i])) {
      last = i;
      break;
    }
  }
  if (last == std::string_view::npos) {
    return {std::string{}, std::string(name)};
  }
  std::string_view given = name.substr(0, last);
  while (!given.empty() && is_space(given.back())) {
    given.remove_suffix(1);
  }
  return {std::string(given), std::string(name.substr(last + 1))};
}

} // namespace ersmeta
