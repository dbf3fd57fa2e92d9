#include "ersmeta/schema.hpp"

#include "ersmeta/error.hpp"
#include "util.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace ersmeta {

using detail::ordered_json;

namespace {

constexpr std::pair<Tier, std::string_view> kTierNames[] = {
    {Tier::mandatory, "mandatory"},
    {Tier::recommended, "recommended"},
    {Tier::optional, "optional"}};

constexpr std::pair<ValueKind, std::string_view> kKindNames[] = {
    {ValueKind::text, "text"},
    {ValueKind::iri, "iri"},
    {ValueKind::date, "date"},
    {ValueKind::integer, "integer"},
    {ValueKind::number, "number"},
    {ValueKind::boolean, "boolean"},
    {ValueKind::vocabularyTerm, "vocabularyTerm"},
    {ValueKind::subSchemaRef, "subSchemaRef"}};

constexpr std::pair<Provenance, std::string_view> kProvenanceNames[] = {
    {Provenance::schemaOrg, "schema.org"},
    {Provenance::codemeta, "codemeta"},
    {Provenance::softwareDescriptionOntology, "softwareDescriptionOntology"},
    {Provenance::ontosoft, "ontosoft"},
    {Provenance::oeo, "oeo"},
    {Provenance::m4i, "m4i"},
    {Provenance::newElement, "new"}};

constexpr std::pair<VocabularyKind, std::string_view> kVocabularyKindNames[] =
    {{VocabularyKind::closedList, "closedList"},
     {VocabularyKind::ontologyClass, "ontologyClass"}};

template <typename Enum, std::size_t N>
std::string_view name_of(const std::pair<Enum, std::string_view> (&table)[N],
                         Enum value) {
  for (const auto &[e, name] : table) {
    if (e == value) {
      return name;
    }
  }
  return "?";
}

template <typename Enum, std::size_t N>
std::optional<Enum>
value_of(const std::pair<Enum, std::string_view> (&table)[N],
         std::string_view text) {
  for (const auto &[e, name] : table) {
    if (name == text) {
      return e;
    }
  }
  return std::nullopt;
}

// Nesting limit: a sub-schema field may reference another sub-schema, whose
// fields must then be scalar.
constexpr int kMaxSubSchemaDepth = 2;

// Structural reader. Shape errors (missing keys, wrong JSON types) are parse
// errors; semantic problems (bad enum values, dangling references) are
// collected for the consistency report.
class Reader {
public:
  Reader(const std::filesystem::path &base_dir,
         std::vector<std::string> &problems)
      : base_dir_(base_dir), problems_(problems) {}

  SchemaDefinition read(const nlohmann::json &doc) {
    expect_object(doc, "document");
    SchemaDefinition schema;
    schema.id = string_at(doc, "id", "document");
    schema.version = string_at(doc, "version", "document");

    for (const auto &[i, area] : indexed(doc, "areas", "document")) {
      std::string where = "areas[" + std::to_string(i) + "]";
      expect_object(area, where);
      schema.areas.push_back({string_at(area, "id", where),
                              string_at(area, "label", where),
                              optional_string(area, "description", where)});
    }
    for (const auto &[i, element] : indexed(doc, "elements", "document")) {
      schema.elements.push_back(
          read_element(element, "elements[" + std::to_string(i) + "]", true));
    }
    for (const auto &[i, sub] : indexed(doc, "subSchemas", "document")) {
      std::string where = "subSchemas[" + std::to_string(i) + "]";
      expect_object(sub, where);
      SubSchema s;
      s.id = string_at(sub, "id", where);
      for (const auto &[j, field] : indexed(sub, "fields", where)) {
        s.fields.push_back(read_element(
            field, where + ".fields[" + std::to_string(j) + "]", false));
      }
      schema.subSchemas.push_back(std::move(s));
    }
    for (const auto &[i, vocab] : indexed(doc, "vocabularies", "document")) {
      std::string where = "vocabularies[" + std::to_string(i) + "]";
      if (vocab.is_string()) {
        schema.vocabularies.push_back(
            read_vocabulary_file(vocab.get<std::string>(), where));
      } else {
        schema.vocabularies.push_back(read_vocabulary(vocab, where));
      }
    }
    if (doc.contains("namespaces")) {
      const auto &ns = doc.at("namespaces");
      expect_object(ns, "namespaces");
      for (const auto &[prefix, iri] : ns.items()) {
        if (!iri.is_string()) {
          throw ParseError("namespaces." + prefix + ": expected string");
        }
        schema.namespaces.emplace_back(prefix, iri.get<std::string>());
      }
    }
    return schema;
  }

  Vocabulary read_vocabulary(const nlohmann::json &v,
                             const std::string &where) {
    expect_object(v, where);
    Vocabulary vocab;
    vocab.id = string_at(v, "id", where);
    std::string kind = string_at(v, "kind", where);
    if (auto k = parse_vocabulary_kind(kind)) {
      vocab.kind = *k;
    } else {
      problems_.push_back("vocabulary '" + vocab.id + "': unknown kind '" +
                          kind + "'");
    }
    for (const auto &[i, t] : indexed(v, "terms", where)) {
      std::string twhere = where + ".terms[" + std::to_string(i) + "]";
      expect_object(t, twhere);
      Term term;
      term.label = string_at(t, "label", twhere);
      if (t.contains("iri")) {
        term.iri = string_at(t, "iri", twhere);
      }
      vocab.terms.push_back(std::move(term));
    }
    vocab.sourceNote = optional_string(v, "sourceNote", where);
    return vocab;
  }

private:
  static void expect_object(const nlohmann::json &j, const std::string &where) {
    if (!j.is_object()) {
      throw ParseError(where + ": expected object");
    }
  }

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

  static std::string optional_string(const nlohmann::json &j, const char *key,
                                     const std::string &where) {
    return j.contains(key) ? string_at(j, key, where) : std::string{};
  }

  static std::vector<std::pair<std::size_t, const nlohmann::json &>>
  indexed(const nlohmann::json &j, const char *key, const std::string &where) {
    std::vector<std::pair<std::size_t, const nlohmann::json &>> out;
    auto it = j.find(key);
    if (it == j.end()) {
      return out;
    }
    if (!it->is_array()) {
      throw ParseError(where + "." + key + ": expected array");
    }
    for (std::size_t i = 0; i < it->size(); ++i) {
      out.emplace_back(i, (*it)[i]);
    }
    return out;
  }

  ElementDefinition read_element(const nlohmann::json &e,
                                 const std::string &where, bool top_level) {
    expect_object(e, where);
    ElementDefinition el;
    el.id = string_at(e, "id", where);
    el.label = optional_string(e, "label", where);
    el.description = optional_string(e, "description", where);
    std::string label = "element '" + el.id + "'";

    std::string tier = string_at(e, "tier", where);
    if (auto t = parse_tier(tier)) {
      el.tier = *t;
    } else {
      problems_.push_back(label + ": unknown tier '" + tier + "'");
    }
    if (top_level) {
      el.area = string_at(e, "area", where);
    } else {
      el.area = optional_string(e, "area", where);
    }

    std::string kind = string_at(e, "valueType", where);
    if (auto k = parse_value_kind(kind)) {
      el.valueType.kind = *k;
    } else {
      problems_.push_back(label + ": unknown valueType '" + kind + "'");
    }
    if (el.valueType.kind == ValueKind::subSchemaRef) {
      el.valueType.subSchema = string_at(e, "subSchemaRef", where);
    }
    if (e.contains("multiValued")) {
      if (!e.at("multiValued").is_boolean()) {
        throw ParseError(where + ".multiValued: expected boolean");
      }
      el.multiValued = e.at("multiValued").get<bool>();
    }
    if (e.contains("vocabularyRef")) {
      el.vocabularyRef = string_at(e, "vocabularyRef", where);
    }
    std::string provenance = string_at(e, "provenance", where);
    if (auto p = parse_provenance(provenance)) {
      el.provenance = *p;
    } else {
      problems_.push_back(label + ": unknown provenance '" + provenance + "'");
    }
    if (e.contains("sourceIri")) {
      el.sourceIri = string_at(e, "sourceIri", where);
    }
    return el;
  }

  Vocabulary read_vocabulary_file(const std::string &relative,
                                  const std::string &where) {
    auto path = base_dir_ / relative;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw ParseError(where + ": cannot read vocabulary file '" +
                       path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_vocabulary(detail::parse_json(buf.str()), where);
  }

  std::filesystem::path base_dir_;
  std::vector<std::string> &problems_;
};

template <typename T, typename Key>
void check_unique(const std::vector<T> &items, Key key, const std::string &what,
                  std::vector<std::string> &problems) {
  std::set<std::string> seen;
  for (const auto &item : items) {
    const std::string &k = key(item);
    if (!seen.insert(k).second) {
      problems.push_back("duplicate " + what + " '" + k + "'");
    }
  }
}

void check_element(const SchemaDefinition &schema, const ElementDefinition &el,
                   const std::string &label, bool top_level,
                   std::vector<std::string> &problems) {
  if (el.id.empty()) {
    problems.push_back(label + ": empty id");
  }
  if (top_level && schema.area(el.area) == nullptr) {
    problems.push_back(label + ": references unknown area '" + el.area + "'");
  }
  if (el.valueType.kind == ValueKind::subSchemaRef &&
      schema.sub_schema(el.valueType.subSchema) == nullptr) {
    problems.push_back(label + ": references unknown sub-schema '" +
                       el.valueType.subSchema + "'");
  }
  bool is_term = el.valueType.kind == ValueKind::vocabularyTerm;
  if (is_term && !el.vocabularyRef) {
    problems.push_back(label + ": valueType vocabularyTerm requires "
                               "vocabularyRef");
  }
  if (!is_term && el.vocabularyRef) {
    problems.push_back(label + ": vocabularyRef given but valueType is " +
                       std::string(to_string(el.valueType.kind)));
  }
  if (el.vocabularyRef && schema.vocabulary(*el.vocabularyRef) == nullptr) {
    problems.push_back(label + ": references unknown vocabulary '" +
                       *el.vocabularyRef + "'");
  }
  if (el.provenance != Provenance::newElement && !el.sourceIri) {
    problems.push_back(label + ": provenance " +
                       std::string(to_string(el.provenance)) +
                       " requires sourceIri");
  }
  if (el.sourceIri && !detail::is_absolute_iri(*el.sourceIri)) {
    problems.push_back(label + ": sourceIri '" + *el.sourceIri +
                       "' is not an absolute IRI");
  }
  if (!el.sourceIri && schema.namespace_iri(schema.id) == nullptr) {
    problems.push_back(label + ": no sourceIri and no namespace declared "
                               "for schema prefix '" +
                       schema.id + "'");
  }
}

int sub_schema_depth(const SchemaDefinition &schema, const std::string &id,
                     std::vector<std::string> &stack,
                     std::vector<std::string> &problems) {
  if (std::find(stack.begin(), stack.end(), id) != stack.end()) {
    std::string cycle;
    for (const auto &s : stack) {
      cycle += s + " -> ";
    }
    problems.push_back("sub-schema cycle: " + cycle + id);
    return 0;
  }
  const SubSchema *sub = schema.sub_schema(id);
  if (sub == nullptr) {
    return 0;
  }
  stack.push_back(id);
  int deepest = 0;
  for (const auto &f : sub->fields) {
    if (f.valueType.kind == ValueKind::subSchemaRef) {
      deepest = std::max(deepest, sub_schema_depth(schema, f.valueType.subSchema,
                                                   stack, problems));
    }
  }
  stack.pop_back();
  return deepest + 1;
}

ordered_json element_json(const ElementDefinition &el, bool top_level) {
  ordered_json j;
  j["id"] = el.id;
  j["label"] = el.label;
  j["description"] = el.description;
  j["tier"] = to_string(el.tier);
  if (top_level || !el.area.empty()) {
    j["area"] = el.area;
  }
  j["valueType"] = to_string(el.valueType.kind);
  if (el.valueType.kind == ValueKind::subSchemaRef) {
    j["subSchemaRef"] = el.valueType.subSchema;
  }
  j["multiValued"] = el.multiValued;
  if (el.vocabularyRef) {
    j["vocabularyRef"] = *el.vocabularyRef;
  }
  j["provenance"] = to_string(el.provenance);
  if (el.sourceIri) {
    j["sourceIri"] = *el.sourceIri;
  }
  return j;
}

std::size_t instantiate(const SchemaDefinition &schema,
                        const ElementDefinition &el,
                        std::map<Tier, std::size_t> &counts, int depth) {
  ++counts[el.tier];
  std::size_t n = 1;
  if (el.valueType.kind != ValueKind::subSchemaRef ||
      depth > kMaxSubSchemaDepth) {
    return n;
  }
  if (const SubSchema *sub = schema.sub_schema(el.valueType.subSchema)) {
    for (const auto &f : sub->fields) {
      n += instantiate(schema, f, counts, depth + 1);
    }
  }
  return n;
}

} // namespace

std::string_view to_string(Tier tier) { return name_of(kTierNames, tier); }
std::string_view to_string(ValueKind kind) {
  return name_of(kKindNames, kind);
}
std::string_view to_string(Provenance provenance) {
  return name_of(kProvenanceNames, provenance);
}
std::string_view to_string(VocabularyKind kind) {
  return name_of(kVocabularyKindNames, kind);
}

std::optional<Tier> parse_tier(std::string_view text) {
  return value_of(kTierNames, text);
}
std::optional<ValueKind> parse_value_kind(std::string_view text) {
  return value_of(kKindNames, text);
}
std::optional<Provenance> parse_provenance(std::string_view text) {
  return value_of(kProvenanceNames, text);
}
std::optional<VocabularyKind> parse_vocabulary_kind(std::string_view text) {
  return value_of(kVocabularyKindNames, text);
}

const ElementDefinition *SubSchema::field(std::string_view field_id) const {
  for (const auto &f : fields) {
    if (f.id == field_id) {
      return &f;
    }
  }
  return nullptr;
}

const ThematicArea *SchemaDefinition::area(std::string_view area_id) const {
  for (const auto &a : areas) {
    if (a.id == area_id) {
      return &a;
    }
  }
  return nullptr;
}

const SubSchema *
SchemaDefinition::sub_schema(std::string_view sub_schema_id) const {
  for (const auto &s : subSchemas) {
    if (s.id == sub_schema_id) {
      return &s;
    }
  }
  return nullptr;
}

const Vocabulary *
SchemaDefinition::vocabulary(std::string_view vocabulary_id) const {
  for (const auto &v : vocabularies) {
    if (v.id == vocabulary_id) {
      return &v;
    }
  }
  return nullptr;
}

const std::string *SchemaDefinition::namespace_iri(std::string_view prefix) const {
  for (const auto &[p, iri] : namespaces) {
    if (p == prefix) {
      return &iri;
    }
  }
  return nullptr;
}

std::string SchemaDefinition::term_iri(const ElementDefinition &element) const {
  if (element.sourceIri) {
    return *element.sourceIri;
  }
  const std::string *base = namespace_iri(id);
  return (base != nullptr ? *base : std::string{}) + element.id;
}

std::vector<std::string> check_schema(const SchemaDefinition &schema) {
  std::vector<std::string> problems;
  check_unique(
      schema.areas, [](const ThematicArea &a) -> const std::string & {
        return a.id;
      },
      "area id", problems);
  check_unique(
      schema.elements,
      [](const ElementDefinition &e) -> const std::string & { return e.id; },
      "element id", problems);
  check_unique(
      schema.subSchemas,
      [](const SubSchema &s) -> const std::string & { return s.id; },
      "sub-schema id", problems);
  check_unique(
      schema.vocabularies,
      [](const Vocabulary &v) -> const std::string & { return v.id; },
      "vocabulary id", problems);
  check_unique(
      schema.namespaces,
      [](const std::pair<std::string, std::string> &n) -> const std::string & {
        return n.first;
      },
      "namespace prefix", problems);

  for (const auto &el : schema.elements) {
    check_element(schema, el, "element '" + el.id + "'", true, problems);
  }
  for (const auto &sub : schema.subSchemas) {
    check_unique(
        sub.fields,
        [](const ElementDefinition &e) -> const std::string & { return e.id; },
        "field id in sub-schema '" + sub.id + "'", problems);
    for (const auto &f : sub.fields) {
      check_element(schema, f, "field '" + sub.id + "." + f.id + "'", false,
                    problems);
    }
    std::vector<std::string> stack;
    int depth = sub_schema_depth(schema, sub.id, stack, problems);
    if (depth > kMaxSubSchemaDepth) {
      problems.push_back("sub-schema '" + sub.id + "' nests " +
                         std::to_string(depth) + " levels deep (limit " +
                         std::to_string(kMaxSubSchemaDepth) + ")");
    }
  }
  for (const auto &vocab : schema.vocabularies) {
    check_unique(
        vocab.terms, [](const Term &t) -> const std::string & { return t.label; },
        "term label in vocabulary '" + vocab.id + "'", problems);
    for (const auto &term : vocab.terms) {
      if (vocab.kind == VocabularyKind::ontologyClass && !term.iri) {
        problems.push_back("vocabulary '" + vocab.id + "': term '" +
                           term.label + "' lacks an IRI (ontologyClass)");
      }
      if (term.iri && !detail::is_absolute_iri(*term.iri)) {
        problems.push_back("vocabulary '" + vocab.id + "': term '" +
                           term.label + "' has non-absolute IRI '" +
                           *term.iri + "'");
      }
    }
  }
  // Cycle reports repeat once per entry point; keep the first of each.
  std::vector<std::string> unique;
  for (auto &p : problems) {
    if (std::find(unique.begin(), unique.end(), p) == unique.end()) {
      unique.push_back(std::move(p));
    }
  }
  return unique;
}

SchemaDefinition load_schema(std::string_view document,
                             const std::filesystem::path &base_dir) {
  auto doc = detail::parse_json(document);
  std::vector<std::string> problems;
  Reader reader(base_dir, problems);
  SchemaDefinition schema = reader.read(doc);
  auto consistency = check_schema(schema);
  problems.insert(problems.end(), consistency.begin(), consistency.end());
  if (!problems.empty()) {
    throw ConsistencyError(std::move(problems));
  }
  return schema;
}

SchemaDefinition load_schema_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot read schema file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_schema(buf.str(), path.parent_path());
}

std::string serialize_schema(const SchemaDefinition &schema) {
  ordered_json doc;
  doc["id"] = schema.id;
  doc["version"] = schema.version;
  doc["areas"] = ordered_json::array();
  for (const auto &a : schema.areas) {
    doc["areas"].push_back(
        {{"id", a.id}, {"label", a.label}, {"description", a.description}});
  }
  doc["elements"] = ordered_json::array();
  for (const auto &el : schema.elements) {
    doc["elements"].push_back(element_json(el, true));
  }
  doc["subSchemas"] = ordered_json::array();
  for (const auto &sub : schema.subSchemas) {
    ordered_json s;
    s["id"] = sub.id;
    s["fields"] = ordered_json::array();
    for (const auto &f : sub.fields) {
      s["fields"].push_back(element_json(f, false));
    }
    doc["subSchemas"].push_back(std::move(s));
  }
  doc["vocabularies"] = ordered_json::array();
  for (const auto &v : schema.vocabularies) {
    ordered_json vj;
    vj["id"] = v.id;
    vj["kind"] = to_string(v.kind);
    vj["terms"] = ordered_json::array();
    for (const auto &t : v.terms) {
      ordered_json tj;
      tj["label"] = t.label;
      if (t.iri) {
        tj["iri"] = *t.iri;
      }
      vj["terms"].push_back(std::move(tj));
    }
    vj["sourceNote"] = v.sourceNote;
    doc["vocabularies"].push_back(std::move(vj));
  }
  doc["namespaces"] = ordered_json::object();
  for (const auto &[prefix, iri] : schema.namespaces) {
    doc["namespaces"][prefix] = iri;
  }
  return detail::dump_document(doc);
}

const ElementDefinition *element_by_id(const SchemaDefinition &schema,
                                       std::string_view id) {
  for (const auto &el : schema.elements) {
    if (el.id == id) {
      return &el;
    }
  }
  return nullptr;
}

SchemaStats schema_stats(const SchemaDefinition &schema) {
  SchemaStats stats;
  for (Tier t : kAllTiers) {
    stats.perTier[t] = 0;
    stats.perTierInstantiated[t] = 0;
  }
  for (const auto &a : schema.areas) {
    stats.perArea.emplace_back(a.id, 0);
  }
  auto count = [&](const ElementDefinition &el) {
    ++stats.perTier[el.tier];
    ++stats.perProvenance[el.provenance];
  };
  for (const auto &el : schema.elements) {
    count(el);
    for (auto &[area, n] : stats.perArea) {
      if (area == el.area) {
        ++n;
      }
    }
    instantiate(schema, el, stats.perTierInstantiated, 1);
  }
  for (const auto &sub : schema.subSchemas) {
    for (const auto &f : sub.fields) {
      count(f);
    }
    stats.subSchemaFieldCount += sub.fields.size();
  }
  stats.topLevelCount = schema.elements.size();
  stats.subSchemaCount = schema.subSchemas.size();
  return stats;
}

const Term *resolve_term(const Vocabulary &vocabulary, std::string_view value) {
  for (const auto &term : vocabulary.terms) {
    if (term.label == value || (term.iri && *term.iri == value)) {
      return &term;
    }
  }
  return nullptr;
}

} // namespace ersmeta
