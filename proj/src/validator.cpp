#include "ersmeta/validator.hpp"

#include "util.hpp"

#include <algorithm>

namespace ersmeta {

using detail::ordered_json;

namespace {

constexpr std::pair<Constraint, std::string_view> kConstraintNames[] = {
    {Constraint::missingMandatory, "missingMandatory"},
    {Constraint::missingRecommended, "missingRecommended"},
    {Constraint::datatypeMismatch, "datatypeMismatch"},
    {Constraint::notInVocabulary, "notInVocabulary"},
    {Constraint::nestedShapeViolation, "nestedShapeViolation"},
    {Constraint::unknownElement, "unknownElement"},
    {Constraint::cardinalityExceeded, "cardinalityExceeded"}};

std::string_view kind_of(const Value &v) {
  struct Visitor {
    std::string_view operator()(const value::Text &) const { return "text"; }
    std::string_view operator()(const value::Iri &) const { return "iri"; }
    std::string_view operator()(const value::Date &) const { return "date"; }
    std::string_view operator()(std::int64_t) const { return "integer"; }
    std::string_view operator()(double) const { return "number"; }
    std::string_view operator()(bool) const { return "boolean"; }
    std::string_view operator()(const value::Term &) const {
      return "vocabularyTerm";
    }
    std::string_view operator()(const value::Nested &) const {
      return "nested value";
    }
  };
  return std::visit(Visitor{}, v.data);
}

class Checker {
public:
  Checker(const SchemaDefinition &schema, Strictness strictness,
          std::vector<Finding> &out)
      : schema_(schema), strictness_(strictness), out_(out) {}

  void missing(const ElementDefinition &def, const std::string &path,
               bool nested) {
    const char *where = nested ? "field" : "element";
    if (def.tier == Tier::mandatory) {
      add(path, Constraint::missingMandatory,
          std::string("mandatory ") + where + " '" + path + "' is missing");
    } else if (def.tier == Tier::recommended) {
      add(path, Constraint::missingRecommended,
          std::string("recommended ") + where + " '" + path + "' is missing");
    }
  }

  void values(const ElementDefinition &def, const std::vector<Value> &list,
              const std::string &path) {
    if (!def.multiValued && list.size() > 1) {
      add(path, Constraint::cardinalityExceeded,
          "'" + path + "' is single-valued but has " +
              std::to_string(list.size()) + " values");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      std::string vpath =
          list.size() > 1 ? path + "[" + std::to_string(i) + "]" : path;
      value(def, list[i], vpath);
    }
  }

  void unknown(const std::string &path) {
    add(path, Constraint::unknownElement,
        "'" + path + "' is not declared by schema '" + schema_.id + "'");
  }

private:
  void add(const std::string &path, Constraint constraint,
           std::string message) {
    out_.push_back({path, constraint, severity_for(constraint, strictness_),
                    std::move(message)});
  }

  void mismatch(const ElementDefinition &def, const Value &v,
                const std::string &path, const std::string &detail = {}) {
    std::string message = "'" + path + "' expects " +
                          std::string(to_string(def.valueType.kind));
    if (def.valueType.kind == ValueKind::subSchemaRef) {
      message += " (" + def.valueType.subSchema + ")";
    }
    message += ", got " + std::string(kind_of(v));
    if (!detail.empty()) {
      message += ": " + detail;
    }
    add(path, Constraint::datatypeMismatch, std::move(message));
  }

  void value(const ElementDefinition &def, const Value &v,
             const std::string &path) {
    switch (def.valueType.kind) {
    case ValueKind::text:
      if (v.get_if<value::Text>() == nullptr) {
        mismatch(def, v, path);
      }
      return;
    case ValueKind::iri: {
      const auto *iri = v.get_if<value::Iri>();
      if (iri == nullptr) {
        mismatch(def, v, path);
      } else if (!detail::is_absolute_iri(iri->iri)) {
        mismatch(def, v, path, "'" + iri->iri + "' is not an absolute IRI");
      }
      return;
    }
    case ValueKind::date: {
      const auto *date = v.get_if<value::Date>();
      if (date == nullptr) {
        mismatch(def, v, path);
      } else if (!detail::is_iso_date(date->iso)) {
        mismatch(def, v, path,
                 "'" + date->iso + "' is not an ISO-8601 calendar date");
      }
      return;
    }
    case ValueKind::integer:
      if (v.get_if<std::int64_t>() == nullptr) {
        mismatch(def, v, path);
      }
      return;
    case ValueKind::number:
      if (v.get_if<double>() == nullptr && v.get_if<std::int64_t>() == nullptr) {
        mismatch(def, v, path);
      }
      return;
    case ValueKind::boolean:
      if (v.get_if<bool>() == nullptr) {
        mismatch(def, v, path);
      }
      return;
    case ValueKind::vocabularyTerm:
      term(def, v, path);
      return;
    case ValueKind::subSchemaRef:
      nested(def, v, path);
      return;
    }
  }

  void term(const ElementDefinition &def, const Value &v,
            const std::string &path) {
    const auto *term = v.get_if<value::Term>();
    if (term == nullptr) {
      mismatch(def, v, path);
      return;
    }
    if (term->iri && !detail::is_absolute_iri(*term->iri)) {
      mismatch(def, v, path, "term IRI '" + *term->iri + "' is not absolute");
      return;
    }
    const Vocabulary *vocab =
        def.vocabularyRef ? schema_.vocabulary(*def.vocabularyRef) : nullptr;
    const Term *match = nullptr;
    if (vocab != nullptr) {
      match = resolve_term(*vocab, term->iri ? *term->iri : term->label);
      if (match != nullptr && term->iri &&
          (match->iri != term->iri ||
           (!term->label.empty() && term->label != match->label))) {
        match = nullptr;
      }
    }
    if (match == nullptr) {
      std::string shown = term->iri ? *term->iri : term->label;
      add(path, Constraint::notInVocabulary,
          "'" + shown + "' is not a term of vocabulary '" +
              def.vocabularyRef.value_or("?") + "'");
    }
  }

  void nested(const ElementDefinition &def, const Value &v,
              const std::string &path) {
    const auto *n = v.get_if<value::Nested>();
    if (n == nullptr || n->subSchema != def.valueType.subSchema) {
      mismatch(def, v, path,
               n != nullptr ? "sub-schema '" + n->subSchema + "'"
                            : std::string{});
      return;
    }
    const SubSchema *sub = schema_.sub_schema(n->subSchema);
    if (sub == nullptr) {
      return;
    }
    for (const auto &field : sub->fields) {
      std::string fpath = path + "." + field.id;
      if (const auto *list = n->fields.find(field.id)) {
        values(field, *list, fpath);
      } else {
        missing(field, fpath, true);
      }
    }
    for (const auto &[key, list] : n->fields.entries()) {
      if (sub->field(key) == nullptr) {
        add(path + "." + key, Constraint::nestedShapeViolation,
            "field '" + key + "' is not declared by sub-schema '" + sub->id +
                "'");
      }
    }
  }

  const SchemaDefinition &schema_;
  Strictness strictness_;
  std::vector<Finding> &out_;
};

} // namespace

std::string_view to_string(Constraint constraint) {
  for (const auto &[c, name] : kConstraintNames) {
    if (c == constraint) {
      return name;
    }
  }
  return "?";
}

std::string_view to_string(Severity severity) {
  switch (severity) {
  case Severity::violation:
    return "violation";
  case Severity::warning:
    return "warning";
  case Severity::info:
    return "info";
  }
  return "?";
}

Severity severity_for(Constraint constraint, Strictness strictness) {
  switch (constraint) {
  case Constraint::missingRecommended:
    return Severity::warning;
  case Constraint::unknownElement:
    return strictness == Strictness::strict ? Severity::violation
                                            : Severity::warning;
  default:
    return Severity::violation;
  }
}

std::size_t ValidationReport::count(Severity severity) const {
  return static_cast<std::size_t>(
      std::count_if(findings.begin(), findings.end(),
                    [&](const Finding &f) { return f.severity == severity; }));
}

std::size_t ValidationReport::count(Constraint constraint) const {
  return static_cast<std::size_t>(std::count_if(
      findings.begin(), findings.end(),
      [&](const Finding &f) { return f.constraint == constraint; }));
}

ValidationReport validate(const MetadataRecord &record,
                          const SchemaDefinition &schema,
                          const ValidateOptions &options) {
  ValidationReport report;
  Checker checker(schema, options.strictness, report.findings);
  for (const auto &el : schema.elements) {
    if (const auto *list = record.values.find(el.id)) {
      checker.values(el, *list, el.id);
    } else {
      checker.missing(el, el.id, false);
    }
  }
  for (const auto &[key, list] : record.values.entries()) {
    if (element_by_id(schema, key) == nullptr) {
      checker.unknown(key);
    }
  }
  for (const auto &u : options.unknowns) {
    checker.unknown(u.path);
  }
  report.conformant = report.count(Severity::violation) == 0;
  return report;
}

CompletenessReport completeness(const MetadataRecord &record,
                                const SchemaDefinition &schema) {
  CompletenessReport report;
  for (Tier t : kAllTiers) {
    report.perTier[t] = {};
  }
  for (const auto &a : schema.areas) {
    report.perArea.emplace_back(a.id, FillCount{});
  }
  for (const auto &el : schema.elements) {
    bool filled = record.values.contains(el.id);
    auto &tier = report.perTier[el.tier];
    ++tier.total;
    tier.filled += filled ? 1 : 0;
    for (auto &[area, count] : report.perArea) {
      if (area == el.area) {
        ++count.total;
        count.filled += filled ? 1 : 0;
      }
    }
  }
  const auto &mandatory = report.perTier[Tier::mandatory];
  report.mandatoryComplete = mandatory.filled == mandatory.total;
  return report;
}

bool quality_gate(const CompletenessReport &report) {
  return report.mandatoryComplete;
}

ordered_json report_to_document(const ValidationReport &report) {
  ordered_json doc;
  doc["findings"] = ordered_json::array();
  for (const auto &f : report.findings) {
    ordered_json j;
    j["elementPath"] = f.elementPath;
    j["constraint"] = to_string(f.constraint);
    j["severity"] = to_string(f.severity);
    j["message"] = f.message;
    doc["findings"].push_back(std::move(j));
  }
  doc["conformant"] = report.conformant;
  return doc;
}

std::string to_json(const ValidationReport &report) {
  return detail::dump_document(report_to_document(report));
}

ordered_json report_to_document(const CompletenessReport &report) {
  auto fill = [](const FillCount &c) {
    ordered_json j;
    j["filled"] = c.filled;
    j["total"] = c.total;
    return j;
  };
  ordered_json doc;
  doc["perTier"] = ordered_json::object();
  for (Tier t : kAllTiers) {
    auto it = report.perTier.find(t);
    doc["perTier"][std::string(to_string(t))] =
        fill(it != report.perTier.end() ? it->second : FillCount{});
  }
  doc["perArea"] = ordered_json::object();
  for (const auto &[area, count] : report.perArea) {
    doc["perArea"][area] = fill(count);
  }
  doc["mandatoryComplete"] = report.mandatoryComplete;
  return doc;
}

std::string to_json(const CompletenessReport &report) {
  return detail::dump_document(report_to_document(report));
}

} // namespace ersmeta
