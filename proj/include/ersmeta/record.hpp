#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace ersmeta {

struct Value;

/// Element or field id -> values. Keys keep insertion order; value lists are
/// never empty.
class ValueMap {
public:
  using Entry = std::pair<std::string, std::vector<Value>>;

  bool contains(std::string_view key) const { return find(key) != nullptr; }
  const std::vector<Value> *find(std::string_view key) const;
  std::vector<Value> *find(std::string_view key);

  /// Appends one value, creating the key if needed.
  void add(std::string_view key, Value value);
  /// Replaces all values of a key. An empty list erases the key.
  void set(std::string_view key, std::vector<Value> values);
  bool erase(std::string_view key);

  const std::vector<Entry> &entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Key order is not significant; value order within a key is.
  friend bool operator==(const ValueMap &a, const ValueMap &b);

private:
  std::vector<Entry> entries_;
};

namespace value {

struct Text {
  std::string content;
  friend bool operator==(const Text &, const Text &) = default;
};

struct Iri {
  std::string iri;
  friend bool operator==(const Iri &, const Iri &) = default;
};

/// ISO-8601 calendar date, kept as its YYYY-MM-DD lexical form.
struct Date {
  std::string iso;
  friend bool operator==(const Date &, const Date &) = default;
};

struct Term {
  std::string label;
  std::optional<std::string> iri;
  friend bool operator==(const Term &, const Term &) = default;
};

struct Nested {
  std::string subSchema;
  ValueMap fields;
  friend bool operator==(const Nested &, const Nested &) = default;
};

} // namespace value

struct Value {
  using Variant = std::variant<value::Text, value::Iri, value::Date,
                               std::int64_t, double, bool, value::Term,
                               value::Nested>;
  Variant data;

  static Value text(std::string s) { return {value::Text{std::move(s)}}; }
  static Value iri(std::string s) { return {value::Iri{std::move(s)}}; }
  static Value date(std::string iso) { return {value::Date{std::move(iso)}}; }
  static Value integer(std::int64_t v) { return {v}; }
  static Value number(double v) { return {v}; }
  static Value boolean(bool v) { return {v}; }
  static Value term(std::string label,
                    std::optional<std::string> iri = std::nullopt) {
    return {value::Term{std::move(label), std::move(iri)}};
  }
  static Value nested(std::string sub_schema, ValueMap fields = {}) {
    return {value::Nested{std::move(sub_schema), std::move(fields)}};
  }

  template <typename T> const T *get_if() const {
    return std::get_if<T>(&data);
  }

  friend bool operator==(const Value &, const Value &) = default;
};

/// One software's metadata.
struct MetadataRecord {
  std::string schemaId;
  ValueMap values;

  friend bool operator==(const MetadataRecord &,
                         const MetadataRecord &) = default;
};

/// Human-readable rendering of a scalar value (term label, date, number...);
/// nested values render as their sub-schema id.
std::string display(const Value &v);

} // namespace ersmeta
