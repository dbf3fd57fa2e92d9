#include "ersmeta/record.hpp"

#include "util.hpp"

#include <algorithm>

namespace ersmeta {

const std::vector<Value> *ValueMap::find(std::string_view key) const {
  for (const auto &[k, v] : entries_) {
    if (k == key) {
      return &v;
    }
  }
  return nullptr;
}

std::vector<Value> *ValueMap::find(std::string_view key) {
  for (auto &[k, v] : entries_) {
    if (k == key) {
      return &v;
    }
  }
  return nullptr;
}

void ValueMap::add(std::string_view key, Value value) {
  if (auto *values = find(key)) {
    values->push_back(std::move(value));
    return;
  }
  std::vector<Value> values;
  values.push_back(std::move(value));
  entries_.emplace_back(std::string(key), std::move(values));
}

void ValueMap::set(std::string_view key, std::vector<Value> values) {
  if (values.empty()) {
    erase(key);
    return;
  }
  if (auto *existing = find(key)) {
    *existing = std::move(values);
    return;
  }
  entries_.emplace_back(std::string(key), std::move(values));
}

bool ValueMap::erase(std::string_view key) {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const Entry &e) { return e.first == key; });
  if (it == entries_.end()) {
    return false;
  }
  entries_.erase(it);
  return true;
}

bool operator==(const ValueMap &a, const ValueMap &b) {
  if (a.entries_.size() != b.entries_.size()) {
    return false;
  }
  for (const auto &[key, values] : a.entries_) {
    const auto *other = b.find(key);
    if (other == nullptr || *other != values) {
      return false;
    }
  }
  return true;
}

std::string display(const Value &v) {
  struct Visitor {
    std::string operator()(const value::Text &t) const { return t.content; }
    std::string operator()(const value::Iri &i) const { return i.iri; }
    std::string operator()(const value::Date &d) const { return d.iso; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return detail::format_double(d); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const value::Term &t) const { return t.label; }
    std::string operator()(const value::Nested &n) const { return n.subSchema; }
  };
  return std::visit(Visitor{}, v.data);
}

} // namespace ersmeta
