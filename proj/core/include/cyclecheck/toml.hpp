#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace cyclecheck::toml {

class Value;

/// Insertion-ordered key/value table. Order matters: classification rule
/// lists are first-match-wins.
class Table {
 public:
  using Entry = std::pair<std::string, Value>;

  bool contains(std::string_view key) const;
  const Value* find(std::string_view key) const;
  Value* find(std::string_view key);
  void set(std::string key, Value value);
  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<Entry> entries_;
};

using Array = std::vector<Value>;

class Value {
 public:
  enum class Kind { String, Integer, Float, Boolean, Array, Table };

  Value() : data_(std::int64_t{0}) {}
  explicit Value(std::string v) : data_(std::move(v)) {}
  explicit Value(std::int64_t v) : data_(v) {}
  explicit Value(double v) : data_(v) {}
  explicit Value(bool v) : data_(v) {}
  explicit Value(Array v) : data_(std::move(v)) {}
  explicit Value(Table v) : data_(std::move(v)) {}

  Kind kind() const;
  bool is_string() const { return kind() == Kind::String; }
  bool is_integer() const { return kind() == Kind::Integer; }
  bool is_float() const { return kind() == Kind::Float; }
  bool is_boolean() const { return kind() == Kind::Boolean; }
  bool is_array() const { return kind() == Kind::Array; }
  bool is_table() const { return kind() == Kind::Table; }

  // Accessors throw ParseError on kind mismatch. number() accepts either
  // integers or floats.
  const std::string& string_value() const;
  std::int64_t integer_value() const;
  double number() const;
  bool boolean_value() const;
  const Array& array_value() const;
  Array& array_value();
  const Table& table_value() const;
  Table& table_value();

  static const char* kind_name(Kind k);

 private:
  std::variant<std::string, std::int64_t, double, bool, Array, Table> data_;
};

/// Parses a TOML document (subset: tables, array-of-tables, inline tables,
/// arrays, strings, integers, floats, booleans, comments). Throws ParseError
/// with a line number on malformed input.
Table parse(std::string_view text);

Table parse_file(const std::string& path);

}  // namespace cyclecheck::toml
