#include "cyclecheck/toml.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "cyclecheck/errors.hpp"

namespace cyclecheck::toml {

bool Table::contains(std::string_view key) const {
  return find(key) != nullptr;
}

const Value* Table::find(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

Value* Table::find(std::string_view key) {
  for (auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

void Table::set(std::string key, Value value) {
  if (Value* existing = find(key)) {
    *existing = std::move(value);
    return;
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

Value::Kind Value::kind() const {
  return static_cast<Kind>(data_.index());
}

const char* Value::kind_name(Kind k) {
  switch (k) {
    case Kind::String: return "string";
    case Kind::Integer: return "integer";
    case Kind::Float: return "float";
    case Kind::Boolean: return "boolean";
    case Kind::Array: return "array";
    case Kind::Table: return "table";
  }
  return "?";
}

namespace {

[[noreturn]] void kind_error(Value::Kind want, Value::Kind got) {
  throw ParseError(std::string("expected ") + Value::kind_name(want) +
                   ", got " + Value::kind_name(got));
}

}  // namespace

const std::string& Value::string_value() const {
  if (!is_string()) kind_error(Kind::String, kind());
  return std::get<std::string>(data_);
}

std::int64_t Value::integer_value() const {
  if (!is_integer()) kind_error(Kind::Integer, kind());
  return std::get<std::int64_t>(data_);
}

double Value::number() const {
  if (is_integer()) return static_cast<double>(std::get<std::int64_t>(data_));
  if (!is_float()) kind_error(Kind::Float, kind());
  return std::get<double>(data_);
}

bool Value::boolean_value() const {
  if (!is_boolean()) kind_error(Kind::Boolean, kind());
  return std::get<bool>(data_);
}

const Array& Value::array_value() const {
  if (!is_array()) kind_error(Kind::Array, kind());
  return std::get<Array>(data_);
}

Array& Value::array_value() {
  if (!is_array()) kind_error(Kind::Array, kind());
  return std::get<Array>(data_);
}

const Table& Value::table_value() const {
  if (!is_table()) kind_error(Kind::Table, kind());
  return std::get<Table>(data_);
}

Table& Value::table_value() {
  if (!is_table()) kind_error(Kind::Table, kind());
  return std::get<Table>(data_);
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Table parse() {
    Table root;
    Table* current = &root;
    skip_trivia(true);
    while (!at_end()) {
      if (peek() == '[') {
        current = parse_table_header(root);
      } else {
        parse_key_value(*current);
      }
      expect_line_end();
      skip_trivia(true);
    }
    return root;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::set<std::string> defined_headers_;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("toml parse error at line " + std::to_string(line_) +
                     ": " + msg);
  }

  // Whitespace, optionally newlines, and comments to end of line.
  void skip_trivia(bool newlines) {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else if (c == '\n' && newlines) {
        advance();
      } else {
        break;
      }
    }
  }

  void expect_line_end() {
    skip_trivia(false);
    if (at_end()) return;
    if (peek() != '\n') fail("unexpected trailing characters");
    advance();
  }

  static bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  std::string parse_key() {
    skip_trivia(false);
    if (at_end()) fail("expected key");
    if (peek() == '"' || peek() == '\'') {
      return parse_string();
    }
    std::string key;
    while (!at_end() && is_bare_key_char(peek())) {
      key += advance();
    }
    if (key.empty()) fail("expected key");
    return key;
  }

  std::vector<std::string> parse_key_path() {
    std::vector<std::string> path;
    path.push_back(parse_key());
    skip_trivia(false);
    while (!at_end() && peek() == '.') {
      advance();
      path.push_back(parse_key());
      skip_trivia(false);
    }
    return path;
  }

  Table* parse_table_header(Table& root) {
    advance();  // '['
    const bool array_of_tables = !at_end() && peek() == '[';
    if (array_of_tables) advance();

    const std::vector<std::string> path = parse_key_path();
    skip_trivia(false);
    if (at_end() || peek() != ']') fail("expected ']' in table header");
    advance();
    if (array_of_tables) {
      if (at_end() || peek() != ']') fail("expected ']]' in table header");
      advance();
    }

    if (!array_of_tables) {
      std::string joined;
      for (const std::string& k : path) {
        if (!joined.empty()) joined += '.';
        joined += k;
      }
      if (!defined_headers_.insert(joined).second) {
        fail("duplicate table header '[" + joined + "]'");
      }
    }

    Table* node = &root;
    for (std::size_t i = 0; i < path.size(); ++i) {
      const bool last = i + 1 == path.size();
      const std::string& key = path[i];
      Value* existing = node->find(key);
      if (last && array_of_tables) {
        if (existing == nullptr) {
          node->set(key, Value(Array{}));
          existing = node->find(key);
        }
        if (!existing->is_array()) fail("'" + key + "' is not an array of tables");
        existing->array_value().push_back(Value(Table{}));
        node = &existing->array_value().back().table_value();
      } else {
        if (existing == nullptr) {
          node->set(key, Value(Table{}));
          existing = node->find(key);
        }
        if (existing->is_array()) {
          // intermediate step through an array of tables: descend into the
          // most recently opened element
          Array& arr = existing->array_value();
          if (arr.empty() || !arr.back().is_table()) {
            fail("'" + key + "' is not a table");
          }
          node = &arr.back().table_value();
        } else if (existing->is_table()) {
          node = &existing->table_value();
        } else {
          fail("'" + key + "' is not a table");
        }
      }
    }
    return node;
  }

  void parse_key_value(Table& table) {
    const std::string key = parse_key();
    skip_trivia(false);
    if (at_end() || peek() != '=') fail("expected '=' after key '" + key + "'");
    advance();
    skip_trivia(false);
    if (table.contains(key)) fail("duplicate key '" + key + "'");
    table.set(key, parse_value());
  }

  Value parse_value() {
    skip_trivia(false);
    if (at_end()) fail("expected value");
    const char c = peek();
    if (c == '"' || c == '\'') return Value(parse_string());
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    if (c == 't' || c == 'f') return parse_boolean();
    return parse_number();
  }

  std::string parse_string() {
    const char quote = advance();
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      const char c = advance();
      if (c == quote) break;
      if (quote == '"' && c == '\\') {
        if (at_end()) fail("unterminated escape");
        const char e = advance();
        switch (e) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          default: fail(std::string("unsupported escape '\\") + e + "'");
        }
      } else {
        out += c;
      }
    }
    return out;
  }

  Value parse_boolean() {
    if (text_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return Value(true);
    }
    if (text_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return Value(false);
    }
    fail("expected boolean");
  }

  Value parse_number() {
    std::string tok;
    while (!at_end()) {
      const char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' ||
          c == '-' || c == '.' || c == 'e' || c == 'E' || c == '_') {
        if (c != '_') tok += c;
        advance();
      } else {
        break;
      }
    }
    if (tok.empty()) fail("expected value");
    const bool is_float = tok.find_first_of(".eE") != std::string::npos;
    if (is_float) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size()) fail("malformed number '" + tok + "'");
      return Value(v);
    }
    std::int64_t v = 0;
    const auto [p, ec] =
        std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size()) {
      fail("malformed integer '" + tok + "'");
    }
    return Value(v);
  }

  Value parse_array() {
    advance();  // '['
    Array arr;
    skip_trivia(true);
    while (!at_end() && peek() != ']') {
      arr.push_back(parse_value());
      skip_trivia(true);
      if (!at_end() && peek() == ',') {
        advance();
        skip_trivia(true);
      } else {
        break;
      }
    }
    if (at_end() || peek() != ']') fail("expected ']' to close array");
    advance();
    return Value(std::move(arr));
  }

  Value parse_inline_table() {
    advance();  // '{'
    Table t;
    skip_trivia(false);
    while (!at_end() && peek() != '}') {
      parse_key_value(t);
      skip_trivia(false);
      if (!at_end() && peek() == ',') {
        advance();
        skip_trivia(false);
      } else {
        break;
      }
    }
    if (at_end() || peek() != '}') fail("expected '}' to close inline table");
    advance();
    return Value(std::move(t));
  }
};

}  // namespace

Table parse(std::string_view text) { return Parser(text).parse(); }

Table parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace cyclecheck::toml
