#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cyclecheck {

/// Streaming JSON writer with the output contract all emitted artifacts
/// share: keys in insertion order, non-integer numbers at fixed 6 decimal
/// places, no whitespace variation. Byte-identical output for identical
/// values is the point.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();

  JsonWriter& key(std::string_view k);

  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v);
  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(std::size_t v);
  JsonWriter& value(int v);
  JsonWriter& value(bool v);
  JsonWriter& null();

  /// Raw pre-serialized JSON fragment, e.g. a nested document.
  JsonWriter& raw(std::string_view json);

  const std::string& str() const { return out_; }
  std::string take() { return std::move(out_); }

  static std::string escape(std::string_view s);
  /// "%.6f" with negative zero normalized to zero.
  static std::string number(double v);

 private:
  void comma();
  std::string out_;
  std::vector<bool> has_item_;   // per open container
  bool pending_key_ = false;
};

}  // namespace cyclecheck
