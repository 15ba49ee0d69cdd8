#include <doctest.h>

#include "cyclecheck/json_writer.hpp"

using cyclecheck::JsonWriter;

TEST_CASE("object and array nesting") {
  JsonWriter w;
  w.begin_object();
  w.key("name").value("grid");
  w.key("cells").begin_array();
  w.value(std::int64_t{1}).value(std::int64_t{2});
  w.end_array();
  w.key("nested").begin_object().key("ok").value(true).end_object();
  w.key("none").null();
  w.end_object();
  CHECK(w.str() ==
        R"({"name":"grid","cells":[1,2],"nested":{"ok":true},"none":null})");
}

TEST_CASE("numbers are fixed to six decimals") {
  CHECK(JsonWriter::number(1.0) == "1.000000");
  CHECK(JsonWriter::number(0.1234567) == "0.123457");
  CHECK(JsonWriter::number(-2.5) == "-2.500000");
  // negative zero is normalized
  CHECK(JsonWriter::number(-0.0000001) == "0.000000");
  CHECK(JsonWriter::number(-0.0) == "0.000000");
}

TEST_CASE("integers print without decimals") {
  JsonWriter w;
  w.begin_array();
  w.value(std::int64_t{-7}).value(std::size_t{12}).value(3).value(2.0);
  w.end_array();
  CHECK(w.str() == "[-7,12,3,2.000000]");
}

TEST_CASE("string escaping") {
  CHECK(JsonWriter::escape("a\"b") == "a\\\"b");
  CHECK(JsonWriter::escape("a\\b") == "a\\\\b");
  CHECK(JsonWriter::escape("a\nb\tc") == "a\\nb\\tc");
  CHECK(JsonWriter::escape(std::string("a\x01z")) == "a\\u0001z");
}

TEST_CASE("raw fragments splice in place") {
  JsonWriter w;
  w.begin_object().key("geom").raw(R"({"type":"Point"})").end_object();
  CHECK(w.str() == R"({"geom":{"type":"Point"}})");
}

TEST_CASE("identical input gives identical bytes") {
  auto build = [] {
    JsonWriter w;
    w.begin_object().key("x").value(0.30000000000000004).end_object();
    return w.take();
  };
  CHECK(build() == build());
  CHECK(build() == R"({"x":0.300000})");
}
