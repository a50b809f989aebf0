// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace gaborodo::toml {

/// Minimal TOML document model covering what the experiment configs need:
/// booleans, integers, floats, strings, homogeneous arrays, tables, arrays
/// of tables, dotted keys and inline tables. No dates, no multiline strings.
struct Value {
  enum class Type { Bool, Int, Float, String, Array, Table };
  Type type = Type::Table;

  bool b = false;
  int64_t i = 0;
  double f = 0.0;
  std::string s;
  std::vector<Value> arr;
  std::map<std::string, Value> tbl;
  std::vector<std::string> key_order;  // preserves insertion order for emit

  static Value boolean(bool v);
  static Value integer(int64_t v);
  static Value real(double v);
  static Value string(std::string v);
  static Value array();
  static Value table();

  bool is_table() const { return type == Type::Table; }
  bool is_array() const { return type == Type::Array; }

  bool contains(const std::string& key) const;
  const Value& at(const std::string& key) const;
  Value& insert(const std::string& key, Value v);  // overwrites

  // Typed accessors with error context; ints coerce to double where a float
  // is expected.
  bool as_bool(const std::string& ctx = "") const;
  int64_t as_int(const std::string& ctx = "") const;
  double as_double(const std::string& ctx = "") const;
  const std::string& as_string(const std::string& ctx = "") const;
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

Value parse(const std::string& text);
Value parse_file(const std::filesystem::path& path);

std::string emit(const Value& root);
void emit_file(const Value& root, const std::filesystem::path& path);

}  // namespace gaborodo::toml
