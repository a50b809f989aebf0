// SPDX-License-Identifier: Apache-2.0
#include "gaborodo/toml.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gaborodo::toml {

Value Value::boolean(bool v) {
  Value x;
  x.type = Type::Bool;
  x.b = v;
  return x;
}
Value Value::integer(int64_t v) {
  Value x;
  x.type = Type::Int;
  x.i = v;
  return x;
}
Value Value::real(double v) {
  Value x;
  x.type = Type::Float;
  x.f = v;
  return x;
}
Value Value::string(std::string v) {
  Value x;
  x.type = Type::String;
  x.s = std::move(v);
  return x;
}
Value Value::array() {
  Value x;
  x.type = Type::Array;
  return x;
}
Value Value::table() {
  Value x;
  x.type = Type::Table;
  return x;
}

bool Value::contains(const std::string& key) const {
  return type == Type::Table && tbl.count(key) > 0;
}

const Value& Value::at(const std::string& key) const {
  auto it = tbl.find(key);
  if (it == tbl.end()) throw ParseError("missing key '" + key + "'");
  return it->second;
}

Value& Value::insert(const std::string& key, Value v) {
  if (tbl.find(key) == tbl.end()) key_order.push_back(key);
  return tbl[key] = std::move(v);
}

bool Value::as_bool(const std::string& ctx) const {
  if (type != Type::Bool) throw ParseError("expected boolean" + (ctx.empty() ? "" : " for " + ctx));
  return b;
}
int64_t Value::as_int(const std::string& ctx) const {
  if (type != Type::Int) throw ParseError("expected integer" + (ctx.empty() ? "" : " for " + ctx));
  return i;
}
double Value::as_double(const std::string& ctx) const {
  if (type == Type::Float) return f;
  if (type == Type::Int) return static_cast<double>(i);
  throw ParseError("expected number" + (ctx.empty() ? "" : " for " + ctx));
}
const std::string& Value::as_string(const std::string& ctx) const {
  if (type != Type::String) throw ParseError("expected string" + (ctx.empty() ? "" : " for " + ctx));
  return s;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  Value run() {
    Value root = Value::table();
    current_ = &root;
    while (!eof()) {
      skip_ws_and_comments(true);
      if (eof()) break;
      if (peek() == '[') {
        parse_table_header(root);
      } else {
        parse_key_value(*current_);
      }
      skip_ws(false);
      if (!eof() && peek() == '#') skip_comment();
      if (!eof() && peek() != '\n')
        fail("expected end of line");
    }
    return root;
  }

 private:
  const std::string& text_;
  size_t pos_ = 0;
  size_t line_ = 1;
  Value* current_ = nullptr;

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError("toml parse error at line " + std::to_string(line_) + ": " + msg);
  }

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char get() {
    char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  void skip_ws(bool newlines) {
    while (!eof()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || (newlines && c == '\n'))
        get();
      else
        break;
    }
  }

  void skip_comment() {
    while (!eof() && peek() != '\n') get();
  }

  void skip_ws_and_comments(bool newlines) {
    while (!eof()) {
      skip_ws(newlines);
      if (!eof() && peek() == '#') {
        skip_comment();
        continue;
      }
      break;
    }
  }

  std::string parse_key_part() {
    skip_ws(false);
    if (eof()) fail("expected key");
    if (peek() == '"') return parse_basic_string();
    std::string k;
    while (!eof()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')
        k.push_back(get());
      else
        break;
    }
    if (k.empty()) fail("expected key");
    return k;
  }

  std::vector<std::string> parse_dotted_key() {
    std::vector<std::string> parts{parse_key_part()};
    skip_ws(false);
    while (!eof() && peek() == '.') {
      get();
      parts.push_back(parse_key_part());
      skip_ws(false);
    }
    return parts;
  }

  std::string parse_basic_string() {
    if (get() != '"') fail("expected string");
    std::string out;
    while (true) {
      if (eof()) fail("unterminated string");
      char c = get();
      if (c == '"') break;
      if (c == '\n') fail("newline in string");
      if (c == '\\') {
        if (eof()) fail("bad escape");
        char e = get();
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case 'r': out.push_back('\r'); break;
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  Value parse_value() {
    skip_ws(false);
    if (eof()) fail("expected value");
    char c = peek();
    if (c == '"') return Value::string(parse_basic_string());
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    if (text_.compare(pos_, 4, "true") == 0 && boundary(pos_ + 4)) {
      pos_ += 4;
      return Value::boolean(true);
    }
    if (text_.compare(pos_, 5, "false") == 0 && boundary(pos_ + 5)) {
      pos_ += 5;
      return Value::boolean(false);
    }
    return parse_number();
  }

  bool boundary(size_t p) const {
    if (p >= text_.size()) return true;
    char c = text_[p];
    return !(std::isalnum(static_cast<unsigned char>(c)) || c == '_');
  }

  Value parse_number() {
    size_t start = pos_;
    bool is_float = false;
    if (!eof() && (peek() == '+' || peek() == '-')) get();
    while (!eof()) {
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '_') {
        get();
      } else if (c == '.' || c == 'e' || c == 'E') {
        is_float = true;
        get();
        if (!eof() && (peek() == '+' || peek() == '-')) get();
      } else {
        break;
      }
    }
    std::string raw = text_.substr(start, pos_ - start);
    std::string clean;
    for (char c : raw)
      if (c != '_') clean.push_back(c);
    if (clean.empty() || clean == "+" || clean == "-") fail("expected number");
    if (is_float) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(clean.data(), clean.data() + clean.size(), v);
      if (ec != std::errc{} || p != clean.data() + clean.size()) fail("bad float '" + raw + "'");
      return Value::real(v);
    }
    int64_t v = 0;
    auto [p, ec] = std::from_chars(clean.data(), clean.data() + clean.size(), v);
    if (ec != std::errc{} || p != clean.data() + clean.size()) fail("bad integer '" + raw + "'");
    return Value::integer(v);
  }

  Value parse_array() {
    get();  // '['
    Value a = Value::array();
    while (true) {
      skip_ws_and_comments(true);
      if (eof()) fail("unterminated array");
      if (peek() == ']') {
        get();
        break;
      }
      a.arr.push_back(parse_value());
      skip_ws_and_comments(true);
      if (!eof() && peek() == ',') {
        get();
        continue;
      }
      if (!eof() && peek() == ']') {
        get();
        break;
      }
      fail("expected ',' or ']' in array");
    }
    return a;
  }

  Value parse_inline_table() {
    get();  // '{'
    Value t = Value::table();
    skip_ws(false);
    if (!eof() && peek() == '}') {
      get();
      return t;
    }
    while (true) {
      auto parts = parse_dotted_key();
      skip_ws(false);
      if (eof() || get() != '=') fail("expected '=' in inline table");
      Value v = parse_value();
      insert_path(t, parts, std::move(v));
      skip_ws(false);
      if (!eof() && peek() == ',') {
        get();
        skip_ws(false);
        continue;
      }
      if (!eof() && peek() == '}') {
        get();
        break;
      }
      fail("expected ',' or '}' in inline table");
    }
    return t;
  }

  static void insert_path(Value& table, const std::vector<std::string>& parts, Value v) {
    Value* cur = &table;
    for (size_t i = 0; i + 1 < parts.size(); ++i) {
      if (!cur->contains(parts[i])) cur->insert(parts[i], Value::table());
      cur = &cur->tbl[parts[i]];
      if (!cur->is_table()) throw ParseError("key '" + parts[i] + "' is not a table");
    }
    if (cur->contains(parts.back())) throw ParseError("duplicate key '" + parts.back() + "'");
    cur->insert(parts.back(), std::move(v));
  }

  void parse_key_value(Value& table) {
    auto parts = parse_dotted_key();
    skip_ws(false);
    if (eof() || get() != '=') fail("expected '='");
    Value v = parse_value();
    insert_path(table, parts, std::move(v));
  }

  void parse_table_header(Value& root) {
    get();  // '['
    bool is_array = false;
    if (!eof() && peek() == '[') {
      get();
      is_array = true;
    }
    auto parts = parse_dotted_key();
    skip_ws(false);
    if (eof() || get() != ']') fail("expected ']'");
    if (is_array) {
      if (eof() || get() != ']') fail("expected ']]'");
    }
    Value* cur = &root;
    for (size_t i = 0; i < parts.size(); ++i) {
      bool last = (i + 1 == parts.size());
      const std::string& k = parts[i];
      if (!cur->contains(k)) {
        cur->insert(k, (last && is_array) ? Value::array() : Value::table());
      }
      Value& v = cur->tbl[k];
      if (last && is_array) {
        if (!v.is_array()) fail("'" + k + "' is not an array of tables");
        v.arr.push_back(Value::table());
        cur = &v.arr.back();
      } else if (v.is_array()) {
        if (v.arr.empty() || !v.arr.back().is_table()) fail("'" + k + "' is not a table");
        cur = &v.arr.back();
      } else if (v.is_table()) {
        cur = &v;
      } else {
        fail("'" + k + "' is not a table");
      }
    }
    current_ = cur;
  }
};

void emit_value_inline(const Value& v, std::ostringstream& out);

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, p);
  // Make sure it reparses as a float, not an integer.
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

std::string escape_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

void emit_value_inline(const Value& v, std::ostringstream& out) {
  switch (v.type) {
    case Value::Type::Bool: out << (v.b ? "true" : "false"); break;
    case Value::Type::Int: out << v.i; break;
    case Value::Type::Float: out << format_double(v.f); break;
    case Value::Type::String: out << escape_string(v.s); break;
    case Value::Type::Array: {
      out << "[";
      for (size_t i = 0; i < v.arr.size(); ++i) {
        if (i) out << ", ";
        emit_value_inline(v.arr[i], out);
      }
      out << "]";
      break;
    }
    case Value::Type::Table: {
      out << "{ ";
      bool first = true;
      for (const auto& k : v.key_order) {
        if (!first) out << ", ";
        first = false;
        out << k << " = ";
        emit_value_inline(v.tbl.at(k), out);
      }
      out << " }";
      break;
    }
  }
}

bool is_array_of_tables(const Value& v) {
  if (!v.is_array() || v.arr.empty()) return false;
  for (const auto& e : v.arr)
    if (!e.is_table()) return false;
  return true;
}

void emit_table(const Value& t, const std::string& prefix, std::ostringstream& out) {
  // Scalars and plain arrays first, then sub-tables, then arrays of tables.
  for (const auto& k : t.key_order) {
    const Value& v = t.tbl.at(k);
    if (v.is_table() || is_array_of_tables(v)) continue;
    out << k << " = ";
    emit_value_inline(v, out);
    out << "\n";
  }
  for (const auto& k : t.key_order) {
    const Value& v = t.tbl.at(k);
    if (!v.is_table()) continue;
    std::string path = prefix.empty() ? k : prefix + "." + k;
    out << "\n[" << path << "]\n";
    emit_table(v, path, out);
  }
  for (const auto& k : t.key_order) {
    const Value& v = t.tbl.at(k);
    if (!is_array_of_tables(v)) continue;
    std::string path = prefix.empty() ? k : prefix + "." + k;
    for (const auto& e : v.arr) {
      out << "\n[[" << path << "]]\n";
      emit_table(e, path, out);
    }
  }
}

}  // namespace

Value parse(const std::string& text) { return Parser(text).run(); }

Value parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string emit(const Value& root) {
  std::ostringstream out;
  emit_table(root, "", out);
  return out.str();
}

void emit_file(const Value& root, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << emit(root);
}

}  // namespace gaborodo::toml
