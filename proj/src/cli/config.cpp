#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ctk/cli.hpp"

namespace ctk::cli {

namespace {

class TomlReader {
 public:
  explicit TomlReader(const std::string& text) : text_(text) {}

  json parse() {
    json root = json::object();
    json* table = &root;
    while (pos_ < text_.size()) {
      skip_ws();
      if (eof()) break;
      const char c = text_[pos_];
      if (c == '\n') {
        ++pos_;
        ++line_;
        continue;
      }
      if (c == '#') {
        skip_comment();
        continue;
      }
      if (c == '[') {
        ++pos_;
        if (peek() == '[') fail("arrays of tables are not supported");
        auto path = read_key_path();
        skip_ws();
        expect(']');
        table = &root;
        for (const auto& k : path) table = &descend(*table, k);
        end_of_line();
        continue;
      }
      auto path = read_key_path();
      skip_ws();
      expect('=');
      skip_ws();
      json v = read_value();
      json* t = table;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) t = &descend(*t, path[i]);
      if (t->contains(path.back())) fail("duplicate key '" + path.back() + "'");
      (*t)[path.back()] = std::move(v);
      end_of_line();
    }
    return root;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return eof() ? '\0' : text_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("TOML line " + std::to_string(line_) + ": " + msg);
  }

  void skip_ws() {
    while (!eof() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
  }
  void skip_comment() {
    while (!eof() && text_[pos_] != '\n') ++pos_;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  void end_of_line() {
    skip_ws();
    if (peek() == '#') skip_comment();
    if (eof()) return;
    if (peek() != '\n') fail("unexpected trailing characters");
  }

  json& descend(json& t, const std::string& k) {
    if (!t.contains(k)) t[k] = json::object();
    if (!t[k].is_object()) fail("key '" + k + "' is not a table");
    return t[k];
  }

  std::vector<std::string> read_key_path() {
    std::vector<std::string> path;
    while (true) {
      skip_ws();
      if (peek() == '"' || peek() == '\'') {
        path.push_back(read_string());
      } else {
        std::string k;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-'))
          k += text_[pos_++];
        if (k.empty()) fail("expected a key");
        path.push_back(k);
      }
      skip_ws();
      if (peek() != '.') break;
      ++pos_;
    }
    return path;
  }

  std::string read_string() {
    const char q = text_[pos_++];
    std::string s;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = text_[pos_++];
      if (c == q) break;
      if (c == '\\' && q == '"') {
        if (eof()) fail("unterminated escape");
        char e = text_[pos_++];
        switch (e) {
          case 'n': s += '\n'; break;
          case 't': s += '\t'; break;
          case '"': s += '"'; break;
          case '\\': s += '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      } else {
        s += c;
      }
    }
    return s;
  }

  json read_value() {
    const char c = peek();
    if (c == '"' || c == '\'') return read_string();
    if (c == '[') return read_array();
    if (c == 't' && text_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      return true;
    }
    if (c == 'f' && text_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      return false;
    }
    return read_number();
  }

  json read_array() {
    expect('[');
    json arr = json::array();
    while (true) {
      skip_ws_nl();
      if (peek() == ']') {
        ++pos_;
        return arr;
      }
      arr.push_back(read_value());
      skip_ws_nl();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == ']') {
        ++pos_;
        return arr;
      }
      fail("expected ',' or ']' in array");
    }
  }

  void skip_ws_nl() {
    while (!eof()) {
      skip_ws();
      if (peek() == '#') skip_comment();
      if (peek() == '\n') {
        ++pos_;
        ++line_;
      } else {
        break;
      }
    }
  }

  json read_number() {
    std::string tok;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' || peek() == '-' ||
                      peek() == '.' || peek() == '_'))
      tok += text_[pos_++];
    if (tok.empty()) fail("expected a value");
    std::string clean;
    for (char ch : tok)
      if (ch != '_') clean += ch;
    std::string body = clean;
    bool neg = false;
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
      neg = body[0] == '-';
      body = body.substr(1);
    }
    if (body == "inf") return neg ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    if (body == "nan") return std::numeric_limits<double>::quiet_NaN();
    const bool is_float = clean.find_first_of(".eE") != std::string::npos;
    std::size_t used = 0;
    try {
      if (is_float) {
        double v = std::stod(clean, &used);
        if (used != clean.size()) fail("bad number '" + tok + "'");
        return v;
      }
      long long v = std::stoll(clean, &used, 10);
      if (used != clean.size()) fail("bad number '" + tok + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("bad value '" + tok + "'");
    }
  }
};

}  // namespace

json parse_toml(const std::string& text) { return TomlReader(text).parse(); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load_config(const std::string& path) {
  const std::string text = read_file(path);
  const bool toml = path.size() >= 5 && path.compare(path.size() - 5, 5, ".toml") == 0;
  if (toml) return parse_toml(text);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("JSON config '" + path + "': " + e.what());
  }
}

}  // namespace ctk::cli
