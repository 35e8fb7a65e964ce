#include "toml.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "backflow/error.hpp"

namespace lab {

using nlohmann::ordered_json;

namespace {

class LineParser {
 public:
  LineParser(std::string_view line, int number) : s_(line), line_(number) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw backflow::ConfigError("config line " + std::to_string(line_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool at_end_or_comment() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::vector<std::string> key() {
    std::vector<std::string> parts;
    do {
      skip_ws();
      if (pos_ < s_.size() && (s_[pos_] == '"' || s_[pos_] == '\'')) {
        parts.push_back(string_value());
        continue;
      }
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                  s_[pos_] == '-'))
        ++pos_;
      if (pos_ == start) fail("expected a key");
      parts.emplace_back(s_.substr(start, pos_ - start));
    } while (consume('.'));
    return parts;
  }

  ordered_json value() {
    skip_ws();
    if (pos_ >= s_.size()) fail("expected a value");
    const char c = s_[pos_];
    if (c == '"' || c == '\'') return string_value();
    if (c == '[') return array_value();
    if (s_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      return true;
    }
    if (s_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      return false;
    }
    return number_value();
  }

 private:
  std::string string_value() {
    const char quote = s_[pos_++];
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != quote) {
      char c = s_[pos_++];
      if (quote == '"' && c == '\\') {
        if (pos_ >= s_.size()) break;
        switch (s_[pos_++]) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail("unsupported escape in string");
        }
      }
      out.push_back(c);
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  ordered_json array_value() {
    ++pos_;
    ordered_json arr = ordered_json::array();
    if (consume(']')) return arr;
    do {
      arr.push_back(value());
    } while (consume(','));
    if (!consume(']')) fail("expected ']' (arrays must fit on one line)");
    return arr;
  }

  ordered_json number_value() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                s_[pos_] == '+' || s_[pos_] == '-' || s_[pos_] == '_'))
      ++pos_;
    std::string tok;
    for (char c : s_.substr(start, pos_ - start))
      if (c != '_') tok.push_back(c);
    if (tok.empty()) fail("expected a value");
    const bool is_float = tok.find_first_of(".eE") != std::string::npos || tok == "inf" || tok == "+inf" ||
                          tok == "-inf" || tok == "nan";
    char* end = nullptr;
    errno = 0;
    if (!is_float) {
      const long long v = std::strtoll(tok.c_str(), &end, 10);
      if (*end != '\0' || errno == ERANGE) fail("not a number: " + tok);
      return v;
    }
    const double v = std::strtod(tok.c_str(), &end);
    if (*end != '\0') fail("not a number: " + tok);
    return v;
  }

  std::string_view s_;
  int line_;
  std::size_t pos_ = 0;
};

std::string join(const std::vector<std::string>& parts, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out += (i ? "." : "") + parts[i];
  return out;
}

}  // namespace

ordered_json parse_toml(std::string_view text) {
  ordered_json root = ordered_json::object();
  std::vector<std::string> table;
  std::istringstream in{std::string(text)};
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    LineParser p(raw, number);
    if (p.at_end_or_comment()) continue;
    if (p.consume('[')) {
      table = p.key();
      if (!p.consume(']')) p.fail("expected ']'");
      if (!p.at_end_or_comment()) p.fail("trailing characters after table header");
      ordered_json* node = &root;
      for (std::size_t i = 0; i < table.size(); ++i) {
        ordered_json& next = (*node)[table[i]];
        if (next.is_null()) next = ordered_json::object();
        if (!next.is_object()) p.fail("'" + join(table, i + 1) + "' is already a value");
        node = &next;
      }
      continue;
    }
    std::vector<std::string> key = p.key();
    if (!p.consume('=')) p.fail("expected '=' after key");
    ordered_json v = p.value();
    if (!p.at_end_or_comment()) p.fail("trailing characters after value");
    std::vector<std::string> full = table;
    full.insert(full.end(), key.begin(), key.end());
    ordered_json* node = &root;
    for (std::size_t i = 0; i + 1 < full.size(); ++i) {
      ordered_json& next = (*node)[full[i]];
      if (next.is_null()) next = ordered_json::object();
      if (!next.is_object()) p.fail("'" + join(full, i + 1) + "' is already a value");
      node = &next;
    }
    if (node->contains(full.back())) p.fail("duplicate key '" + join(full, full.size()) + "'");
    (*node)[full.back()] = std::move(v);
  }
  return root;
}

ordered_json parse_toml_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw backflow::ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_toml(ss.str());
}

}  // namespace lab
