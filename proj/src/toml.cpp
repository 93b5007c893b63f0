#include "spectree/toml.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <string_view>

namespace spectree {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool valid_key(std::string_view k) {
  if (k.empty()) return false;
  for (const char c : k)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
      return false;
  return true;
}

/// Strips a trailing comment that is not inside a string literal.
std::string_view drop_comment(std::string_view s) {
  bool in_str = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_str = !in_str;
    if (s[i] == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

bool parse_int(std::string_view s, std::int64_t& out) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++b;
  const auto res = std::from_chars(b, e, out);
  return res.ec == std::errc() && res.ptr == e;
}

bool parse_float(std::string_view s, double& out) {
  if (s == "inf" || s == "+inf") {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  if (s == "-inf") {
    out = -std::numeric_limits<double>::infinity();
    return true;
  }
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++b;
  const auto res = std::from_chars(b, e, out);
  return res.ec == std::errc() && res.ptr == e;
}

TomlValue parse_scalar(std::string_view tok, std::size_t line) {
  tok = strip(tok);
  if (tok.empty()) fail(line, "empty value");
  if (tok.front() == '"') {
    if (tok.size() < 2 || tok.back() != '"') fail(line, "unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < tok.size(); ++i) {
      if (tok[i] == '\\' && i + 2 < tok.size()) {
        const char n = tok[i + 1];
        if (n == '"' || n == '\\') {
          out += n;
          ++i;
          continue;
        }
      }
      out += tok[i];
    }
    return {out};
  }
  if (tok == "true") return {true};
  if (tok == "false") return {false};
  std::int64_t iv = 0;
  if (parse_int(tok, iv)) return {iv};
  double dv = 0.0;
  if (parse_float(tok, dv)) return {dv};
  fail(line, "unrecognized value '" + std::string(tok) + "'");
}

TomlValue parse_array(std::string_view body, std::size_t line) {
  std::vector<TomlValue> items;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i == body.size() || body[i] == ',') {
      const std::string_view tok = strip(body.substr(start, i - start));
      if (!tok.empty()) items.push_back(parse_scalar(tok, line));
      start = i + 1;
    }
  }
  bool all_int = true;
  for (const auto& it : items) {
    if (!it.is_number()) fail(line, "arrays may contain only numbers");
    if (!it.is_int()) all_int = false;
  }
  if (all_int) {
    std::vector<std::int64_t> out;
    out.reserve(items.size());
    for (const auto& it : items) out.push_back(std::get<std::int64_t>(it.v));
    return {out};
  }
  std::vector<double> out;
  out.reserve(items.size());
  for (const auto& it : items)
    out.push_back(it.is_int()
                      ? static_cast<double>(std::get<std::int64_t>(it.v))
                      : std::get<double>(it.v));
  return {out};
}

}  // namespace

TomlDocument parse_toml(const std::string& text) {
  TomlDocument doc;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::size_t end = (nl == std::string::npos) ? text.size() : nl;
    ++line_no;
    std::string_view line = strip(drop_comment(
        std::string_view(text).substr(pos, end - pos)));
    pos = end + 1;
    if (line.empty()) {
      if (nl == std::string::npos) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      const std::string_view name = strip(line.substr(1, line.size() - 2));
      if (!valid_key(name)) fail(line_no, "invalid section name");
      section = std::string(name);
      doc[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
    const std::string_view key = strip(line.substr(0, eq));
    if (!valid_key(key)) fail(line_no, "invalid key '" + std::string(key) + "'");
    std::string_view val = strip(line.substr(eq + 1));
    if (val.empty()) fail(line_no, "missing value for key '" + std::string(key) + "'");
    TomlValue parsed;
    if (val.front() == '[') {
      if (val.back() != ']') fail(line_no, "unterminated array");
      parsed = parse_array(val.substr(1, val.size() - 2), line_no);
    } else {
      parsed = parse_scalar(val, line_no);
    }
    doc[section][std::string(key)] = std::move(parsed);
    if (nl == std::string::npos) break;
  }
  return doc;
}

double TomlValue::as_double(const std::string& field) const {
  if (std::holds_alternative<double>(v)) return std::get<double>(v);
  if (std::holds_alternative<std::int64_t>(v))
    return static_cast<double>(std::get<std::int64_t>(v));
  throw ValidationError("field '" + field + "' must be a number");
}

std::int64_t TomlValue::as_int(const std::string& field) const {
  if (std::holds_alternative<std::int64_t>(v)) return std::get<std::int64_t>(v);
  throw ValidationError("field '" + field + "' must be an integer");
}

bool TomlValue::as_bool(const std::string& field) const {
  if (std::holds_alternative<bool>(v)) return std::get<bool>(v);
  throw ValidationError("field '" + field + "' must be a boolean");
}

const std::string& TomlValue::as_string(const std::string& field) const {
  if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
  throw ValidationError("field '" + field + "' must be a string");
}

std::vector<double> TomlValue::as_double_array(const std::string& field) const {
  if (std::holds_alternative<std::vector<double>>(v))
    return std::get<std::vector<double>>(v);
  if (std::holds_alternative<std::vector<std::int64_t>>(v)) {
    const auto& iv = std::get<std::vector<std::int64_t>>(v);
    return std::vector<double>(iv.begin(), iv.end());
  }
  throw ValidationError("field '" + field + "' must be a numeric array");
}

std::vector<std::int64_t> TomlValue::as_int_array(const std::string& field) const {
  if (std::holds_alternative<std::vector<std::int64_t>>(v))
    return std::get<std::vector<std::int64_t>>(v);
  throw ValidationError("field '" + field + "' must be an integer array");
}

}  // namespace spectree
