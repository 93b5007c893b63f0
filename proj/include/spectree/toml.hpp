#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "spectree/errors.hpp"

namespace spectree {

/// Minimal TOML subset used by the run configuration: [section] headers,
/// `key = value` lines with strings, integers, floats, booleans and flat
/// arrays of numbers, and `#` comments.
struct TomlValue {
  std::variant<bool, std::int64_t, double, std::string, std::vector<double>,
               std::vector<std::int64_t>>
      v;

  bool is_string() const { return std::holds_alternative<std::string>(v); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(v); }
  bool is_number() const { return is_int() || std::holds_alternative<double>(v); }

  double as_double(const std::string& field) const;
  std::int64_t as_int(const std::string& field) const;
  bool as_bool(const std::string& field) const;
  const std::string& as_string(const std::string& field) const;
  std::vector<double> as_double_array(const std::string& field) const;
  std::vector<std::int64_t> as_int_array(const std::string& field) const;
};

using TomlTable = std::map<std::string, TomlValue>;
using TomlDocument = std::map<std::string, TomlTable>;

TomlDocument parse_toml(const std::string& text);

}  // namespace spectree
