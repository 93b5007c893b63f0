#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spectree {

/// Shortest round-trip decimal representation of a double (what
/// std::to_chars produces); "inf"/"-inf"/"nan" spelled out.
std::string format_double(double x);

/// Minimal deterministic CSV assembly: comma separators, '\n' rows,
/// doubles in shortest round-trip form.
class CsvWriter {
 public:
  void header(const std::vector<std::string>& names);
  void field(double x);
  void field(std::int64_t x);
  void field(std::uint64_t x);
  void field(const std::string& s);
  void end_row();
  const std::string& str() const { return out_; }

 private:
  void sep();
  std::string out_;
  bool row_open_ = false;
};

}  // namespace spectree
