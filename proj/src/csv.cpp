#include "spectree/csv.hpp"

#include <charconv>
#include <cmath>

namespace spectree {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void CsvWriter::header(const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out_ += ',';
    out_ += names[i];
  }
  out_ += '\n';
}

void CsvWriter::sep() {
  if (row_open_) out_ += ',';
  row_open_ = true;
}

void CsvWriter::field(double x) {
  sep();
  out_ += format_double(x);
}

void CsvWriter::field(std::int64_t x) {
  sep();
  out_ += std::to_string(x);
}

void CsvWriter::field(std::uint64_t x) {
  sep();
  out_ += std::to_string(x);
}

void CsvWriter::field(const std::string& s) {
  sep();
  out_ += s;
}

void CsvWriter::end_row() {
  out_ += '\n';
  row_open_ = false;
}

}  // namespace spectree
