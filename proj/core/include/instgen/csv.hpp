#pragma once

#include <string>
#include <vector>

namespace instgen {

/// RFC-4180-style writer; fields containing `,`, `"` or newlines are quoted.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) { row(header); }
  void row(const std::vector<std::string>& fields);
  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

/// Parses CSV text; the first row must equal `header` (ParseError otherwise).
/// Returns the data rows.
std::vector<std::vector<std::string>> read_csv(const std::string& text,
                                               const std::vector<std::string>& header);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& s);

}  // namespace instgen
