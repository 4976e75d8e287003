#pragma once

#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pbl::cli {

enum class Format { Jsonl, Csv };

using Value = std::variant<long long, double, std::string, bool>;
using Record = std::vector<std::pair<std::string, Value>>;

/// "%.17g" for finite values; "inf", "-inf", "nan" otherwise.
std::string format_double(double x);

/// Writes a header echoing the effective configuration, then one line per
/// record. Doubles always carry 17 significant digits, and records keep field
/// order, so identical input gives identical bytes.
///
/// JSON Lines: every record is an object with a leading "record" field.
/// Non-finite doubles become null.
/// CSV: the header and side records (those whose kind differs from the
/// first data record) are '#' comment lines; data records share the column
/// line written before the first of them.
class ReportWriter {
 public:
  ReportWriter(std::ostream& out, Format format) : out_(out), format_(format) {}

  void header(const std::string& command, const std::map<std::string, std::string>& config);
  void record(const std::string& kind, const Record& fields);

 private:
  std::ostream& out_;
  Format format_;
  std::string table_kind_;
  std::vector<std::string> columns_;
};

}  // namespace pbl::cli
