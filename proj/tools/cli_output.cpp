#include "cli_output.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace pbl::cli {

namespace {

std::string json_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string json_value(const Value& v) {
  if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) return std::isfinite(*d) ? format_double(*d) : "null";
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return json_escape(std::get<std::string>(v));
}

std::string csv_value(const Value& v) {
  if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  const std::string& s = std::get<std::string>(v);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void ReportWriter::header(const std::string& command, const std::map<std::string, std::string>& config) {
  if (format_ == Format::Jsonl) {
    out_ << "{\"record\":\"header\",\"command\":" << json_escape(command) << ",\"config\":{";
    bool first = true;
    for (const auto& [k, v] : config) {
      out_ << (first ? "" : ",") << json_escape(k) << ":" << json_escape(v);
      first = false;
    }
    out_ << "}}\n";
    return;
  }
  out_ << "# command=" << command << "\n";
  for (const auto& [k, v] : config) out_ << "# " << k << "=" << v << "\n";
}

void ReportWriter::record(const std::string& kind, const Record& fields) {
  if (format_ == Format::Jsonl) {
    out_ << "{\"record\":" << json_escape(kind);
    for (const auto& [name, value] : fields) out_ << "," << json_escape(name) << ":" << json_value(value);
    out_ << "}\n";
    return;
  }
  if (table_kind_.empty()) {
    table_kind_ = kind;
    for (const auto& f : fields) columns_.push_back(f.first);
    for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << columns_[i];
    out_ << "\n";
  }
  if (kind != table_kind_) {
    out_ << "# " << kind;
    for (const auto& [name, value] : fields) out_ << " " << name << "=" << csv_value(value);
    out_ << "\n";
    return;
  }
  if (fields.size() != columns_.size()) throw std::logic_error("ReportWriter: record does not match CSV columns");
  for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << csv_value(fields[i].second);
  out_ << "\n";
}

}  // namespace pbl::cli
