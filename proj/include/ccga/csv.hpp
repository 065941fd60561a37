#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace ccga {

/// Shortest decimal that round-trips to the same double ("nan", "inf", "-inf"
/// for non-finite values).
std::string format_number(double value);

/// Quotes a field per RFC 4180 when it contains a comma, quote or line break.
std::string csv_escape(std::string_view field);

/// Minimal CSV emitter: one call to row() per record, CRLF-free "\n" endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((write_separator(first), write_field(fields)), ...);
    out_ << '\n';
  }

 private:
  void write_separator(bool& first) {
    if (!first) out_ << ',';
    first = false;
  }
  void write_field(std::string_view text) { out_ << csv_escape(text); }
  void write_field(const std::string& text) { out_ << csv_escape(text); }
  void write_field(const char* text) { out_ << csv_escape(text); }
  void write_field(bool value) { out_ << (value ? 1 : 0); }
  void write_field(double value) { out_ << format_number(value); }
  template <std::integral T>
  void write_field(T value) {
    out_ << value;
  }
  template <typename T>
  void write_field(const std::optional<T>& value) {
    if (value) write_field(*value);
  }

  std::ostream& out_;
};

}  // namespace ccga
