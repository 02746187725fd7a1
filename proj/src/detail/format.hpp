#ifndef LOOGP_DETAIL_FORMAT_HPP
#define LOOGP_DETAIL_FORMAT_HPP

#include <cstdio>
#include <string>

namespace loogp::detail {

/// Round-trip formatting for doubles (shortest of %.17g that re-reads
/// exactly would be nicer, but %.17g is always exact and deterministic).
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// RFC-4180 field escaping: quote when the field contains comma, quote or
/// newline; double embedded quotes.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace loogp::detail

#endif  // LOOGP_DETAIL_FORMAT_HPP
