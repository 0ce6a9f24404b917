#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ink::detail {

/// Format with six significant digits; the fixed width used by every report
/// artifact so reruns compare byte-for-byte.
std::string fmt_g6(double v);

/// Split one CSV record. Handles double-quoted fields with "" escapes; no
/// embedded newlines (the formats here never produce them).
std::vector<std::string> split_csv_line(std::string_view line);

/// Quote a field only when it needs quoting.
std::string csv_escape(std::string_view field);

/// Split text into lines, tolerating both \n and \r\n endings.
std::vector<std::string> split_lines(std::string_view text);

bool parse_int64(std::string_view s, long long& out);
bool parse_double(std::string_view s, double& out);

}  // namespace ink::detail
