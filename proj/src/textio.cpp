#include "textio.hpp"

#include <charconv>
#include <cmath>

namespace eeclass {

void append_double(std::string& out, double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, r.ptr);
}

std::string format_double(double v) {
  std::string s;
  append_double(s, v);
  return s;
}

bool parse_double(std::string_view text, double& out) {
  // from_chars takes no explicit plus sign; accept one before a digit or dot.
  if (text.size() >= 2 && text[0] == '+' &&
      ((text[1] >= '0' && text[1] <= '9') || text[1] == '.')) {
    text.remove_prefix(1);
  }
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = begin + text.size();
  double v = 0.0;
  auto r = std::from_chars(begin, end, v);
  if (r.ec != std::errc{} || r.ptr != end || !std::isfinite(v)) return false;
  out = v;
  return true;
}

}  // namespace eeclass
