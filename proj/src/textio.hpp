#pragma once

#include <string>
#include <string_view>

namespace eeclass {

// Canonical decimal rendering: shortest representation that parses back to
// the identical double (at most 17 significant digits).
std::string format_double(double v);
void append_double(std::string& out, double v);

// Parses a full decimal literal. Returns false on trailing garbage, empty
// input, or a non-finite value.
bool parse_double(std::string_view text, double& out);

}  // namespace eeclass
