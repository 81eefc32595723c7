#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace levy {

/// Fixed 17-significant-digit rendering; round-trips any finite double
/// bit-exactly through strtod.
std::string g17(double v);

/// Writes "# key=value" lines.  Values may contain '=' and spaces; keys
/// must not.
void write_manifest(std::ostream& os,
                    const std::vector<std::pair<std::string, std::string>>& kv);

/// Consumes the leading "# key=value" block (stops at the first line not
/// starting with '#').  Throws DomainError on a malformed manifest line.
std::vector<std::pair<std::string, std::string>> read_manifest(std::istream& is);

/// Strict double parse of a whole token; throws DomainError on trailing
/// garbage or empty input.
double parse_double(const std::string& token, const char* what);

}  // namespace levy
