#include "levy/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>

#include "levy/common.hpp"
#include "levy/oracle.hpp"

namespace levy {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_manifest(std::ostream& os,
                    const std::vector<std::pair<std::string, std::string>>& kv) {
    for (const auto& [k, v] : kv) os << "# " << k << "=" << v << "\n";
}

std::vector<std::pair<std::string, std::string>> read_manifest(std::istream& is) {
    std::vector<std::pair<std::string, std::string>> kv;
    while (is.peek() == '#') {
        std::string line;
        std::getline(is, line);
        std::size_t start = line.find_first_not_of("# ");
        std::size_t eq = line.find('=', start == std::string::npos ? 0 : start);
        if (start == std::string::npos || eq == std::string::npos || eq <= start)
            throw DomainError("read_manifest: malformed line: " + line);
        kv.emplace_back(line.substr(start, eq - start), line.substr(eq + 1));
    }
    return kv;
}

double parse_double(const std::string& token, const char* what) {
    const char* s = token.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
        throw DomainError(std::string(what) + ": bad number '" + token + "'");
    return v;
}

void write_profile_csv(std::ostream& os, const DensityProfile& p) {
    p.validate();
    write_manifest(os, {{"t", g17(p.t)},
                        {"length", g17(p.length)},
                        {"n", std::to_string(p.n)},
                        {"fingerprint", p.fingerprint},
                        {"formula_id", p.formula_id}});
    os << "x,value\n";
    for (int i = 0; i < p.n; ++i)
        os << g17(p.x_at(i)) << "," << g17(p.value[i]) << "\n";
}

DensityProfile read_profile_csv(std::istream& is) {
    DensityProfile p;
    bool have_t = false, have_len = false, have_n = false;
    for (const auto& [k, v] : read_manifest(is)) {
        if (k == "t") {
            p.t = parse_double(v, "read_profile_csv t");
            have_t = true;
        } else if (k == "length") {
            p.length = parse_double(v, "read_profile_csv length");
            have_len = true;
        } else if (k == "n") {
            p.n = static_cast<int>(parse_double(v, "read_profile_csv n"));
            have_n = true;
        } else if (k == "fingerprint") {
            p.fingerprint = v;
        } else if (k == "formula_id") {
            p.formula_id = v;
        }
        // unknown keys are ignored so the header can grow
    }
    if (!have_t || !have_len || !have_n)
        throw DomainError("read_profile_csv: header must carry t, length, n");
    std::string line;
    if (!std::getline(is, line) || line != "x,value")
        throw DomainError("read_profile_csv: expected column line 'x,value'");
    p.value.reserve(p.n > 0 ? p.n : 0);
    int i = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw DomainError("read_profile_csv: row without comma: " + line);
        double x = parse_double(line.substr(0, comma), "read_profile_csv x");
        double v = parse_double(line.substr(comma + 1), "read_profile_csv value");
        if (i < p.n && std::fabs(x - p.x_at(i)) > 1e-12 * (1.0 + std::fabs(x)))
            throw DomainError("read_profile_csv: x column disagrees with the grid");
        p.value.push_back(v);
        ++i;
    }
    p.validate();
    return p;
}

}  // namespace levy
