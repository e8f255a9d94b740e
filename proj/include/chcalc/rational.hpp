#pragma once

#include <gmpxx.h>
#include <optional>
#include <string>

namespace chcalc {

using Rat = mpq_class;

inline std::string to_string(const Rat& r) { return r.get_str(); }

// Parses "p", "-p/q" etc.; rejects anything mpq does not accept.
inline std::optional<Rat> parse_rat(const std::string& s) {
    mpq_class r;
    if (s.empty() || r.set_str(s, 10) != 0) return std::nullopt;
    r.canonicalize();
    return r;
}

}  // namespace chcalc
