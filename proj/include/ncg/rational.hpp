// Exact rational scalars.  Thin helpers around GMP's mpq_class so the rest of
// the library can stay agnostic about the bignum backend.
#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace ncg {

using Rat = mpq_class;

inline Rat rat(long n, long d = 1) {
    Rat q(n, d);
    q.canonicalize();
    return q;
}

inline bool is_zero(const Rat& q) { return sgn(q) == 0; }
inline bool is_one(const Rat& q) { return q == 1; }

inline std::string to_string(const Rat& q) { return q.get_str(); }

inline Rat inv(const Rat& q) {
    if (is_zero(q)) throw std::domain_error("rational: inverse of zero");
    return 1 / q;
}
inline Rat zero_like(const Rat&) { return Rat(0); }
inline Rat one_like(const Rat&) { return Rat(1); }

// Parses "p" or "p/q" with optional sign.  Returns nullopt on malformed input.
inline std::optional<Rat> parse_rat(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) return std::nullopt;
    bool seen_slash = false;
    for (std::size_t j = i; j < s.size(); ++j) {
        if (s[j] == '/') {
            if (seen_slash || j == i || j + 1 == s.size()) return std::nullopt;
            seen_slash = true;
        } else if (!std::isdigit(static_cast<unsigned char>(s[j]))) {
            return std::nullopt;
        }
    }
    Rat q;
    const std::string body = (s[0] == '+') ? s.substr(1) : s;
    if (q.set_str(body, 10) != 0) return std::nullopt;
    if (seen_slash && q.get_den() == 0) return std::nullopt;
    q.canonicalize();
    return q;
}

}  // namespace ncg
