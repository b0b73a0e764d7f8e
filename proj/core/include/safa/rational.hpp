// Exact rational scalars and small vectors used throughout the library.
//
// All attractor / valuation arithmetic is exact; nothing in the core ever
// rounds to floating point except the explicitly approximate statistics
// (dimension estimates), which convert at the very end.

#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace safa {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

using RatVec = std::vector<Rat>;

/// base^exp for exp >= 0.
inline Rat rat_pow(const Rat& base, unsigned long exp) {
    Rat r = 1;
    Rat b = base;
    while (exp > 0) {
        if (exp & 1) r *= b;
        b *= b;
        exp >>= 1;
    }
    return r;
}

/// |A|^-n as an exact rational.
inline Rat inv_pow(std::uint64_t base, std::uint64_t n) {
    if (base == 0) throw std::invalid_argument("inv_pow: zero base");
    Int d = 1;
    for (std::uint64_t i = 0; i < n; ++i) d *= base;
    return Rat(Int(1), d);
}

inline Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

/// Largest integer <= num/den.
inline Int rat_floor(const Rat& x) {
    Int q = numerator(x) / denominator(x);
    if (x < 0 && q * denominator(x) != numerator(x)) --q;
    return q;
}

/// Serialized form used in the JSON schemas: "num" or "num/den".
std::string rat_to_string(const Rat& x);
Rat rat_from_string(const std::string& text);

std::string ratvec_to_string(const RatVec& v);

inline Rat linf_norm(const RatVec& v) {
    Rat m = 0;
    for (const Rat& x : v) {
        Rat a = rat_abs(x);
        if (a > m) m = a;
    }
    return m;
}

} // namespace safa
