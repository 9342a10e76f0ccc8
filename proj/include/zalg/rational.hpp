#pragma once

#include <cstdint>
#include <string>
#include <stdexcept>

#include <gmpxx.h>

namespace zalg {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat rat_of(long num, long den = 1)
{
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Parses "p", "-p", "p/q" with optional surrounding whitespace.
inline Rat parse_rat(const std::string& s)
{
    Rat r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("parse_rat: bad rational '" + s + "'");
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rat& r)
{
    return r.get_str();
}

inline Int binomial(long n, long k)
{
    if (k < 0)
        return 0;
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return b;
}

inline Int factorial(unsigned long n)
{
    Int f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

// Generalized binomial coefficient C(e, k) = e(e-1)...(e-k+1)/k! for rational e.
inline Rat binomial(const Rat& e, unsigned long k)
{
    Rat acc = 1;
    Rat t = e;
    for (unsigned long i = 0; i < k; ++i) {
        acc *= t;
        t -= 1;
    }
    return acc / Rat(factorial(k));
}

} // namespace zalg
