#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "zalg/rational.hpp"

namespace zalg {

class BivariateSeries;

// Sparse integer polynomial in x and q.
class PolyXQ {
public:
    using Key = std::pair<int, int>; // (x-degree, q-degree)

    PolyXQ() = default;
    PolyXQ(long c);
    static PolyXQ monomial(Int c, int xdeg, int qdeg);
    static PolyXQ x() { return monomial(1, 1, 0); }
    static PolyXQ q() { return monomial(1, 0, 1); }

    const std::map<Key, Int>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Int coeff(int xdeg, int qdeg) const;
    void add_term(int xdeg, int qdeg, const Int& c);

    int x_degree() const; // -1 for zero
    int q_degree() const;
    long total_degree() const;

    PolyXQ operator-() const;
    PolyXQ& operator+=(const PolyXQ& o);
    PolyXQ& operator-=(const PolyXQ& o);
    friend PolyXQ operator+(PolyXQ a, const PolyXQ& b) { return a += b; }
    friend PolyXQ operator-(PolyXQ a, const PolyXQ& b) { return a -= b; }
    friend PolyXQ operator*(const PolyXQ& a, const PolyXQ& b);
    PolyXQ& operator*=(const PolyXQ& o) { return *this = *this * o; }
    friend bool operator==(const PolyXQ& a, const PolyXQ& b) { return a.terms_ == b.terms_; }

    PolyXQ pow(int e) const;

    // x -> x q^r (no truncation; r >= 0)
    PolyXQ shift_x(int r) const;
    // multiply by q^k, k may be negative if all exponents stay nonnegative
    PolyXQ mul_q_power(int k) const;
    int min_q_degree() const; // over all terms; 0 for zero

    Int content() const; // nonnegative integer gcd of coefficients
    PolyXQ divide_content(const Int& g) const;

    // value at (x0, q0) mod p, for randomized rank probes
    std::uint64_t eval_mod(std::uint64_t x0, std::uint64_t q0, std::uint64_t p) const;

    // exact division, throws if not divisible
    PolyXQ divide_exact(const PolyXQ& d) const;

    BivariateSeries to_series(int order) const;

    std::string str() const;
    nlohmann::json to_json() const;
    static PolyXQ from_json(const nlohmann::json& j);

private:
    std::map<Key, Int> terms_;
};

// gcd over Z[x, q], primitive PRS; result has positive leading coefficient
// (lexicographically largest term).
PolyXQ poly_gcd(const PolyXQ& a, const PolyXQ& b);

// Reduced fraction of integer polynomials.
class RatXQ {
public:
    RatXQ() : num_(), den_(1) {}
    RatXQ(PolyXQ num) : num_(std::move(num)), den_(1) {}
    RatXQ(PolyXQ num, PolyXQ den);

    const PolyXQ& num() const { return num_; }
    const PolyXQ& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    RatXQ operator-() const;
    friend RatXQ operator+(const RatXQ& a, const RatXQ& b);
    friend RatXQ operator-(const RatXQ& a, const RatXQ& b);
    friend RatXQ operator*(const RatXQ& a, const RatXQ& b);
    friend RatXQ operator/(const RatXQ& a, const RatXQ& b);
    RatXQ& operator+=(const RatXQ& o) { return *this = *this + o; }
    RatXQ& operator-=(const RatXQ& o) { return *this = *this - o; }
    RatXQ& operator*=(const RatXQ& o) { return *this = *this * o; }
    friend bool operator==(const RatXQ& a, const RatXQ& b)
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    void normalize();
    PolyXQ num_, den_;
};

} // namespace zalg
