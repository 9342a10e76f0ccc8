#pragma once

#include <vector>
#include <string>
#include <iosfwd>

#include "zalg/rational.hpp"

namespace zalg {

// Per-modulus data: the minimal polynomial of a primitive m-th root of unity
// and the reduction rows x^k -> sum_i row[i] x^i for deg <= k <= 2*deg-2.
struct CycloField {
    int m = 0;
    int degree = 0;                    // phi(m)
    std::vector<Int> minpoly;          // monic, length degree+1
    std::vector<std::vector<Int>> red; // red[k-degree] gives x^k, integer rows

    static const CycloField& get(int m);
};

// An element of Q(w) for w a fixed primitive m-th root of unity, stored as
// exact rational coordinates over the power basis 1, w, ..., w^(phi(m)-1).
// Canonical: two values over the same modulus are equal iff their coordinate
// vectors are equal.
//
// Modulus 0 marks a plain rational not yet attached to any field; it promotes
// on contact with a field element. This is what makes Scalar(0)/Scalar(1) in
// generic (e.g. Eigen) code work.
class Cyclotomic {
public:
    Cyclotomic() : c_{Rat(0)} {}
    Cyclotomic(long v) : c_{Rat(v)} {}
    Cyclotomic(int v) : c_{Rat(v)} {}
    Cyclotomic(const Rat& v) : c_{v} {}

    static Cyclotomic zero(int m);
    static Cyclotomic one(int m);
    static Cyclotomic constant(int m, const Rat& v);
    static Cyclotomic from_coords(int m, std::vector<Rat> coords);
    static Cyclotomic omega(int m, long power = 1);

    int modulus() const { return m_; }
    int degree() const { return static_cast<int>(c_.size()); }
    const std::vector<Rat>& coords() const { return c_; }
    const Rat& coord(int i) const { return c_[static_cast<size_t>(i)]; }

    bool is_zero() const;
    bool is_rational() const;
    Rat rational_part() const { return c_[0]; }

    // Returns a copy attached to Q(w_m); no-op if already there.
    Cyclotomic promoted(int m) const;

    Cyclotomic operator-() const;
    Cyclotomic& operator+=(const Cyclotomic& o);
    Cyclotomic& operator-=(const Cyclotomic& o);
    Cyclotomic& operator*=(const Cyclotomic& o);
    Cyclotomic& operator*=(const Rat& r);
    Cyclotomic& operator/=(const Cyclotomic& o);

    friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
    friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
    friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic& b) { return a *= b; }
    friend Cyclotomic operator*(Cyclotomic a, const Rat& r) { return a *= r; }
    friend Cyclotomic operator*(const Rat& r, Cyclotomic a) { return a *= r; }
    friend Cyclotomic operator/(Cyclotomic a, const Cyclotomic& b) { return a /= b; }
    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b);
    friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

    Cyclotomic inverse() const;
    Cyclotomic pow(long e) const;

    // Field automorphism w -> w^t for gcd(t, m) = 1.
    Cyclotomic galois(long t) const;

    // Complex conjugation w -> w^(-1).
    Cyclotomic conj() const { return galois(-1); }

    // Multiplicative order, or 0 if no power up to the bound reaches 1.
    long mult_order(long bound = 0) const;

    // Text form "a0 + a1*w + a2*w^2 + ...", rational coefficients "p/q".
    std::string str() const;
    static Cyclotomic parse(int m, const std::string& text);

    friend std::ostream& operator<<(std::ostream& os, const Cyclotomic& v);

private:
    // Aligns *this and o to a common field; throws on a true mismatch.
    void align(Cyclotomic& o);

    int m_ = 0;
    std::vector<Rat> c_;
};

Cyclotomic omega_power(int m, long p);

// The distinguished constants of the D4 twisted-module calculus, over Q(w12).
namespace d4c {
Cyclotomic a_flat();  //  4 + 4w + 2w^3
Cyclotomic b_flat();  // -24 - 28w + 14w^3
Cyclotomic c_flat();  //  42 + 48w - 24w^3
Cyclotomic a_nat();   //  -6 - 8w + 4w^3
Cyclotomic b_nat();   //  14 + 16w - 8w^3
Cyclotomic d_nat();   //   4 - 8w^2 - 6w^3
Cyclotomic e_nat();   //   2 - 4w^2
} // namespace d4c

} // namespace zalg
