#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "zalg/cyclotomic.hpp"

namespace zalg {

// Formal series in x and q, exact below a q-truncation order: every operation
// agrees with the untruncated result on all terms of q-degree <= order().
class BivariateSeries {
public:
    using Key = std::pair<int, int>; // (x-degree, q-degree)

    explicit BivariateSeries(int order = 0) : order_(order) {}

    static BivariateSeries monomial(const Rat& c, int xdeg, int qdeg, int order);
    static BivariateSeries one(int order) { return monomial(1, 0, 0, order); }

    int order() const { return order_; }
    const std::map<Key, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rat coeff(int xdeg, int qdeg) const;
    void set_coeff(int xdeg, int qdeg, const Rat& c);
    void add_term(int xdeg, int qdeg, const Rat& c);

    // Lowers (never raises) the truncation order.
    BivariateSeries truncated(int order) const;

    BivariateSeries operator-() const;
    BivariateSeries& operator+=(const BivariateSeries& o);
    BivariateSeries& operator-=(const BivariateSeries& o);
    friend BivariateSeries operator+(BivariateSeries a, const BivariateSeries& b) { return a += b; }
    friend BivariateSeries operator-(BivariateSeries a, const BivariateSeries& b) { return a -= b; }
    friend BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b);
    BivariateSeries& operator*=(const BivariateSeries& o) { return *this = *this * o; }
    BivariateSeries& operator*=(const Rat& r);
    friend bool operator==(const BivariateSeries& a, const BivariateSeries& b)
    {
        return a.terms_ == b.terms_;
    }

    // Reciprocal; requires the q^0 slice to be the constant 1.
    BivariateSeries inverse() const;

    // x -> x q^r, i.e. (i, j) -> (i, j + r*i). r >= 0.
    BivariateSeries shift_x(int r) const;

    // Substitutes x = 1 (series in q alone).
    BivariateSeries at_x_one() const;

    // Max q-degree with a nonzero term, or -1 if zero.
    int min_q_degree() const;
    int max_x_degree() const;

    std::string str() const;
    nlohmann::json to_json() const;
    static BivariateSeries from_json(const nlohmann::json& j, int order);

private:
    int order_ = 0;
    std::map<Key, Rat> terms_;
};

// (c x^a q^b ; q^step)_n, the product (1-cx^aq^b)(1-cx^aq^(b+step))...;
// n < 0 means the infinite product, which requires b >= 1.
BivariateSeries pochhammer(const Rat& coeff, int xdeg, int qdeg, long n, int order,
                           int step = 1);

// Generating function (coefficients of q^n count partitions of n) for
// partitions with all parts congruent to one of the residues mod `modulus`.
// A residue equal to the modulus means parts divisible by it.
BivariateSeries congruence_product(int modulus, const std::vector<int>& residues, int order);

// Triple-sum form of the mod-9 double-restricted generating functions,
// a in 1..5; exact in x and q through the given q-order.
BivariateSeries triple_sum(int a, int order);

// sum_r polys[r](x, q) * f(x q^r, q), truncated at f's order (or `order` if
// nonnegative).
BivariateSeries apply_recurrence(const std::vector<BivariateSeries>& polys,
                                 const BivariateSeries& f, int order = -1);

// A window of Laurent coefficients c_n, |n| <= radius, over Q(w_m).
class CycloLaurentWindow {
public:
    CycloLaurentWindow(int m, int radius);

    int modulus() const { return m_; }
    int radius() const { return radius_; }
    const Cyclotomic& at(int n) const;
    Cyclotomic& at(int n);

    bool one_sided() const; // supported on n >= 0
    CycloLaurentWindow bar() const; // c_n -> c_{-n}

    CycloLaurentWindow operator-() const;
    CycloLaurentWindow& operator+=(const CycloLaurentWindow& o);
    CycloLaurentWindow& operator-=(const CycloLaurentWindow& o);
    friend CycloLaurentWindow operator+(CycloLaurentWindow a, const CycloLaurentWindow& b)
    {
        return a += b;
    }
    friend CycloLaurentWindow operator-(CycloLaurentWindow a, const CycloLaurentWindow& b)
    {
        return a -= b;
    }
    CycloLaurentWindow& operator*=(const Cyclotomic& s);
    friend CycloLaurentWindow operator*(CycloLaurentWindow a, const Cyclotomic& s)
    {
        return a *= s;
    }

    // Cauchy product, valid for one-sided windows.
    friend CycloLaurentWindow operator*(const CycloLaurentWindow& a, const CycloLaurentWindow& b);

    friend bool operator==(const CycloLaurentWindow& a, const CycloLaurentWindow& b);

private:
    int m_ = 0;
    int radius_ = 0;
    std::vector<Cyclotomic> c_;
};

// power-series expansion of (1 - c x)^e for rational e, to x^radius.
CycloLaurentWindow binomial_series(const Cyclotomic& c, const Rat& e, int radius);

// prod_{p=0}^{m-1} (1 - w^-p x)^(e_p), exponents rational, over Q(w_m).
CycloLaurentWindow omega_binomial_product(int m, const std::vector<Rat>& exponents, int radius);

// H_{a0..a5}(x) = prod_p (1 - w^-p x)^(a_p/3) (1 + w^-p x)^(-a_p/3), m = 12.
CycloLaurentWindow h_series(const std::array<int, 6>& exponents, int radius);

// G_1..G_6; G_6 = G_4 - (Dnat/Enat) G_5.
CycloLaurentWindow g_series(int index, int radius);
std::array<int, 6> g_exponents(int index); // 1..5

// A finite combination of formal deltas: sum of s * delta(w^k x) terms and
// s * (D delta)(w^k x) terms, evaluated at index n as s*w^(kn) and s*n*w^(kn).
struct DeltaCombination {
    struct Term {
        bool derivative = false; // false: delta, true: D delta
        int twist = 0;           // the w-power k
        Cyclotomic scalar;
    };
    int m = 12;
    std::vector<Term> terms;

    Cyclotomic eval(long n) const;
    void add(bool derivative, int twist, const Cyclotomic& scalar);
    nlohmann::json to_json() const;
    static DeltaCombination from_json(const nlohmann::json& j);

    friend bool operator==(const DeltaCombination& a, const DeltaCombination& b);
};

// Fits window coefficients to a delta combination from 4m consecutive indices
// and verifies the fit on the whole window. Throws if no delta combination
// matches the fitted band.
DeltaCombination fit_delta_combination(const CycloLaurentWindow& window);

struct FourierCheck {
    bool matches_stated = false;  // window == stated combination everywhere
    std::vector<long> failures;   // indices where the stated combination fails
    DeltaCombination fitted;      // oracle fit, always verified on the window
    Cyclotomic stated_constant;   // stated combination at n = 0
    Cyclotomic window_constant;   // window coefficient at n = 0
};

// Checks  H_lhs +/- bar(H_lhs) == stated  coefficientwise for |n| <= radius.
FourierCheck fourier_check(const std::array<int, 6>& lhs_exponents, int sign,
                           const DeltaCombination& stated, int radius);

} // namespace zalg
