#include "zalg/cyclotomic.hpp"

#include <cctype>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>

namespace zalg {

namespace {

// Integer polynomial helpers on dense coefficient vectors (lowest degree first).

// Exact division, quotient only; divisor must be monic.
std::vector<Int> poly_div_exact(std::vector<Int> num, const std::vector<Int>& den)
{
    std::vector<Int> q(num.size() - den.size() + 1, Int(0));
    for (size_t k = q.size(); k-- > 0;) {
        Int c = num[k + den.size() - 1];
        q[k] = c;
        if (c != 0)
            for (size_t j = 0; j < den.size(); ++j)
                num[k + j] -= c * den[j];
    }
    for (const Int& c : num)
        if (c != 0)
            throw std::logic_error("poly_div_exact: not divisible");
    return q;
}

// Phi_m by the divisibility recursion: (x^m - 1) / prod_{d|m, d<m} Phi_d.
std::vector<Int> cyclotomic_poly(int m)
{
    static std::map<int, std::vector<Int>> memo;
    for (int k = 1; k <= m; ++k) {
        if (memo.count(k) || m % k != 0)
            continue;
        std::vector<Int> num(static_cast<size_t>(k) + 1, Int(0));
        num[0] = -1;
        num[static_cast<size_t>(k)] = 1;
        for (int d = 1; d < k; ++d)
            if (k % d == 0)
                num = poly_div_exact(std::move(num), memo.at(d));
        memo.emplace(k, std::move(num));
    }
    return memo.at(m);
}

std::mutex& field_mutex()
{
    static std::mutex mtx;
    return mtx;
}

} // namespace

const CycloField& CycloField::get(int m)
{
    static std::map<int, CycloField> registry;
    std::lock_guard<std::mutex> lock(field_mutex());
    auto it = registry.find(m);
    if (it != registry.end())
        return it->second;
    if (m < 1)
        throw std::invalid_argument("CycloField: modulus must be positive");

    CycloField f;
    f.m = m;
    f.minpoly = cyclotomic_poly(m);
    f.degree = static_cast<int>(f.minpoly.size()) - 1;
    // x^deg = -(phi[0] + phi[1] x + ...), then multiply up by x repeatedly.
    std::vector<Int> row(static_cast<size_t>(f.degree));
    for (int i = 0; i < f.degree; ++i)
        row[static_cast<size_t>(i)] = -f.minpoly[static_cast<size_t>(i)];
    f.red.push_back(row);
    for (int k = f.degree + 1; k <= 2 * f.degree - 2; ++k) {
        std::vector<Int> next(static_cast<size_t>(f.degree), Int(0));
        const std::vector<Int>& prev = f.red.back();
        for (int i = 0; i < f.degree - 1; ++i)
            next[static_cast<size_t>(i + 1)] = prev[static_cast<size_t>(i)];
        const Int& top = prev[static_cast<size_t>(f.degree - 1)];
        if (top != 0)
            for (int i = 0; i < f.degree; ++i)
                next[static_cast<size_t>(i)] += top * f.red[0][static_cast<size_t>(i)];
        f.red.push_back(std::move(next));
    }
    return registry.emplace(m, std::move(f)).first->second;
}

Cyclotomic Cyclotomic::zero(int m)
{
    Cyclotomic v;
    v.m_ = m;
    v.c_.assign(static_cast<size_t>(CycloField::get(m).degree), Rat(0));
    return v;
}

Cyclotomic Cyclotomic::one(int m)
{
    return constant(m, Rat(1));
}

Cyclotomic Cyclotomic::constant(int m, const Rat& v)
{
    Cyclotomic z = zero(m);
    z.c_[0] = v;
    return z;
}

Cyclotomic Cyclotomic::from_coords(int m, std::vector<Rat> coords)
{
    const CycloField& f = CycloField::get(m);
    if (static_cast<int>(coords.size()) != f.degree)
        throw std::invalid_argument("Cyclotomic: coordinate length must be phi(m)");
    Cyclotomic v;
    v.m_ = m;
    v.c_ = std::move(coords);
    return v;
}

Cyclotomic Cyclotomic::omega(int m, long power)
{
    const CycloField& f = CycloField::get(m);
    long p = power % m;
    if (p < 0)
        p += m;
    Cyclotomic v = zero(m);
    if (p < f.degree) {
        v.c_[static_cast<size_t>(p)] = 1;
        return v;
    }
    std::vector<Rat> acc(static_cast<size_t>(f.degree), Rat(0));
    acc[static_cast<size_t>(f.degree - 1)] = 1;
    for (long k = f.degree - 1; k < p; ++k) {
        // multiply by x and reduce the overflowing top coefficient
        Rat top = acc[static_cast<size_t>(f.degree - 1)];
        for (int i = f.degree - 1; i > 0; --i)
            acc[static_cast<size_t>(i)] = acc[static_cast<size_t>(i - 1)];
        acc[0] = 0;
        if (top != 0)
            for (int i = 0; i < f.degree; ++i)
                acc[static_cast<size_t>(i)] += top * Rat(f.red[0][static_cast<size_t>(i)]);
    }
    v.c_ = std::move(acc);
    return v;
}

bool Cyclotomic::is_zero() const
{
    for (const Rat& r : c_)
        if (r != 0)
            return false;
    return true;
}

bool Cyclotomic::is_rational() const
{
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0)
            return false;
    return true;
}

Cyclotomic Cyclotomic::promoted(int m) const
{
    if (m_ == m)
        return *this;
    if (m_ != 0)
        throw std::invalid_argument("Cyclotomic: modulus mismatch");
    Cyclotomic v = zero(m);
    v.c_[0] = c_[0];
    return v;
}

void Cyclotomic::align(Cyclotomic& o)
{
    if (m_ == o.m_)
        return;
    if (m_ == 0)
        *this = promoted(o.m_);
    else if (o.m_ == 0)
        o = o.promoted(m_);
    else
        throw std::invalid_argument("Cyclotomic: modulus mismatch");
}

Cyclotomic Cyclotomic::operator-() const
{
    Cyclotomic r = *this;
    for (Rat& x : r.c_)
        x = -x;
    return r;
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& o)
{
    Cyclotomic rhs = o;
    align(rhs);
    for (size_t i = 0; i < c_.size(); ++i)
        c_[i] += rhs.c_[i];
    return *this;
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& o)
{
    Cyclotomic rhs = o;
    align(rhs);
    for (size_t i = 0; i < c_.size(); ++i)
        c_[i] -= rhs.c_[i];
    return *this;
}

Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& o)
{
    Cyclotomic rhs = o;
    align(rhs);
    if (m_ == 0) {
        c_[0] *= rhs.c_[0];
        return *this;
    }
    const CycloField& f = CycloField::get(m_);
    const int d = f.degree;
    std::vector<Rat> prod(static_cast<size_t>(2 * d - 1), Rat(0));
    for (int i = 0; i < d; ++i) {
        if (c_[static_cast<size_t>(i)] == 0)
            continue;
        for (int j = 0; j < d; ++j) {
            if (rhs.c_[static_cast<size_t>(j)] == 0)
                continue;
            prod[static_cast<size_t>(i + j)] +=
                c_[static_cast<size_t>(i)] * rhs.c_[static_cast<size_t>(j)];
        }
    }
    std::vector<Rat> out(prod.begin(), prod.begin() + d);
    for (int k = d; k <= 2 * d - 2; ++k) {
        const Rat& top = prod[static_cast<size_t>(k)];
        if (top == 0)
            continue;
        const std::vector<Int>& row = f.red[static_cast<size_t>(k - d)];
        for (int i = 0; i < d; ++i)
            if (row[static_cast<size_t>(i)] != 0)
                out[static_cast<size_t>(i)] += top * Rat(row[static_cast<size_t>(i)]);
    }
    c_ = std::move(out);
    return *this;
}

Cyclotomic& Cyclotomic::operator*=(const Rat& r)
{
    for (Rat& x : c_)
        x *= r;
    return *this;
}

bool operator==(const Cyclotomic& a, const Cyclotomic& b)
{
    if (a.m_ == b.m_)
        return a.c_ == b.c_;
    if (a.m_ == 0)
        return a.promoted(b.m_).c_ == b.c_;
    if (b.m_ == 0)
        return b.promoted(a.m_).c_ == a.c_;
    return false;
}

Cyclotomic Cyclotomic::inverse() const
{
    if (is_zero())
        throw std::domain_error("Cyclotomic: division by zero");
    if (m_ == 0) {
        Cyclotomic r;
        r.c_[0] = 1 / c_[0];
        return r;
    }
    const int d = degree();
    // Solve (this * x) = 1 as a d x d rational linear system; column j of the
    // matrix holds the coordinates of this * w^j.
    std::vector<std::vector<Rat>> mat(static_cast<size_t>(d),
                                      std::vector<Rat>(static_cast<size_t>(d + 1), Rat(0)));
    Cyclotomic col = *this;
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i)
            mat[static_cast<size_t>(i)][static_cast<size_t>(j)] = col.c_[static_cast<size_t>(i)];
        if (j + 1 < d)
            col *= omega(m_, 1);
    }
    mat[0][static_cast<size_t>(d)] = 1;

    for (int cidx = 0, ridx = 0; cidx < d && ridx < d; ++cidx) {
        int pivot = -1;
        for (int i = ridx; i < d; ++i)
            if (mat[static_cast<size_t>(i)][static_cast<size_t>(cidx)] != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0)
            throw std::logic_error("Cyclotomic::inverse: singular multiplication matrix");
        std::swap(mat[static_cast<size_t>(ridx)], mat[static_cast<size_t>(pivot)]);
        Rat inv = mat[static_cast<size_t>(ridx)][static_cast<size_t>(cidx)];
        for (int k = cidx; k <= d; ++k)
            mat[static_cast<size_t>(ridx)][static_cast<size_t>(k)] /= inv;
        for (int i = 0; i < d; ++i) {
            if (i == ridx)
                continue;
            Rat fct = mat[static_cast<size_t>(i)][static_cast<size_t>(cidx)];
            if (fct == 0)
                continue;
            for (int k = cidx; k <= d; ++k)
                mat[static_cast<size_t>(i)][static_cast<size_t>(k)] -=
                    fct * mat[static_cast<size_t>(ridx)][static_cast<size_t>(k)];
        }
        ++ridx;
    }
    std::vector<Rat> sol(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i)
        sol[static_cast<size_t>(i)] = mat[static_cast<size_t>(i)][static_cast<size_t>(d)];
    return from_coords(m_, std::move(sol));
}

Cyclotomic& Cyclotomic::operator/=(const Cyclotomic& o)
{
    return *this *= o.inverse();
}

Cyclotomic Cyclotomic::pow(long e) const
{
    if (e < 0)
        return inverse().pow(-e);
    Cyclotomic base = *this;
    Cyclotomic acc(1);
    if (m_ != 0)
        acc = one(m_);
    while (e > 0) {
        if (e & 1)
            acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

Cyclotomic Cyclotomic::galois(long t) const
{
    if (m_ == 0)
        return *this;
    long tm = t % m_;
    if (tm < 0)
        tm += m_;
    if (std::gcd(tm, static_cast<long>(m_)) != 1)
        throw std::invalid_argument("Cyclotomic::galois: exponent not coprime to modulus");
    Cyclotomic out = zero(m_);
    for (int i = 0; i < degree(); ++i) {
        if (c_[static_cast<size_t>(i)] == 0)
            continue;
        out += omega(m_, tm * i) * c_[static_cast<size_t>(i)];
    }
    return out;
}

long Cyclotomic::mult_order(long bound) const
{
    if (is_zero())
        return 0;
    if (bound <= 0)
        bound = m_ > 0 ? 4 * m_ + 4 : 4;
    Cyclotomic acc = *this;
    Cyclotomic unit = m_ > 0 ? one(m_) : Cyclotomic(1);
    for (long k = 1; k <= bound; ++k) {
        if (acc == unit)
            return k;
        acc *= *this;
    }
    return 0;
}

std::string Cyclotomic::str() const
{
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < degree(); ++i) {
        const Rat& a = c_[static_cast<size_t>(i)];
        if (a == 0)
            continue;
        Rat mag = a < 0 ? Rat(-a) : a;
        if (first) {
            if (a < 0)
                os << "-";
            first = false;
        } else {
            os << (a < 0 ? " - " : " + ");
        }
        bool unit_mag = (mag == 1);
        if (i == 0 || !unit_mag)
            os << mag.get_str();
        if (i > 0) {
            if (!unit_mag)
                os << "*";
            os << "w";
            if (i > 1)
                os << "^" << i;
        }
    }
    if (first)
        os << "0";
    return os.str();
}

Cyclotomic Cyclotomic::parse(int m, const std::string& text)
{
    Cyclotomic out = zero(m);
    size_t pos = 0;
    const size_t n = text.size();
    auto skip_ws = [&] {
        while (pos < n && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    };
    skip_ws();
    bool expect_term = true;
    int sign = 1;
    while (pos < n) {
        if (expect_term) {
            while (pos < n && (text[pos] == '+' || text[pos] == '-')) {
                if (text[pos] == '-')
                    sign = -sign;
                ++pos;
                skip_ws();
            }
            Rat coeff(1);
            bool have_coeff = false;
            size_t start = pos;
            while (pos < n &&
                   (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/'))
                ++pos;
            if (pos > start) {
                coeff = parse_rat(text.substr(start, pos - start));
                have_coeff = true;
            }
            skip_ws();
            long expo = 0;
            if (pos < n && ((have_coeff && text[pos] == '*') || text[pos] == 'w')) {
                if (text[pos] == '*') {
                    ++pos;
                    skip_ws();
                }
                if (pos >= n || text[pos] != 'w')
                    throw std::invalid_argument("Cyclotomic::parse: expected 'w'");
                ++pos;
                expo = 1;
                if (pos < n && text[pos] == '^') {
                    ++pos;
                    size_t es = pos;
                    while (pos < n && std::isdigit(static_cast<unsigned char>(text[pos])))
                        ++pos;
                    if (pos == es)
                        throw std::invalid_argument("Cyclotomic::parse: missing exponent");
                    expo = std::stol(text.substr(es, pos - es));
                }
            } else if (!have_coeff) {
                throw std::invalid_argument("Cyclotomic::parse: empty term in '" + text + "'");
            }
            if (sign < 0)
                coeff = -coeff;
            out += omega(m, expo) * coeff;
            sign = 1;
            expect_term = false;
            skip_ws();
        } else {
            if (text[pos] == '+')
                sign = 1;
            else if (text[pos] == '-')
                sign = -1;
            else
                throw std::invalid_argument("Cyclotomic::parse: expected '+' or '-'");
            ++pos;
            skip_ws();
            expect_term = true;
        }
    }
    if (expect_term && pos > 0)
        throw std::invalid_argument("Cyclotomic::parse: trailing sign");
    return out;
}

std::ostream& operator<<(std::ostream& os, const Cyclotomic& v)
{
    return os << v.str();
}

Cyclotomic omega_power(int m, long p)
{
    return Cyclotomic::omega(m, p);
}

namespace d4c {

Cyclotomic a_flat() { return Cyclotomic::parse(12, "4 + 4*w + 2*w^3"); }
Cyclotomic b_flat() { return Cyclotomic::parse(12, "-24 - 28*w + 14*w^3"); }
Cyclotomic c_flat() { return Cyclotomic::parse(12, "42 + 48*w - 24*w^3"); }
Cyclotomic a_nat() { return Cyclotomic::parse(12, "-6 - 8*w + 4*w^3"); }
Cyclotomic b_nat() { return Cyclotomic::parse(12, "14 + 16*w - 8*w^3"); }
Cyclotomic d_nat() { return Cyclotomic::parse(12, "4 - 8*w^2 - 6*w^3"); }
Cyclotomic e_nat() { return Cyclotomic::parse(12, "2 - 4*w^2"); }

} // namespace d4c

} // namespace zalg
