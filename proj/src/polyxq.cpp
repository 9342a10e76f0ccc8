#include "zalg/polyxq.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "zalg/qseries.hpp"

namespace zalg {

using nlohmann::json;

PolyXQ::PolyXQ(long c)
{
    if (c != 0)
        terms_[{0, 0}] = c;
}

PolyXQ PolyXQ::monomial(Int c, int xdeg, int qdeg)
{
    PolyXQ p;
    if (c != 0)
        p.terms_[{xdeg, qdeg}] = std::move(c);
    return p;
}

Int PolyXQ::coeff(int xdeg, int qdeg) const
{
    auto it = terms_.find({xdeg, qdeg});
    return it == terms_.end() ? Int(0) : it->second;
}

void PolyXQ::add_term(int xdeg, int qdeg, const Int& c)
{
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace({xdeg, qdeg}, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

int PolyXQ::x_degree() const
{
    int d = -1;
    for (const auto& [k, c] : terms_)
        d = std::max(d, k.first);
    return d;
}

int PolyXQ::q_degree() const
{
    int d = -1;
    for (const auto& [k, c] : terms_)
        d = std::max(d, k.second);
    return d;
}

long PolyXQ::total_degree() const
{
    long d = -1;
    for (const auto& [k, c] : terms_)
        d = std::max(d, static_cast<long>(k.first) + k.second);
    return d;
}

PolyXQ PolyXQ::operator-() const
{
    PolyXQ out = *this;
    for (auto& [k, c] : out.terms_)
        c = -c;
    return out;
}

PolyXQ& PolyXQ::operator+=(const PolyXQ& o)
{
    for (const auto& [k, c] : o.terms_)
        add_term(k.first, k.second, c);
    return *this;
}

PolyXQ& PolyXQ::operator-=(const PolyXQ& o)
{
    for (const auto& [k, c] : o.terms_)
        add_term(k.first, k.second, -c);
    return *this;
}

PolyXQ operator*(const PolyXQ& a, const PolyXQ& b)
{
    PolyXQ out;
    for (const auto& [ka, ca] : a.terms_)
        for (const auto& [kb, cb] : b.terms_)
            out.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
    return out;
}

PolyXQ PolyXQ::pow(int e) const
{
    PolyXQ acc(1);
    for (int i = 0; i < e; ++i)
        acc *= *this;
    return acc;
}

PolyXQ PolyXQ::shift_x(int r) const
{
    if (r < 0)
        throw std::invalid_argument("PolyXQ::shift_x: negative shift");
    PolyXQ out;
    for (const auto& [k, c] : terms_)
        out.terms_[{k.first, k.second + r * k.first}] = c;
    return out;
}

PolyXQ PolyXQ::mul_q_power(int k) const
{
    PolyXQ out;
    for (const auto& [key, c] : terms_) {
        int j = key.second + k;
        if (j < 0)
            throw std::domain_error("PolyXQ::mul_q_power: negative exponent");
        out.terms_[{key.first, j}] = c;
    }
    return out;
}

int PolyXQ::min_q_degree() const
{
    int d = 0;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (first || k.second < d)
            d = k.second;
        first = false;
    }
    return d;
}

Int PolyXQ::content() const
{
    Int g = 0;
    for (const auto& [k, c] : terms_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1)
            break;
    }
    return g;
}

PolyXQ PolyXQ::divide_content(const Int& g) const
{
    if (g == 0)
        return *this;
    PolyXQ out;
    for (const auto& [k, c] : terms_) {
        Int q;
        mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
        out.terms_[k] = std::move(q);
    }
    return out;
}

std::uint64_t PolyXQ::eval_mod(std::uint64_t x0, std::uint64_t q0, std::uint64_t p) const
{
    auto mulmod = [p](std::uint64_t a, std::uint64_t b) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
    };
    auto powmod = [&](std::uint64_t base, long e) {
        std::uint64_t acc = 1 % p;
        base %= p;
        while (e > 0) {
            if (e & 1)
                acc = mulmod(acc, base);
            base = mulmod(base, base);
            e >>= 1;
        }
        return acc;
    };
    std::uint64_t total = 0;
    for (const auto& [k, c] : terms_) {
        Int r = c % Int(static_cast<unsigned long>(p));
        if (r < 0)
            r += Int(static_cast<unsigned long>(p));
        std::uint64_t cv = r.get_ui();
        std::uint64_t term = mulmod(cv, mulmod(powmod(x0, k.first), powmod(q0, k.second)));
        total = (total + term) % p;
    }
    return total;
}

namespace {

// Univariate machinery over Z[q], dense low-to-high.
using Uni = std::vector<Int>;

void uni_trim(Uni& a)
{
    while (!a.empty() && a.back() == 0)
        a.pop_back();
}

Uni uni_mul(const Uni& a, const Uni& b)
{
    if (a.empty() || b.empty())
        return {};
    Uni r(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0)
            continue;
        for (size_t j = 0; j < b.size(); ++j)
            if (b[j] != 0)
                r[i + j] += a[i] * b[j];
    }
    return r;
}

Uni uni_scale(const Uni& a, const Int& c)
{
    Uni r = a;
    for (Int& v : r)
        v *= c;
    return r;
}

Int uni_content(const Uni& a)
{
    Int g = 0;
    for (const Int& c : a) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1)
            break;
    }
    return g;
}

Uni uni_divide_content(Uni a, const Int& g)
{
    if (g == 0 || g == 1)
        return a;
    for (Int& c : a)
        mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    return a;
}

// pseudo-remainder of a by b (b nonzero)
Uni uni_prem(Uni a, const Uni& b)
{
    uni_trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        Int lead_a = a.back();
        size_t shift = a.size() - b.size();
        a = uni_scale(a, b.back());
        for (size_t i = 0; i < b.size(); ++i)
            a[shift + i] -= lead_a * b[i];
        uni_trim(a);
    }
    return a;
}

Uni uni_gcd(Uni a, Uni b)
{
    uni_trim(a);
    uni_trim(b);
    if (a.empty())
        return b;
    if (b.empty())
        return a;
    Int ca = uni_content(a), cb = uni_content(b);
    Int cg;
    mpz_gcd(cg.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    a = uni_divide_content(std::move(a), ca);
    b = uni_divide_content(std::move(b), cb);
    while (!b.empty()) {
        Uni r = uni_prem(a, b);
        a = std::move(b);
        b = uni_divide_content(std::move(r), uni_content(r));
    }
    a = uni_divide_content(std::move(a), uni_content(a));
    Uni out = uni_scale(a, cg);
    if (!out.empty() && out.back() < 0)
        for (Int& c : out)
            c = -c;
    return out;
}

// exact division over Z[q]; throws on failure
Uni uni_divide_exact(Uni a, const Uni& b)
{
    uni_trim(a);
    if (a.empty())
        return {};
    if (b.empty() || a.size() < b.size())
        throw std::logic_error("uni_divide_exact: not divisible");
    Uni q(a.size() - b.size() + 1, Int(0));
    for (size_t k = q.size(); k-- > 0;) {
        const Int& top = a[b.size() - 1 + k];
        if (top == 0)
            continue;
        Int c;
        if (!mpz_divisible_p(top.get_mpz_t(), b.back().get_mpz_t()))
            throw std::logic_error("uni_divide_exact: not divisible");
        mpz_divexact(c.get_mpz_t(), top.get_mpz_t(), b.back().get_mpz_t());
        q[k] = c;
        for (size_t i = 0; i < b.size(); ++i)
            a[k + i] -= c * b[i];
    }
    uni_trim(a);
    if (!a.empty())
        throw std::logic_error("uni_divide_exact: nonzero remainder");
    return q;
}

// x-major view of PolyXQ: coefficient of x^i is a Uni in q.
std::vector<Uni> to_xmajor(const PolyXQ& p)
{
    std::vector<Uni> out(static_cast<size_t>(p.x_degree() + 1));
    for (const auto& [k, c] : p.terms()) {
        Uni& u = out[static_cast<size_t>(k.first)];
        if (static_cast<int>(u.size()) <= k.second)
            u.resize(static_cast<size_t>(k.second) + 1, Int(0));
        u[static_cast<size_t>(k.second)] = c;
    }
    return out;
}

PolyXQ from_xmajor(const std::vector<Uni>& v)
{
    PolyXQ out;
    for (size_t i = 0; i < v.size(); ++i)
        for (size_t j = 0; j < v[i].size(); ++j)
            out.add_term(static_cast<int>(i), static_cast<int>(j), v[i][j]);
    return out;
}

void xm_trim(std::vector<Uni>& a)
{
    while (!a.empty()) {
        uni_trim(a.back());
        if (a.back().empty())
            a.pop_back();
        else
            break;
    }
    for (auto& u : a)
        uni_trim(u);
}

Uni xm_content(const std::vector<Uni>& a)
{
    Uni g;
    for (const auto& u : a)
        g = uni_gcd(g, u);
    return g;
}

std::vector<Uni> xm_divide_uni(const std::vector<Uni>& a, const Uni& d)
{
    std::vector<Uni> out(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        out[i] = a[i].empty() ? Uni{} : uni_divide_exact(a[i], d);
    return out;
}

std::vector<Uni> xm_scale_uni(const std::vector<Uni>& a, const Uni& s)
{
    std::vector<Uni> out(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        out[i] = uni_mul(a[i], s);
    return out;
}

// pseudo-remainder in x over Z[q]
std::vector<Uni> xm_prem(std::vector<Uni> a, const std::vector<Uni>& b)
{
    xm_trim(a);
    while (!a.empty() && a.size() >= b.size()) {
        Uni lead_a = a.back();
        size_t shift = a.size() - b.size();
        a = xm_scale_uni(a, b.back());
        for (size_t i = 0; i < b.size(); ++i) {
            Uni sub = uni_mul(lead_a, b[i]);
            Uni& dst = a[shift + i];
            if (dst.size() < sub.size())
                dst.resize(sub.size(), Int(0));
            for (size_t t = 0; t < sub.size(); ++t)
                dst[t] -= sub[t];
        }
        xm_trim(a);
    }
    return a;
}

} // namespace

PolyXQ poly_gcd(const PolyXQ& pa, const PolyXQ& pb)
{
    if (pa.is_zero())
        return pb;
    if (pb.is_zero())
        return pa;
    std::vector<Uni> a = to_xmajor(pa), b = to_xmajor(pb);
    xm_trim(a);
    xm_trim(b);
    Uni ca = xm_content(a), cb = xm_content(b);
    Uni cg = uni_gcd(ca, cb);
    a = xm_divide_uni(a, ca);
    b = xm_divide_uni(b, cb);
    if (a.size() < b.size())
        std::swap(a, b);
    while (!b.empty()) {
        std::vector<Uni> r = xm_prem(a, b);
        a = std::move(b);
        Uni cr = xm_content(r);
        b = cr.empty() ? std::vector<Uni>{} : xm_divide_uni(r, cr);
    }
    a = xm_divide_uni(a, xm_content(a));
    PolyXQ out = from_xmajor(xm_scale_uni(a, cg));
    if (!out.is_zero() && out.terms().begin()->second < 0)
        out = -out;
    return out;
}

PolyXQ PolyXQ::divide_exact(const PolyXQ& d) const
{
    if (d.is_zero())
        throw std::domain_error("PolyXQ::divide_exact: division by zero");
    if (is_zero())
        return {};
    std::vector<Uni> a = to_xmajor(*this), b = to_xmajor(d);
    xm_trim(a);
    xm_trim(b);
    if (a.size() < b.size())
        throw std::logic_error("PolyXQ::divide_exact: not divisible");
    std::vector<Uni> q(a.size() - b.size() + 1);
    for (size_t k = q.size(); k-- > 0;) {
        xm_trim(a);
        if (a.size() == b.size() + k) {
            Uni c = uni_divide_exact(a.back(), b.back());
            q[k] = c;
            for (size_t i = 0; i < b.size(); ++i) {
                Uni sub = uni_mul(c, b[i]);
                Uni& dst = a[k + i];
                if (dst.size() < sub.size())
                    dst.resize(sub.size(), Int(0));
                for (size_t t = 0; t < sub.size(); ++t)
                    dst[t] -= sub[t];
            }
        } else if (a.size() < b.size() + k) {
            q[k] = {};
        } else {
            throw std::logic_error("PolyXQ::divide_exact: inconsistent degrees");
        }
    }
    xm_trim(a);
    if (!a.empty())
        throw std::logic_error("PolyXQ::divide_exact: nonzero remainder");
    return from_xmajor(q);
}

BivariateSeries PolyXQ::to_series(int order) const
{
    BivariateSeries s(order);
    for (const auto& [k, c] : terms_)
        if (k.second <= order)
            s.add_term(k.first, k.second, Rat(c));
    return s;
}

std::string PolyXQ::str() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        Int mag = c < 0 ? Int(-c) : c;
        if (first) {
            if (c < 0)
                os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        bool unit = mag == 1 && (k.first || k.second);
        if (!unit)
            os << mag.get_str();
        bool star = !unit;
        if (k.first) {
            os << (star ? "*" : "") << "x";
            if (k.first > 1)
                os << "^" << k.first;
            star = true;
        }
        if (k.second) {
            os << (star ? "*" : "") << "q";
            if (k.second > 1)
                os << "^" << k.second;
        }
    }
    return os.str();
}

json PolyXQ::to_json() const
{
    json arr = json::array();
    for (const auto& [k, c] : terms_)
        arr.push_back({{"i", k.first}, {"j", k.second}, {"c", c.get_str()}});
    return arr;
}

PolyXQ PolyXQ::from_json(const json& j)
{
    PolyXQ out;
    for (const auto& t : j)
        out.add_term(t.at("i").get<int>(), t.at("j").get<int>(),
                     Int(t.at("c").get<std::string>()));
    return out;
}

RatXQ::RatXQ(PolyXQ num, PolyXQ den) : num_(std::move(num)), den_(std::move(den))
{
    if (den_.is_zero())
        throw std::domain_error("RatXQ: zero denominator");
    normalize();
}

void RatXQ::normalize()
{
    if (num_.is_zero()) {
        den_ = PolyXQ(1);
        return;
    }
    PolyXQ g = poly_gcd(num_, den_);
    if (!(g == PolyXQ(1))) {
        num_ = num_.divide_exact(g);
        den_ = den_.divide_exact(g);
    }
    if (den_.terms().rbegin()->second < 0) {
        num_ = -num_;
        den_ = -den_;
    }
}

RatXQ RatXQ::operator-() const
{
    RatXQ out = *this;
    out.num_ = -out.num_;
    return out;
}

RatXQ operator+(const RatXQ& a, const RatXQ& b)
{
    return RatXQ(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatXQ operator-(const RatXQ& a, const RatXQ& b)
{
    return RatXQ(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RatXQ operator*(const RatXQ& a, const RatXQ& b)
{
    return RatXQ(a.num_ * b.num_, a.den_ * b.den_);
}

RatXQ operator/(const RatXQ& a, const RatXQ& b)
{
    if (b.is_zero())
        throw std::domain_error("RatXQ: division by zero");
    return RatXQ(a.num_ * b.den_, a.den_ * b.num_);
}

} // namespace zalg
