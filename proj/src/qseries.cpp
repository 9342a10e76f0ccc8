#include "zalg/qseries.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include <nlohmann/json.hpp>

namespace zalg {

using nlohmann::json;

BivariateSeries BivariateSeries::monomial(const Rat& c, int xdeg, int qdeg, int order)
{
    BivariateSeries s(order);
    if (c != 0 && qdeg <= order)
        s.terms_[{xdeg, qdeg}] = c;
    return s;
}

Rat BivariateSeries::coeff(int xdeg, int qdeg) const
{
    auto it = terms_.find({xdeg, qdeg});
    return it == terms_.end() ? Rat(0) : it->second;
}

void BivariateSeries::set_coeff(int xdeg, int qdeg, const Rat& c)
{
    if (qdeg > order_)
        return;
    if (c == 0)
        terms_.erase({xdeg, qdeg});
    else
        terms_[{xdeg, qdeg}] = c;
}

void BivariateSeries::add_term(int xdeg, int qdeg, const Rat& c)
{
    if (qdeg > order_ || c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace({xdeg, qdeg}, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

BivariateSeries BivariateSeries::truncated(int order) const
{
    BivariateSeries out(std::min(order, order_));
    for (const auto& [k, c] : terms_)
        if (k.second <= out.order_)
            out.terms_.emplace(k, c);
    return out;
}

BivariateSeries BivariateSeries::operator-() const
{
    BivariateSeries out = *this;
    for (auto& [k, c] : out.terms_)
        c = -c;
    return out;
}

BivariateSeries& BivariateSeries::operator+=(const BivariateSeries& o)
{
    order_ = std::min(order_, o.order_);
    std::erase_if(terms_, [&](const auto& kv) { return kv.first.second > order_; });
    for (const auto& [k, c] : o.terms_)
        if (k.second <= order_)
            add_term(k.first, k.second, c);
    return *this;
}

BivariateSeries& BivariateSeries::operator-=(const BivariateSeries& o)
{
    order_ = std::min(order_, o.order_);
    std::erase_if(terms_, [&](const auto& kv) { return kv.first.second > order_; });
    for (const auto& [k, c] : o.terms_)
        if (k.second <= order_)
            add_term(k.first, k.second, -c);
    return *this;
}

BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b)
{
    BivariateSeries out(std::min(a.order_, b.order_));
    for (const auto& [ka, ca] : a.terms_) {
        if (ka.second > out.order_)
            continue;
        for (const auto& [kb, cb] : b.terms_) {
            int j = ka.second + kb.second;
            if (j > out.order_)
                continue;
            out.add_term(ka.first + kb.first, j, ca * cb);
        }
    }
    return out;
}

BivariateSeries& BivariateSeries::operator*=(const Rat& r)
{
    if (r == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, c] : terms_)
        c *= r;
    return *this;
}

BivariateSeries BivariateSeries::inverse() const
{
    // q-degree slices as x-polynomials
    std::vector<std::map<int, Rat>> f(static_cast<size_t>(order_) + 1);
    for (const auto& [k, c] : terms_)
        f[static_cast<size_t>(k.second)][k.first] = c;
    if (f[0].size() != 1 || !f[0].count(0) || f[0].at(0) != 1)
        throw std::domain_error("BivariateSeries::inverse: q^0 slice must be 1");

    std::vector<std::map<int, Rat>> g(static_cast<size_t>(order_) + 1);
    g[0][0] = 1;
    for (int j = 1; j <= order_; ++j) {
        std::map<int, Rat>& gj = g[static_cast<size_t>(j)];
        for (int t = 1; t <= j; ++t) {
            const auto& ft = f[static_cast<size_t>(t)];
            const auto& gjt = g[static_cast<size_t>(j - t)];
            for (const auto& [xa, ca] : ft)
                for (const auto& [xb, cb] : gjt) {
                    Rat& slot = gj[xa + xb];
                    slot -= ca * cb;
                }
        }
        std::erase_if(gj, [](const auto& kv) { return kv.second == 0; });
    }
    BivariateSeries out(order_);
    for (int j = 0; j <= order_; ++j)
        for (const auto& [x, c] : g[static_cast<size_t>(j)])
            out.terms_[{x, j}] = c;
    return out;
}

BivariateSeries BivariateSeries::shift_x(int r) const
{
    if (r < 0)
        throw std::invalid_argument("shift_x: negative shift");
    BivariateSeries out(order_);
    for (const auto& [k, c] : terms_) {
        long j = k.second + static_cast<long>(r) * k.first;
        if (j <= order_)
            out.terms_[{k.first, static_cast<int>(j)}] = c;
    }
    return out;
}

BivariateSeries BivariateSeries::at_x_one() const
{
    BivariateSeries out(order_);
    for (const auto& [k, c] : terms_)
        out.add_term(0, k.second, c);
    return out;
}

int BivariateSeries::min_q_degree() const
{
    int best = -1;
    for (const auto& [k, c] : terms_)
        if (best < 0 || k.second < best)
            best = k.second;
    return best;
}

int BivariateSeries::max_x_degree() const
{
    int best = -1;
    for (const auto& [k, c] : terms_)
        best = std::max(best, k.first);
    return best;
}

std::string BivariateSeries::str() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first)
            os << " + ";
        first = false;
        os << c.get_str();
        if (k.first)
            os << "*x^" << k.first;
        if (k.second)
            os << "*q^" << k.second;
    }
    return os.str();
}

json BivariateSeries::to_json() const
{
    json arr = json::array();
    for (const auto& [k, c] : terms_)
        arr.push_back({{"i", k.first}, {"j", k.second}, {"c", c.get_str()}});
    return arr;
}

BivariateSeries BivariateSeries::from_json(const json& j, int order)
{
    BivariateSeries out(order);
    for (const auto& t : j)
        out.add_term(t.at("i").get<int>(), t.at("j").get<int>(),
                     parse_rat(t.at("c").get<std::string>()));
    return out;
}

BivariateSeries pochhammer(const Rat& coeff, int xdeg, int qdeg, long n, int order, int step)
{
    if (step < 1)
        throw std::invalid_argument("pochhammer: step must be positive");
    BivariateSeries acc = BivariateSeries::one(order);
    if (n < 0) {
        if (qdeg < 1)
            throw std::domain_error("pochhammer: infinite product needs positive q-degree");
        for (long t = 0; qdeg + t * step <= order; ++t) {
            BivariateSeries factor = BivariateSeries::one(order);
            factor.add_term(xdeg, qdeg + static_cast<int>(t * step), -coeff);
            acc *= factor;
        }
        return acc;
    }
    for (long t = 0; t < n; ++t) {
        BivariateSeries factor = BivariateSeries::one(order);
        long j = qdeg + t * step;
        if (j <= order)
            factor.add_term(xdeg, static_cast<int>(j), -coeff);
        acc *= factor;
    }
    return acc;
}

BivariateSeries congruence_product(int modulus, const std::vector<int>& residues, int order)
{
    if (residues.empty())
        throw std::invalid_argument("congruence_product: empty residue set");
    std::vector<bool> allowed(static_cast<size_t>(modulus), false);
    for (int r : residues) {
        if (r < 1 || r > modulus)
            throw std::invalid_argument("congruence_product: residue out of range");
        allowed[static_cast<size_t>(r % modulus)] = true;
    }
    std::vector<Rat> c(static_cast<size_t>(order) + 1, Rat(0));
    c[0] = 1;
    for (int v = 1; v <= order; ++v) {
        if (!allowed[static_cast<size_t>(v % modulus)])
            continue;
        for (int j = v; j <= order; ++j)
            c[static_cast<size_t>(j)] += c[static_cast<size_t>(j - v)];
    }
    BivariateSeries out(order);
    for (int j = 0; j <= order; ++j)
        out.set_coeff(0, j, c[static_cast<size_t>(j)]);
    return out;
}

BivariateSeries triple_sum(int a, int order)
{
    if (a < 1 || a > 5)
        throw std::invalid_argument("triple_sum: a must be in 1..5");
    static const int A[6][3] = {{0, 0, 0}, {1, 4, 3}, {2, 6, 6}, {3, 8, 6}, {2, 6, 5}, {1, 6, 4}};
    const int a1 = A[a][0], a2 = A[a][1], a3 = A[a][2];

    auto choose2 = [](long n) { return n * (n - 1) / 2; };

    // 1/(q^d; q^d)_i, built incrementally in i
    auto inv_tower = [&](int d) {
        std::vector<BivariateSeries> tower;
        tower.push_back(BivariateSeries::one(order));
        for (int i = 1; static_cast<long>(d) * i <= order + d; ++i) {
            BivariateSeries geo(order);
            for (long t = 0; t * d * i <= order; ++t)
                geo.add_term(0, static_cast<int>(t * d * i), 1);
            tower.push_back(tower.back() * geo);
        }
        return tower;
    };
    auto inv1 = inv_tower(1), inv2 = inv_tower(2), inv3 = inv_tower(3);

    BivariateSeries out(order);
    for (long i = 0;; ++i) {
        long ei = 3 * choose2(i) + a1 * i;
        if (ei > order)
            break;
        for (long j = 0;; ++j) {
            long ej = ei + 8 * choose2(j) + 4 * i * j + a2 * j;
            if (ej > order)
                break;
            for (long k = 0;; ++k) {
                long e = ej + 6 * choose2(k) + 3 * i * k + 6 * j * k + a3 * k;
                if (e > order)
                    break;
                BivariateSeries term =
                    BivariateSeries::monomial(1, static_cast<int>(i + 2 * j + 2 * k),
                                              static_cast<int>(e), order);
                if (i)
                    term *= inv1[static_cast<size_t>(i)];
                if (j)
                    term *= inv2[static_cast<size_t>(j)];
                if (k)
                    term *= inv3[static_cast<size_t>(k)];
                out += term;
            }
        }
    }
    return out;
}

BivariateSeries apply_recurrence(const std::vector<BivariateSeries>& polys,
                                 const BivariateSeries& f, int order)
{
    if (polys.empty())
        throw std::invalid_argument("apply_recurrence: no coefficient polynomials");
    int n = order >= 0 ? order : f.order();
    BivariateSeries acc(n);
    for (size_t r = 0; r < polys.size(); ++r) {
        if (polys[r].is_zero())
            continue;
        acc += polys[r].truncated(n) * f.shift_x(static_cast<int>(r)).truncated(n);
    }
    return acc;
}

CycloLaurentWindow::CycloLaurentWindow(int m, int radius)
    : m_(m), radius_(radius),
      c_(static_cast<size_t>(2 * radius + 1), Cyclotomic::zero(m))
{
}

const Cyclotomic& CycloLaurentWindow::at(int n) const
{
    if (n < -radius_ || n > radius_)
        throw std::out_of_range("CycloLaurentWindow: index outside window");
    return c_[static_cast<size_t>(n + radius_)];
}

Cyclotomic& CycloLaurentWindow::at(int n)
{
    if (n < -radius_ || n > radius_)
        throw std::out_of_range("CycloLaurentWindow: index outside window");
    return c_[static_cast<size_t>(n + radius_)];
}

bool CycloLaurentWindow::one_sided() const
{
    for (int n = -radius_; n < 0; ++n)
        if (!at(n).is_zero())
            return false;
    return true;
}

CycloLaurentWindow CycloLaurentWindow::bar() const
{
    CycloLaurentWindow out(m_, radius_);
    for (int n = -radius_; n <= radius_; ++n)
        out.at(-n) = at(n);
    return out;
}

CycloLaurentWindow CycloLaurentWindow::operator-() const
{
    CycloLaurentWindow out(m_, radius_);
    for (int n = -radius_; n <= radius_; ++n)
        out.at(n) = -at(n);
    return out;
}

CycloLaurentWindow& CycloLaurentWindow::operator+=(const CycloLaurentWindow& o)
{
    if (o.radius_ != radius_ || o.m_ != m_)
        throw std::invalid_argument("CycloLaurentWindow: shape mismatch");
    for (size_t i = 0; i < c_.size(); ++i)
        c_[i] += o.c_[i];
    return *this;
}

CycloLaurentWindow& CycloLaurentWindow::operator-=(const CycloLaurentWindow& o)
{
    if (o.radius_ != radius_ || o.m_ != m_)
        throw std::invalid_argument("CycloLaurentWindow: shape mismatch");
    for (size_t i = 0; i < c_.size(); ++i)
        c_[i] -= o.c_[i];
    return *this;
}

CycloLaurentWindow& CycloLaurentWindow::operator*=(const Cyclotomic& s)
{
    for (auto& x : c_)
        x *= s;
    return *this;
}

CycloLaurentWindow operator*(const CycloLaurentWindow& a, const CycloLaurentWindow& b)
{
    if (a.m_ != b.m_)
        throw std::invalid_argument("CycloLaurentWindow: modulus mismatch");
    if (!a.one_sided() || !b.one_sided()) {
        auto lower = [](const CycloLaurentWindow& w) {
            for (int n = 1; n <= w.radius(); ++n)
                if (!w.at(n).is_zero())
                    return false;
            return true;
        };
        if (lower(a) && lower(b))
            return (a.bar() * b.bar()).bar();
        throw std::domain_error("CycloLaurentWindow: product needs one-sided operands");
    }
    int radius = std::min(a.radius_, b.radius_);
    CycloLaurentWindow out(a.m_, radius);
    for (int n = 0; n <= radius; ++n) {
        Cyclotomic acc = Cyclotomic::zero(a.m_);
        for (int k = 0; k <= n; ++k) {
            const Cyclotomic& x = a.at(k);
            if (x.is_zero())
                continue;
            acc += x * b.at(n - k);
        }
        out.at(n) = acc;
    }
    return out;
}

bool operator==(const CycloLaurentWindow& a, const CycloLaurentWindow& b)
{
    return a.m_ == b.m_ && a.radius_ == b.radius_ && a.c_ == b.c_;
}

CycloLaurentWindow binomial_series(const Cyclotomic& c, const Rat& e, int radius)
{
    if (c.modulus() == 0)
        throw std::invalid_argument("binomial_series: coefficient must carry a modulus");
    CycloLaurentWindow out(c.modulus(), radius);
    Cyclotomic power = Cyclotomic::one(out.modulus());
    for (int k = 0; k <= radius; ++k) {
        out.at(k) = power * binomial(e, static_cast<unsigned long>(k));
        power *= -c;
    }
    return out;
}

CycloLaurentWindow omega_binomial_product(int m, const std::vector<Rat>& exponents, int radius)
{
    if (static_cast<int>(exponents.size()) != m)
        throw std::invalid_argument("omega_binomial_product: need one exponent per residue");
    CycloLaurentWindow acc(m, radius);
    acc.at(0) = Cyclotomic::one(m);
    for (int p = 0; p < m; ++p) {
        if (exponents[static_cast<size_t>(p)] == 0)
            continue;
        acc = acc * binomial_series(Cyclotomic::omega(m, -p), exponents[static_cast<size_t>(p)],
                                    radius);
    }
    return acc;
}

CycloLaurentWindow h_series(const std::array<int, 6>& exponents, int radius)
{
    std::vector<Rat> e(12, Rat(0));
    for (int p = 0; p < 6; ++p) {
        e[static_cast<size_t>(p)] += rat_of(exponents[static_cast<size_t>(p)], 3);
        // (1 + w^-p x) = (1 - w^-(p+6) x) since w^6 = -1
        e[static_cast<size_t>(p + 6)] -= rat_of(exponents[static_cast<size_t>(p)], 3);
    }
    return omega_binomial_product(12, e, radius);
}

std::array<int, 6> g_exponents(int index)
{
    switch (index) {
    case 1:
        return {2, 1, 1, 0, -1, -1};
    case 2:
        return {-1, 1, 1, 0, -1, -1};
    case 3:
        return {-1, 1, -2, 0, 2, -1};
    case 4:
        return {2, -2, -2, 0, 2, 2};
    case 5:
        return {2, -2, 1, 0, -1, 2};
    default:
        throw std::invalid_argument("g_exponents: index must be 1..5");
    }
}

CycloLaurentWindow g_series(int index, int radius)
{
    if (index >= 1 && index <= 5)
        return h_series(g_exponents(index), radius);
    if (index == 6) {
        CycloLaurentWindow g4 = g_series(4, radius);
        CycloLaurentWindow g5 = g_series(5, radius);
        return g4 - g5 * (d4c::d_nat() / d4c::e_nat());
    }
    throw std::invalid_argument("g_series: index must be 1..6");
}

Cyclotomic DeltaCombination::eval(long n) const
{
    Cyclotomic acc = Cyclotomic::zero(m);
    for (const auto& t : terms) {
        Cyclotomic v = t.scalar * Cyclotomic::omega(m, t.twist * n);
        if (t.derivative)
            v *= Rat(n);
        acc += v;
    }
    return acc;
}

void DeltaCombination::add(bool derivative, int twist, const Cyclotomic& scalar)
{
    int k = twist % m;
    if (k < 0)
        k += m;
    terms.push_back({derivative, k, scalar.promoted(m)});
}

json DeltaCombination::to_json() const
{
    json arr = json::array();
    for (const auto& t : terms)
        arr.push_back({{"kind", t.derivative ? "Ddelta" : "delta"},
                       {"twist", t.twist},
                       {"scalar", t.scalar.str()}});
    return arr;
}

DeltaCombination DeltaCombination::from_json(const json& j)
{
    DeltaCombination out;
    for (const auto& t : j) {
        std::string kind = t.at("kind").get<std::string>();
        out.add(kind == "Ddelta", t.at("twist").get<int>(),
                Cyclotomic::parse(out.m, t.at("scalar").get<std::string>()));
    }
    return out;
}

namespace {

std::map<std::pair<bool, int>, Cyclotomic> canonical_terms(const DeltaCombination& d)
{
    std::map<std::pair<bool, int>, Cyclotomic> out;
    for (const auto& t : d.terms) {
        int k = t.twist % d.m;
        if (k < 0)
            k += d.m;
        auto [it, inserted] = out.try_emplace({t.derivative, k}, t.scalar);
        if (!inserted)
            it->second += t.scalar;
    }
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

} // namespace

bool operator==(const DeltaCombination& a, const DeltaCombination& b)
{
    return a.m == b.m && canonical_terms(a) == canonical_terms(b);
}

DeltaCombination fit_delta_combination(const CycloLaurentWindow& window)
{
    const int m = window.modulus();
    if (window.radius() < 2 * m)
        throw std::invalid_argument("fit_delta_combination: radius must be at least 2m");

    // Band of 4m consecutive indices; per residue class solve u + n v = c_n
    // from two points and check the remaining two.
    std::vector<Cyclotomic> u(static_cast<size_t>(m)), v(static_cast<size_t>(m));
    for (int r = 0; r < m; ++r) {
        long n1 = r - 2 * m, n2 = r - m, n3 = r, n4 = r + m;
        Cyclotomic c1 = window.at(static_cast<int>(n1));
        Cyclotomic c2 = window.at(static_cast<int>(n2));
        Cyclotomic c3 = window.at(static_cast<int>(n3));
        Cyclotomic c4 = window.at(static_cast<int>(n4));
        Cyclotomic vv = (c2 - c1) * rat_of(1, n2 - n1);
        Cyclotomic uu = c1 - vv * Rat(n1);
        if (uu + vv * Rat(n3) != c3 || uu + vv * Rat(n4) != c4)
            throw std::domain_error("fit_delta_combination: window is not of delta form");
        u[static_cast<size_t>(r)] = uu;
        v[static_cast<size_t>(r)] = vv;
    }

    DeltaCombination fit;
    fit.m = m;
    for (int k = 0; k < m; ++k) {
        Cyclotomic s = Cyclotomic::zero(m), t = Cyclotomic::zero(m);
        for (int r = 0; r < m; ++r) {
            Cyclotomic w = Cyclotomic::omega(m, -k * r);
            s += u[static_cast<size_t>(r)] * w;
            t += v[static_cast<size_t>(r)] * w;
        }
        s *= rat_of(1, m);
        t *= rat_of(1, m);
        if (!s.is_zero())
            fit.add(false, k, s);
        if (!t.is_zero())
            fit.add(true, k, t);
    }
    return fit;
}

FourierCheck fourier_check(const std::array<int, 6>& lhs_exponents, int sign,
                           const DeltaCombination& stated, int radius)
{
    CycloLaurentWindow g = h_series(lhs_exponents, radius);
    CycloLaurentWindow gbar = g.bar();
    CycloLaurentWindow window = sign >= 0 ? g + gbar : g - gbar;

    FourierCheck out;
    for (long n = -radius; n <= radius; ++n)
        if (window.at(static_cast<int>(n)) != stated.eval(n))
            out.failures.push_back(n);
    out.matches_stated = out.failures.empty();

    out.fitted = fit_delta_combination(window);
    for (long n = -radius; n <= radius; ++n)
        if (window.at(static_cast<int>(n)) != out.fitted.eval(n))
            throw std::domain_error("fourier_check: fitted combination failed verification");

    out.stated_constant = stated.eval(0);
    out.window_constant = window.at(0);
    return out;
}

} // namespace zalg
