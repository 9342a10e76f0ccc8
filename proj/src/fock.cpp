#include "zalg/fock.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <functional>
#include <fstream>
#include <mutex>
#include <sstream>

#include <nlohmann/json.hpp>

namespace zalg {

using nlohmann::json;

bool HeisenbergStructure::has_residue(long j) const
{
    int r = static_cast<int>(((j % m()) + m()) % m());
    return std::binary_search(exponents.begin(), exponents.end(), r);
}

Cyclotomic HeisenbergStructure::proj_coeff(const IVec& beta, long j) const
{
    int r = static_cast<int>(((j % m()) + m()) % m());
    auto it = basis.find(r);
    if (it == basis.end())
        return Cyclotomic::zero(m());
    CVec pr = data.project(beta, r);
    // the basis vector has its first nonzero coordinate equal to 1
    int k0 = 0;
    while (it->second(k0).is_zero())
        ++k0;
    return pr(k0);
}

Cyclotomic HeisenbergStructure::contraction(long n) const
{
    if (n <= 0)
        throw std::invalid_argument("contraction: n must be positive");
    int r = static_cast<int>(n % m());
    auto it = pairing.find(r);
    if (it == pairing.end())
        return Cyclotomic::zero(m());
    return it->second * rat_of(n, m());
}

HeisenbergStructure heisenberg_structure(const TwistedCoxeterData& data)
{
    HeisenbergStructure h;
    h.data = data;
    h.exponents = data.exponents();
    const int m = data.m;
    const int n = data.cfg.rank();
    for (int i : h.exponents) {
        if (data.eigenspace_dim(i) != 1)
            throw std::logic_error("heisenberg_structure: eigenspace of dimension > 1");
        // pr_i of some simple root spans a_(i); normalize the first nonzero
        // coordinate to 1
        CVec b;
        bool found = false;
        for (int s = 0; s < n && !found; ++s) {
            CVec pr = data.project(simple_root(data.cfg, s), i);
            for (int k = 0; k < n; ++k)
                if (!pr(k).is_zero()) {
                    Cyclotomic inv = pr(k).inverse();
                    for (int t = 0; t < n; ++t)
                        pr(t) *= inv;
                    b = pr;
                    found = true;
                    break;
                }
        }
        if (!found)
            throw std::logic_error("heisenberg_structure: empty eigenspace marked nonzero");
        h.basis.emplace(i, std::move(b));
    }
    for (int i : h.exponents) {
        int j = (m - i) % m;
        const CVec& bi = h.basis.at(i);
        const CVec& bj = h.basis.at(j);
        Cyclotomic pair = Cyclotomic::zero(m);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (data.cfg.cartan(r, c) != 0)
                    pair += bi(r) * bj(c) * Rat(data.cfg.cartan(r, c));
        if (pair.is_zero())
            throw std::logic_error("heisenberg_structure: degenerate pairing");
        h.pairing.emplace(i, pair);
    }
    return h;
}

long FockMonomial::degree() const
{
    long d = 0;
    for (const auto& f : factors)
        for (std::uint16_t c : f)
            d += code_degree(c);
    return d;
}

bool operator<(const FockMonomial& a, const FockMonomial& b)
{
    long da = a.degree(), db = b.degree();
    if (da != db)
        return da < db;
    return a.factors < b.factors;
}

std::string FockMonomial::str() const
{
    std::ostringstream os;
    for (size_t f = 0; f < factors.size(); ++f) {
        if (f)
            os << "(x)";
        if (factors[f].empty()) {
            os << "1";
            continue;
        }
        for (size_t t = 0; t < factors[f].size(); ++t) {
            if (t)
                os << ".";
            os << "B(-" << code_degree(factors[f][t]) << ")";
        }
    }
    return os.str();
}

FockVector FockVector::vacuum(int level, int m)
{
    FockVector v(level);
    FockMonomial mono;
    mono.factors.assign(static_cast<size_t>(level), {});
    v.add_term(mono, Cyclotomic::one(m));
    return v;
}

void FockVector::add_term(const FockMonomial& mono, const Cyclotomic& c)
{
    if (c.is_zero())
        return;
    auto [it, inserted] = terms_.try_emplace(mono, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

FockVector& FockVector::operator+=(const FockVector& o)
{
    for (const auto& [mono, c] : o.terms_)
        add_term(mono, c);
    return *this;
}

FockVector& FockVector::operator-=(const FockVector& o)
{
    for (const auto& [mono, c] : o.terms_)
        add_term(mono, -c);
    return *this;
}

FockVector& FockVector::operator*=(const Cyclotomic& s)
{
    if (s.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [mono, c] : terms_)
        c *= s;
    return *this;
}

long FockVector::degree() const
{
    long d = -1;
    for (const auto& [mono, c] : terms_)
        d = std::max(d, mono.degree());
    return d;
}

bool FockVector::homogeneous() const
{
    long d = -1;
    for (const auto& [mono, c] : terms_) {
        if (d < 0)
            d = mono.degree();
        else if (mono.degree() != d)
            return false;
    }
    return true;
}

json FockVector::to_json() const
{
    json arr = json::array();
    for (const auto& [mono, c] : terms_) {
        json fs = json::array();
        for (const auto& f : mono.factors) {
            json codes = json::array();
            for (std::uint16_t v : f)
                codes.push_back(v);
            fs.push_back(codes);
        }
        arr.push_back({{"mono", fs}, {"c", c.str()}});
    }
    return json{{"level", level_}, {"terms", arr}};
}

FockVector FockVector::from_json(const json& j, int m)
{
    FockVector v(j.at("level").get<int>());
    for (const auto& t : j.at("terms")) {
        FockMonomial mono;
        for (const auto& f : t.at("mono")) {
            std::vector<std::uint16_t> codes;
            for (const auto& c : f)
                codes.push_back(c.get<std::uint16_t>());
            mono.factors.push_back(std::move(codes));
        }
        v.add_term(mono, Cyclotomic::parse(m, t.at("c").get<std::string>()));
    }
    return v;
}

struct FockSpace::BasisTables {
    std::mutex mutex;
    // deques: lazy extension must not invalidate references handed out
    std::deque<std::vector<std::vector<std::uint16_t>>> factor_parts; // by weight
    std::deque<std::vector<FockMonomial>> basis;                      // by degree
    std::deque<std::map<FockMonomial, int>> index;
};

FockSpace::FockSpace(const std::string& type, int level)
    : type_(type), level_(level),
      h_(heisenberg_structure(build_twisted_coxeter(builtin_config(type)))),
      tables_(std::make_shared<BasisTables>())
{
    if (level < 1)
        throw std::invalid_argument("FockSpace: level must be positive");
}

std::vector<int> FockSpace::allowed_degrees(int max_degree) const
{
    std::vector<int> out;
    for (int j = 1; j <= max_degree; ++j)
        if (h_.has_residue(j))
            out.push_back(j);
    return out;
}

const std::vector<FockMonomial>& FockSpace::basis(int degree) const
{
    BasisTables& t = *tables_;
    std::lock_guard<std::mutex> lock(t.mutex);
    if (degree < static_cast<int>(t.basis.size()))
        return t.basis[static_cast<size_t>(degree)];

    // extend the per-factor partition lists
    int have = static_cast<int>(t.factor_parts.size());
    for (int w = have; w <= degree; ++w) {
        std::vector<std::vector<std::uint16_t>> parts;
        if (w == 0) {
            parts.push_back({});
        } else {
            // largest part first, parts restricted to allowed degrees
            std::vector<int> allowed = allowed_degrees(w);
            std::vector<std::uint16_t> cur;
            std::function<void(int, int)> rec = [&](int rest, int cap) {
                if (rest == 0) {
                    parts.push_back(cur);
                    return;
                }
                for (auto it = allowed.rbegin(); it != allowed.rend(); ++it) {
                    int v = *it;
                    if (v > std::min(rest, cap))
                        continue;
                    cur.push_back(FockMonomial::code(v));
                    rec(rest - v, v);
                    cur.pop_back();
                }
            };
            rec(w, w);
        }
        t.factor_parts.push_back(std::move(parts));
    }

    int had = static_cast<int>(t.basis.size());
    for (int d = had; d <= degree; ++d) {
        std::vector<FockMonomial> monos;
        std::vector<std::vector<std::uint16_t>> cur(static_cast<size_t>(level_));
        std::function<void(int, int)> rec = [&](int f, int rest) {
            if (f == level_) {
                if (rest == 0) {
                    FockMonomial mono;
                    mono.factors = cur;
                    monos.push_back(std::move(mono));
                }
                return;
            }
            for (int w = 0; w <= rest; ++w)
                for (const auto& part : t.factor_parts[static_cast<size_t>(w)]) {
                    cur[static_cast<size_t>(f)] = part;
                    rec(f + 1, rest - w);
                }
            cur[static_cast<size_t>(f)].clear();
        };
        rec(0, d);
        std::sort(monos.begin(), monos.end());
        std::map<FockMonomial, int> idx;
        for (size_t i = 0; i < monos.size(); ++i)
            idx.emplace(monos[i], static_cast<int>(i));
        t.basis.push_back(std::move(monos));
        t.index.push_back(std::move(idx));
    }
    return t.basis[static_cast<size_t>(degree)];
}

int FockSpace::index_of(const FockMonomial& mono) const
{
    int d = static_cast<int>(mono.degree());
    basis(d);
    BasisTables& t = *tables_;
    std::lock_guard<std::mutex> lock(t.mutex);
    auto it = t.index[static_cast<size_t>(d)].find(mono);
    if (it == t.index[static_cast<size_t>(d)].end())
        throw std::logic_error("FockSpace::index_of: monomial not in basis");
    return it->second;
}

// ---------------------------------------------------------------------------
// vertex operator modes

struct VertexOps::Tables {
    std::mutex mutex;
    // residue -> projection coefficient of beta onto the class basis
    std::map<int, Cyclotomic> proj;
    // (scale, residue, count) -> [scale * (m / (r n)) c_(beta,n) * g_n]^t / t!
    std::map<std::tuple<Rat, int, int>, Cyclotomic> annih_pow;
    // (scale, weight) -> coefficiented creation multisets
    std::map<std::pair<Rat, int>, std::vector<std::pair<std::vector<std::uint16_t>, Cyclotomic>>>
        creation;
};

VertexOps::VertexOps(std::shared_ptr<const FockSpace> space, const IVec& beta, std::string tag)
    : space_(std::move(space)), beta_(beta), tag_(std::move(tag)),
      tables_(std::make_shared<Tables>())
{
    const HeisenbergStructure& h = space_->heisenberg();
    for (int r = 0; r < space_->m(); ++r)
        tables_->proj.emplace(r, h.proj_coeff(beta_, r));
}

namespace {

Int falling(int n, int k)
{
    Int acc = 1;
    for (int t = 0; t < k; ++t)
        acc *= (n - t);
    return acc;
}

} // namespace

FockVector VertexOps::apply_heisenberg(long j, const FockVector& v) const
{
    if (j == 0)
        throw std::invalid_argument("apply_heisenberg: mode 0 is central");
    const HeisenbergStructure& h = space_->heisenberg();
    const int m = space_->m();
    FockVector out(v.level());
    if (!h.has_residue(j))
        return out;
    if (j < 0) {
        std::uint16_t code = FockMonomial::code(static_cast<int>(-j));
        for (const auto& [mono, c] : v.terms()) {
            for (size_t f = 0; f < mono.factors.size(); ++f) {
                FockMonomial next = mono;
                auto& codes = next.factors[f];
                codes.insert(std::upper_bound(codes.begin(), codes.end(), code,
                                              std::greater<std::uint16_t>()),
                             code);
                out.add_term(next, c);
            }
        }
        return out;
    }
    Cyclotomic g = h.contraction(j);
    std::uint16_t code = FockMonomial::code(static_cast<int>(j));
    for (const auto& [mono, c] : v.terms()) {
        for (size_t f = 0; f < mono.factors.size(); ++f) {
            const auto& codes = mono.factors[f];
            auto lo = std::find(codes.begin(), codes.end(), code);
            if (lo == codes.end())
                continue;
            auto hi = lo;
            while (hi != codes.end() && *hi == code)
                ++hi;
            int mult = static_cast<int>(hi - lo);
            FockMonomial next = mono;
            next.factors[f].erase(next.factors[f].begin() + (lo - codes.begin()));
            out.add_term(next, c * g * Rat(mult));
        }
    }
    return out;
}

FockVector VertexOps::apply_product(const std::vector<Rat>& scales, int r, long i,
                                    const FockVector& v, bool allow_creation,
                                    bool allow_annihilation) const
{
    const int k = v.level();
    const int m = space_->m();
    Tables& tb = *tables_;

    auto annih_pow = [&](const Rat& scale, int n, int t) {
        std::lock_guard<std::mutex> lock(tb.mutex);
        auto key = std::make_tuple(scale, n % m, t);
        auto it = tb.annih_pow.find(key);
        if (it != tb.annih_pow.end())
            return it->second;
        // gamma(n) g_n depends on n only through its residue:
        // scale*(m/(r n)) c_(beta,n) * (n/m) <b, b'> = (scale/r) c * pairing
        const HeisenbergStructure& h = space_->heisenberg();
        int res = n % m;
        Cyclotomic base = tb.proj.at(res) * h.pairing.at(res) * (scale / Rat(r));
        Cyclotomic val = base.pow(t) * Rat(Int(1), factorial(static_cast<unsigned long>(t)));
        tb.annih_pow.emplace(key, val);
        return val;
    };

    auto creation_table = [&](const Rat& scale, int weight)
        -> const std::vector<std::pair<std::vector<std::uint16_t>, Cyclotomic>>& {
        // partitions of `weight` into allowed degrees with their product
        // amplitudes; built once per (scale, weight)
        {
            std::lock_guard<std::mutex> lock(tb.mutex);
            auto it = tb.creation.find({scale, weight});
            if (it != tb.creation.end())
                return it->second;
        }
        std::vector<std::pair<std::vector<std::uint16_t>, Cyclotomic>> entries;
        std::vector<int> allowed = space_->allowed_degrees(weight);
        std::vector<std::uint16_t> cur;
        Cyclotomic one = Cyclotomic::one(m);
        std::function<void(int, int, Cyclotomic)> rec = [&](int rest, int cap, Cyclotomic amp) {
            if (rest == 0) {
                entries.emplace_back(cur, amp);
                return;
            }
            for (auto it2 = allowed.rbegin(); it2 != allowed.rend(); ++it2) {
                int n = *it2;
                if (n > std::min(rest, cap))
                    continue;
                // alpha(n) = -scale (m / (r n)) c_(beta, -n), repeated t times
                // with 1/t!; recursion multiplies one copy at a time, so the
                // factorial is accounted by dividing by the running count
                int already = 0;
                for (auto c : cur)
                    if (FockMonomial::code_degree(c) == n)
                        ++already;
                Cyclotomic alpha =
                    tb.proj.at(((-n) % m + m) % m) * rat_of(-m, r * n) * scale;
                cur.push_back(FockMonomial::code(n));
                rec(rest - n, n, amp * alpha * rat_of(1, already + 1));
                cur.pop_back();
            }
        };
        if (weight == 0)
            entries.emplace_back(cur, one);
        else
            rec(weight, weight, one);
        std::lock_guard<std::mutex> lock(tb.mutex);
        auto [it, inserted] = tb.creation.emplace(std::make_pair(scale, weight), std::move(entries));
        return it->second;
    };

    FockVector out(k);

    // per-factor annihilation option: weight removed, scalar, remaining codes
    struct Option {
        int weight;
        Cyclotomic scalar;
        std::vector<std::uint16_t> rest;
    };

    for (const auto& [mono, coeff] : v.terms()) {
        std::vector<std::vector<Option>> options(static_cast<size_t>(k));
        for (int f = 0; f < k; ++f) {
            const auto& codes = mono.factors[static_cast<size_t>(f)];
            std::vector<Option>& opts = options[static_cast<size_t>(f)];
            if (scales[static_cast<size_t>(f)] == 0 || !allow_annihilation) {
                opts.push_back({0, Cyclotomic::one(m), codes});
                continue;
            }
            // group by degree
            std::vector<std::pair<int, int>> groups;
            for (auto c : codes) {
                int d = FockMonomial::code_degree(c);
                if (!groups.empty() && groups.back().first == d)
                    groups.back().second++;
                else
                    groups.emplace_back(d, 1);
            }
            std::function<void(size_t, int, Cyclotomic, std::vector<std::uint16_t>)> rec =
                [&](size_t gi, int w, Cyclotomic sc, std::vector<std::uint16_t> rest) {
                    if (gi == groups.size()) {
                        opts.push_back({w, sc, rest});
                        return;
                    }
                    auto [deg, mult] = groups[gi];
                    for (int t = 0; t <= mult; ++t) {
                        Cyclotomic sc2 = sc;
                        if (t > 0)
                            sc2 *= annih_pow(scales[static_cast<size_t>(f)], deg, t) *
                                   Rat(falling(mult, t));
                        std::vector<std::uint16_t> rest2 = rest;
                        for (int u = 0; u < mult - t; ++u)
                            rest2.push_back(FockMonomial::code(deg));
                        rec(gi + 1, w + deg * t, sc2, std::move(rest2));
                    }
                };
            rec(0, 0, coeff.is_zero() ? Cyclotomic::zero(m) : Cyclotomic::one(m), {});
        }

        // combine factors; creation split distributes (total_a - i)
        std::function<void(int, int, Cyclotomic, std::vector<const Option*>)> combine =
            [&](int f, int total_a, Cyclotomic sc, std::vector<const Option*> picked) {
                if (f == k) {
                    long c_total = total_a - i;
                    if (c_total < 0)
                        return;
                    if (c_total > 0 && !allow_creation)
                        return;
                    // distribute creation weight over factors
                    std::function<void(int, long, Cyclotomic, FockMonomial&)> create =
                        [&](int g, long rest, Cyclotomic sc2, FockMonomial& partial) {
                            if (g == k) {
                                if (rest == 0)
                                    out.add_term(partial, sc2 * coeff);
                                return;
                            }
                            long cap = (scales[static_cast<size_t>(g)] == 0) ? 0 : rest;
                            for (long cw = 0; cw <= cap; ++cw) {
                                const auto& tablist = creation_table(
                                    scales[static_cast<size_t>(g)], static_cast<int>(cw));
                                for (const auto& [codes, amp] : tablist) {
                                    if (cw > 0 && amp.is_zero())
                                        continue;
                                    // merge sorted-descending code lists
                                    std::vector<std::uint16_t> merged;
                                    const auto& base = picked[static_cast<size_t>(g)]->rest;
                                    merged.resize(base.size() + codes.size());
                                    std::merge(base.begin(), base.end(), codes.begin(),
                                               codes.end(), merged.begin(),
                                               std::greater<std::uint16_t>());
                                    partial.factors[static_cast<size_t>(g)] = std::move(merged);
                                    create(g + 1, rest - cw, cw ? sc2 * amp : sc2, partial);
                                }
                                if (cap == 0)
                                    break;
                            }
                            partial.factors[static_cast<size_t>(g)].clear();
                        };
                    FockMonomial partial;
                    partial.factors.assign(static_cast<size_t>(k), {});
                    create(0, c_total, sc, partial);
                    return;
                }
                for (const Option& o : options[static_cast<size_t>(f)]) {
                    picked.push_back(&o);
                    combine(f + 1, total_a + o.weight, sc * o.scalar, picked);
                    picked.pop_back();
                }
            };
        combine(0, 0, Cyclotomic::one(m), {});
    }
    return out;
}

FockVector VertexOps::apply_X(long i, const FockVector& v) const
{
    const int k = v.level();
    const int m = space_->m();
    FockVector out(k);
    for (int j = 0; j < k; ++j) {
        std::vector<Rat> scales(static_cast<size_t>(k), Rat(0));
        scales[static_cast<size_t>(j)] = Rat(-k);
        out += apply_product(scales, k, i, v, true, true);
    }
    return out * Cyclotomic::constant(m, rat_of(1, m));
}

FockVector VertexOps::apply_Z(long i, const FockVector& v) const
{
    const int k = v.level();
    const int m = space_->m();
    FockVector out(k);
    for (int j = 0; j < k; ++j) {
        std::vector<Rat> scales(static_cast<size_t>(k), Rat(1));
        scales[static_cast<size_t>(j)] = Rat(1 - k);
        out += apply_product(scales, k, i, v, true, true);
    }
    return out * Cyclotomic::constant(m, rat_of(1, m));
}

FockVector VertexOps::apply_E(int sign, int r, int power, long i, const FockVector& v) const
{
    if (sign > 0 && i < 0)
        throw std::invalid_argument("apply_E: E+ has only nonnegative graded pieces");
    if (sign < 0 && i > 0)
        throw std::invalid_argument("apply_E: E- has only nonpositive graded pieces");
    std::vector<Rat> scales(static_cast<size_t>(v.level()), Rat(power));
    return apply_product(scales, r, i, v, sign < 0, sign > 0);
}

FockVector VertexOps::apply_Z_composed(long i, const FockVector& v) const
{
    const int k = v.level();
    FockVector out(k);
    long dv = std::max<long>(v.degree(), 0);
    for (long i3 = 0; i3 <= dv; ++i3) {
        FockVector w = apply_E(+1, k, 1, i3, v);
        if (w.is_zero())
            continue;
        long dw = std::max<long>(w.degree(), 0);
        for (long i2 = i - i3; i2 <= dw - i3 + dv; ++i2) {
            // X lowers by i2; intermediate degree must stay nonnegative
            FockVector u = apply_X(i2, w);
            if (u.is_zero())
                continue;
            long i1 = i - i2 - i3;
            if (i1 > 0)
                continue;
            out += apply_E(-1, k, 1, i1, u);
        }
    }
    return out;
}

FockVector VertexOps::z_monomial(const Partition& lambda, const FockVector& w0) const
{
    FockVector v = w0;
    for (auto it = lambda.rbegin(); it != lambda.rend(); ++it) {
        v = apply_Z(-static_cast<long>(*it), v);
        if (v.is_zero())
            break;
    }
    return v;
}

// ---------------------------------------------------------------------------
// mode matrix cache

ModeMatrixCache::ModeMatrixCache(std::shared_ptr<const FockSpace> space,
                                 std::optional<std::string> dir)
    : space_(std::move(space)), dir_(std::move(dir))
{
    if (!dir_) {
        const char* env = std::getenv("ZALG_CACHE_DIR");
        if (env && *env)
            dir_ = std::string(env);
    }
}

namespace {

std::string cache_file_name(const FockSpace& sp, const std::string& tag, char kind, long mode,
                            int in_degree)
{
    std::ostringstream os;
    os << sp.type() << "_L" << sp.level() << "_" << tag << "_" << kind << "_"
       << (mode < 0 ? "m" : "p") << std::abs(mode) << "_d" << in_degree << ".json";
    return os.str();
}

} // namespace

const ModeMatrix& ModeMatrixCache::get(const VertexOps& ops, char kind, long mode, int in_degree)
{
    auto key = std::make_tuple(ops.tag(), kind, mode, in_degree);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end())
            return it->second;
    }

    ModeMatrix mat;
    mat.in_degree = in_degree;
    mat.mode = mode;

    std::filesystem::path file;
    if (dir_) {
        file = std::filesystem::path(*dir_) /
               cache_file_name(*space_, ops.tag(), kind, mode, in_degree);
        std::ifstream in(file);
        if (in) {
            json j;
            in >> j;
            for (const auto& col : j.at("columns")) {
                std::vector<std::pair<int, Cyclotomic>> entries;
                for (const auto& e : col)
                    entries.emplace_back(e.at(0).get<int>(),
                                         Cyclotomic::parse(space_->m(),
                                                           e.at(1).get<std::string>()));
                mat.columns.push_back(std::move(entries));
            }
            std::lock_guard<std::mutex> lock(mutex_);
            return memo_.emplace(key, std::move(mat)).first->second;
        }
    }

    const auto& monos = space_->basis(in_degree);
    long out_degree = in_degree - mode;
    for (const auto& mono : monos) {
        FockVector unit(space_->level());
        unit.add_term(mono, Cyclotomic::one(space_->m()));
        FockVector img;
        switch (kind) {
        case 'Z':
            img = ops.apply_Z(mode, unit);
            break;
        case 'X':
            img = ops.apply_X(mode, unit);
            break;
        case 'H':
            img = ops.apply_heisenberg(mode, unit);
            break;
        default:
            throw std::invalid_argument("ModeMatrixCache: unknown kind");
        }
        std::vector<std::pair<int, Cyclotomic>> col;
        for (const auto& [om, c] : img.terms()) {
            if (om.degree() != out_degree)
                throw std::logic_error("ModeMatrixCache: grading violated");
            col.emplace_back(space_->index_of(om), c);
        }
        mat.columns.push_back(std::move(col));
    }

    if (dir_) {
        std::filesystem::create_directories(*dir_);
        json cols = json::array();
        for (const auto& col : mat.columns) {
            json c = json::array();
            for (const auto& [row, val] : col)
                c.push_back({row, val.str()});
            cols.push_back(c);
        }
        std::ofstream out(file);
        out << json{{"columns", cols}};
    }

    std::lock_guard<std::mutex> lock(mutex_);
    return memo_.emplace(key, std::move(mat)).first->second;
}

FockVector ModeMatrixCache::apply(const VertexOps& ops, char kind, long mode,
                                  const FockVector& v)
{
    FockVector out(space_->level());
    for (const auto& [mono, c] : v.terms()) {
        int d = static_cast<int>(mono.degree());
        const ModeMatrix& mat = get(ops, kind, mode, d);
        long out_degree = d - mode;
        if (out_degree < 0)
            continue;
        const auto& out_basis = space_->basis(static_cast<int>(out_degree));
        const auto& col = mat.columns[static_cast<size_t>(space_->index_of(mono))];
        for (const auto& [row, val] : col)
            out.add_term(out_basis[static_cast<size_t>(row)], c * val);
    }
    return out;
}

void ModeMatrixCache::clear_memory()
{
    std::lock_guard<std::mutex> lock(mutex_);
    memo_.clear();
}

// ---------------------------------------------------------------------------
// highest weight vectors

std::vector<FockVector> raising_kernel(const FockSpace& space, int degree)
{
    const int dim = space.dim(degree);
    const int m = space.m();
    auto sp = std::make_shared<FockSpace>(space);
    std::vector<VertexOps> reps;
    for (int r : space.twisted().cfg.representatives)
        reps.emplace_back(sp, simple_root(space.twisted().cfg, r),
                          "hw_rep" + std::to_string(r));

    std::vector<CVec> rows;
    auto push_rows = [&](auto&& apply) {
        std::vector<FockVector> images;
        long out_dim = -1;
        for (int cidx = 0; cidx < dim; ++cidx) {
            FockVector unit(space.level());
            unit.add_term(space.basis(degree)[static_cast<size_t>(cidx)], Cyclotomic::one(m));
            images.push_back(apply(unit));
            out_dim = std::max(out_dim, images.back().degree());
        }
        if (out_dim < 0)
            return;
        int od = static_cast<int>(out_dim);
        for (int r = 0; r < space.dim(od); ++r) {
            CVec row(dim);
            for (int cidx = 0; cidx < dim; ++cidx)
                row(cidx) = Cyclotomic::zero(m);
            rows.push_back(row);
        }
        size_t base = rows.size() - static_cast<size_t>(space.dim(od));
        for (int cidx = 0; cidx < dim; ++cidx)
            for (const auto& [mono, c] : images[static_cast<size_t>(cidx)].terms())
                rows[base + static_cast<size_t>(space.index_of(mono))](cidx) = c;
    };

    for (int n : space.allowed_degrees(degree))
        push_rows([&](const FockVector& v) { return reps[0].apply_heisenberg(n, v); });
    for (auto& rep : reps)
        for (int n = 1; n <= degree; ++n)
            push_rows([&](const FockVector& v) { return rep.apply_X(n, v); });

    CMat mat(static_cast<int>(rows.size()), dim);
    for (size_t r = 0; r < rows.size(); ++r)
        for (int c = 0; c < dim; ++c)
            mat(static_cast<int>(r), c) = rows[r](c);
    CMat kernel = rows.empty() ? CMat() : kernel_basis(mat);

    std::vector<FockVector> out;
    if (rows.empty()) {
        // no constraints: the whole component
        for (int cidx = 0; cidx < dim; ++cidx) {
            FockVector v(space.level());
            v.add_term(space.basis(degree)[static_cast<size_t>(cidx)], Cyclotomic::one(m));
            out.push_back(std::move(v));
        }
        return out;
    }
    for (int k = 0; k < kernel.cols(); ++k) {
        FockVector v(space.level());
        for (int cidx = 0; cidx < dim; ++cidx)
            v.add_term(space.basis(degree)[static_cast<size_t>(cidx)], kernel(cidx, k));
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<FockVector> highest_weight_vectors(const FockSpace& space, int a)
{
    const int m = space.m();
    if (space.type() == "D4-3" && space.level() == 3) {
        Cyclotomic c = space.heisenberg().proj_coeff(simple_root(space.twisted().cfg, 0), -1);
        auto mono = [&](std::vector<std::uint16_t> f0, std::vector<std::uint16_t> f1,
                        std::vector<std::uint16_t> f2) {
            FockMonomial mo;
            mo.factors = {std::move(f0), std::move(f1), std::move(f2)};
            return mo;
        };
        std::uint16_t b1 = FockMonomial::code(1);
        FockVector v(3);
        switch (a) {
        case 2:
            return {space.vacuum()};
        case 1:
            v.add_term(mono({b1}, {}, {}), c);
            v.add_term(mono({}, {b1}, {}), -c);
            return {v};
        case 3: {
            Cyclotomic c3 = c.pow(3);
            v.add_term(mono({b1}, {b1, b1}, {}), c3);
            v.add_term(mono({b1, b1}, {b1}, {}), -c3);
            v.add_term(mono({b1, b1}, {}, {b1}), c3);
            v.add_term(mono({b1}, {}, {b1, b1}), -c3);
            v.add_term(mono({}, {b1}, {b1, b1}), c3);
            v.add_term(mono({}, {b1, b1}, {b1}), -c3);
            return {v};
        }
        default:
            throw std::invalid_argument("highest_weight_vectors: a must be 1..3");
        }
    }

    // search ascending degrees for nonzero raising kernels; the a-th nonempty
    // degree class provides the vectors (a = 1 is the vacuum at degree 0)
    int found = 0;
    const int degree_budget = 8;
    for (int d = 0; d <= degree_budget; ++d) {
        std::vector<FockVector> kernel =
            d == 0 ? std::vector<FockVector>{space.vacuum()} : raising_kernel(space, d);
        if (kernel.empty())
            continue;
        ++found;
        if (found == a)
            return kernel;
    }
    throw std::domain_error("highest_weight_vectors: search exhausted the degree budget");
}

} // namespace zalg
