#include "zalg/qdiff.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "zalg/qseries.hpp"

namespace zalg {

using nlohmann::json;

SimultaneousSystem system_from_dfa(const Dfa& dfa)
{
    SimultaneousSystem sys;
    std::vector<int> index(static_cast<size_t>(dfa.states()), -1);
    for (int s = 0; s < dfa.states(); ++s) {
        if (dfa.accepting[static_cast<size_t>(s)])
            continue;
        index[static_cast<size_t>(s)] = static_cast<int>(sys.state_labels.size());
        sys.state_labels.push_back(s);
    }
    if (index[static_cast<size_t>(dfa.start)] < 0)
        throw std::invalid_argument("system_from_dfa: start state is accepting");
    sys.start_index = index[static_cast<size_t>(dfa.start)];

    const int n = static_cast<int>(sys.state_labels.size());
    sys.matrix.assign(static_cast<size_t>(n), std::vector<PolyXQ>(static_cast<size_t>(n)));
    for (int r = 0; r < n; ++r) {
        int v = sys.state_labels[static_cast<size_t>(r)];
        for (int a = 0; a < dfa.alphabet; ++a) {
            int u = dfa.delta[static_cast<size_t>(v)][static_cast<size_t>(a)];
            int c = index[static_cast<size_t>(u)];
            if (c < 0)
                continue;
            sys.matrix[static_cast<size_t>(r)][static_cast<size_t>(c)] +=
                PolyXQ::monomial(1, a, a);
        }
    }
    return sys;
}

json ScalarRecurrence::to_json() const
{
    json arr = json::array();
    for (const auto& poly : p)
        arr.push_back(poly.to_json());
    return arr;
}

ScalarRecurrence ScalarRecurrence::from_json(const json& j)
{
    ScalarRecurrence rec;
    for (const auto& poly : j)
        rec.p.push_back(PolyXQ::from_json(poly));
    return rec;
}

namespace {

constexpr std::uint64_t kProbePrime = (1ULL << 61) - 1;
constexpr std::pair<std::uint64_t, std::uint64_t> kProbePoints[] = {
    {3, 5}, {1234567, 7654321}, {2, 9973}};

// Definite independence test: if the rows evaluate to full rank at any probe
// point, they are independent over Q(x, q).
bool maybe_dependent(const std::vector<std::vector<PolyXQ>>& rows)
{
    const size_t r = rows.size();
    const size_t n = rows[0].size();
    if (r > n)
        return true;
    auto mulmod = [](std::uint64_t a, std::uint64_t b) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kProbePrime);
    };
    auto powmod = [&](std::uint64_t base, std::uint64_t e) {
        std::uint64_t acc = 1;
        while (e > 0) {
            if (e & 1)
                acc = mulmod(acc, base);
            base = mulmod(base, base);
            e >>= 1;
        }
        return acc;
    };
    for (auto [x0, q0] : kProbePoints) {
        std::vector<std::vector<std::uint64_t>> m(r, std::vector<std::uint64_t>(n));
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < n; ++j)
                m[i][j] = rows[i][j].eval_mod(x0, q0, kProbePrime);
        size_t rank = 0;
        for (size_t c = 0; c < n && rank < r; ++c) {
            size_t piv = rank;
            while (piv < r && m[piv][c] == 0)
                ++piv;
            if (piv == r)
                continue;
            std::swap(m[piv], m[rank]);
            std::uint64_t inv = powmod(m[rank][c], kProbePrime - 2);
            for (size_t k = c; k < n; ++k)
                m[rank][k] = mulmod(m[rank][k], inv);
            for (size_t i = 0; i < r; ++i) {
                if (i == rank || m[i][c] == 0)
                    continue;
                std::uint64_t f = m[i][c];
                for (size_t k = c; k < n; ++k)
                    m[i][k] = (m[i][k] + kProbePrime - mulmod(f, m[rank][k])) % kProbePrime;
            }
            ++rank;
        }
        if (rank == r)
            return false;
    }
    return true;
}

void row_cleanup(std::vector<PolyXQ>& row)
{
    PolyXQ g;
    for (const auto& e : row) {
        g = poly_gcd(g, e);
        if (g == PolyXQ(1))
            return;
    }
    if (g.is_zero() || g == PolyXQ(1))
        return;
    for (auto& e : row)
        if (!e.is_zero())
            e = e.divide_exact(g);
}

// Fraction-free elimination on [rows | I]; returns the combination of the
// first row that reduces to zero in the left block, or empty if independent.
std::vector<PolyXQ> exact_dependence(const std::vector<std::vector<PolyXQ>>& rows)
{
    const size_t r = rows.size();
    const size_t n = rows[0].size();
    const size_t width = n + r;
    std::vector<std::vector<PolyXQ>> work(r, std::vector<PolyXQ>(width));
    for (size_t i = 0; i < r; ++i) {
        for (size_t j = 0; j < n; ++j)
            work[i][j] = rows[i][j];
        work[i][n + i] = PolyXQ(1);
    }
    std::vector<std::pair<size_t, size_t>> pivots; // (row, col)
    for (size_t i = 0; i < r; ++i) {
        auto& row = work[i];
        for (auto [pr, pc] : pivots) {
            if (row[pc].is_zero())
                continue;
            const auto& piv = work[pr];
            PolyXQ fa = piv[pc], fb = row[pc];
            for (size_t k = 0; k < width; ++k)
                row[k] = fa * row[k] - fb * piv[k];
            row_cleanup(row);
        }
        size_t lead = n;
        for (size_t c = 0; c < n; ++c)
            if (!row[c].is_zero()) {
                lead = c;
                break;
            }
        if (lead == n) {
            std::vector<PolyXQ> combo(r);
            for (size_t j = 0; j < r; ++j)
                combo[j] = row[n + j];
            return combo;
        }
        pivots.emplace_back(i, lead);
    }
    return {};
}

} // namespace

ScalarRecurrence murray_miller(const SimultaneousSystem& sys)
{
    const int n = sys.size();
    if (n == 0)
        throw std::invalid_argument("murray_miller: empty system");

    auto shifted_matrix = [&](int r) {
        std::vector<std::vector<PolyXQ>> m(static_cast<size_t>(n),
                                           std::vector<PolyXQ>(static_cast<size_t>(n)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    sys.matrix[static_cast<size_t>(i)][static_cast<size_t>(j)].shift_x(r);
        return m;
    };

    std::vector<PolyXQ> unit(static_cast<size_t>(n));
    unit[static_cast<size_t>(sys.start_index)] = PolyXQ(1);

    // rows[j] represents y(xq^j) over the frontier F(xq^r)
    std::vector<std::vector<PolyXQ>> rows{unit};
    for (int frontier = 1; frontier <= n + 1; ++frontier) {
        auto m = shifted_matrix(frontier - 1);
        for (auto& row : rows) {
            std::vector<PolyXQ> next(static_cast<size_t>(n));
            for (int j = 0; j < n; ++j) {
                if (row[static_cast<size_t>(j)].is_zero())
                    continue;
                for (int k = 0; k < n; ++k) {
                    const PolyXQ& a = m[static_cast<size_t>(j)][static_cast<size_t>(k)];
                    if (!a.is_zero())
                        next[static_cast<size_t>(k)] += row[static_cast<size_t>(j)] * a;
                }
            }
            row = std::move(next);
        }
        rows.push_back(unit);

        if (!maybe_dependent(rows))
            continue;
        std::vector<PolyXQ> coeffs = exact_dependence(rows);
        if (coeffs.empty())
            continue;

        // certify the combination against the rows before normalizing
        for (int j = 0; j < n; ++j) {
            PolyXQ acc;
            for (size_t t = 0; t < coeffs.size(); ++t)
                acc += coeffs[t] * rows[t][static_cast<size_t>(j)];
            if (!acc.is_zero())
                throw std::logic_error("murray_miller: dependence certificate failed");
        }

        // remove the overall polynomial gcd and integer content
        PolyXQ g;
        for (const auto& c : coeffs)
            g = poly_gcd(g, c);
        if (!g.is_zero() && !(g == PolyXQ(1)))
            for (auto& c : coeffs)
                if (!c.is_zero())
                    c = c.divide_exact(g);

        // shift so the recurrence starts at y(x): x -> x q^(-j0)
        size_t j0 = 0;
        while (j0 < coeffs.size() && coeffs[j0].is_zero())
            ++j0;
        size_t jmax = coeffs.size();
        while (jmax > j0 && coeffs[jmax - 1].is_zero())
            --jmax;
        ScalarRecurrence rec;
        int min_q = 0;
        std::vector<PolyXQ> shifted;
        for (size_t j = j0; j < jmax; ++j) {
            PolyXQ t;
            for (const auto& [k, c] : coeffs[j].terms())
                t.add_term(k.first, k.second - static_cast<int>(j0) * k.first, c);
            min_q = std::min(min_q, t.min_q_degree());
            shifted.push_back(std::move(t));
        }
        for (auto& t : shifted)
            t = t.mul_q_power(-min_q);

        // final cleanup: shared q-power already removed; strip content, fix sign
        Int ic;
        for (auto& t : shifted) {
            Int c = t.content();
            mpz_gcd(ic.get_mpz_t(), ic.get_mpz_t(), c.get_mpz_t());
        }
        if (ic > 1)
            for (auto& t : shifted)
                t = t.divide_content(ic);
        if (!shifted.empty() && !shifted[0].is_zero() &&
            shifted[0].terms().begin()->second < 0)
            for (auto& t : shifted)
                t = -t;
        rec.p = std::move(shifted);
        if (rec.p.empty() || rec.p.front().is_zero() || rec.p.back().is_zero())
            throw std::logic_error("murray_miller: normalization failed");
        return rec;
    }
    throw std::logic_error("murray_miller: elimination degeneracy, no dependence found");
}

AnnihilationReport verify_annihilation(const ScalarRecurrence& rec, const BivariateSeries& f)
{
    std::vector<BivariateSeries> polys;
    for (const auto& poly : rec.p)
        polys.push_back(poly.to_series(f.order()));
    BivariateSeries total = apply_recurrence(polys, f);

    AnnihilationReport rep;
    rep.checked_order = f.order();
    rep.zero = total.is_zero();
    if (!rep.zero) {
        auto it = std::min_element(total.terms().begin(), total.terms().end(),
                                   [](const auto& a, const auto& b) {
                                       return std::make_pair(a.first.second, a.first.first) <
                                              std::make_pair(b.first.second, b.first.first);
                                   });
        rep.first_nonzero_x = it->first.first;
        rep.first_nonzero_q = it->first.second;
        rep.residual = it->second;
    }
    return rep;
}

bool proportional(const ScalarRecurrence& a, const ScalarRecurrence& b)
{
    if (a.order() != b.order())
        return false;
    for (size_t r = 0; r < a.p.size(); ++r)
        if (!(a.p[r] * b.p[0] == b.p[r] * a.p[0]))
            return false;
    return true;
}

namespace {

PolyXQ xq(int i, int j)
{
    return PolyXQ::monomial(1, i, j);
}

std::vector<PolyXQ> reference_table_1()
{
    PolyXQ one(1);
    std::vector<PolyXQ> p(9);
    p[0] = (one - xq(1, 5)) * (one - xq(2, 9));
    p[1] = -((one - xq(1, 5)) *
             (one + xq(1, 1) + xq(1, 2) - xq(1, 3) - xq(1, 4) + xq(2, 6) - xq(2, 8) - xq(2, 9)));
    p[2] = xq(1, 1) * (one - xq(0, 2) - xq(0, 3) + xq(1, 2) + xq(1, 3) - PolyXQ(2) * xq(1, 5) -
                       xq(1, 6) + xq(1, 7) + xq(1, 8) - xq(2, 9) + xq(2, 11) + xq(2, 12) -
                       xq(3, 13));
    p[3] = -(xq(2, 3) * (one - xq(0, 2)) *
             (one + xq(0, 1) - xq(0, 3) + xq(1, 3) + xq(1, 4) + xq(1, 5) - xq(1, 6) - xq(1, 7) -
              xq(2, 10) - xq(2, 11)));
    p[4] = -(xq(2, 5) * (one + xq(0, 1)) * (one + xq(1, 4)) *
             (one - xq(1, 1) + xq(1, 4) - xq(1, 5) - xq(1, 6) + xq(2, 8)));
    p[5] = xq(3, 9) * (one - xq(0, 2)) *
           (one + xq(0, 1) - xq(1, 1) - xq(1, 2) - xq(1, 3) + xq(1, 4) + xq(1, 5) - xq(2, 6) -
            xq(2, 7) + xq(2, 9));
    p[6] = -(xq(3, 10) * (one + xq(1, 4) - xq(1, 6) - xq(1, 7) - xq(2, 5) - xq(2, 6) +
                          PolyXQ(2) * xq(2, 8) + xq(2, 9) - xq(2, 10) - xq(2, 11) - xq(3, 11) +
                          xq(3, 13) + xq(3, 14)));
    p[7] = xq(4, 15) * (one - xq(1, 3)) *
           (one - xq(0, 2) - xq(0, 3) + xq(1, 3) + xq(1, 4) - xq(1, 5) - xq(1, 6) + xq(2, 10));
    p[8] = xq(4, 18) * (one - xq(1, 3)) * (one - xq(2, 7));
    return p;
}

std::vector<PolyXQ> reference_table_2()
{
    PolyXQ one(1);
    std::vector<PolyXQ> p(9);
    p[0] = (one - xq(1, 3)) * (one - xq(1, 5)) * (one - xq(1, 6)) * (one - xq(2, 9));
    p[1] = -((one - xq(1, 5)) * (one - xq(1, 6)) *
             (one + xq(1, 1) - xq(1, 3) - xq(1, 4) - xq(2, 4) + xq(2, 6) - xq(2, 9) - xq(3, 10) +
              xq(3, 11) + xq(3, 12)));
    p[2] = -(xq(1, 3) * (one - xq(1, 5)) * (one - xq(1, 6)) *
             (xq(0, 1) - xq(1, 0) + xq(2, 3) - xq(2, 5) - xq(2, 8) + xq(3, 9)));
    p[3] = -(xq(2, 3) * (one - xq(0, 2)) * (one - xq(1, 6)) *
             (one + xq(0, 2) - xq(1, 5) - xq(2, 6) - PolyXQ(2) * xq(2, 9) - xq(2, 11) +
              xq(3, 11) + xq(3, 13) + xq(3, 14)));
    p[4] = -(xq(2, 6) * (one + xq(0, 1)) * (one + xq(1, 4)) *
             (one - xq(1, 0) + xq(1, 1) - xq(1, 2) - PolyXQ(2) * xq(1, 4) + xq(1, 5) -
              PolyXQ(2) * xq(1, 6) + xq(2, 3) - xq(2, 4) + xq(2, 5) + xq(2, 6) + xq(2, 8) +
              xq(2, 9) + xq(2, 10) + xq(2, 11) - xq(3, 8) + xq(3, 9) - xq(3, 10) -
              PolyXQ(2) * xq(3, 12) + xq(3, 13) - PolyXQ(2) * xq(3, 14) + xq(4, 16)));
    p[5] = xq(3, 8) * (one - xq(0, 2)) * (one - xq(1, 2)) *
           (one + xq(0, 2) + xq(0, 3) - xq(1, 3) - PolyXQ(2) * xq(1, 6) - xq(1, 8) - xq(2, 10) +
            xq(3, 13) + xq(3, 15));
    p[6] = -(xq(3, 11) * (one - xq(1, 2)) * (one - xq(1, 3)) *
             (one + xq(1, 2) - xq(1, 4) - xq(1, 7) - xq(2, 7) + xq(3, 16)));
    p[7] = xq(4, 17) * (one - xq(1, 2)) * (one - xq(1, 3)) *
           (one - xq(0, 1) - xq(0, 2) + xq(1, 2) - xq(1, 4) + xq(1, 7) - xq(2, 7) + xq(2, 9) +
            xq(2, 10) - xq(3, 14));
    p[8] = xq(4, 19) * (one - xq(1, 2)) * (one - xq(1, 3)) * (one - xq(1, 5)) * (one - xq(2, 7));
    return p;
}

std::vector<PolyXQ> reference_table_3()
{
    PolyXQ one(1);
    std::vector<PolyXQ> p(9);
    p[0] = (one - xq(2, 9)) * (one - xq(2, 10));
    p[1] = -((one - xq(2, 10)) * (one + xq(1, 1) + xq(1, 2) - xq(1, 4) - xq(1, 5) - xq(2, 9)));
    p[2] = xq(1, 2) * (one - xq(0, 2) - xq(0, 3) + xq(1, 1) + xq(1, 2) + xq(1, 3) - xq(1, 4) -
                       PolyXQ(2) * xq(1, 5) - xq(1, 6) + xq(1, 8) + xq(2, 8) - xq(2, 10) +
                       xq(2, 12) + xq(2, 13) - xq(3, 12) - xq(3, 13) + xq(3, 15) + xq(3, 16) -
                       xq(4, 18));
    p[3] = -(xq(2, 5) * (one + xq(0, 1)) * (one - xq(0, 3)) *
             (one - xq(0, 1) + xq(1, 1) + xq(1, 3) - xq(1, 5) + xq(2, 8) - xq(2, 9) - xq(3, 13)));
    p[4] = -(xq(2, 7) * (one + xq(0, 1)) *
             (one - xq(1, 2) + xq(1, 3) + xq(1, 5) - xq(1, 6) - xq(2, 3) - xq(2, 5) + xq(2, 6) +
              PolyXQ(2) * xq(2, 8) - xq(2, 9) - xq(2, 10) - xq(2, 11) - xq(3, 10) + xq(3, 11) +
              xq(3, 13) - xq(3, 14) + xq(4, 16)));
    p[5] = xq(3, 11) * (one + xq(0, 1)) * (one - xq(0, 3)) *
           (one - xq(1, 3) + xq(1, 4) - xq(2, 4) - xq(2, 6) + xq(2, 8) - xq(3, 11) + xq(3, 12));
    p[6] = -(xq(3, 14) * (one + xq(1, 2) + xq(1, 3) - xq(1, 5) - xq(1, 6) - xq(2, 6) + xq(2, 8) -
                          xq(2, 10) - xq(2, 11) - xq(3, 7) - xq(3, 8) - xq(3, 9) + xq(3, 10) +
                          PolyXQ(2) * xq(3, 11) + xq(3, 12) - xq(3, 14) - xq(4, 14) + xq(4, 16) +
                          xq(4, 17)));
    p[7] = -(xq(4, 22) * (one - xq(2, 6)) *
             (one - xq(1, 0) - xq(1, 1) + xq(1, 3) + xq(1, 4) - xq(2, 7)));
    p[8] = xq(4, 23) * (one - xq(2, 6)) * (one - xq(2, 7));
    return p;
}

} // namespace

ScalarRecurrence reference_recurrence(int a)
{
    ScalarRecurrence rec;
    switch (a) {
    case 1:
        rec.p = reference_table_1();
        break;
    case 2:
        rec.p = reference_table_2();
        break;
    case 3:
        rec.p = reference_table_3();
        break;
    default:
        throw std::invalid_argument("reference_recurrence: a must be 1..3");
    }
    return rec;
}

} // namespace zalg
