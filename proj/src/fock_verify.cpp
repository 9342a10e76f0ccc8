#include "zalg/fock.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

namespace zalg {

namespace {

constexpr int kCoeffRadius = 40;

// Everything the four relation checks need, derived from the lattice data
// and the auxiliary Fourier expansions; no transcribed constant enters.
struct RelationEngine {
    std::shared_ptr<const FockSpace> sp;
    std::unique_ptr<VertexOps> z_rep[2]; // modes for the two orbit representatives
    CommutationTable comm;               // for (beta1, beta1)
    int m = 0;
    int k = 0;

    std::vector<Cyclotomic> mult[5]; // multiplier series coefficients per relation
    DeltaCombination upper[5];       // fitted  G1^2  G_t +- bar  (t = 2, 3, 6)
    DeltaCombination lower[5];       // fitted  G1^-1 G_t +- bar
    std::vector<std::pair<int, Cyclotomic>> comm_eps; // p in C_-1 -> eps(nu^p b1, b1)
    Cyclotomic eps_pair;

    explicit RelationEngine(std::shared_ptr<const FockSpace> space) : sp(std::move(space))
    {
        m = sp->m();
        k = sp->level();
        const auto& cfg = sp->twisted().cfg;
        if (cfg.representatives.size() < 2)
            throw std::invalid_argument("RelationEngine: needs two root orbits");
        IVec b1 = simple_root(cfg, cfg.representatives[0]);
        IVec b2 = simple_root(cfg, cfg.representatives[1]);
        z_rep[0] = std::make_unique<VertexOps>(sp, b1, "Zb1");
        z_rep[1] = std::make_unique<VertexOps>(sp, b2, "Zb2");
        comm = root_orbit_sum_check(sp->twisted(), b1, b1);
        eps_pair = sp->twisted().epsilon(b1, -b1);
        for (const auto& entry : comm.entries)
            comm_eps.emplace_back(entry.p,
                                  sp->twisted().epsilon(sp->twisted().apply_nu(b1, entry.p), b1));

        // relation 1 multiplier: the twisted binomial product built from the
        // lattice pairing exponents
        std::vector<Rat> exps(static_cast<size_t>(m));
        IVec nb = b1;
        for (int p = 0; p < m; ++p) {
            exps[static_cast<size_t>(p)] = rat_of(bilinear_form(cfg, nb, b1), k);
            nb = sp->twisted().nu * nb;
        }
        CycloLaurentWindow f1 = omega_binomial_product(m, exps, kCoeffRadius);
        for (int p = 0; p <= kCoeffRadius; ++p)
            mult[1].push_back(f1.at(p));

        struct Src {
            int rel;
            int t;
            int sign;
        };
        for (Src src : {Src{2, 2, +1}, Src{3, 3, +1}, Src{4, 6, -1}}) {
            CycloLaurentWindow gt = g_series(src.t, kCoeffRadius);
            for (int p = 0; p <= kCoeffRadius; ++p)
                mult[static_cast<size_t>(src.rel)].push_back(gt.at(p));

            CycloLaurentWindow g1sq = h_series({4, 2, 2, 0, -2, -2}, kCoeffRadius);
            CycloLaurentWindow g1inv = h_series({-2, -1, -1, 0, 1, 1}, kCoeffRadius);
            CycloLaurentWindow up = g1sq * gt;
            CycloLaurentWindow lo = g1inv * gt;
            upper[static_cast<size_t>(src.rel)] =
                fit_delta_combination(src.sign > 0 ? up + up.bar() : up - up.bar());
            lower[static_cast<size_t>(src.rel)] =
                fit_delta_combination(src.sign > 0 ? lo + lo.bar() : lo - lo.bar());
        }
    }

    Cyclotomic omega(long p) const { return Cyclotomic::omega(m, p); }

    const Cyclotomic& coeff(int rel, int p) const
    {
        if (p > kCoeffRadius)
            throw std::logic_error("RelationEngine: multiplier window exhausted");
        return mult[static_cast<size_t>(rel)][static_cast<size_t>(p)];
    }

    int sign_of(int rel) const { return (rel == 1 || rel == 4) ? -1 : +1; }

    bool precondition(int rel, long A, long B) const
    {
        if (rel == 3 || rel == 4)
            return (A + B) % 3 != 0;
        return true;
    }

    struct RhsScalars {
        Cyclotomic z;     // coefficient of Z_(A+B)(beta1)
        Cyclotomic zp;    // coefficient of Z_(A+B)(beta2)
        Cyclotomic delta; // scalar term; nonzero only when A + B = 0
    };

    RhsScalars rhs_scalars(int rel, long A, long B) const
    {
        const long S = A + B;
        RhsScalars out{Cyclotomic::zero(m), Cyclotomic::zero(m), Cyclotomic::zero(m)};
        Cyclotomic minus_one_A = omega((m / 2) * A);

        auto add_root_term = [&](const Cyclotomic& sigma, long u) {
            // sigma delta(w^u z1/z2) picks w^(uA) и lands on the combined root
            long p = ((-u) % m + m) % m;
            const CommutationTable::Entry* hit = nullptr;
            for (const auto& entry : comm.entries)
                if (entry.p == static_cast<int>(p))
                    hit = &entry;
            if (!hit)
                throw std::logic_error("RelationEngine: fitted twist not matched in C_-1");
            Cyclotomic factor = sigma *
                                omega(u * A + static_cast<long>(hit->as_orbit.power) * S) *
                                rat_of(1, m);
            (hit->as_orbit.rep == 0 ? out.z : out.zp) += factor;
        };

        if (rel == 1) {
            for (const auto& [p, eps] : comm_eps) {
                const CommutationTable::Entry* hit = nullptr;
                for (const auto& entry : comm.entries)
                    if (entry.p == p)
                        hit = &entry;
                Cyclotomic factor =
                    eps *
                    omega(-static_cast<long>(p) * A +
                          static_cast<long>(hit->as_orbit.power) * S) *
                    rat_of(1, m);
                (hit->as_orbit.rep == 0 ? out.z : out.zp) += factor;
            }
            if (S == 0)
                for (int p : comm.c_minus2)
                    out.delta += eps_pair * omega(-static_cast<long>(p) * A) * Rat(A) *
                                 rat_of(k, static_cast<long>(m) * m);
            return out;
        }

        for (const auto& term : upper[static_cast<size_t>(rel)].terms) {
            if (term.twist == m / 2) {
                if (S != 0)
                    continue;
                Cyclotomic factor =
                    term.scalar * minus_one_A * rat_of(k, static_cast<long>(m) * m);
                if (term.derivative)
                    factor *= Rat(A);
                out.delta += factor;
            } else {
                if (term.derivative)
                    throw std::logic_error("RelationEngine: unexpected derivative twist");
                add_root_term(term.scalar, term.twist);
            }
        }
        for (const auto& term : lower[static_cast<size_t>(rel)].terms) {
            if (term.derivative)
                throw std::logic_error("RelationEngine: unexpected derivative term");
            if (term.twist == 0) {
                // delta(z1/z2) pairs distinct tensor slots: 2m Z(-b1, z2)
                out.z += term.scalar * omega((m / 2) * S) * rat_of(2, m);
            } else if (term.twist == 2 || term.twist == m - 2) {
                if (S % 3 == 0)
                    throw std::logic_error(
                        "RelationEngine: twist-2 term inside its congruence class");
            } else {
                throw std::logic_error("RelationEngine: unexpected lower twist");
            }
        }
        return out;
    }

    FockVector rhs(int rel, long A, long B, const FockVector& e, const FockVector& zs_e,
                   const FockVector& zps_e) const
    {
        RhsScalars s = rhs_scalars(rel, A, B);
        FockVector out(k);
        if (!s.z.is_zero())
            out += zs_e * s.z;
        if (!s.zp.is_zero())
            out += zps_e * s.zp;
        if (!s.delta.is_zero())
            out += e * s.delta;
        return out;
    }
};

std::shared_ptr<RelationEngine> make_engine(const FockSpace& space)
{
    return std::make_shared<RelationEngine>(std::make_shared<FockSpace>(space));
}

// LHS - RHS of one relation instance on a single basis monomial, through
// precomputed composite images U[j] = Z_(S-j) Z_j e.
FockVector relation_residual(const RelationEngine& eng, int rel, long A, long B,
                             const std::map<long, FockVector>& composites,
                             const FockVector& e, const FockVector& zs_e,
                             const FockVector& zps_e)
{
    const int sign = eng.sign_of(rel);
    FockVector lhs(eng.k);
    for (const auto& [j, u] : composites) {
        Cyclotomic c = Cyclotomic::zero(eng.m);
        if (j >= B)
            c += eng.coeff(rel, static_cast<int>(j - B));
        if (j >= A) {
            const Cyclotomic& c2 = eng.coeff(rel, static_cast<int>(j - A));
            if (sign > 0)
                c += c2;
            else
                c -= c2;
        }
        if (!c.is_zero())
            lhs += u * c;
    }
    return lhs - eng.rhs(rel, A, B, e, zs_e, zps_e);
}

} // namespace

RelationConstants relation_constants()
{
    FockSpace space("D4-3", 3);
    RelationEngine eng(std::make_shared<FockSpace>(space));
    const auto& data = space.twisted();
    IVec b1 = simple_root(data.cfg, 0);

    RelationConstants rc;
    rc.eps4 = data.epsilon(data.apply_nu(b1, 4), b1);
    rc.eps5 = data.epsilon(data.apply_nu(b1, 5), b1);
    rc.eps_pair = data.epsilon(b1, -b1);

    auto pick = [&](const DeltaCombination& d, bool der, int twist) {
        for (const auto& t : d.terms)
            if (t.derivative == der && t.twist == ((twist % 12) + 12) % 12)
                return t.scalar;
        return Cyclotomic::zero(12);
    };
    rc.a_flat = pick(eng.upper[2], false, 4);
    rc.b_flat = pick(eng.upper[2], false, 5);
    rc.c_flat = pick(eng.upper[2], false, 6);
    rc.a_nat = pick(eng.upper[3], false, 5);
    rc.b_nat = pick(eng.upper[3], false, 6);
    rc.d_nat_fit = pick(eng.upper[4], false, -4);
    rc.dd_scalar = pick(eng.upper[4], true, 6);
    rc.g2_delta0 = pick(eng.lower[2], false, 0);
    rc.g3_delta0 = pick(eng.lower[3], false, 0);
    return rc;
}

RelationTermReport verify_relation(const FockSpace& space, int relation, int a_index,
                                   int b_index, int max_deg)
{
    auto eng = make_engine(space);
    if (!eng->precondition(relation, a_index, b_index))
        throw std::invalid_argument("verify_relation: A + B violates the precondition");
    RelationTermReport rep;
    rep.relation = relation;
    rep.a_index = a_index;
    rep.b_index = b_index;
    rep.degree = max_deg;
    rep.pass = true;

    const long S = a_index + b_index;
    for (int d = 0; d <= max_deg && rep.pass; ++d) {
        if (d - S < 0)
            continue;
        for (const auto& mono : eng->sp->basis(d)) {
            FockVector e(space.level());
            e.add_term(mono, Cyclotomic::one(space.m()));
            std::map<long, FockVector> composites;
            for (long j = std::min<long>(a_index, b_index); j <= d; ++j) {
                FockVector w = eng->z_rep[0]->apply_Z(j, e);
                if (w.is_zero())
                    continue;
                composites.emplace(j, eng->z_rep[0]->apply_Z(S - j, w));
            }
            FockVector zs_e = eng->z_rep[0]->apply_Z(S, e);
            FockVector zps_e = eng->z_rep[1]->apply_Z(S, e);
            FockVector res =
                relation_residual(*eng, relation, a_index, b_index, composites, e, zs_e, zps_e);
            if (!res.is_zero()) {
                rep.pass = false;
                rep.witness = mono.str();
                break;
            }
        }
    }
    return rep;
}

RelationWindowReport verify_relations_window(const FockSpace& space, int window, int max_deg,
                                             int threads)
{
    auto eng = make_engine(space);
    if (threads <= 0)
        threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1)
        threads = 1;

    RelationWindowReport report;

    for (int d = 0; d <= max_deg; ++d) {
        const auto& monos = eng->sp->basis(d);
        const int dim = static_cast<int>(monos.size());

        // inner images Z_j e, shared across every S of this degree
        std::vector<std::map<long, FockVector>> inner(static_cast<size_t>(dim));
        {
            std::atomic<int> next(0);
            auto worker = [&] {
                for (int idx; (idx = next.fetch_add(1)) < dim;) {
                    FockVector e(space.level());
                    e.add_term(monos[static_cast<size_t>(idx)], Cyclotomic::one(space.m()));
                    for (long j = -window; j <= d; ++j) {
                        FockVector w = eng->z_rep[0]->apply_Z(j, e);
                        if (!w.is_zero())
                            inner[static_cast<size_t>(idx)].emplace(j, std::move(w));
                    }
                }
            };
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t)
                pool.emplace_back(worker);
            for (auto& t : pool)
                t.join();
        }

        for (long S = -2 * window; S <= std::min<long>(2 * window, d); ++S) {
            ModeMatrixCache outer(eng->sp);
            std::atomic<int> next(0);
            std::vector<std::vector<RelationTermReport>> local(static_cast<size_t>(threads));
            std::atomic<long> checked(0);

            auto worker = [&](int tid) {
                for (int idx; (idx = next.fetch_add(1)) < dim;) {
                    FockVector e(space.level());
                    e.add_term(monos[static_cast<size_t>(idx)], Cyclotomic::one(space.m()));
                    std::map<long, FockVector> composites;
                    for (const auto& [j, w] : inner[static_cast<size_t>(idx)])
                        composites.emplace(j, outer.apply(*eng->z_rep[0], 'Z', S - j, w));
                    FockVector zs_e = outer.apply(*eng->z_rep[0], 'Z', S, e);
                    FockVector zps_e = outer.apply(*eng->z_rep[1], 'Z', S, e);
                    for (int rel = 1; rel <= 4; ++rel) {
                        for (long A = -window; A <= window; ++A) {
                            long B = S - A;
                            if (B < -window || B > window)
                                continue;
                            if (!eng->precondition(rel, A, B))
                                continue;
                            FockVector res = relation_residual(*eng, rel, A, B, composites, e,
                                                               zs_e, zps_e);
                            checked.fetch_add(1);
                            if (!res.is_zero()) {
                                RelationTermReport bad;
                                bad.relation = rel;
                                bad.a_index = static_cast<int>(A);
                                bad.b_index = static_cast<int>(B);
                                bad.degree = d;
                                bad.pass = false;
                                bad.witness = monos[static_cast<size_t>(idx)].str();
                                local[static_cast<size_t>(tid)].push_back(std::move(bad));
                            }
                        }
                    }
                }
            };
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t)
                pool.emplace_back(worker, t);
            for (auto& t : pool)
                t.join();

            report.checked += static_cast<int>(checked.load());
            for (auto& chunk : local)
                for (auto& bad : chunk) {
                    ++report.failed;
                    if (report.failures.size() < 32)
                        report.failures.push_back(std::move(bad));
                }
        }
    }
    return report;
}

StraightenReport straighten_pair(const FockSpace& space, int a_index, int b_index,
                                 int cert_degree, int max_p)
{
    auto eng = make_engine(space);
    const int m = eng->m;
    const long A = a_index, B = b_index;
    RelationConstants rc = relation_constants();
    Cyclotomic ratio = rc.b_flat / rc.a_nat;

    StraightenReport rep;
    rep.a_index = a_index;
    rep.b_index = b_index;
    rep.cert_degree = cert_degree;

    auto om = [&](long p) { return Cyclotomic::omega(m, p); };

    struct Piece {
        int rel;
        long A, B;
        Cyclotomic scalar;
    };
    std::vector<Piece> pieces;

    if (A > B && ((A + 5 - B) % 12 + 12) % 12 != 0) {
        rep.case_name = "generic";
        Cyclotomic x = rc.b_flat * (om(4 * A + 9 * B) + om(9 * A + 4 * B));
        Cyclotomic y = rc.eps5 * (om(4 * A + 9 * B) - om(9 * A + 4 * B));
        rep.normalizer = x - y;
        // Delta = theta1 * x - theta2 * y has Z_(A-p) Z_(B+p) coefficient
        // c1_p x - c2_p y, so d_(A,B) = x - y at p = 0
        pieces = {{1, A, B, x}, {2, A, B, -y}};
    } else if (A > B) {
        rep.case_name = "shifted";
        rep.normalizer = Cyclotomic::constant(m, 2);
        pieces = {{1, A + 1, B - 1, Cyclotomic::constant(m, -1)},
                  {2, A + 1, B - 1, Cyclotomic::one(m)}};
    } else if (A == B) {
        if ((2 * A) % 3 == 0)
            throw std::invalid_argument("straighten_pair: 2A must not be divisible by 3");
        rep.case_name = "equal";
        rep.normalizer = (Cyclotomic::one(m) - ratio) * Rat(2);
        pieces = {{2, A, A, Cyclotomic::one(m)}, {3, A, A, -ratio}};
    } else if (B == A + 1) {
        if ((2 * A + 1) % 3 == 0)
            throw std::invalid_argument("straighten_pair: 2A+1 must not be divisible by 3");
        rep.case_name = "adjacent";
        Cyclotomic c60 = eng->coeff(4, 0);
        Cyclotomic c61 = eng->coeff(4, 1);
        rep.normalizer = c60 * ((eng->coeff(2, 0) + eng->coeff(2, 1)) -
                                ratio * (eng->coeff(3, 0) + eng->coeff(3, 1))) +
                         (Cyclotomic::one(m) - ratio) * (c60 - c61);
        pieces = {{2, A, B, c60},
                  {3, A, B, -(ratio * c60)},
                  {4, A, B, Cyclotomic::one(m) - ratio}};
    } else {
        throw std::invalid_argument("straighten_pair: uncovered index pair");
    }
    if (rep.normalizer.is_zero())
        throw std::logic_error("straighten_pair: vanishing leading constant");

    // accumulate the full expansion over actual index pairs
    std::map<std::pair<long, long>, Cyclotomic> expansion;
    Cyclotomic z_total = Cyclotomic::zero(m), zp_total = Cyclotomic::zero(m),
               delta_total = Cyclotomic::zero(m);
    for (const auto& piece : pieces) {
        for (int p = 0; p <= max_p + 4; ++p) {
            const Cyclotomic& c = eng->coeff(piece.rel, p);
            if (!c.is_zero()) {
                expansion[{piece.A - p, piece.B + p}] += piece.scalar * c;
                Cyclotomic cs = piece.scalar * c;
                expansion[{piece.B - p, piece.A + p}] +=
                    eng->sign_of(piece.rel) > 0 ? cs : -cs;
            }
        }
        auto s = eng->rhs_scalars(piece.rel, piece.A, piece.B);
        z_total += piece.scalar * s.z;
        zp_total += piece.scalar * s.zp;
        delta_total += piece.scalar * s.delta;
    }

    Cyclotomic inv = rep.normalizer.inverse();
    for (int p = 0; p <= max_p; ++p) {
        auto it = expansion.find({A - p, B + p});
        rep.coeffs.push_back(it == expansion.end() ? Cyclotomic::zero(m) : it->second * inv);
        auto is = expansion.find({B - p, A + p});
        bool same_family = A - B + p >= 0; // (B-p, A+p) = (A-t, B+t), t = A-B+p
        rep.swapped.push_back(same_family || is == expansion.end() ? Cyclotomic::zero(m)
                                                                   : is->second * inv);
    }
    rep.z_coeff = -(z_total * inv);
    rep.zp_coeff = -(zp_total * inv);
    rep.delta_scalar = -(delta_total * inv);

    // certification: every piece is a relation instance; verify each on all
    // states up to the certification degree
    rep.certified = true;
    for (const auto& piece : pieces) {
        RelationTermReport check =
            verify_relation(space, piece.rel, static_cast<int>(piece.A),
                            static_cast<int>(piece.B), cert_degree);
        rep.certified = rep.certified && check.pass;
    }
    return rep;
}

std::vector<RankRow> rank_of_family(const FockSpace& space, const ConstraintSet& set,
                                    const FockVector& w0, int max_n,
                                    const std::vector<int>* product_residues,
                                    int product_modulus, int threads)
{
    if (!w0.homogeneous())
        throw std::invalid_argument("rank_of_family: w0 must be homogeneous");
    auto sp = std::make_shared<FockSpace>(space);
    const auto& cfg = space.twisted().cfg;
    VertexOps z1(sp, simple_root(cfg, cfg.representatives[0]), "Zb1");
    ModeMatrixCache cache(sp);
    if (threads <= 0)
        threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1)
        threads = 1;

    BivariateSeries product(0);
    if (product_residues)
        product = congruence_product(product_modulus, *product_residues, max_n);

    const long base_degree = std::max<long>(w0.degree(), 0);
    std::vector<RankRow> rows;
    for (int n = 0; n <= max_n; ++n) {
        std::vector<Partition> members = enumerate_set(set, n);
        const int count = static_cast<int>(members.size());
        std::vector<FockVector> vectors(static_cast<size_t>(count));
        std::atomic<int> next(0);
        auto worker = [&] {
            for (int idx; (idx = next.fetch_add(1)) < count;) {
                FockVector v = w0;
                const Partition& lam = members[static_cast<size_t>(idx)];
                for (auto it = lam.rbegin(); it != lam.rend(); ++it) {
                    v = cache.apply(z1, 'Z', -static_cast<long>(*it), v);
                    if (v.is_zero())
                        break;
                }
                vectors[static_cast<size_t>(idx)] = std::move(v);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();

        const int dim = space.dim(static_cast<int>(base_degree) + n);
        CMat mat(count, dim);
        for (int r = 0; r < count; ++r) {
            for (int c = 0; c < dim; ++c)
                mat(r, c) = Cyclotomic::zero(space.m());
            for (const auto& [mono, coeff] : vectors[static_cast<size_t>(r)].terms())
                mat(r, space.index_of(mono)) = coeff;
        }
        RankRow row;
        row.n = n;
        row.count = count;
        row.rank = count == 0 ? Int(0) : Int(exact_rank(std::move(mat)));
        row.product_coeff =
            product_residues ? Int(product.coeff(0, n).get_num()) : Int(-1);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace zalg
