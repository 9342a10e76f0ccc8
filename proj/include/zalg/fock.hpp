#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <optional>
#include <string>
#include <vector>

#include "zalg/lattice.hpp"
#include "zalg/partitions.hpp"
#include "zalg/qseries.hpp"

namespace zalg {

// Eigenbasis of the twisted map on the complexified lattice, one line per
// residue class, with the pairing values that drive the mode commutators.
struct HeisenbergStructure {
    TwistedCoxeterData data;
    std::vector<int> exponents;       // residues i with nonzero eigenspace, ascending
    std::map<int, CVec> basis;        // residue -> chosen basis vector of a_(i)
    std::map<int, Cyclotomic> pairing; // residue i -> <b_i, b_(-i)>

    int m() const { return data.m; }
    bool has_residue(long j) const;
    // scalar c with pr_j(beta) = c * b_(j mod m); zero when the class is empty
    Cyclotomic proj_coeff(const IVec& beta, long j) const;
    // [H_n, H_(-n)] = contraction(n) * c per level-1 factor, n > 0
    Cyclotomic contraction(long n) const;
};

HeisenbergStructure heisenberg_structure(const TwistedCoxeterData& data);

// A basis monomial of the level-k Fock space: per tensor factor, the packed
// codes (degree * 16 + basis index) of its creation modes, sorted descending.
struct FockMonomial {
    std::vector<std::vector<std::uint16_t>> factors;

    long degree() const;
    static std::uint16_t code(int degree, int index = 0)
    {
        return static_cast<std::uint16_t>(degree * 16 + index);
    }
    static int code_degree(std::uint16_t c) { return c / 16; }

    friend bool operator==(const FockMonomial& a, const FockMonomial& b)
    {
        return a.factors == b.factors;
    }
    friend bool operator<(const FockMonomial& a, const FockMonomial& b);
    std::string str() const;
};

class FockSpace;

// Finite linear combination of basis monomials with cyclotomic coefficients.
class FockVector {
public:
    FockVector() = default;
    explicit FockVector(int level) : level_(level) {}
    static FockVector vacuum(int level, int m);

    int level() const { return level_; }
    const std::map<FockMonomial, Cyclotomic>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const FockMonomial& mono, const Cyclotomic& c);
    FockVector& operator+=(const FockVector& o);
    FockVector& operator-=(const FockVector& o);
    FockVector& operator*=(const Cyclotomic& s);
    friend FockVector operator+(FockVector a, const FockVector& b) { return a += b; }
    friend FockVector operator-(FockVector a, const FockVector& b) { return a -= b; }
    friend FockVector operator*(FockVector a, const Cyclotomic& s) { return a *= s; }
    friend bool operator==(const FockVector& a, const FockVector& b)
    {
        return a.terms_ == b.terms_;
    }

    // -1 for zero; monomials of mixed degree give the max
    long degree() const;
    bool homogeneous() const;

    nlohmann::json to_json() const;
    static FockVector from_json(const nlohmann::json& j, int m);

private:
    int level_ = 0;
    std::map<FockMonomial, Cyclotomic> terms_;
};

// The Fock space of a twisted type at a given level: basis enumeration per
// degree plus the structure constants every operator application needs.
class FockSpace {
public:
    FockSpace(const std::string& type, int level);

    const std::string& type() const { return type_; }
    int level() const { return level_; }
    int m() const { return h_.m(); }
    const HeisenbergStructure& heisenberg() const { return h_; }
    const TwistedCoxeterData& twisted() const { return h_.data; }

    // creation degrees usable per factor (j >= 1 with a_(-j) nonzero), up to
    // the given bound
    std::vector<int> allowed_degrees(int max_degree) const;

    const std::vector<FockMonomial>& basis(int degree) const;
    int dim(int degree) const { return static_cast<int>(basis(degree).size()); }
    int index_of(const FockMonomial& mono) const;

    FockVector vacuum() const { return FockVector::vacuum(level_, m()); }

private:
    std::string type_;
    int level_;
    HeisenbergStructure h_;
    struct BasisTables;
    std::shared_ptr<BasisTables> tables_;
};

// Modes of the vertex operators attached to a root beta, acting on the whole
// tensor space. All applications are exact per graded component.
class VertexOps {
public:
    VertexOps(std::shared_ptr<const FockSpace> space, const IVec& beta, std::string tag);

    const FockSpace& space() const { return *space_; }
    const IVec& beta() const { return beta_; }
    const std::string& tag() const { return tag_; }

    // Heisenberg mode b_(j mod m) x t^j summed over factors; j != 0.
    FockVector apply_heisenberg(long j, const FockVector& v) const;

    // zeta^i piece of X(beta, zeta) on the tensor space.
    FockVector apply_X(long i, const FockVector& v) const;

    // zeta^i piece of Z(beta, zeta) = E-(beta,k) X(beta) E+(beta,k).
    FockVector apply_Z(long i, const FockVector& v) const;

    // zeta^i piece of E^(sign)(beta, zeta, r)^power; sign*i >= 0 required.
    FockVector apply_E(int sign, int r, int power, long i, const FockVector& v) const;

    // Z via three separately graded factors E- X E+ (consistency route).
    FockVector apply_Z_composed(long i, const FockVector& v) const;

    // Z_(-l_1) ... Z_(-l_len) w0, rightmost first.
    FockVector z_monomial(const Partition& lambda, const FockVector& w0) const;

private:
    struct Tables;
    FockVector apply_product(const std::vector<Rat>& scales, int r, long i,
                             const FockVector& v, bool allow_creation,
                             bool allow_annihilation) const;

    std::shared_ptr<const FockSpace> space_;
    IVec beta_;
    std::string tag_;
    std::shared_ptr<Tables> tables_;
};

// Sparse columns of one operator mode restricted to a fixed input degree.
struct ModeMatrix {
    int in_degree = 0;
    long mode = 0;
    std::vector<std::vector<std::pair<int, Cyclotomic>>> columns;
};

// Memoizes mode matrices, optionally mirrored on disk (one JSON file per
// matrix) under the directory named by the ZALG_CACHE_DIR environment
// variable or an explicit override.
class ModeMatrixCache {
public:
    explicit ModeMatrixCache(std::shared_ptr<const FockSpace> space,
                             std::optional<std::string> dir = std::nullopt);

    const ModeMatrix& get(const VertexOps& ops, char kind, long mode, int in_degree);
    FockVector apply(const VertexOps& ops, char kind, long mode, const FockVector& v);
    void clear_memory();

private:
    std::shared_ptr<const FockSpace> space_;
    std::optional<std::string> dir_;
    std::map<std::tuple<std::string, char, long, int>, ModeMatrix> memo_;
    std::mutex mutex_;
};

// Highest-weight vectors of the level-3 modules. For the order-12 type the
// three literal vectors are returned; otherwise the joint kernel of the
// raising modes is searched degree by degree.
std::vector<FockVector> highest_weight_vectors(const FockSpace& space, int a);

// Joint kernel of positive Heisenberg modes and X_n (n = 1..degree, over the
// orbit representatives) inside the given degree component.
std::vector<FockVector> raising_kernel(const FockSpace& space, int degree);

struct RelationTermReport {
    int relation = 0;
    int a_index = 0;
    int b_index = 0;
    int degree = 0;
    bool pass = false;
    std::string witness; // offending basis monomial, when failing
};

struct RelationWindowReport {
    int checked = 0;
    int failed = 0;
    std::vector<RelationTermReport> failures;
    bool all_pass() const { return failed == 0; }
};

// Verifies one relation instance on every basis monomial of degree <= max_deg.
RelationTermReport verify_relation(const FockSpace& space, int relation, int a_index,
                                   int b_index, int max_deg);

// Verifies all four relations for |A|, |B| <= window under their
// preconditions on every monomial of degree <= max_deg.
RelationWindowReport verify_relations_window(const FockSpace& space, int window, int max_deg,
                                             int threads = 0);

// The constants feeding the relation right-hand sides, fitted from the
// auxiliary Fourier expansions and the lattice cocycle.
struct RelationConstants {
    Cyclotomic eps4, eps5, eps_pair; // eps(nu^4 b1, b1), eps(nu^5 b1, b1), eps(b1, -b1)
    Cyclotomic a_flat, b_flat, c_flat;
    Cyclotomic a_nat, b_nat;
    Cyclotomic d_nat_fit;       // delta(w^-4) coefficient of the fourth window
    Cyclotomic dd_scalar;       // (D delta)(-x) coefficient of the fourth window
    Cyclotomic g2_delta0;       // delta(x) coefficient of G1^-1 G2 + bar
    Cyclotomic g3_delta0;       // delta(x) coefficient of G1^-1 G3 + bar
};

RelationConstants relation_constants();

struct StraightenReport {
    int a_index = 0;
    int b_index = 0;
    std::string case_name;
    Cyclotomic normalizer;            // leading constant before normalization
    std::vector<Cyclotomic> coeffs;   // c_p of Z_(A-p) Z_(B+p), c_0 = 1
    std::vector<Cyclotomic> swapped;  // coefficients of Z_(B-p) Z_(A+p)
    Cyclotomic z_coeff;               // coefficient of Z_(A+B)
    Cyclotomic zp_coeff;              // coefficient of Z'_(A+B)
    Cyclotomic delta_scalar;          // scalar term (only when A + B = 0)
    bool certified = false;           // vanishes on all states of degree <= cert_degree
    int cert_degree = 0;
};

StraightenReport straighten_pair(const FockSpace& space, int a_index, int b_index,
                                 int cert_degree = 4, int max_p = 16);

struct RankRow {
    int n = 0;
    Int count;
    Int rank;
    Int product_coeff; // -1 when no congruence product is attached
};

std::vector<RankRow> rank_of_family(const FockSpace& space, const ConstraintSet& set,
                                    const FockVector& w0, int max_n,
                                    const std::vector<int>* product_residues = nullptr,
                                    int product_modulus = 0, int threads = 0);

} // namespace zalg
