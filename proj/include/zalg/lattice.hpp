#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "zalg/eigen_support.hpp"

namespace zalg {

// A simply-laced root lattice together with a diagram automorphism and a set
// of orbit representatives; the raw material for the twisted Coxeter map.
struct RootSystemConfig {
    std::string label;
    IMat cartan;
    std::vector<int> sigma;           // 0-based images: node i maps to sigma[i]
    std::vector<int> representatives; // 0-based, one per sigma-orbit

    int rank() const { return static_cast<int>(cartan.rows()); }
    int twist_order() const;

    void validate() const;
};

// Built-in configurations, keyed "A1-1", "A2-2", "A4-2", "D4-3".
RootSystemConfig builtin_config(const std::string& name);
std::vector<std::string> builtin_config_names();

// Key-value text schema, e.g.
//   label = D4-3
//   cartan = [[2,-1,0,0],[-1,2,-1,-1],[0,-1,2,0],[0,-1,0,2]]
//   sigma = [3,2,4,1]
//   representatives = [1,2]
// with 1-based indices in sigma/representatives and '#' comments.
RootSystemConfig parse_config_text(const std::string& text);
std::string config_to_text(const RootSystemConfig& cfg);

std::int64_t bilinear_form(const RootSystemConfig& cfg, const IVec& x, const IVec& y);
bool is_root(const RootSystemConfig& cfg, const IVec& v);
IVec simple_root(const RootSystemConfig& cfg, int i); // 0-based

struct RootOrbitRef {
    int rep;   // index into representatives
    int power; // the vector is nu^power(beta_rep)
};

class TwistedCoxeterData {
public:
    RootSystemConfig cfg;
    IMat nu;
    int m = 0;               // multiplicative order of nu
    bool has_minus_id = false; // m is even and nu^(m/2) == -id
    std::vector<std::vector<IVec>> orbits; // orbits[rep][j] = nu^j(beta_rep), 0 <= j < m

    Cyclotomic omega(long p = 1) const { return Cyclotomic::omega(m, p); }

    IVec apply_nu(const IVec& v, long p = 1) const;

    // eps(beta, beta') = prod_{p=1}^{m-1} (1 - w^-p)^<nu^p beta, beta'>, cached.
    Cyclotomic epsilon(const IVec& beta, const IVec& beta2) const;

    // pr_i(beta) = (1/m) sum_p w^(-ip) nu^p(beta); depends only on i mod m.
    CVec project(const IVec& beta, long i) const;

    // dim of the w^i eigenspace of nu on C (x) L.
    int eigenspace_dim(long i) const;

    // Residues i in [0, m) with nonzero eigenspace.
    std::vector<int> exponents() const;

    std::optional<RootOrbitRef> find_in_orbits(const IVec& v) const;

private:
    struct EpsCache {
        std::map<std::vector<std::int64_t>, Cyclotomic> values;
        std::mutex mutex;
    };
    mutable std::shared_ptr<EpsCache> eps_cache_ = std::make_shared<EpsCache>();
};

TwistedCoxeterData build_twisted_coxeter(const RootSystemConfig& cfg);

// The C_l sets of the generalized commutation theorem plus, for each p with
// <nu^p beta, beta'> = -1, the combined root nu^p(beta) + beta' located in the
// simple-root orbit tables.
struct CommutationTable {
    std::vector<int> c_minus1;
    std::vector<int> c_minus2;
    struct Entry {
        int p;
        IVec combined;
        RootOrbitRef as_orbit;
    };
    std::vector<Entry> entries;
};

CommutationTable root_orbit_sum_check(const TwistedCoxeterData& data, const IVec& beta,
                                      const IVec& beta2);

} // namespace zalg
