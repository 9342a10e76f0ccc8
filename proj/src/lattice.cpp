#include "zalg/lattice.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

namespace zalg {

namespace {

using nlohmann::json;

IMat reflection_matrix(const RootSystemConfig& cfg, int i)
{
    const int n = cfg.rank();
    IMat s = IMat::Identity(n, n);
    // sigma_i(x) = x - <x, beta_i> beta_i; column j picks up -cartan(j, i) e_i.
    for (int j = 0; j < n; ++j)
        s(i, j) -= cfg.cartan(j, i);
    return s;
}

IMat permutation_matrix(const RootSystemConfig& cfg)
{
    const int n = cfg.rank();
    IMat p = IMat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        p(cfg.sigma[static_cast<size_t>(i)], i) = 1;
    return p;
}

} // namespace

int RootSystemConfig::twist_order() const
{
    std::vector<int> cur(sigma.size());
    for (size_t i = 0; i < sigma.size(); ++i)
        cur[i] = static_cast<int>(i);
    for (int r = 1;; ++r) {
        bool id = true;
        for (size_t i = 0; i < sigma.size(); ++i) {
            cur[i] = sigma[static_cast<size_t>(cur[i])];
            if (cur[i] != static_cast<int>(i))
                id = false;
        }
        if (id)
            return r;
        if (r > static_cast<int>(sigma.size()) + 1)
            throw std::logic_error("twist_order: sigma is not a permutation");
    }
}

void RootSystemConfig::validate() const
{
    const int n = rank();
    if (cartan.cols() != n)
        throw std::invalid_argument("config: Cartan matrix must be square");
    for (int i = 0; i < n; ++i) {
        if (cartan(i, i) != 2)
            throw std::invalid_argument("config: Cartan diagonal must be 2");
        for (int j = 0; j < n; ++j)
            if (cartan(i, j) != cartan(j, i))
                throw std::invalid_argument("config: Cartan matrix must be symmetric");
    }
    if (static_cast<int>(sigma.size()) != n)
        throw std::invalid_argument("config: sigma must have one image per node");
    std::vector<bool> seen(static_cast<size_t>(n), false);
    for (int v : sigma) {
        if (v < 0 || v >= n || seen[static_cast<size_t>(v)])
            throw std::invalid_argument("config: sigma is not a permutation");
        seen[static_cast<size_t>(v)] = true;
    }
    // sigma must preserve the form
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (cartan(sigma[static_cast<size_t>(i)], sigma[static_cast<size_t>(j)]) !=
                cartan(i, j))
                throw std::invalid_argument("config: sigma does not preserve the Cartan matrix");

    // representatives must pick exactly one node per sigma-orbit
    std::vector<int> orbit_id(static_cast<size_t>(n), -1);
    int orbits = 0;
    for (int i = 0; i < n; ++i) {
        if (orbit_id[static_cast<size_t>(i)] >= 0)
            continue;
        int j = i;
        while (orbit_id[static_cast<size_t>(j)] < 0) {
            orbit_id[static_cast<size_t>(j)] = orbits;
            j = sigma[static_cast<size_t>(j)];
        }
        ++orbits;
    }
    std::vector<int> hit(static_cast<size_t>(orbits), 0);
    for (int r : representatives) {
        if (r < 0 || r >= n)
            throw std::invalid_argument("config: representative out of range");
        hit[static_cast<size_t>(orbit_id[static_cast<size_t>(r)])]++;
    }
    for (int h : hit)
        if (h != 1)
            throw std::invalid_argument(
                "config: representatives are not a transversal of the sigma-orbits");
}

RootSystemConfig builtin_config(const std::string& name)
{
    RootSystemConfig cfg;
    cfg.label = name;
    if (name == "A1-1") {
        cfg.cartan = IMat::Constant(1, 1, 2);
        cfg.sigma = {0};
        cfg.representatives = {0};
    } else if (name == "A2-2") {
        cfg.cartan = IMat(2, 2);
        cfg.cartan << 2, -1, -1, 2;
        cfg.sigma = {1, 0};
        cfg.representatives = {0};
    } else if (name == "A4-2") {
        cfg.cartan = IMat(4, 4);
        cfg.cartan << 2, -1, 0, 0, -1, 2, -1, 0, 0, -1, 2, -1, 0, 0, -1, 2;
        cfg.sigma = {3, 2, 1, 0};
        cfg.representatives = {0, 1};
    } else if (name == "D4-3") {
        // node 1 is the branch node (0-based index 1)
        cfg.cartan = IMat(4, 4);
        cfg.cartan << 2, -1, 0, 0, -1, 2, -1, -1, 0, -1, 2, 0, 0, -1, 0, 2;
        cfg.sigma = {2, 1, 3, 0}; // 1 -> 3 -> 4 -> 1, 2 fixed (1-based)
        cfg.representatives = {0, 1};
    } else {
        throw std::invalid_argument("builtin_config: unknown type '" + name + "'");
    }
    cfg.validate();
    return cfg;
}

std::vector<std::string> builtin_config_names()
{
    return {"A1-1", "A2-2", "A4-2", "D4-3"};
}

RootSystemConfig parse_config_text(const std::string& text)
{
    RootSystemConfig cfg;
    std::istringstream in(text);
    std::string line;
    bool have_cartan = false, have_sigma = false, have_reps = false;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos)
            continue;
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "label") {
            cfg.label = val;
        } else if (key == "cartan") {
            json j = json::parse(val);
            int n = static_cast<int>(j.size());
            cfg.cartan = IMat(n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    cfg.cartan(r, c) = j.at(static_cast<size_t>(r)).at(static_cast<size_t>(c)).get<std::int64_t>();
            have_cartan = true;
        } else if (key == "sigma") {
            json j = json::parse(val);
            cfg.sigma.clear();
            for (const auto& v : j)
                cfg.sigma.push_back(v.get<int>() - 1);
            have_sigma = true;
        } else if (key == "representatives") {
            json j = json::parse(val);
            cfg.representatives.clear();
            for (const auto& v : j)
                cfg.representatives.push_back(v.get<int>() - 1);
            have_reps = true;
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    if (!have_cartan || !have_sigma || !have_reps)
        throw std::invalid_argument("config: cartan, sigma and representatives are required");
    cfg.validate();
    return cfg;
}

std::string config_to_text(const RootSystemConfig& cfg)
{
    std::ostringstream os;
    os << "label = " << cfg.label << "\n";
    os << "cartan = [";
    for (int r = 0; r < cfg.rank(); ++r) {
        os << (r ? "," : "") << "[";
        for (int c = 0; c < cfg.rank(); ++c)
            os << (c ? "," : "") << cfg.cartan(r, c);
        os << "]";
    }
    os << "]\n";
    os << "sigma = [";
    for (size_t i = 0; i < cfg.sigma.size(); ++i)
        os << (i ? "," : "") << cfg.sigma[i] + 1;
    os << "]\n";
    os << "representatives = [";
    for (size_t i = 0; i < cfg.representatives.size(); ++i)
        os << (i ? "," : "") << cfg.representatives[i] + 1;
    os << "]\n";
    return os.str();
}

std::int64_t bilinear_form(const RootSystemConfig& cfg, const IVec& x, const IVec& y)
{
    if (x.size() != cfg.rank() || y.size() != cfg.rank())
        throw std::invalid_argument("bilinear_form: dimension mismatch");
    return x.dot(cfg.cartan * y);
}

bool is_root(const RootSystemConfig& cfg, const IVec& v)
{
    return bilinear_form(cfg, v, v) == 2;
}

IVec simple_root(const RootSystemConfig& cfg, int i)
{
    IVec v = IVec::Zero(cfg.rank());
    v(i) = 1;
    return v;
}

IVec TwistedCoxeterData::apply_nu(const IVec& v, long p) const
{
    long pm = p % m;
    if (pm < 0)
        pm += m;
    IVec out = v;
    for (long k = 0; k < pm; ++k)
        out = nu * out;
    return out;
}

Cyclotomic TwistedCoxeterData::epsilon(const IVec& beta, const IVec& beta2) const
{
    std::vector<std::int64_t> key;
    key.reserve(static_cast<size_t>(2 * beta.size()));
    for (int i = 0; i < beta.size(); ++i)
        key.push_back(beta(i));
    for (int i = 0; i < beta2.size(); ++i)
        key.push_back(beta2(i));
    {
        std::lock_guard<std::mutex> lock(eps_cache_->mutex);
        auto it = eps_cache_->values.find(key);
        if (it != eps_cache_->values.end())
            return it->second;
    }

    Cyclotomic acc = Cyclotomic::one(m);
    IVec nb = beta;
    for (int p = 1; p < m; ++p) {
        nb = nu * nb;
        std::int64_t e = bilinear_form(cfg, nb, beta2);
        if (e == 0)
            continue;
        Cyclotomic base = Cyclotomic::one(m) - omega(-p);
        if (base.is_zero())
            throw std::domain_error("epsilon: vanishing base with nonzero exponent");
        acc *= base.pow(e);
    }
    std::lock_guard<std::mutex> lock(eps_cache_->mutex);
    eps_cache_->values.emplace(std::move(key), acc);
    return acc;
}

CVec TwistedCoxeterData::project(const IVec& beta, long i) const
{
    const int n = cfg.rank();
    CVec out(n);
    for (int k = 0; k < n; ++k)
        out(k) = Cyclotomic::zero(m);
    IVec nb = beta;
    for (int p = 0; p < m; ++p) {
        Cyclotomic w = omega(-i * p);
        for (int k = 0; k < n; ++k)
            if (nb(k) != 0)
                out(k) += w * Rat(nb(k));
        nb = nu * nb;
    }
    Rat inv_m = rat_of(1, m);
    for (int k = 0; k < n; ++k)
        out(k) *= inv_m;
    return out;
}

int TwistedCoxeterData::eigenspace_dim(long i) const
{
    const int n = cfg.rank();
    CMat mat(n, n);
    Cyclotomic wi = omega(i);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            mat(r, c) = Cyclotomic::constant(m, Rat(nu(r, c)));
            if (r == c)
                mat(r, c) -= wi;
        }
    return n - exact_rank(mat);
}

std::vector<int> TwistedCoxeterData::exponents() const
{
    std::vector<int> out;
    for (int i = 0; i < m; ++i)
        if (eigenspace_dim(i) > 0)
            out.push_back(i);
    return out;
}

std::optional<RootOrbitRef> TwistedCoxeterData::find_in_orbits(const IVec& v) const
{
    for (size_t r = 0; r < orbits.size(); ++r)
        for (int j = 0; j < m; ++j)
            if (orbits[r][static_cast<size_t>(j)] == v)
                return RootOrbitRef{static_cast<int>(r), j};
    return std::nullopt;
}

TwistedCoxeterData build_twisted_coxeter(const RootSystemConfig& cfg)
{
    cfg.validate();
    TwistedCoxeterData data;
    data.cfg = cfg;

    const int n = cfg.rank();
    IMat nu = permutation_matrix(cfg);
    std::vector<int> reps = cfg.representatives;
    std::sort(reps.begin(), reps.end());
    for (auto it = reps.rbegin(); it != reps.rend(); ++it)
        nu = reflection_matrix(cfg, *it) * nu;
    data.nu = nu;

    IMat acc = nu;
    int order = 1;
    const IMat id = IMat::Identity(n, n);
    while (acc != id) {
        acc = nu * acc;
        ++order;
        if (order > 1000)
            throw std::logic_error("build_twisted_coxeter: order of nu did not close");
    }
    data.m = order;
    if (order % 2 == 0) {
        IMat half = id;
        for (int k = 0; k < order / 2; ++k)
            half = nu * half;
        data.has_minus_id = (half == -id);
    }

    for (int r : cfg.representatives) {
        std::vector<IVec> orbit;
        IVec v = simple_root(cfg, r);
        for (int j = 0; j < order; ++j) {
            orbit.push_back(v);
            v = nu * v;
        }
        data.orbits.push_back(std::move(orbit));
    }
    return data;
}

CommutationTable root_orbit_sum_check(const TwistedCoxeterData& data, const IVec& beta,
                                      const IVec& beta2)
{
    if (!is_root(data.cfg, beta) || !is_root(data.cfg, beta2))
        throw std::invalid_argument("root_orbit_sum_check: arguments must be roots");
    CommutationTable table;
    IVec nb = beta;
    for (int p = 0; p < data.m; ++p) {
        std::int64_t e = bilinear_form(data.cfg, nb, beta2);
        if (e == -1) {
            table.c_minus1.push_back(p);
            IVec combined = nb + beta2;
            auto ref = data.find_in_orbits(combined);
            if (!ref)
                throw std::logic_error(
                    "root_orbit_sum_check: combined vector is not in the root orbit tables");
            table.entries.push_back({p, combined, *ref});
        } else if (e == -2) {
            table.c_minus2.push_back(p);
        }
        nb = data.nu * nb;
    }
    return table;
}

} // namespace zalg
