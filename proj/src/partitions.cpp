#include "zalg/partitions.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

namespace zalg {

using nlohmann::json;

int weight(const Partition& p)
{
    int w = 0;
    for (int x : p)
        w += x;
    return w;
}

int multiplicity(const Partition& p, int value)
{
    int c = 0;
    for (int x : p)
        if (x == value)
            ++c;
    return c;
}

bool is_valid_partition(const Partition& p)
{
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 1)
            return false;
        if (i && p[i] > p[i - 1])
            return false;
    }
    return true;
}

std::string partition_str(const Partition& p)
{
    if (p.empty())
        return "-";
    std::ostringstream os;
    for (size_t i = 0; i < p.size(); ++i)
        os << (i ? "," : "") << p[i];
    return os.str();
}

Partition parse_partition(const std::string& s)
{
    Partition p;
    if (s.empty() || s == "-")
        return p;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ','))
        p.push_back(std::stoi(tok));
    if (!is_valid_partition(p))
        throw std::invalid_argument("parse_partition: not weakly decreasing positive parts");
    return p;
}

namespace {

void for_each_partition(int n, int max_part, const std::function<void(const Partition&)>& fn)
{
    Partition cur;
    // recursive descent, largest part first, descending lexicographic order
    std::function<void(int, int)> rec = [&](int rest, int cap) {
        if (rest == 0) {
            fn(cur);
            return;
        }
        for (int v = std::min(rest, cap); v >= 1; --v) {
            cur.push_back(v);
            rec(rest - v, v);
            cur.pop_back();
        }
    };
    if (n < 0)
        return;
    rec(n, max_part < 0 ? n : max_part);
}

} // namespace

std::vector<Partition> enumerate_partitions(int n, int max_part)
{
    std::vector<Partition> out;
    for_each_partition(n, max_part, [&](const Partition& p) { out.push_back(p); });
    return out;
}

bool begins_with(const Partition& lambda, const Partition& d)
{
    if (lambda.size() < d.size())
        return false;
    return std::equal(d.begin(), d.end(), lambda.end() - static_cast<long>(d.size()));
}

bool matches(const Partition& lambda, const Partition& d)
{
    if (d.empty() || lambda.size() < d.size())
        return false;
    for (size_t i = 0; i + d.size() <= lambda.size(); ++i)
        if (std::equal(d.begin(), d.end(), lambda.begin() + static_cast<long>(i)))
            return true;
    return false;
}

bool matches_shifted(const Partition& lambda, const Partition& d)
{
    if (d.empty() || lambda.size() < d.size())
        return false;
    for (size_t i = 0; i + d.size() <= lambda.size(); ++i) {
        int k = lambda[i] - d[0];
        if (k < 0)
            continue;
        bool ok = true;
        for (size_t t = 1; t < d.size(); ++t)
            if (lambda[i + t] != d[t] + k) {
                ok = false;
                break;
            }
        if (ok)
            return true;
    }
    return false;
}

const std::vector<Partition>& l_family_forbidden()
{
    static const std::vector<Partition> f = {
        {1, 1, 1},       {2, 1, 1},       {2, 2, 1},    {3, 2, 1},       {3, 3, 1},
        {5, 3, 3},       {4, 4, 1, 1},    {5, 4, 1, 1}, {5, 4, 2, 1},    {5, 5, 2, 1},
        {6, 5, 3, 1, 1}, {6, 6, 3, 1, 1}, {7, 6, 4, 2, 1}};
    return f;
}

const std::vector<Partition>& l_family_prefixes(int a)
{
    static const std::vector<Partition> i1 = {{1}, {5, 4, 2, 2}, {9, 8, 6, 4, 2, 2}};
    static const std::vector<Partition> i2 = {{1, 1}, {2, 2}, {4, 3, 1}};
    static const std::vector<Partition> i3 = {{1, 1},    {2, 1},    {2, 2},
                                              {3, 2},    {3, 3},    {4, 3, 1},
                                              {4, 4, 1}, {5, 4, 2}, {6, 5, 3, 1}};
    switch (a) {
    case 1:
        return i1;
    case 2:
        return i2;
    case 3:
        return i3;
    default:
        throw std::invalid_argument("l_family_prefixes: a must be 1..3");
    }
}

AvoidanceRule l_family_rule(int a)
{
    return AvoidanceRule{3, l_family_forbidden(), l_family_prefixes(a)};
}

bool difference_two_at_distance_two(const Partition& p)
{
    for (size_t j = 0; j + 2 < p.size(); ++j)
        if (p[j] - p[j + 2] < 3)
            return false;
    return true;
}

bool adjacent_sum_condition(const Partition& p, int k)
{
    for (size_t j = 0; j + 1 < p.size(); ++j)
        if (p[j] - p[j + 1] <= 1 && (p[j] + p[j + 1] - k) % 3 != 0)
            return false;
    return true;
}

namespace {

bool rule_satisfies(const AvoidanceRule& rule, const Partition& p)
{
    for (size_t j = 0; j < p.size(); ++j) {
        size_t run = 1;
        while (j + 1 < p.size() && p[j + 1] == p[j]) {
            ++j;
            ++run;
        }
        if (static_cast<int>(run) >= rule.m)
            return false;
    }
    for (const auto& c : rule.prefixes)
        if (begins_with(p, c))
            return false;
    for (const auto& f : rule.forbidden)
        if (matches_shifted(p, f))
            return false;
    return true;
}

} // namespace

ConstraintSet ConstraintSet::preset(const std::string& name)
{
    ConstraintSet s;
    s.name_ = name;
    if (name == "RR1" || name == "RR2") {
        AvoidanceRule rule;
        rule.m = 2;
        rule.forbidden = {{2, 1}};
        if (name == "RR2")
            rule.prefixes = {{1}};
        s.rule_ = rule;
        s.pred_ = [rule](const Partition& p) { return rule_satisfies(rule, p); };
    } else if (name == "KR1") {
        s.pred_ = [](const Partition& p) {
            return difference_two_at_distance_two(p) && adjacent_sum_condition(p, 0);
        };
    } else if (name == "KR2") {
        s.pred_ = [](const Partition& p) {
            return difference_two_at_distance_two(p) && adjacent_sum_condition(p, 0) &&
                   multiplicity(p, 1) == 0;
        };
    } else if (name == "KR3") {
        s.pred_ = [](const Partition& p) {
            return difference_two_at_distance_two(p) && adjacent_sum_condition(p, 0) &&
                   multiplicity(p, 1) == 0 && multiplicity(p, 2) == 0;
        };
    } else if (name == "KR4") {
        s.pred_ = [](const Partition& p) {
            return difference_two_at_distance_two(p) && adjacent_sum_condition(p, 2) &&
                   multiplicity(p, 1) == 0;
        };
    } else if (name == "KR5") {
        s.pred_ = [](const Partition& p) {
            return difference_two_at_distance_two(p) && adjacent_sum_condition(p, 1) &&
                   multiplicity(p, 2) <= 1;
        };
    } else if (name == "L1" || name == "L2" || name == "L3") {
        int a = name[1] - '0';
        AvoidanceRule rule = l_family_rule(a);
        s.rule_ = rule;
        s.pred_ = [rule](const Partition& p) { return rule_satisfies(rule, p); };
    } else {
        throw std::invalid_argument("ConstraintSet::preset: unknown preset '" + name + "'");
    }
    return s;
}

ConstraintSet ConstraintSet::congruence(int modulus, std::vector<int> residues)
{
    ConstraintSet s;
    std::ostringstream os;
    os << "T" << modulus << ":";
    for (size_t i = 0; i < residues.size(); ++i)
        os << (i ? "," : "") << residues[i];
    s.name_ = os.str();
    std::vector<bool> allowed(static_cast<size_t>(modulus), false);
    for (int r : residues) {
        if (r < 1 || r > modulus)
            throw std::invalid_argument("congruence: residue out of range");
        allowed[static_cast<size_t>(r % modulus)] = true;
    }
    s.congruence_ = {modulus, residues};
    s.pred_ = [modulus, allowed](const Partition& p) {
        for (int x : p)
            if (!allowed[static_cast<size_t>(x % modulus)])
                return false;
        return true;
    };
    return s;
}

ConstraintSet ConstraintSet::custom(AvoidanceRule rule, std::string name)
{
    for (const auto& f : rule.forbidden)
        if (f.empty())
            throw std::invalid_argument("ConstraintSet::custom: empty partition in forbidden set");
    for (const auto& c : rule.prefixes)
        if (c.empty())
            throw std::invalid_argument("ConstraintSet::custom: empty partition in prefix set");
    if (rule.m < 2)
        throw std::invalid_argument("ConstraintSet::custom: multiplicity bound must be >= 2");
    ConstraintSet s;
    s.name_ = std::move(name);
    s.rule_ = rule;
    s.pred_ = [rule](const Partition& p) { return rule_satisfies(rule, p); };
    return s;
}

ConstraintSet ConstraintSet::parse(const std::string& spec)
{
    if (spec.empty())
        throw std::invalid_argument("ConstraintSet::parse: empty spec");
    if (spec[0] == 'T') {
        auto colon = spec.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("ConstraintSet::parse: T-set needs 'Tmod:residues'");
        int modulus = std::stoi(spec.substr(1, colon - 1));
        std::vector<int> residues;
        std::istringstream in(spec.substr(colon + 1));
        std::string tok;
        while (std::getline(in, tok, ','))
            residues.push_back(std::stoi(tok));
        return congruence(modulus, residues);
    }
    return preset(spec);
}

bool ConstraintSet::satisfies(const Partition& p) const
{
    if (!is_valid_partition(p))
        throw std::invalid_argument("ConstraintSet::satisfies: invalid partition");
    return pred_(p);
}

std::optional<std::pair<int, std::vector<int>>> ConstraintSet::congruence_data() const
{
    return congruence_;
}

std::vector<Partition> enumerate_set(const ConstraintSet& set, int n)
{
    std::vector<Partition> out;
    for_each_partition(n, -1, [&](const Partition& p) {
        if (set.satisfies(p))
            out.push_back(p);
    });
    return out;
}

std::vector<Int> count_series(const ConstraintSet& set, int max_n)
{
    std::vector<Int> counts(static_cast<size_t>(max_n) + 1, Int(0));
    for (int n = 0; n <= max_n; ++n)
        for_each_partition(n, -1, [&](const Partition& p) {
            if (set.satisfies(p))
                ++counts[static_cast<size_t>(n)];
        });
    return counts;
}

std::vector<Partition> saturate(const Partition& lambda, int m)
{
    if (lambda.empty())
        throw std::invalid_argument("saturate: empty partition");
    if (m < 2)
        throw std::invalid_argument("saturate: bound must be >= 2");
    const int b = lambda.front();
    const int a = lambda.back();

    // forced middle multiplicities; empty result if the pattern itself
    // violates the bound
    std::vector<int> lo(static_cast<size_t>(b) + 1, 0), hi(static_cast<size_t>(b) + 1, 0);
    for (int v = 1; v <= b; ++v) {
        int mv = multiplicity(lambda, v);
        if (mv >= m)
            return {};
        if (v == b || (v == a && a != b)) {
            lo[static_cast<size_t>(v)] = mv;
            hi[static_cast<size_t>(v)] = m - 1;
        } else if (v > a && v < b) {
            lo[static_cast<size_t>(v)] = mv;
            hi[static_cast<size_t>(v)] = mv;
        } else { // v < a: free
            lo[static_cast<size_t>(v)] = 0;
            hi[static_cast<size_t>(v)] = m - 1;
        }
    }
    lo[static_cast<size_t>(b)] = std::max(lo[static_cast<size_t>(b)], 1);

    std::vector<Partition> out;
    std::vector<int> mult(static_cast<size_t>(b) + 1, 0);
    std::function<void(int)> rec = [&](int v) {
        if (v == 0) {
            Partition mu;
            for (int val = b; val >= 1; --val)
                for (int t = 0; t < mult[static_cast<size_t>(val)]; ++t)
                    mu.push_back(val);
            out.push_back(std::move(mu));
            return;
        }
        for (int c = lo[static_cast<size_t>(v)]; c <= hi[static_cast<size_t>(v)]; ++c) {
            mult[static_cast<size_t>(v)] = c;
            rec(v - 1);
        }
        mult[static_cast<size_t>(v)] = 0;
    };
    rec(b);
    std::sort(out.begin(), out.end(), [](const Partition& x, const Partition& y) { return x > y; });
    return out;
}

std::vector<int> encode_multiplicity_word(const Partition& p, int m)
{
    if (p.empty())
        return {};
    std::vector<int> word(static_cast<size_t>(p.front()), 0);
    for (int x : p)
        word[static_cast<size_t>(x - 1)]++;
    for (int c : word)
        if (c >= m)
            throw std::domain_error("encode_multiplicity_word: multiplicity bound violated");
    return word;
}

Partition decode_multiplicity_word(const std::vector<int>& word)
{
    Partition p;
    for (int v = static_cast<int>(word.size()); v >= 1; --v)
        for (int t = 0; t < word[static_cast<size_t>(v - 1)]; ++t)
            p.push_back(v);
    return p;
}

PtReport pt_equiv(const ConstraintSet& a, const ConstraintSet& b, int max_n)
{
    PtReport rep;
    rep.max_n = max_n;
    rep.lhs_counts = count_series(a, max_n);
    rep.rhs_counts = count_series(b, max_n);
    rep.agree = true;
    for (int n = 0; n <= max_n; ++n)
        if (rep.lhs_counts[static_cast<size_t>(n)] != rep.rhs_counts[static_cast<size_t>(n)]) {
            rep.agree = false;
            rep.first_disagreement = n;
            break;
        }
    return rep;
}

std::vector<Int> count_series_dp(const ConstraintSet& set, int max_n)
{
    const std::string& name = set.name();
    if (auto cong = set.congruence_data()) {
        // one value at a time, unbounded multiplicity
        std::vector<bool> allowed(static_cast<size_t>(cong->first), false);
        for (int r : cong->second)
            allowed[static_cast<size_t>(r % cong->first)] = true;
        std::vector<Int> c(static_cast<size_t>(max_n) + 1, Int(0));
        c[0] = 1;
        for (int v = 1; v <= max_n; ++v) {
            if (!allowed[static_cast<size_t>(v % cong->first)])
                continue;
            for (int j = v; j <= max_n; ++j)
                c[static_cast<size_t>(j)] += c[static_cast<size_t>(j - v)];
        }
        return c;
    }
    if (name.rfind("KR", 0) != 0)
        throw std::invalid_argument(
            "count_series_dp: only congruence sets and KR presets here; rule-backed sets "
            "count through their automaton");
    int variant = name[2] - '0';
    int k = variant == 4 ? 2 : variant == 5 ? 1 : 0;

    // state: multiplicities at the previous two values; dp over value v
    // adding letter c = m_v with the running weight
    auto idx = [](int prev2, int prev1) { return prev2 * 3 + prev1; };
    std::vector<std::vector<Int>> dp(9, std::vector<Int>(static_cast<size_t>(max_n) + 1, Int(0)));
    dp[static_cast<size_t>(idx(0, 0))][0] = 1;
    for (int v = 1; v <= max_n; ++v) {
        std::vector<std::vector<Int>> next(9,
                                           std::vector<Int>(static_cast<size_t>(max_n) + 1, Int(0)));
        for (int p2 = 0; p2 < 3; ++p2)
            for (int p1 = 0; p1 < 3; ++p1) {
                const auto& row = dp[static_cast<size_t>(idx(p2, p1))];
                for (int c = 0; c < 3; ++c) {
                    if (p2 + p1 + c > 2)
                        continue; // three parts within a span-2 window
                    if (c == 2 && (2 * v - k) % 3 != 0)
                        continue; // equal adjacent parts, wrong sum class
                    if (c >= 1 && p1 >= 1 && (2 * v - 1 - k) % 3 != 0)
                        continue; // parts v, v-1 adjacent, wrong sum class
                    if (v == 1 && c > 0 && (variant == 2 || variant == 3 || variant == 4))
                        continue; // no parts equal to 1
                    if (v == 2 && c > 0 && variant == 3)
                        continue; // no parts equal to 2
                    if (v == 2 && c > 1 && variant == 5)
                        continue; // at most one part equal to 2
                    long add = static_cast<long>(c) * v;
                    for (int w = 0; w + add <= max_n; ++w) {
                        const Int& src = row[static_cast<size_t>(w)];
                        if (src != 0)
                            next[static_cast<size_t>(idx(p1, c))]
                                [static_cast<size_t>(w + add)] += src;
                    }
                }
            }
        dp = std::move(next);
    }
    std::vector<Int> counts(static_cast<size_t>(max_n) + 1, Int(0));
    for (int s = 0; s < 9; ++s)
        for (int w = 0; w <= max_n; ++w)
            counts[static_cast<size_t>(w)] += dp[static_cast<size_t>(s)][static_cast<size_t>(w)];
    return counts;
}

AvoidanceRule parse_constraint_text(const std::string& text)
{
    AvoidanceRule rule;
    std::istringstream in(text);
    std::string line;
    auto trim = [](std::string s) {
        size_t a = s.find_first_not_of(" \t\r");
        size_t b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    auto read_partition_list = [](const json& j) {
        std::vector<Partition> out;
        for (const auto& arr : j) {
            Partition p;
            for (const auto& v : arr)
                p.push_back(v.get<int>());
            if (!is_valid_partition(p))
                throw std::invalid_argument("constraint file: invalid partition entry");
            out.push_back(std::move(p));
        }
        return out;
    };
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos)
            continue;
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "m")
            rule.m = std::stoi(val);
        else if (key == "forbidden")
            rule.forbidden = read_partition_list(json::parse(val));
        else if (key == "prefixes")
            rule.prefixes = read_partition_list(json::parse(val));
        else
            throw std::invalid_argument("constraint file: unknown key '" + key + "'");
    }
    if (rule.m < 2)
        throw std::invalid_argument("constraint file: m must be >= 2");
    return rule;
}

std::string constraint_to_text(const AvoidanceRule& rule)
{
    std::ostringstream os;
    os << "m = " << rule.m << "\n";
    auto emit = [&](const char* key, const std::vector<Partition>& list) {
        os << key << " = [";
        for (size_t i = 0; i < list.size(); ++i) {
            os << (i ? "," : "") << "[";
            for (size_t j = 0; j < list[i].size(); ++j)
                os << (j ? "," : "") << list[i][j];
            os << "]";
        }
        os << "]\n";
    };
    emit("forbidden", rule.forbidden);
    emit("prefixes", rule.prefixes);
    return os.str();
}

} // namespace zalg
