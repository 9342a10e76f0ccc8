#include "zalg/automata.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace zalg {

using nlohmann::json;

int Nfa::add_state()
{
    delta.emplace_back(static_cast<size_t>(alphabet));
    accepting.push_back(false);
    return states() - 1;
}

void Nfa::add_edge(int from, int letter, int to)
{
    delta[static_cast<size_t>(from)][static_cast<size_t>(letter)].push_back(to);
}

bool Nfa::accepts(const std::vector<int>& word) const
{
    std::set<int> cur(starts.begin(), starts.end());
    for (int s : cur)
        if (accepting[static_cast<size_t>(s)])
            return true;
    for (int a : word) {
        std::set<int> next;
        for (int s : cur)
            for (int t : delta[static_cast<size_t>(s)][static_cast<size_t>(a)])
                next.insert(t);
        cur = std::move(next);
        for (int s : cur)
            if (accepting[static_cast<size_t>(s)])
                return true;
    }
    return false;
}

bool Dfa::accepts(const std::vector<int>& word) const
{
    int s = start;
    if (accepting[static_cast<size_t>(s)])
        return true;
    for (int a : word) {
        s = delta[static_cast<size_t>(s)][static_cast<size_t>(a)];
        if (accepting[static_cast<size_t>(s)])
            return true;
    }
    return false;
}

json Dfa::to_json() const
{
    json j;
    j["states"] = states();
    j["alphabet"] = alphabet;
    j["start"] = start;
    json d = json::array();
    for (const auto& row : delta)
        d.push_back(row);
    j["delta"] = d;
    json acc = json::array();
    for (int s = 0; s < states(); ++s)
        if (accepting[static_cast<size_t>(s)])
            acc.push_back(s);
    j["accepting"] = acc;
    return j;
}

Dfa Dfa::from_json(const json& j)
{
    Dfa d;
    d.alphabet = j.at("alphabet").get<int>();
    d.start = j.at("start").get<int>();
    int n = j.at("states").get<int>();
    d.delta.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(d.alphabet)));
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < d.alphabet; ++a)
            d.delta[static_cast<size_t>(s)][static_cast<size_t>(a)] =
                j.at("delta").at(static_cast<size_t>(s)).at(static_cast<size_t>(a)).get<int>();
    d.accepting.assign(static_cast<size_t>(n), false);
    for (const auto& s : j.at("accepting"))
        d.accepting[s.get<size_t>()] = true;
    return d;
}

std::string Dfa::to_dot() const
{
    std::ostringstream os;
    os << "digraph dfa {\n  rankdir=LR;\n  node [shape=circle];\n";
    for (int s = 0; s < states(); ++s)
        if (accepting[static_cast<size_t>(s)])
            os << "  q" << s << " [shape=doublecircle];\n";
    os << "  __start [shape=point];\n  __start -> q" << start << ";\n";
    for (int s = 0; s < states(); ++s)
        for (int a = 0; a < alphabet; ++a)
            os << "  q" << s << " -> q" << delta[static_cast<size_t>(s)][static_cast<size_t>(a)]
               << " [label=\"" << a << "\"];\n";
    os << "}\n";
    return os.str();
}

std::string Dfa::transition_table_csv() const
{
    std::ostringstream os;
    os << "letter";
    for (int s = 0; s < states(); ++s)
        os << ",q" << s;
    os << "\n";
    for (int a = 0; a < alphabet; ++a) {
        os << a;
        for (int s = 0; s < states(); ++s)
            os << ",q" << delta[static_cast<size_t>(s)][static_cast<size_t>(a)];
        os << "\n";
    }
    return os.str();
}

Nfa build_avoidance_nfa(const AvoidanceRule& rule)
{
    for (const auto& f : rule.forbidden)
        if (f.empty())
            throw std::invalid_argument("build_avoidance_nfa: empty pattern");
    for (const auto& c : rule.prefixes)
        if (c.empty())
            throw std::invalid_argument("build_avoidance_nfa: empty prefix");

    std::set<std::vector<int>> fwords, iwords;
    for (const auto& f : rule.forbidden)
        for (const auto& mu : saturate(f, rule.m))
            fwords.insert(encode_multiplicity_word(mu, rule.m));
    for (const auto& c : rule.prefixes)
        for (const auto& mu : saturate(c, rule.m))
            iwords.insert(encode_multiplicity_word(mu, rule.m));
    for (const auto& w : fwords)
        for (int a : w)
            if (a < 0 || a >= rule.m)
                throw std::logic_error("build_avoidance_nfa: letter outside alphabet");

    Nfa nfa;
    nfa.alphabet = rule.m;
    int loop = nfa.add_state();  // K* before a forbidden window
    int entry = nfa.add_state(); // true start; prefixes anchor here
    int sink = nfa.add_state();  // accepting K* tail
    nfa.starts = {entry, loop};
    nfa.accepting[static_cast<size_t>(sink)] = true;
    for (int a = 0; a < rule.m; ++a) {
        nfa.add_edge(loop, a, loop);
        nfa.add_edge(sink, a, sink);
    }

    auto add_word = [&](int root, const std::vector<int>& w) {
        int cur = root;
        for (size_t t = 0; t < w.size(); ++t) {
            int next = t + 1 == w.size() ? sink : nfa.add_state();
            nfa.add_edge(cur, w[t], next);
            cur = next;
        }
    };
    for (const auto& w : fwords)
        add_word(loop, w);
    for (const auto& w : iwords)
        add_word(entry, w);
    return nfa;
}

Dfa determinize(const Nfa& nfa)
{
    std::map<std::set<int>, int> ids;
    std::vector<std::set<int>> subsets;
    auto intern = [&](const std::set<int>& s) {
        auto [it, inserted] = ids.emplace(s, static_cast<int>(subsets.size()));
        if (inserted)
            subsets.push_back(s);
        return it->second;
    };

    Dfa dfa;
    dfa.alphabet = nfa.alphabet;
    std::set<int> init(nfa.starts.begin(), nfa.starts.end());
    dfa.start = intern(init);
    for (size_t i = 0; i < subsets.size(); ++i) {
        std::set<int> cur = subsets[i];
        dfa.delta.emplace_back(static_cast<size_t>(dfa.alphabet));
        bool acc = false;
        for (int s : cur)
            acc = acc || nfa.accepting[static_cast<size_t>(s)];
        dfa.accepting.push_back(acc);
        for (int a = 0; a < dfa.alphabet; ++a) {
            std::set<int> next;
            for (int s : cur)
                for (int t : nfa.delta[static_cast<size_t>(s)][static_cast<size_t>(a)])
                    next.insert(t);
            dfa.delta[i][static_cast<size_t>(a)] = intern(next);
        }
    }
    return dfa;
}

namespace {

Dfa drop_unreachable(const Dfa& dfa)
{
    std::vector<int> remap(static_cast<size_t>(dfa.states()), -1);
    std::vector<int> order;
    std::queue<int> bfs;
    bfs.push(dfa.start);
    remap[static_cast<size_t>(dfa.start)] = 0;
    order.push_back(dfa.start);
    while (!bfs.empty()) {
        int s = bfs.front();
        bfs.pop();
        for (int a = 0; a < dfa.alphabet; ++a) {
            int t = dfa.delta[static_cast<size_t>(s)][static_cast<size_t>(a)];
            if (remap[static_cast<size_t>(t)] < 0) {
                remap[static_cast<size_t>(t)] = static_cast<int>(order.size());
                order.push_back(t);
                bfs.push(t);
            }
        }
    }
    Dfa out;
    out.alphabet = dfa.alphabet;
    out.start = 0;
    out.delta.assign(order.size(), std::vector<int>(static_cast<size_t>(dfa.alphabet)));
    out.accepting.assign(order.size(), false);
    for (size_t i = 0; i < order.size(); ++i) {
        out.accepting[i] = dfa.accepting[static_cast<size_t>(order[i])];
        for (int a = 0; a < dfa.alphabet; ++a)
            out.delta[i][static_cast<size_t>(a)] = remap[static_cast<size_t>(
                dfa.delta[static_cast<size_t>(order[i])][static_cast<size_t>(a)])];
    }
    return out;
}

} // namespace

Dfa minimize(const Dfa& input)
{
    Dfa dfa = drop_unreachable(input);
    const int n = dfa.states();
    const int k = dfa.alphabet;

    // Hopcroft partition refinement
    std::vector<int> block(static_cast<size_t>(n));
    std::vector<std::vector<int>> blocks(2);
    for (int s = 0; s < n; ++s) {
        int b = dfa.accepting[static_cast<size_t>(s)] ? 1 : 0;
        block[static_cast<size_t>(s)] = b;
        blocks[static_cast<size_t>(b)].push_back(s);
    }
    if (blocks[1].empty() || blocks[0].empty()) {
        // single block: one state suffices
        Dfa out;
        out.alphabet = k;
        out.start = 0;
        out.delta.assign(1, std::vector<int>(static_cast<size_t>(k), 0));
        out.accepting.assign(1, !blocks[1].empty());
        return out;
    }

    // reverse edges
    std::vector<std::vector<std::vector<int>>> rev(
        static_cast<size_t>(n), std::vector<std::vector<int>>(static_cast<size_t>(k)));
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < k; ++a)
            rev[static_cast<size_t>(dfa.delta[static_cast<size_t>(s)][static_cast<size_t>(a)])]
               [static_cast<size_t>(a)]
                   .push_back(s);

    std::set<std::pair<int, int>> work; // (block, letter)
    int smaller = blocks[0].size() < blocks[1].size() ? 0 : 1;
    for (int a = 0; a < k; ++a)
        work.insert({smaller, a});

    while (!work.empty()) {
        auto [bi, a] = *work.begin();
        work.erase(work.begin());
        // states with an a-transition into block bi
        std::vector<int> x;
        for (int s : blocks[static_cast<size_t>(bi)])
            for (int p : rev[static_cast<size_t>(s)][static_cast<size_t>(a)])
                x.push_back(p);
        std::map<int, std::vector<int>> touched;
        for (int s : x)
            touched[block[static_cast<size_t>(s)]].push_back(s);
        for (auto& [bid, hits] : touched) {
            auto& whole = blocks[static_cast<size_t>(bid)];
            if (hits.size() == whole.size())
                continue;
            std::sort(hits.begin(), hits.end());
            hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
            if (hits.size() == whole.size())
                continue;
            int nb = static_cast<int>(blocks.size());
            std::vector<int> stay;
            std::set<int> hitset(hits.begin(), hits.end());
            for (int s : whole)
                if (!hitset.count(s))
                    stay.push_back(s);
            whole = std::move(stay);
            blocks.push_back(hits);
            for (int s : blocks[static_cast<size_t>(nb)])
                block[static_cast<size_t>(s)] = nb;
            for (int la = 0; la < k; ++la) {
                if (work.count({bid, la}))
                    work.insert({nb, la});
                else if (blocks[static_cast<size_t>(nb)].size() <=
                         blocks[static_cast<size_t>(bid)].size())
                    work.insert({nb, la});
                else
                    work.insert({bid, la});
            }
        }
    }

    std::map<int, int> renumber;
    for (int s = 0; s < n; ++s)
        renumber.emplace(block[static_cast<size_t>(s)], static_cast<int>(renumber.size()));
    Dfa out;
    out.alphabet = k;
    out.start = renumber.at(block[static_cast<size_t>(dfa.start)]);
    out.delta.assign(renumber.size(), std::vector<int>(static_cast<size_t>(k)));
    out.accepting.assign(renumber.size(), false);
    for (int s = 0; s < n; ++s) {
        int b = renumber.at(block[static_cast<size_t>(s)]);
        out.accepting[static_cast<size_t>(b)] = dfa.accepting[static_cast<size_t>(s)];
        for (int a = 0; a < k; ++a)
            out.delta[static_cast<size_t>(b)][static_cast<size_t>(a)] = renumber.at(
                block[static_cast<size_t>(dfa.delta[static_cast<size_t>(s)][static_cast<size_t>(a)])]);
    }
    return drop_unreachable(out);
}

Dfa determinize_minimize(const Nfa& nfa)
{
    return minimize(determinize(nfa));
}

bool is_minimal(const Dfa& dfa)
{
    return minimize(dfa).states() == dfa.states();
}

Dfa canonical_form(const Dfa& dfa)
{
    return drop_unreachable(dfa);
}

bool dfa_isomorphic(const Dfa& a, const Dfa& b)
{
    if (!is_minimal(a) || !is_minimal(b))
        throw std::invalid_argument("dfa_isomorphic: inputs must be minimal");
    Dfa ca = canonical_form(a), cb = canonical_form(b);
    return ca.alphabet == cb.alphabet && ca.start == cb.start && ca.delta == cb.delta &&
           ca.accepting == cb.accepting;
}

namespace {

// states whose all-zero tail never reaches an accepting state
std::vector<bool> zero_tail_safe(const Dfa& dfa)
{
    std::vector<bool> safe(static_cast<size_t>(dfa.states()), false);
    for (int s = 0; s < dfa.states(); ++s) {
        std::set<int> seen;
        int cur = s;
        bool ok = true;
        while (!seen.count(cur)) {
            if (dfa.accepting[static_cast<size_t>(cur)]) {
                ok = false;
                break;
            }
            seen.insert(cur);
            cur = dfa.delta[static_cast<size_t>(cur)][0];
        }
        safe[static_cast<size_t>(s)] = ok;
    }
    return safe;
}

} // namespace

BivariateSeries weighted_count(const Dfa& dfa, int max_n)
{
    std::vector<bool> safe = zero_tail_safe(dfa);
    std::vector<BivariateSeries> g(static_cast<size_t>(dfa.states()), BivariateSeries(max_n));
    for (int s = 0; s < dfa.states(); ++s)
        if (safe[static_cast<size_t>(s)])
            g[static_cast<size_t>(s)] = BivariateSeries::one(max_n);

    for (int j = max_n; j >= 1; --j) {
        std::vector<BivariateSeries> next(static_cast<size_t>(dfa.states()),
                                          BivariateSeries(max_n));
        for (int s = 0; s < dfa.states(); ++s) {
            if (dfa.accepting[static_cast<size_t>(s)])
                continue;
            BivariateSeries acc(max_n);
            for (int a = 0; a < dfa.alphabet; ++a) {
                long w = static_cast<long>(j) * a;
                if (w > max_n)
                    break;
                int t = dfa.delta[static_cast<size_t>(s)][static_cast<size_t>(a)];
                if (dfa.accepting[static_cast<size_t>(t)])
                    continue;
                if (a == 0) {
                    acc += g[static_cast<size_t>(t)];
                } else {
                    acc += BivariateSeries::monomial(1, a, static_cast<int>(w), max_n) *
                           g[static_cast<size_t>(t)];
                }
            }
            next[static_cast<size_t>(s)] = std::move(acc);
        }
        g = std::move(next);
    }
    return g[static_cast<size_t>(dfa.start)];
}

std::vector<Int> weighted_count_q(const Dfa& dfa, int max_n)
{
    std::vector<bool> safe = zero_tail_safe(dfa);
    std::vector<std::vector<Int>> g(static_cast<size_t>(dfa.states()),
                                    std::vector<Int>(static_cast<size_t>(max_n) + 1, Int(0)));
    for (int s = 0; s < dfa.states(); ++s)
        if (safe[static_cast<size_t>(s)])
            g[static_cast<size_t>(s)][0] = 1;

    for (int j = max_n; j >= 1; --j) {
        std::vector<std::vector<Int>> next(
            static_cast<size_t>(dfa.states()),
            std::vector<Int>(static_cast<size_t>(max_n) + 1, Int(0)));
        for (int s = 0; s < dfa.states(); ++s) {
            if (dfa.accepting[static_cast<size_t>(s)])
                continue;
            auto& acc = next[static_cast<size_t>(s)];
            for (int a = 0; a < dfa.alphabet; ++a) {
                long w = static_cast<long>(j) * a;
                if (w > max_n)
                    break;
                int t = dfa.delta[static_cast<size_t>(s)][static_cast<size_t>(a)];
                if (dfa.accepting[static_cast<size_t>(t)])
                    continue;
                const auto& src = g[static_cast<size_t>(t)];
                for (long u = 0; u + w <= max_n; ++u)
                    if (src[static_cast<size_t>(u)] != 0)
                        acc[static_cast<size_t>(u + w)] += src[static_cast<size_t>(u)];
            }
        }
        g = std::move(next);
    }
    return g[static_cast<size_t>(dfa.start)];
}

Dfa avoidance_dfa(const AvoidanceRule& rule)
{
    return determinize_minimize(build_avoidance_nfa(rule));
}

} // namespace zalg
