#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zalg/rational.hpp"

namespace zalg {

// Weakly decreasing list of positive parts; {} is the empty partition.
using Partition = std::vector<int>;

int weight(const Partition& p);
int multiplicity(const Partition& p, int value);
bool is_valid_partition(const Partition& p);
std::string partition_str(const Partition& p);     // "5,3,2"; empty -> "-"
Partition parse_partition(const std::string& s);

// All partitions of n in descending lexicographic order; n = 0 gives {{}}.
std::vector<Partition> enumerate_partitions(int n, int max_part = -1);

// Pattern/prefix avoidance data: multiplicity bound m, forbidden windows
// (shift-closed) and forbidden smallest-part prefixes.
struct AvoidanceRule {
    int m = 0;
    std::vector<Partition> forbidden;
    std::vector<Partition> prefixes;
};

// lambda "begins with" d: the smallest-part tail (l_(l-r+1)..l_l) equals d.
bool begins_with(const Partition& lambda, const Partition& d);
// lambda "matches" d: some contiguous window of parts equals d.
bool matches(const Partition& lambda, const Partition& d);
// matches d + k for some integer k >= 0.
bool matches_shifted(const Partition& lambda, const Partition& d);

// The 13 forbidden patterns and the three prefix sets of the mod-16 family.
const std::vector<Partition>& l_family_forbidden();
const std::vector<Partition>& l_family_prefixes(int a); // a = 1..3
AvoidanceRule l_family_rule(int a);

class ConstraintSet {
public:
    // Presets: RR1, RR2, KR1..KR5, L1..L3.
    static ConstraintSet preset(const std::string& name);
    // Parts congruent to one of the residues mod `modulus`.
    static ConstraintSet congruence(int modulus, std::vector<int> residues);
    static ConstraintSet custom(AvoidanceRule rule, std::string name = "custom");
    // "KR1", "RR2", "L3", "T9:1,3,6,8", ...
    static ConstraintSet parse(const std::string& spec);

    const std::string& name() const { return name_; }
    bool satisfies(const Partition& p) const;

    // The avoidance rule backing this set, if it is defined by one.
    const std::optional<AvoidanceRule>& rule() const { return rule_; }
    // Congruence data if this is a T-set.
    std::optional<std::pair<int, std::vector<int>>> congruence_data() const;

private:
    std::string name_;
    std::function<bool(const Partition&)> pred_;
    std::optional<AvoidanceRule> rule_;
    std::optional<std::pair<int, std::vector<int>>> congruence_;
};

// The Kanade-Russell-type difference/congruence conditions.
bool difference_two_at_distance_two(const Partition& p); // l_j - l_(j+2) >= 3
bool adjacent_sum_condition(const Partition& p, int k);  // diff <= 1 => sum = k mod 3

std::vector<Partition> enumerate_set(const ConstraintSet& set, int n);
std::vector<Int> count_series(const ConstraintSet& set, int max_n); // brute force

// sat_m: partitions mu with mu_1 = lambda_1, all multiplicities < m, and mu
// matching lambda.
std::vector<Partition> saturate(const Partition& lambda, int m);

// Multiplicity word m_1(p) ... m_(p_1)(p); requires multiplicities < m.
std::vector<int> encode_multiplicity_word(const Partition& p, int m);
Partition decode_multiplicity_word(const std::vector<int>& word);

struct PtReport {
    int max_n = 0;
    bool agree = false;
    int first_disagreement = -1; // -1 when none
    std::vector<Int> lhs_counts;
    std::vector<Int> rhs_counts;
};

PtReport pt_equiv(const ConstraintSet& a, const ConstraintSet& b, int max_n);

// Weight-indexed counts via the bounded-memory multiplicity-word recursion;
// works for every preset and custom rule, reaching n well beyond brute force.
std::vector<Int> count_series_dp(const ConstraintSet& set, int max_n);

// Constraint files: m = 3, forbidden = [[1,1,1],...], prefixes = [[1],...]
AvoidanceRule parse_constraint_text(const std::string& text);
std::string constraint_to_text(const AvoidanceRule& rule);

} // namespace zalg
