#pragma once

#include <optional>
#include <vector>

#include "khw/tl.hpp"

namespace khw {

// Compositions: the number of ways to write n as an ordered sum of k positive
// integers, binomial(n-1, k-1), extended by the convention p(0, m) = 1.
BigInt ordered_partitions(int n, int k);

// N(n, h) = sum over k = 0..h of binomial(n-1, k) * p(h, k).
BigInt formula_N(int n, int h);

// Upper bound for the number of whittled survivors at homological degree h:
//
//   sum_{m <= h} p(h, m)  +  N(n, h)  +  (p(n, 2) + 2) * catalan(n)
//
// evaluated exactly as printed; the middle symbol of the last term uses the
// strand count n.  `count_bound_alt` evaluates the same expression with
// p(k, 2) instead, since the derivation bounds the two top-generator
// exponents by the braid power k; verification reports show both.
BigInt count_bound(int n, int k, int h);
BigInt count_bound_alt(int n, int k, int h);

// How a whittled survivor's resolution word sits in the Temperley-Lieb monoid.
//
// Form 1 (n >= 3): the word is e_{n-1}^{k_0} V_0 e_{n-1}^{k_1} V_1 ... V_{r-1}
// e_{n-1}^{k_r} with r >= 1, where each tail V_j is a consecutive ascending
// run e_i e_{i+1} ... e_{n-1} ending at the top generator.  Parsed from
// maximal top-generator blocks and the gaps between them: at least one gap
// must exist (a pure top power is left to Form 2), every raw block must have
// length >= 2, and each gap must ascend consecutively to exactly e_{n-2}.  A
// gap followed by a block borrows that block's first letter as the run's
// final e_{n-1} (so the reported k_j is the raw length minus one); a trailing
// bare gap reports k_r = 0; leading and trailing blocks are both optional.
//
// Form 2: a restricted-move path (top-index contraction D1, commutation D2,
// triple contraction D3) carries the word to Jones normal form.
enum class FormVariant { form1, form2 };

struct SurvivorForm {
    FormVariant variant;
    std::vector<int> exponents;  // Form 1: k_0 .. k_r
    std::vector<TLWord> tails;   // Form 1: V_0 .. V_{r-1}
    TLPath path;                 // Form 2: the restricted-move path to JNF
};

// Form 1 is attempted first (cheap structural parse), then Form 2 (search);
// nullopt when neither applies.
std::optional<SurvivorForm> classify_survivor(const TLWord& w);

}  // namespace khw
