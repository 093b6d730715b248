#ifndef KHW_TL_HPP
#define KHW_TL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace khw {

using BigInt = boost::multiprecision::cpp_int;

// A word in the Temperley-Lieb monoid on `strands` strands: a sequence of
// generator indices, each in [1, strands-1].  The empty word is the identity.
struct TLWord {
    int strands = 0;
    std::vector<int> gens;

    int length() const { return static_cast<int>(gens.size()); }
    bool operator==(const TLWord&) const = default;
    auto operator<=>(const TLWord&) const = default;
};

// A planar crossingless matching of the 2n tangle boundary points, plus the
// number of closed loops collected while composing.  Boundary points are
// numbered 0..n-1 for the left side (top row first) and n..2n-1 for the
// right side.  pairing is a fixed-point-free involution.
struct TLDiagram {
    int strands = 0;
    std::vector<int> pairing;
    int loops = 0;

    bool same_matching(const TLDiagram& o) const {
        return strands == o.strands && pairing == o.pairing;
    }
    bool operator==(const TLDiagram&) const = default;
};

// One rewrite step.  Sites are 1-based positions into the word the move is
// applied to; `index` is the generator the move pivots on.
//
//   duplicate        e_i         -> e_i e_i          (grows)
//   contract         e_i e_i     -> e_i              (shrinks)
//   insert_above     e_i         -> e_i e_{i+1} e_i  (grows)
//   contract_above   e_i e_{i+1} e_i -> e_i          (shrinks)
//   insert_below     e_i         -> e_i e_{i-1} e_i  (grows)
//   contract_below   e_i e_{i-1} e_i -> e_i          (shrinks)
//   commute          e_i e_j     -> e_j e_i, |i-j| >= 2 (site names the left letter)
enum class MoveKind {
    duplicate,
    contract,
    insert_above,
    contract_above,
    insert_below,
    contract_below,
    commute,
};

const char* move_label(MoveKind k);

struct TLMove {
    MoveKind kind;
    int site = 0;   // 1-based position of the leftmost letter touched
    int index = 0;  // pivot generator index

    bool operator==(const TLMove&) const = default;
};

// A rewrite trace: words[0] is the input, words[m] the result, and moves[m-1]
// transforms words[m-1] into words[m].
struct TLPath {
    std::vector<TLWord> words;
    std::vector<TLMove> moves;

    const TLWord& front() const { return words.front(); }
    const TLWord& back() const { return words.back(); }
};

// The run decomposition of a word in normal form: runs e_{i_l} e_{i_l - 1}
// ... e_{j_l} with 0 < i_1 < ... < i_k < strands, j_1 < ... < j_k, j_l <= i_l.
struct JNFTuple {
    std::vector<int> starts;  // i_1 .. i_k
    std::vector<int> ends;    // j_1 .. j_k

    bool operator==(const JNFTuple&) const = default;
};

// Plumb the word's generators left to right and return the resulting planar
// matching together with the number of closed loops formed (loops are counted,
// never discarded: the loop parameter of the monoid is 1).
TLDiagram evaluate(const TLWord& w);

// Right-compose a matching with the generator e_i, tracking collected loops.
TLDiagram compose_gen(const TLDiagram& d, int i);

// The identity matching on n strands.
TLDiagram identity_diagram(int n);

bool move_applies(const TLWord& w, const TLMove& m);

// Apply one move; throws std::invalid_argument when the move does not match
// the word at its site.  Every move preserves evaluate(w).same_matching.
TLWord apply_move(const TLWord& w, const TLMove& m);

// If the word is a normal-form word, its run decomposition; otherwise nullopt.
std::optional<JNFTuple> is_jnf(const TLWord& w);

// A monotone rewrite to normal form: every step is either length-preserving
// (commute) or length-decreasing (contract / contract_above / contract_below),
// so word length never increases along the path.  Deterministic.  The final
// word always passes is_jnf, and every intermediate word evaluates to the
// same matching as the input.
//
// Phases, innermost first: exhaust adjacent contractions; normalize each
// maximal block free of the current top generator recursively; commute top
// generators rightward; collapse  top (top-1) top  -> top;  finally repair
// run overlaps between the normalized prefix and the trailing run.
TLPath reduce_to_jnf(const TLWord& w);

// Restricted rewriting that may only use
//   D1: contract at the *top* generator index (strands-1) only,
//   D2: commute,
//   D3: contract_below at indices 2..strands-1.
// Breadth-first search over that rewrite graph, layer by layer from w,
// children enumerated by (site, kind) ascending; returns the path to the
// first normal-form word encountered, or nullopt when none is reachable.
std::optional<TLPath> d_move_reduce(const TLWord& w);

// All normal-form words on n strands with exactly h letters, in ascending
// lexicographic order of their generator sequences.
std::vector<TLWord> enumerate_jnf(int n, int h);

// Exact Catalan number C_n.
BigInt catalan(int n);

// Exact binomial coefficient, 0 when k is out of range.
BigInt binomial(int n, int k);

std::string to_string(const TLWord& w);
std::string to_string(const TLDiagram& d);

}  // namespace khw

#endif
