#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "khw/braidword.hpp"
#include "khw/states.hpp"
#include "khw/tl.hpp"

namespace khw {

// A closed component of the braid-closure of one resolution: either an
// internal loop of the tangle or a cycle of through-arcs glued by the closure
// (right endpoint r joins left endpoint r).
struct ClosureCircle {
    bool is_loop;
    std::vector<int> loop_boundary;  // barred crossings met (loops only)
    std::vector<int> rows;           // closure strands met (through-circles only)
    int min_crossing;                // smallest incident crossing, INT_MAX if none
};

struct ClosureState {
    uint64_t bars;
    int h;
    std::vector<ClosureCircle> circles;  // sorted by (min_crossing, strand/loop key)
};

// Integer Khovanov cube of the braid closure.  Basis elements at homological
// degree h are (state mask of weight h, circle-mark bits) pairs; mark bit j
// set means circle j carries x (the - generator).  Differential entries are
// +-1 under the sign rule: (-1)^{number of barred crossings left of the
// active one}.
struct IntComplex {
    const BraidWord* braid;
    std::vector<ClosureState> states;  // indexed by state mask

    struct Basis {
        uint64_t mask;
        uint64_t marks;
    };
    std::vector<std::vector<Basis>> basis;  // [h] -> elements, deterministic order
    std::vector<std::vector<int>> basis_q;  // [h] -> q grading per element

    // [h] -> per source element: (target index at h+1, coefficient)
    std::vector<std::vector<std::vector<std::pair<int, int>>>> diff;

    int crossings() const { return braid->length(); }
};

// Builds the full cube and verifies d∘d = 0 (std::logic_error on failure —
// an implementation bug, not bad input).
IntComplex close_and_build(const BraidWord& b);

struct HomologySummary {
    std::map<int, int> free_rank;                              // h -> rank of H^h
    std::map<int, std::vector<BigInt>> torsion;                // h -> invariant factors > 1
    std::map<std::pair<int, int>, int> q_dim;                  // (h, q) -> dim over Q
    std::map<std::pair<int, int>, std::vector<BigInt>> q_torsion;  // (h, q) -> factors > 1
};

// Smith-normal-form homology of the cube, one q-slice at a time.
HomologySummary homology(const IntComplex& c);

// Laurent polynomial in q: exponent -> exact coefficient.
using LaurentPoly = std::map<int, BigInt>;

// Graded Euler characteristic from homology ranks.
LaurentPoly euler_from_homology(const HomologySummary& h);

// Signed state sums Σ (-1)^h q^q, computed without homology:
//  - closed: over closure enhanced states;
//  - open: over tangle enhanced states, split by the TL pairing class of the
//    resolution (the key is the pairing vector).
LaurentPoly euler_state_sum_closed(const BraidWord& b);
std::map<std::vector<int>, LaurentPoly> euler_state_sum_open(const BraidWord& b);
std::map<std::vector<int>, LaurentPoly> euler_state_sum_open(const std::vector<EnhancedState>& states);

// Number of circles the closure of this pairing produces (internal loops of
// the evaluated diagram are not part of the pairing and are not counted).
int closure_cycles(const TLDiagram& d);

}  // namespace khw
