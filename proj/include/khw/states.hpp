#ifndef KHW_STATES_HPP
#define KHW_STATES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "khw/braidword.hpp"
#include "khw/tl.hpp"

namespace khw {

// One smoothing choice per crossing of a (positive) braid word: bit p-1 of
// `bars` is set when crossing p carries the turnback smoothing, clear when it
// carries the identity smoothing.  The braid is referenced, not owned.
struct KauffmanState {
    const BraidWord* braid = nullptr;
    uint64_t bars = 0;

    bool barred(int p) const { return (bars >> (p - 1)) & 1; }
    int barred_count() const { return __builtin_popcountll(bars); }

    // "0110..." with position p at character p-1.
    std::string bars_string() const;
};

KauffmanState make_state(const BraidWord& b, uint64_t bars);
KauffmanState state_from_string(const BraidWord& b, const std::string& bars);

// A closed component of the smoothed tangle.  `boundary` lists the barred
// crossings whose turnbacks the loop runs through, ascending; left() and
// right() are its extreme crossings.  Loops are numbered 0to.. in order of the
// crossing that closes them (== right(), strictly increasing loop to loop).
struct Loop {
    std::vector<int> boundary;

    int left() const { return boundary.front(); }
    int right() const { return boundary.back(); }
    bool operator==(const Loop&) const = default;
};

// An open component.  Endpoint encoding matches TLDiagram: 0..n-1 left side
// (strand order), n..2n-1 right side.  `touched` lists the barred crossings
// the arc runs through (may be empty), ascending.
struct Arc {
    int end_a = 0;
    int end_b = 0;
    std::vector<int> touched;
};

// Which component occupies a (crossing slot, strand row) point of the
// smoothed diagram.
struct CompRef {
    bool is_loop = false;
    int id = -1;

    bool operator==(const CompRef&) const = default;
};

// The complete smoothing of a state: its turnback word, closed loops, open
// arcs, the induced planar matching of the 2n boundary points, and the
// component occupying every grid point (needed for saddle analysis).
struct Resolution {
    TLWord word;               // turnback letters, left to right
    std::vector<int> origin;   // word position (0-based) -> crossing index
    std::vector<Loop> loops;   // in closing order
    std::vector<Arc> arcs;     // sorted by smaller endpoint
    TLDiagram through;         // matching of the open ends; loops counted

    int strands = 0;
    int crossings = 0;

    // Component at strand `row` (1-based) in the vertical slice through
    // crossing p, just before p's own smoothing event.
    CompRef comp_at(int p, int row) const {
        return grid[static_cast<size_t>(p - 1) * strands + (row - 1)];
    }
    std::vector<CompRef> grid;
};

Resolution resolve(const KauffmanState& s);

// A state together with one sign per loop of its smoothing, in loop order.
// +1 and -1 are the two markings.
struct EnhancedState {
    KauffmanState state;
    std::vector<int8_t> marks;

    std::string marks_string() const;  // "+-..." in loop order
};

// Signs vector for marking index m over `nloops` loops: loop 0 is the most
// significant position, bit value 0 encodes +1.  Ascending m enumerates
// markings in lexicographic order with + before -.
std::vector<int8_t> marks_from_index(uint64_t m, int nloops);

bool marks_less(const std::vector<int8_t>& a, const std::vector<int8_t>& b);

enum class GradingConvention {
    printed,       // q = deg + h + (positive crossings) - (negative crossings)
    module_shift,  // q = deg + barred count + (positive) - 2*(negative)
};

struct Gradings {
    int h = 0;    // barred count minus negative crossings
    int deg = 0;  // #(+) marks minus #(-) marks
    int q = 0;
};

Gradings gradings(const EnhancedState& e,
                  GradingConvention convention = GradingConvention::printed);

// All 2^t states of the braid, grouped by barred count ascending; within a
// group, ascending lexicographic order of the bars string.
std::vector<KauffmanState> enumerate_states(const BraidWord& b);

// All enhanced states, outer order as enumerate_states, inner order the
// marking order of marks_from_index.
std::vector<EnhancedState> enumerate_enhanced_states(const BraidWord& b);

// What one saddle does to the component(s) it touches.
enum class MergeSplitKind {
    merge_loops,          // two loops fuse into one
    merge_loop_into_arc,  // a loop is absorbed by an arc
    split_loop,           // one loop tears into two
    split_arc_off_loop,   // an arc sheds a new loop
    arc_arc,              // two arcs reconnect; loop set unchanged
};

const char* kind_label(MergeSplitKind k);

enum class CoeffClass { unit, dotted };

// One nonzero component of the cube differential out of an enhanced state:
// bar the named crossing, obtaining `target` with the stated coefficient
// class.  Every component raises h by 1.  Dotted components raise q by 2 and
// unit components preserve it, except an open-strand reconnection (arc_arc),
// which is unit and raises q by 1: it carries no marks, so the saddle's
// degree lands entirely in the homological shift.
struct DiffComponent {
    EnhancedState target;
    int crossing = 0;
    MergeSplitKind kind{};
    CoeffClass coeff{};
};

// All nonzero single-saddle components out of `e`, ordered by crossing then
// by target marks (lexicographic, + first).  Marking transitions follow the
// merge/split rules; loops untouched by the saddle keep their marks, matched
// across the saddle by equal boundary sets.
std::vector<DiffComponent> differential_components(const EnhancedState& e);

// Equality / ordering helpers (state identity = bars + marks).
bool same_enhanced(const EnhancedState& a, const EnhancedState& b);
bool enhanced_less(const EnhancedState& a, const EnhancedState& b);

}  // namespace khw

#endif
