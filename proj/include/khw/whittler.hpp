#pragma once

#include <optional>
#include <string>
#include <vector>

#include "khw/braidword.hpp"
#include "khw/states.hpp"

namespace khw {

// The two shapes of distinguished elimination isomorphism.
//
// G1: the window opens at a barred crossing `init` and closes at the unbarred
//     crossing `fin = init + strands - 1`; barring `fin` would close a loop
//     whose first and last boundary crossings are exactly (init, fin).  The
//     isomorphism is the unit differential component at `fin` that marks that
//     loop with -, carrying every other mark unchanged.
//
// G2: both `init` and `fin` are barred and the loop (init, fin) is already
//     closed and marked +.  The isomorphism is the unit merge component at the
//     unique intermediate crossing of the next-higher generator inside the
//     window, which absorbs that loop.
enum class GEKind { G1, G2 };

const char* ge_kind_label(GEKind k);

struct GEIsomorphism {
    GEKind kind;
    EnhancedState source;
    EnhancedState target;
    int init;    // barred crossing opening the window
    int fin;     // init + strands - 1
    int active;  // crossing whose differential component realizes the map
};

// Tests whether the window (init, fin) of the given enhanced state supports a
// distinguished isomorphism.  `fin - init` must equal `strands - 1` and both
// must lie inside the braid word; otherwise std::invalid_argument.
std::optional<GEIsomorphism> detect_iso_at(const EnhancedState& e, int init, int fin);

struct Selection {
    std::vector<GEIsomorphism> isos;
    std::vector<std::string> warnings;  // windows skipped because a target was already claimed
};

// Scans enhanced states in homological order (bars lexicographic, then marks
// with + before -), claiming source/target pairs greedily: a state already
// claimed is skipped, and within a state the barred crossings are tried in
// ascending order until a window with an unclaimed target is found.
Selection select_distinguished(const BraidWord& b);

struct GraphEdge {
    int from;      // iso index whose source feeds...
    int to;        // ...this iso's target
    int crossing;  // crossing of the connecting differential component
};

// Edge (a, b) for a != b whenever a differential component maps
// isos[a].source onto isos[b].target.
std::vector<GraphEdge> build_graph(const std::vector<GEIsomorphism>& isos);

struct TopoResult {
    bool acyclic = true;
    std::vector<int> order;          // smallest-index-first Kahn order when acyclic
    std::vector<int> cycle_witness;  // vertices of a directed cycle otherwise
};

TopoResult topological_order(int nvertices, const std::vector<GraphEdge>& edges);

struct WhittledComplex {
    const BraidWord* braid;
    Selection selection;
    std::vector<GraphEdge> edges;
    std::vector<int> elimination_order;    // iso indices in a valid cancellation order
    std::vector<EnhancedState> survivors;  // unclaimed states, homological order
};

// Full pipeline: select, build the connecting-map graph, order it (throws
// std::logic_error with a cycle witness if that is impossible), and return
// the surviving generators.  Every state in the result references `b`, which
// must outlive it.
WhittledComplex whittle(const BraidWord& b);

}  // namespace khw
