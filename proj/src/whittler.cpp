#include "khw/whittler.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "khw/check.hpp"

namespace khw {

const char* ge_kind_label(GEKind k) { return k == GEKind::G1 ? "G1" : "G2"; }

namespace {

int find_loop(const Resolution& r, int left, int right) {
    for (size_t j = 0; j < r.loops.size(); ++j)
        if (r.loops[j].left() == left && r.loops[j].right() == right) return static_cast<int>(j);
    return -1;
}

std::string describe(const EnhancedState& e) {
    std::string out = e.state.bars_string();
    if (!e.marks.empty()) out += ":" + e.marks_string();
    return out;
}

}  // namespace

std::optional<GEIsomorphism> detect_iso_at(const EnhancedState& e, int init, int fin) {
    const BraidWord& b = *e.state.braid;
    const int n = b.strands;
    if (init < 1 || fin > b.length() || fin - init != n - 1)
        throw std::invalid_argument("detect_iso_at: window must span strands-1 crossings");
    if (b.gen(init) != b.gen(fin))
        throw std::invalid_argument("detect_iso_at: window ends on a different generator");
    if (!e.state.barred(init)) return std::nullopt;
    const int i = b.gen(init);

    if (!e.state.barred(fin)) {
        // G1: barring fin must close a loop spanning exactly this window.
        const KauffmanState s2{e.state.braid, e.state.bars | (uint64_t{1} << (fin - 1))};
        const Resolution r2 = resolve(s2);
        const int C = find_loop(r2, init, fin);
        if (C < 0) return std::nullopt;
        for (const DiffComponent& d : differential_components(e)) {
            if (d.crossing != fin || d.coeff != CoeffClass::unit) continue;
            if (d.target.marks[static_cast<size_t>(C)] != -1) continue;
            return GEIsomorphism{GEKind::G1, e, d.target, init, fin, fin};
        }
        internal_check(false, "detect_iso_at: window loop without its unit component");
    }

    // G2: the window loop is already closed; it must carry + and be absorbed
    // through the unique intermediate crossing of generator i+1.
    if (i + 1 > n - 1) return std::nullopt;
    const Resolution r = resolve(e.state);
    const int C = find_loop(r, init, fin);
    if (C < 0) return std::nullopt;
    if (e.marks[static_cast<size_t>(C)] != +1) return std::nullopt;
    int m = 0;
    for (int p = init + 1; p < fin; ++p)
        if (b.gen(p) == i + 1) {
            internal_check(m == 0, "detect_iso_at: intermediate crossing not unique");
            m = p;
        }
    internal_check(m != 0, "detect_iso_at: intermediate crossing missing");
    if (e.state.barred(m)) return std::nullopt;
    internal_check(r.comp_at(m, i + 1) == CompRef{true, C},
                   "detect_iso_at: window loop must sit under the absorbing crossing");
    for (const DiffComponent& d : differential_components(e)) {
        if (d.crossing != m) continue;
        internal_check(d.coeff == CoeffClass::unit, "detect_iso_at: absorbing component not unit");
        internal_check(d.kind == MergeSplitKind::merge_loops ||
                           d.kind == MergeSplitKind::merge_loop_into_arc,
                       "detect_iso_at: absorbing component not a merge");
        return GEIsomorphism{GEKind::G2, e, d.target, init, fin, m};
    }
    internal_check(false, "detect_iso_at: closed window loop without its merge component");
    return std::nullopt;
}

Selection select_distinguished(const BraidWord& b) {
    if (!is_torus_power(b))
        throw std::invalid_argument("select_distinguished: braid is not a torus power");
    Selection sel;
    const int n = b.strands;
    const int t = b.length();

    struct Key {
        uint64_t bars;
        std::vector<int8_t> marks;
        bool operator<(const Key& o) const {
            if (bars != o.bars) return bars < o.bars;
            return marks < o.marks;
        }
    };
    std::map<Key, int> claimed;  // -> iso index (source or target)

    for (const EnhancedState& e : enumerate_enhanced_states(b)) {
        if (claimed.count(Key{e.state.bars, e.marks})) continue;
        for (int init = 1; init + n - 1 <= t; ++init) {
            if (!e.state.barred(init)) continue;
            auto iso = detect_iso_at(e, init, init + n - 1);
            if (!iso) continue;
            const Key tkey{iso->target.state.bars, iso->target.marks};
            if (auto it = claimed.find(tkey); it != claimed.end()) {
                std::ostringstream msg;
                msg << "window (" << init << "," << (init + n - 1) << ") of " << describe(e)
                    << " skipped: target " << describe(iso->target)
                    << " already claimed by isomorphism " << it->second;
                sel.warnings.push_back(msg.str());
                continue;
            }
            const int idx = static_cast<int>(sel.isos.size());
            claimed.emplace(Key{e.state.bars, e.marks}, idx);
            claimed.emplace(tkey, idx);
            sel.isos.push_back(std::move(*iso));
            break;  // at most one isomorphism per state
        }
    }
    return sel;
}

std::vector<GraphEdge> build_graph(const std::vector<GEIsomorphism>& isos) {
    struct Key {
        uint64_t bars;
        std::vector<int8_t> marks;
        bool operator<(const Key& o) const {
            if (bars != o.bars) return bars < o.bars;
            return marks < o.marks;
        }
    };
    std::map<Key, int> target_of;
    for (size_t j = 0; j < isos.size(); ++j)
        target_of.emplace(Key{isos[j].target.state.bars, isos[j].target.marks},
                          static_cast<int>(j));

    std::vector<GraphEdge> edges;
    for (size_t j = 0; j < isos.size(); ++j) {
        for (const DiffComponent& d : differential_components(isos[j].source)) {
            auto it = target_of.find(Key{d.target.state.bars, d.target.marks});
            if (it == target_of.end() || it->second == static_cast<int>(j)) continue;
            edges.push_back(GraphEdge{static_cast<int>(j), it->second, d.crossing});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
        if (a.from != b.from) return a.from < b.from;
        return a.to < b.to;
    });
    return edges;
}

TopoResult topological_order(int nvertices, const std::vector<GraphEdge>& edges) {
    TopoResult res;
    std::vector<std::vector<int>> out(static_cast<size_t>(nvertices));
    std::vector<int> indeg(static_cast<size_t>(nvertices), 0);
    for (const GraphEdge& e : edges) {
        out[static_cast<size_t>(e.from)].push_back(e.to);
        ++indeg[static_cast<size_t>(e.to)];
    }
    std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
    for (int v = 0; v < nvertices; ++v)
        if (indeg[static_cast<size_t>(v)] == 0) ready.push(v);
    while (!ready.empty()) {
        const int v = ready.top();
        ready.pop();
        res.order.push_back(v);
        for (int w : out[static_cast<size_t>(v)])
            if (--indeg[static_cast<size_t>(w)] == 0) ready.push(w);
    }
    if (static_cast<int>(res.order.size()) == nvertices) return res;

    // Walk forward through still-blocked vertices until one repeats.
    res.acyclic = false;
    int v = 0;
    while (indeg[static_cast<size_t>(v)] == 0) ++v;
    std::vector<int> seen(static_cast<size_t>(nvertices), -1);
    std::vector<int> walk;
    while (seen[static_cast<size_t>(v)] < 0) {
        seen[static_cast<size_t>(v)] = static_cast<int>(walk.size());
        walk.push_back(v);
        for (int w : out[static_cast<size_t>(v)])
            if (indeg[static_cast<size_t>(w)] > 0) {
                v = w;
                break;
            }
    }
    res.cycle_witness.assign(walk.begin() + seen[static_cast<size_t>(v)], walk.end());
    return res;
}

WhittledComplex whittle(const BraidWord& b) {
    WhittledComplex wc;
    wc.braid = &b;
    wc.selection = select_distinguished(b);
    wc.edges = build_graph(wc.selection.isos);
    TopoResult topo = topological_order(static_cast<int>(wc.selection.isos.size()), wc.edges);
    if (!topo.acyclic) {
        std::ostringstream msg;
        msg << "whittle: connecting-map graph has a cycle:";
        for (int v : topo.cycle_witness) msg << " " << v;
        throw std::logic_error(msg.str());
    }
    wc.elimination_order = std::move(topo.order);

    std::set<std::pair<uint64_t, std::vector<int8_t>>> gone;
    for (const GEIsomorphism& iso : wc.selection.isos) {
        gone.emplace(iso.source.state.bars, iso.source.marks);
        gone.emplace(iso.target.state.bars, iso.target.marks);
    }
    for (EnhancedState& e : enumerate_enhanced_states(b)) {
        if (gone.count({e.state.bars, e.marks})) continue;
        wc.survivors.push_back(std::move(e));
    }
    return wc;
}

}  // namespace khw
