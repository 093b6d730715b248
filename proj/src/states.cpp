#include "khw/states.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "khw/check.hpp"

namespace khw {

std::string KauffmanState::bars_string() const {
    std::string out(static_cast<size_t>(braid->length()), '0');
    for (int p = 1; p <= braid->length(); ++p)
        if (barred(p)) out[static_cast<size_t>(p - 1)] = '1';
    return out;
}

KauffmanState make_state(const BraidWord& b, uint64_t bars) {
    if (b.length() > 63) throw std::invalid_argument("state: braid too long (max 63 crossings)");
    if (b.length() < 63 && (bars >> b.length()) != 0)
        throw std::invalid_argument("state: bars outside the braid word");
    return KauffmanState{&b, bars};
}

KauffmanState state_from_string(const BraidWord& b, const std::string& bars) {
    if (static_cast<int>(bars.size()) != b.length())
        throw std::invalid_argument("state: bars string length mismatch");
    uint64_t mask = 0;
    for (size_t j = 0; j < bars.size(); ++j) {
        if (bars[j] == '1')
            mask |= uint64_t{1} << j;
        else if (bars[j] != '0')
            throw std::invalid_argument("state: bars string must be over {0,1}");
    }
    return make_state(b, mask);
}

std::string EnhancedState::marks_string() const {
    std::string out;
    for (int8_t m : marks) out += (m > 0 ? '+' : '-');
    return out;
}

std::vector<int8_t> marks_from_index(uint64_t m, int nloops) {
    std::vector<int8_t> out(static_cast<size_t>(nloops));
    for (int j = 0; j < nloops; ++j)
        out[static_cast<size_t>(j)] = ((m >> (nloops - 1 - j)) & 1) ? -1 : +1;
    return out;
}

bool marks_less(const std::vector<int8_t>& a, const std::vector<int8_t>& b) {
    // + sorts before -.
    for (size_t j = 0; j < std::min(a.size(), b.size()); ++j)
        if (a[j] != b[j]) return a[j] > b[j];
    return a.size() < b.size();
}

// ---------------------------------------------------------------------------
// Resolution sweep
// ---------------------------------------------------------------------------

namespace {

// Union-find over strand segments, with per-root payload.
struct Segments {
    std::vector<int> parent;
    std::vector<std::vector<int>> touched;     // barred crossings met, sorted
    std::vector<std::vector<int>> endpoints;   // tangle boundary points
    std::vector<int> loop_of_root;             // loop id, -1 while open

    int make(std::vector<int> touch, std::vector<int> ends) {
        parent.push_back(static_cast<int>(parent.size()));
        touched.push_back(std::move(touch));
        endpoints.push_back(std::move(ends));
        loop_of_root.push_back(-1);
        return static_cast<int>(parent.size()) - 1;
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    // Merge root b into root a; crossing c joins the touched sets.  Both
    // halves of one event can land on lineages that later rejoin, so the
    // union is deduplicated to keep every touched list sorted and unique.
    void unite(int a, int b, int c) {
        std::vector<int> merged;
        std::merge(touched[a].begin(), touched[a].end(), touched[b].begin(), touched[b].end(),
                   std::back_inserter(merged));
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        merged.push_back(c);
        touched[a] = std::move(merged);
        endpoints[a].insert(endpoints[a].end(), endpoints[b].begin(), endpoints[b].end());
        parent[b] = a;
    }
};

}  // namespace

Resolution resolve(const KauffmanState& s) {
    internal_check(s.braid != nullptr, "resolve: state has no braid");
    const BraidWord& b = *s.braid;
    const int n = b.strands;
    const int t = b.length();
    if (t > 63) throw std::invalid_argument("resolve: braid too long (max 63 crossings)");

    Resolution res;
    res.strands = n;
    res.crossings = t;
    res.word.strands = n;

    Segments seg;
    std::vector<int> frontier(static_cast<size_t>(n));
    for (int r = 0; r < n; ++r) frontier[static_cast<size_t>(r)] = seg.make({}, {r});

    std::vector<int> rawgrid(static_cast<size_t>(t) * n);
    std::vector<int> loop_roots;

    for (int p = 1; p <= t; ++p) {
        for (int r = 0; r < n; ++r)
            rawgrid[static_cast<size_t>(p - 1) * n + r] = frontier[static_cast<size_t>(r)];
        if (!s.barred(p)) continue;
        const int i = b.gen(p);
        res.word.gens.push_back(i);
        res.origin.push_back(p);
        const int a = seg.find(frontier[static_cast<size_t>(i - 1)]);
        const int c = seg.find(frontier[static_cast<size_t>(i)]);
        if (a == c) {
            // The cap joins a segment to itself: a loop closes at p.
            internal_check(seg.endpoints[a].empty(), "resolve: loop root with boundary ends");
            Loop loop;
            loop.boundary = seg.touched[a];
            loop.boundary.push_back(p);
            seg.loop_of_root[a] = static_cast<int>(res.loops.size());
            res.loops.push_back(std::move(loop));
            loop_roots.push_back(a);
        } else {
            seg.unite(a, c, p);
        }
        const int fresh = seg.make({p}, {});
        frontier[static_cast<size_t>(i - 1)] = fresh;
        frontier[static_cast<size_t>(i)] = fresh;
    }

    // Right boundary endpoints.
    for (int r = 0; r < n; ++r) {
        const int root = seg.find(frontier[static_cast<size_t>(r)]);
        seg.endpoints[root].push_back(n + r);
    }

    // Collect open components.
    std::map<int, int> arc_of_root;
    for (int id = 0; id < static_cast<int>(seg.parent.size()); ++id) {
        const int root = seg.find(id);
        if (seg.loop_of_root[root] >= 0 || arc_of_root.count(root)) continue;
        internal_check(seg.endpoints[root].size() == 2, "resolve: open component without two ends");
        arc_of_root.emplace(root, 0);
    }
    std::vector<std::pair<int, int>> order;  // (min endpoint, root)
    for (auto& [root, _] : arc_of_root) {
        auto& e = seg.endpoints[root];
        order.emplace_back(std::min(e[0], e[1]), root);
    }
    std::sort(order.begin(), order.end());
    for (size_t j = 0; j < order.size(); ++j) {
        const int root = order[j].second;
        arc_of_root[root] = static_cast<int>(j);
        Arc arc;
        arc.end_a = std::min(seg.endpoints[root][0], seg.endpoints[root][1]);
        arc.end_b = std::max(seg.endpoints[root][0], seg.endpoints[root][1]);
        arc.touched = seg.touched[root];
        res.arcs.push_back(std::move(arc));
    }

    internal_check(res.arcs.size() == static_cast<size_t>(n), "resolve: expected n open components");
    res.through.strands = n;
    res.through.pairing.assign(2 * static_cast<size_t>(n), -1);
    for (const Arc& arc : res.arcs) {
        res.through.pairing[static_cast<size_t>(arc.end_a)] = arc.end_b;
        res.through.pairing[static_cast<size_t>(arc.end_b)] = arc.end_a;
    }
    res.through.loops = static_cast<int>(res.loops.size());

    res.grid.resize(rawgrid.size());
    for (size_t j = 0; j < rawgrid.size(); ++j) {
        const int root = seg.find(rawgrid[j]);
        if (seg.loop_of_root[root] >= 0)
            res.grid[j] = CompRef{true, seg.loop_of_root[root]};
        else
            res.grid[j] = CompRef{false, arc_of_root.at(root)};
    }
    return res;
}

// ---------------------------------------------------------------------------
// Gradings and enumeration
// ---------------------------------------------------------------------------

Gradings gradings(const EnhancedState& e, GradingConvention convention) {
    const BraidWord& b = *e.state.braid;
    Gradings g;
    const int r = e.state.barred_count();
    g.h = r - b.negative_crossings();
    g.deg = 0;
    for (int8_t m : e.marks) g.deg += m;
    switch (convention) {
        case GradingConvention::printed:
            g.q = g.deg + g.h + b.positive_crossings() - b.negative_crossings();
            break;
        case GradingConvention::module_shift:
            g.q = g.deg + r + b.positive_crossings() - 2 * b.negative_crossings();
            break;
    }
    return g;
}

std::vector<KauffmanState> enumerate_states(const BraidWord& b) {
    if (b.length() > 63) throw std::invalid_argument("enumerate_states: braid too long");
    const int t = b.length();
    std::vector<KauffmanState> out;
    out.reserve(size_t{1} << t);
    for (uint64_t m = 0; m < (uint64_t{1} << t); ++m) out.push_back(KauffmanState{&b, m});
    std::sort(out.begin(), out.end(), [t](const KauffmanState& x, const KauffmanState& y) {
        const int cx = x.barred_count(), cy = y.barred_count();
        if (cx != cy) return cx < cy;
        for (int p = 1; p <= t; ++p) {
            const bool bx = x.barred(p), by = y.barred(p);
            if (bx != by) return by;  // '0' before '1'
        }
        return false;
    });
    return out;
}

std::vector<EnhancedState> enumerate_enhanced_states(const BraidWord& b) {
    std::vector<EnhancedState> out;
    for (const KauffmanState& s : enumerate_states(b)) {
        const int L = static_cast<int>(resolve(s).loops.size());
        for (uint64_t m = 0; m < (uint64_t{1} << L); ++m)
            out.push_back(EnhancedState{s, marks_from_index(m, L)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Differential components
// ---------------------------------------------------------------------------

const char* kind_label(MergeSplitKind k) {
    switch (k) {
        case MergeSplitKind::merge_loops: return "merge_loops";
        case MergeSplitKind::merge_loop_into_arc: return "merge_loop_into_arc";
        case MergeSplitKind::split_loop: return "split_loop";
        case MergeSplitKind::split_arc_off_loop: return "split_arc_off_loop";
        case MergeSplitKind::arc_arc: return "arc_arc";
    }
    return "?";
}

std::vector<DiffComponent> differential_components(const EnhancedState& e) {
    const KauffmanState& s = e.state;
    const BraidWord& b = *s.braid;
    const Resolution R = resolve(s);
    internal_check(e.marks.size() == R.loops.size(), "differential: marks/loop count mismatch");

    std::vector<DiffComponent> out;
    const Gradings gs = gradings(e);

    for (int c = 1; c <= b.length(); ++c) {
        if (s.barred(c)) continue;
        const int i = b.gen(c);
        const KauffmanState s2{s.braid, s.bars | (uint64_t{1} << (c - 1))};
        const Resolution R2 = resolve(s2);

        std::map<std::vector<int>, int> by_boundary;
        for (size_t j = 0; j < R2.loops.size(); ++j)
            by_boundary.emplace(R2.loops[j].boundary, static_cast<int>(j));

        const CompRef ca = R.comp_at(c, i);
        const CompRef cb = R.comp_at(c, i + 1);

        // A loop the saddle does not touch keeps its event boundary verbatim,
        // and within one resolution the boundary determines the loop (its
        // closing position is the boundary maximum, and closing positions are
        // pairwise distinct).  Matching untouched loops by boundary therefore
        // carries their marks across exactly, and the loops of the barred
        // resolution left unmatched are precisely the saddle's products.  A
        // product need not close at the saddle position itself: when the two
        // frontier segments under the saddle only join further downstream,
        // the pinched-off loop closes there instead.
        std::vector<int> fresh;
        auto carry = [&](int skip1, int skip2) {
            std::vector<int8_t> tm(R2.loops.size(), 0);
            std::vector<char> hit(R2.loops.size(), 0);
            for (size_t j = 0; j < R.loops.size(); ++j) {
                if (static_cast<int>(j) == skip1 || static_cast<int>(j) == skip2) continue;
                auto it = by_boundary.find(R.loops[j].boundary);
                internal_check(it != by_boundary.end(), "differential: untouched loop lost");
                tm[static_cast<size_t>(it->second)] = e.marks[j];
                hit[static_cast<size_t>(it->second)] = 1;
            }
            fresh.clear();
            for (size_t j = 0; j < R2.loops.size(); ++j)
                if (!hit[j]) fresh.push_back(static_cast<int>(j));
            return tm;
        };
        auto emit = [&](std::vector<int8_t> tm, MergeSplitKind kind, CoeffClass coeff) {
            for (int8_t m : tm) internal_check(m != 0, "differential: unmarked target loop");
            EnhancedState target{s2, std::move(tm)};
            const Gradings gt = gradings(target);
            internal_check(gt.h == gs.h + 1, "differential: h must step by one");
            // Dotted components raise q by 2; unit components preserve it,
            // except an open-strand reconnection, which carries no marks and
            // absorbs the saddle's degree into the homological shift.
            const int dq = coeff == CoeffClass::dotted ? 2
                           : kind == MergeSplitKind::arc_arc ? 1
                                                             : 0;
            internal_check(gt.q == gs.q + dq, "differential: q shift inconsistent with kind");
            out.push_back(DiffComponent{std::move(target), c, kind, coeff});
        };

        if (ca == cb) {
            if (ca.is_loop) {
                // One loop tears into two.  The mark rule below is symmetric
                // in the two pieces, so their order does not matter.
                internal_check(R2.loops.size() == R.loops.size() + 1, "differential: split count");
                auto base = carry(ca.id, -1);
                internal_check(fresh.size() == 2, "differential: split pieces missing");
                const auto C = static_cast<size_t>(fresh[0]);
                const auto X2 = static_cast<size_t>(fresh[1]);
                if (e.marks[static_cast<size_t>(ca.id)] > 0) {
                    auto t1 = base;
                    t1[C] = -1;
                    t1[X2] = +1;
                    emit(std::move(t1), MergeSplitKind::split_loop, CoeffClass::unit);
                    auto t2 = base;
                    t2[C] = +1;
                    t2[X2] = -1;
                    emit(std::move(t2), MergeSplitKind::split_loop, CoeffClass::unit);
                } else {
                    base[C] = -1;
                    base[X2] = -1;
                    emit(std::move(base), MergeSplitKind::split_loop, CoeffClass::unit);
                }
            } else {
                // An arc sheds a loop.
                internal_check(R2.loops.size() == R.loops.size() + 1, "differential: shed count");
                auto base = carry(-1, -1);
                internal_check(fresh.size() == 1, "differential: shed loop missing");
                const auto C = static_cast<size_t>(fresh[0]);
                auto t1 = base;
                t1[C] = -1;
                emit(std::move(t1), MergeSplitKind::split_arc_off_loop, CoeffClass::unit);
                auto t2 = base;
                t2[C] = +1;
                emit(std::move(t2), MergeSplitKind::split_arc_off_loop, CoeffClass::dotted);
            }
        } else if (ca.is_loop && cb.is_loop) {
            internal_check(R2.loops.size() + 1 == R.loops.size(), "differential: merge count");
            const int8_t ma = e.marks[static_cast<size_t>(ca.id)];
            const int8_t mb = e.marks[static_cast<size_t>(cb.id)];
            if (!(ma < 0 && mb < 0)) {
                auto base = carry(ca.id, cb.id);
                internal_check(fresh.size() == 1, "differential: merged loop missing");
                base[static_cast<size_t>(fresh[0])] = (ma > 0 && mb > 0) ? +1 : -1;
                emit(std::move(base), MergeSplitKind::merge_loops, CoeffClass::unit);
            }
        } else if (ca.is_loop != cb.is_loop) {
            const int X = ca.is_loop ? ca.id : cb.id;
            internal_check(R2.loops.size() + 1 == R.loops.size(), "differential: absorb count");
            auto base = carry(X, -1);
            emit(std::move(base), MergeSplitKind::merge_loop_into_arc,
                 e.marks[static_cast<size_t>(X)] > 0 ? CoeffClass::unit : CoeffClass::dotted);
        } else {
            internal_check(R2.loops.size() == R.loops.size(), "differential: reconnect count");
            emit(carry(-1, -1), MergeSplitKind::arc_arc, CoeffClass::unit);
        }
    }

    std::stable_sort(out.begin(), out.end(), [](const DiffComponent& x, const DiffComponent& y) {
        if (x.crossing != y.crossing) return x.crossing < y.crossing;
        return marks_less(x.target.marks, y.target.marks);
    });
    return out;
}

bool same_enhanced(const EnhancedState& a, const EnhancedState& b) {
    return a.state.bars == b.state.bars && a.marks == b.marks;
}

bool enhanced_less(const EnhancedState& a, const EnhancedState& b) {
    const int t = a.state.braid->length();
    for (int p = 1; p <= t; ++p) {
        const bool ba = a.state.barred(p), bb = b.state.barred(p);
        if (ba != bb) return bb;
    }
    if (a.marks != b.marks) return marks_less(a.marks, b.marks);
    return false;
}

}  // namespace khw
