#include "khw/homology.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "khw/check.hpp"

namespace khw {

int closure_cycles(const TLDiagram& d) {
    const int n = d.strands;
    std::vector<char> seen(2 * static_cast<size_t>(n), 0);
    int cycles = 0;
    for (int start = 0; start < 2 * n; ++start) {
        if (seen[static_cast<size_t>(start)]) continue;
        ++cycles;
        int p = start;
        while (!seen[static_cast<size_t>(p)]) {
            seen[static_cast<size_t>(p)] = 1;
            const int q = d.pairing[static_cast<size_t>(p)];
            seen[static_cast<size_t>(q)] = 1;
            p = q < n ? q + n : q - n;  // closure glues left r to right r
        }
    }
    return cycles;
}

namespace {

// Key identifying a circle across one saddle: loops by their boundary
// crossings, through-circles by the closure strands they visit.
using CircleKey = std::pair<int, std::vector<int>>;  // first: 0 = loop, 1 = through

CircleKey key_of(const ClosureCircle& c) {
    return c.is_loop ? CircleKey{0, c.loop_boundary} : CircleKey{1, c.rows};
}

struct StateGeometry {
    Resolution res;
    ClosureState closure;
    std::vector<int> loop_circle;  // resolution loop id -> circle index
    std::vector<int> arc_circle;   // resolution arc id -> circle index
    std::map<CircleKey, int> by_key;
    int circle_of(CompRef c) const {
        return c.is_loop ? loop_circle[static_cast<size_t>(c.id)]
                         : arc_circle[static_cast<size_t>(c.id)];
    }
};

StateGeometry build_geometry(const BraidWord& b, uint64_t mask) {
    StateGeometry g;
    g.res = resolve(KauffmanState{&b, mask});
    const int n = b.strands;

    // Glue arc endpoints: right strand r joins left strand r.
    std::vector<int> arc_at_point(2 * static_cast<size_t>(n), -1);
    for (size_t j = 0; j < g.res.arcs.size(); ++j) {
        arc_at_point[static_cast<size_t>(g.res.arcs[j].end_a)] = static_cast<int>(j);
        arc_at_point[static_cast<size_t>(g.res.arcs[j].end_b)] = static_cast<int>(j);
    }
    std::vector<int> parent(g.res.arcs.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x)
            x = parent[static_cast<size_t>(x)] =
                parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
        return x;
    };
    for (int r = 0; r < n; ++r) {
        const int a = find(arc_at_point[static_cast<size_t>(r)]);
        const int c = find(arc_at_point[static_cast<size_t>(n + r)]);
        if (a != c) parent[static_cast<size_t>(c)] = a;
    }

    struct Pending {
        ClosureCircle circle;
        int tie;        // loop id + n, or smallest row
        int loop_id;    // -1 for through
        int root;       // DSU root for through
    };
    std::vector<Pending> pending;
    for (size_t j = 0; j < g.res.loops.size(); ++j) {
        ClosureCircle c;
        c.is_loop = true;
        c.loop_boundary = g.res.loops[j].boundary;
        c.min_crossing = c.loop_boundary.front();
        pending.push_back(Pending{std::move(c), n + static_cast<int>(j), static_cast<int>(j), -1});
    }
    std::map<int, size_t> circle_of_root;
    for (int r = 0; r < n; ++r) {
        const int root = find(arc_at_point[static_cast<size_t>(r)]);
        auto it = circle_of_root.find(root);
        if (it == circle_of_root.end()) {
            ClosureCircle c;
            c.is_loop = false;
            c.min_crossing = INT_MAX;
            pending.push_back(Pending{std::move(c), r, -1, root});
            it = circle_of_root.emplace(root, pending.size() - 1).first;
        }
        pending[it->second].circle.rows.push_back(r);
    }
    for (auto& [root, idx] : circle_of_root) {
        for (size_t j = 0; j < g.res.arcs.size(); ++j)
            if (find(static_cast<int>(j)) == root && !g.res.arcs[j].touched.empty())
                pending[idx].circle.min_crossing =
                    std::min(pending[idx].circle.min_crossing, g.res.arcs[j].touched.front());
    }

    std::vector<size_t> order(pending.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t c) {
        if (pending[a].circle.min_crossing != pending[c].circle.min_crossing)
            return pending[a].circle.min_crossing < pending[c].circle.min_crossing;
        return pending[a].tie < pending[c].tie;
    });

    g.closure.bars = mask;
    g.closure.h = KauffmanState{&b, mask}.barred_count();
    g.loop_circle.assign(g.res.loops.size(), -1);
    std::map<int, int> root_circle;
    for (size_t pos = 0; pos < order.size(); ++pos) {
        Pending& p = pending[order[pos]];
        if (p.loop_id >= 0)
            g.loop_circle[static_cast<size_t>(p.loop_id)] = static_cast<int>(pos);
        else
            root_circle[p.root] = static_cast<int>(pos);
        g.by_key.emplace(key_of(p.circle), static_cast<int>(pos));
        g.closure.circles.push_back(std::move(p.circle));
    }
    g.arc_circle.assign(g.res.arcs.size(), -1);
    for (size_t j = 0; j < g.res.arcs.size(); ++j)
        g.arc_circle[j] = root_circle.at(find(static_cast<int>(j)));
    return g;
}

}  // namespace

IntComplex close_and_build(const BraidWord& b) {
    const int t = b.length();
    if (t > 20) throw std::invalid_argument("close_and_build: cube too large (max 20 crossings)");
    const uint64_t nmask = uint64_t{1} << t;

    IntComplex cx;
    cx.braid = &b;

    std::vector<StateGeometry> geo;
    geo.reserve(nmask);
    for (uint64_t m = 0; m < nmask; ++m) geo.push_back(build_geometry(b, m));
    for (uint64_t m = 0; m < nmask; ++m) cx.states.push_back(geo[m].closure);

    // Deterministic basis: per h, states by ascending mask, marks ascending.
    cx.basis.assign(static_cast<size_t>(t) + 1, {});
    cx.basis_q.assign(static_cast<size_t>(t) + 1, {});
    std::vector<size_t> offset(nmask, 0);
    const int cplus = b.positive_crossings();
    const int cminus = b.negative_crossings();
    for (uint64_t m = 0; m < nmask; ++m) {
        const int h = cx.states[m].h - cminus;
        auto& level = cx.basis[static_cast<size_t>(h)];
        offset[m] = level.size();
        const int nc = static_cast<int>(cx.states[m].circles.size());
        for (uint64_t marks = 0; marks < (uint64_t{1} << nc); ++marks) {
            level.push_back(IntComplex::Basis{m, marks});
            const int deg = nc - 2 * static_cast<int>(__builtin_popcountll(marks));
            cx.basis_q[static_cast<size_t>(h)].push_back(deg + h + cplus - cminus);
        }
    }

    cx.diff.assign(static_cast<size_t>(t) + 1, {});
    for (int h = 0; h <= t; ++h)
        cx.diff[static_cast<size_t>(h)].assign(cx.basis[static_cast<size_t>(h)].size(), {});

    for (uint64_t m = 0; m < nmask; ++m) {
        const StateGeometry& G = geo[m];
        const int h = G.closure.h;
        const int ncirc = static_cast<int>(G.closure.circles.size());
        for (int c = 1; c <= t; ++c) {
            if (m & (uint64_t{1} << (c - 1))) continue;
            const uint64_t m2 = m | (uint64_t{1} << (c - 1));
            const StateGeometry& G2 = geo[m2];
            const int sign = __builtin_popcountll(m & ((uint64_t{1} << (c - 1)) - 1)) % 2 ? -1 : 1;
            const int i = b.gen(c);
            const CompRef pa = G.res.comp_at(c, i);
            const CompRef pb = G.res.comp_at(c, i + 1);
            const int A = G.circle_of(pa);
            const int B = G.circle_of(pb);

            // Untouched circles keep their keys verbatim across the saddle,
            // and keys are unique within a state (loops close at pairwise
            // distinct events, through-circles visit disjoint strand sets),
            // so matching them is exact.  The barred-state circles left
            // unmatched are precisely the saddle's products; note a pinched
            // loop need not close at the saddle position itself.
            std::vector<int> mapidx(static_cast<size_t>(ncirc), -1);
            std::vector<char> hit(G2.closure.circles.size(), 0);
            for (int j = 0; j < ncirc; ++j) {
                if (j == A || j == B) continue;
                auto it = G2.by_key.find(key_of(G.closure.circles[static_cast<size_t>(j)]));
                internal_check(it != G2.by_key.end(), "closure: untouched circle lost");
                mapidx[static_cast<size_t>(j)] = it->second;
                hit[static_cast<size_t>(it->second)] = 1;
            }
            internal_check(static_cast<int>(G2.closure.circles.size()) ==
                               (A != B ? ncirc - 1 : ncirc + 1),
                           "closure: circle count after saddle");
            int M = -1, P = -1, Q = -1;  // merge target / split products
            {
                std::vector<int> prod;
                for (size_t j = 0; j < G2.closure.circles.size(); ++j)
                    if (!hit[j]) prod.push_back(static_cast<int>(j));
                if (A != B) {
                    internal_check(prod.size() == 1, "closure: merged circle missing");
                    M = prod[0];
                } else {
                    // The comultiplication below is symmetric in the two
                    // products, so their order does not matter.
                    internal_check(prod.size() == 2, "closure: split products missing");
                    P = prod[0];
                    Q = prod[1];
                }
            }

            const int nc2 = static_cast<int>(G2.closure.circles.size());
            (void)nc2;
            for (uint64_t marks = 0; marks < (uint64_t{1} << ncirc); ++marks) {
                const size_t src = offset[m] + marks;
                auto& row = cx.diff[static_cast<size_t>(h)][src];
                uint64_t base = 0;
                for (int j = 0; j < ncirc; ++j)
                    if (mapidx[static_cast<size_t>(j)] >= 0 && (marks & (uint64_t{1} << j)))
                        base |= uint64_t{1} << mapidx[static_cast<size_t>(j)];
                auto push = [&](uint64_t tmarks) {
                    const size_t tgt = offset[m2] + tmarks;
                    row.emplace_back(static_cast<int>(tgt), sign);
                };
                if (A != B) {
                    const bool xa = marks & (uint64_t{1} << A);
                    const bool xb = marks & (uint64_t{1} << B);
                    if (xa && xb) continue;  // m(x ⊗ x) = 0
                    push(base | ((xa || xb) ? (uint64_t{1} << M) : 0));
                } else if (marks & (uint64_t{1} << A)) {
                    push(base | (uint64_t{1} << P) | (uint64_t{1} << Q));  // Δ(x) = x ⊗ x
                } else {
                    push(base | (uint64_t{1} << P));  // Δ(1) = 1 ⊗ x + x ⊗ 1
                    push(base | (uint64_t{1} << Q));
                }
            }
        }
    }

    // Gradings must be preserved; then d∘d = 0.
    for (int h = 0; h < t; ++h) {
        const auto& level = cx.diff[static_cast<size_t>(h)];
        for (size_t s = 0; s < level.size(); ++s)
            for (const auto& [tgt, coeff] : level[s]) {
                (void)coeff;
                internal_check(cx.basis_q[static_cast<size_t>(h)][s] ==
                                   cx.basis_q[static_cast<size_t>(h) + 1][static_cast<size_t>(tgt)],
                               "closure: differential must preserve q");
            }
    }
    for (int h = 0; h + 2 <= t; ++h) {
        const auto& d0 = cx.diff[static_cast<size_t>(h)];
        const auto& d1 = cx.diff[static_cast<size_t>(h) + 1];
        for (size_t s = 0; s < d0.size(); ++s) {
            std::vector<std::pair<int, int>> acc;
            for (const auto& [mid, c1] : d0[s])
                for (const auto& [tgt, c2] : d1[static_cast<size_t>(mid)])
                    acc.emplace_back(tgt, c1 * c2);
            std::sort(acc.begin(), acc.end());
            for (size_t j = 0; j < acc.size();) {
                int sum = 0;
                size_t e = j;
                while (e < acc.size() && acc[e].first == acc[j].first) sum += acc[e++].second;
                internal_check(sum == 0, "closure: d∘d must vanish");
                j = e;
            }
        }
    }
    return cx;
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

namespace {

struct SmithResult {
    int rank = 0;
    std::vector<BigInt> factors;  // nonzero invariant factors, divisibility chain
};

// Dense SNF on a small residual matrix.
SmithResult smith_dense(std::vector<std::vector<BigInt>> M) {
    SmithResult out;
    if (M.empty() || M[0].empty()) return out;
    const size_t R = M.size(), C = M[0].size();
    size_t k = 0;
    while (k < R && k < C) {
        // Find the entry of smallest absolute value in the trailing block.
        size_t pi = R, pj = C;
        for (size_t i = k; i < R; ++i)
            for (size_t j = k; j < C; ++j)
                if (M[i][j] != 0 &&
                    (pi == R || boost::multiprecision::abs(M[i][j]) <
                                    boost::multiprecision::abs(M[pi][pj])))
                    pi = i, pj = j;
        if (pi == R) break;
        std::swap(M[k], M[pi]);
        for (size_t i = 0; i < R; ++i) std::swap(M[i][k], M[i][pj]);

        bool again = false;
        for (size_t i = k + 1; i < R; ++i) {
            if (M[i][k] == 0) continue;
            const BigInt q = M[i][k] / M[k][k];
            for (size_t j = k; j < C; ++j) M[i][j] -= q * M[k][j];
            if (M[i][k] != 0) again = true;  // remainder smaller than pivot
        }
        for (size_t j = k + 1; j < C; ++j) {
            if (M[k][j] == 0) continue;
            const BigInt q = M[k][j] / M[k][k];
            for (size_t i = k; i < R; ++i) M[i][j] -= q * M[i][k];
            if (M[k][j] != 0) again = true;
        }
        if (again) continue;
        // Pivot must divide the rest of the block.
        bool divides = true;
        for (size_t i = k + 1; i < R && divides; ++i)
            for (size_t j = k + 1; j < C && divides; ++j)
                if (M[i][j] % M[k][k] != 0) {
                    for (size_t jj = k; jj < C; ++jj) M[k][jj] += M[i][jj];
                    divides = false;
                }
        if (!divides) continue;
        ++k;
    }
    for (size_t i = 0; i < k; ++i) out.factors.push_back(boost::multiprecision::abs(M[i][i]));
    out.rank = static_cast<int>(k);
    return out;
}

// Sparse integer matrix; eliminates with ±1 pivots first, then runs dense
// SNF on the residual.
SmithResult smith_sparse(int nrows, const std::vector<std::vector<std::pair<int, BigInt>>>& cols) {
    std::vector<std::map<int, BigInt>> col(cols.size());
    std::vector<std::set<int>> rowcols(static_cast<size_t>(nrows));
    for (size_t j = 0; j < cols.size(); ++j)
        for (const auto& [r, v] : cols[j])
            if (v != 0) {
                col[j][r] = v;
                rowcols[static_cast<size_t>(r)].insert(static_cast<int>(j));
            }

    int units = 0;
    std::vector<char> rowdone(static_cast<size_t>(nrows), 0), coldone(cols.size(), 0);
    for (;;) {
        // Cheapest ±1 pivot by fill-in estimate.
        int br = -1, bc = -1;
        long best = -1;
        for (size_t j = 0; j < col.size(); ++j) {
            if (coldone[j]) continue;
            for (const auto& [r, v] : col[j]) {
                if (v != 1 && v != -1) continue;
                const long score =
                    static_cast<long>(col[j].size() - 1) *
                    static_cast<long>(rowcols[static_cast<size_t>(r)].size() - 1);
                if (best < 0 || score < best) {
                    best = score;
                    br = r;
                    bc = static_cast<int>(j);
                }
                if (best == 0) break;
            }
            if (best == 0) break;
        }
        if (br < 0) break;

        const BigInt pv = col[static_cast<size_t>(bc)].at(br);
        const std::map<int, BigInt> pivot_col = col[static_cast<size_t>(bc)];
        const std::set<int> touched = rowcols[static_cast<size_t>(br)];
        for (int j : touched) {
            if (j == bc) continue;
            auto& cj = col[static_cast<size_t>(j)];
            const BigInt f = cj.at(br) * pv;  // pv is its own inverse
            for (const auto& [r, v] : pivot_col) {
                auto it = cj.find(r);
                const BigInt nv = (it == cj.end() ? BigInt(0) : it->second) - f * v;
                if (nv == 0) {
                    if (it != cj.end()) {
                        cj.erase(it);
                        rowcols[static_cast<size_t>(r)].erase(j);
                    }
                } else {
                    if (it == cj.end()) rowcols[static_cast<size_t>(r)].insert(j);
                    cj[r] = nv;
                }
            }
        }
        for (const auto& [r, v] : pivot_col) rowcols[static_cast<size_t>(r)].erase(bc);
        col[static_cast<size_t>(bc)].clear();
        rowdone[static_cast<size_t>(br)] = 1;
        coldone[static_cast<size_t>(bc)] = 1;
        rowcols[static_cast<size_t>(br)].clear();
        ++units;
    }

    // Residual rows/cols that still hold entries.
    std::map<int, size_t> rmap;
    std::vector<size_t> cused;
    for (size_t j = 0; j < col.size(); ++j) {
        if (coldone[j] || col[j].empty()) continue;
        cused.push_back(j);
        for (const auto& [r, v] : col[j]) {
            (void)v;
            rmap.emplace(r, 0);
        }
    }
    size_t ri = 0;
    for (auto& [r, idx] : rmap) idx = ri++;
    std::vector<std::vector<BigInt>> dense(rmap.size(), std::vector<BigInt>(cused.size(), 0));
    for (size_t jj = 0; jj < cused.size(); ++jj)
        for (const auto& [r, v] : col[cused[jj]]) dense[rmap.at(r)][jj] = v;

    SmithResult res = smith_dense(std::move(dense));
    SmithResult out;
    out.rank = units + res.rank;
    out.factors.assign(static_cast<size_t>(units), BigInt(1));
    out.factors.insert(out.factors.end(), res.factors.begin(), res.factors.end());
    return out;
}

}  // namespace

HomologySummary homology(const IntComplex& cx) {
    const int t = cx.crossings();
    HomologySummary out;

    // Per (h, q): rank and invariant factors of d^h restricted to the slice.
    std::map<std::pair<int, int>, SmithResult> dblock;
    std::map<std::pair<int, int>, int> dim;
    for (int h = 0; h <= t; ++h)
        for (size_t s = 0; s < cx.basis[static_cast<size_t>(h)].size(); ++s)
            ++dim[{h, cx.basis_q[static_cast<size_t>(h)][s]}];

    for (int h = 0; h < t; ++h) {
        // Group the level's sources by q.
        std::map<int, std::vector<size_t>> srcs;
        for (size_t s = 0; s < cx.basis[static_cast<size_t>(h)].size(); ++s)
            srcs[cx.basis_q[static_cast<size_t>(h)][s]].push_back(s);
        std::map<int, std::map<int, int>> tgt_index;  // q -> global -> local row
        for (size_t sidx = 0; sidx < cx.basis[static_cast<size_t>(h) + 1].size(); ++sidx) {
            const int q = cx.basis_q[static_cast<size_t>(h) + 1][sidx];
            auto& mapq = tgt_index[q];
            const int local = static_cast<int>(mapq.size());
            mapq.emplace(static_cast<int>(sidx), local);
        }
        for (auto& [q, list] : srcs) {
            std::vector<std::vector<std::pair<int, BigInt>>> colsq;
            colsq.reserve(list.size());
            auto& rows = tgt_index[q];
            for (size_t s : list) {
                std::vector<std::pair<int, BigInt>> cc;
                for (const auto& [tgt, coeff] : cx.diff[static_cast<size_t>(h)][s])
                    cc.emplace_back(rows.at(tgt), coeff);
                colsq.push_back(std::move(cc));
            }
            dblock[{h, q}] = smith_sparse(static_cast<int>(rows.size()), colsq);
        }
    }

    for (int h = 0; h <= t; ++h) {
        int total = 0;
        std::vector<BigInt> tors;
        for (const auto& [hq, n] : dim) {
            if (hq.first != h) continue;
            const int q = hq.second;
            const auto itd = dblock.find({h, q});
            const int rk = itd == dblock.end() ? 0 : itd->second.rank;
            const auto itp = dblock.find({h - 1, q});
            const int rkp = itp == dblock.end() ? 0 : itp->second.rank;
            const int free_dim = n - rk - rkp;
            internal_check(free_dim >= 0, "homology: negative rank");
            if (free_dim > 0) out.q_dim[{h, q}] = free_dim;
            total += free_dim;
            if (itp != dblock.end()) {
                std::vector<BigInt> here;
                for (const BigInt& f : itp->second.factors)
                    if (f > 1) here.push_back(f);
                if (!here.empty()) {
                    tors.insert(tors.end(), here.begin(), here.end());
                    std::sort(here.begin(), here.end());
                    out.q_torsion[{h, q}] = std::move(here);
                }
            }
        }
        if (total > 0) out.free_rank[h] = total;
        if (!tors.empty()) {
            std::sort(tors.begin(), tors.end());
            out.torsion[h] = std::move(tors);
        }
    }
    return out;
}

LaurentPoly euler_from_homology(const HomologySummary& h) {
    LaurentPoly p;
    for (const auto& [hq, d] : h.q_dim) {
        const BigInt term = (hq.first % 2 ? -1 : 1) * BigInt(d);
        p[hq.second] += term;
        if (p[hq.second] == 0) p.erase(hq.second);
    }
    return p;
}

LaurentPoly euler_state_sum_closed(const BraidWord& b) {
    const int t = b.length();
    if (t > 20) throw std::invalid_argument("euler_state_sum_closed: cube too large");
    LaurentPoly p;
    const int cplus = b.positive_crossings();
    const int cminus = b.negative_crossings();
    for (uint64_t m = 0; m < (uint64_t{1} << t); ++m) {
        const KauffmanState s{&b, m};
        const Resolution r = resolve(s);
        const int h = s.barred_count() - cminus;
        const int ncirc = static_cast<int>(r.loops.size()) + closure_cycles(r.through);
        // Σ over markings of q^{deg}: each circle contributes (q + q^{-1}).
        for (uint64_t marks = 0; marks < (uint64_t{1} << ncirc); ++marks) {
            const int deg = ncirc - 2 * static_cast<int>(__builtin_popcountll(marks));
            const int q = deg + h + cplus - cminus;
            p[q] += h % 2 ? -1 : 1;
            if (p[q] == 0) p.erase(q);
        }
    }
    return p;
}

std::map<std::vector<int>, LaurentPoly> euler_state_sum_open(
    const std::vector<EnhancedState>& states) {
    std::map<std::vector<int>, LaurentPoly> out;
    for (const EnhancedState& e : states) {
        const Resolution r = resolve(e.state);
        const Gradings g = gradings(e);
        LaurentPoly& p = out[r.through.pairing];
        p[g.q] += g.h % 2 ? -1 : 1;
        if (p[g.q] == 0) p.erase(g.q);
    }
    // Drop pairing classes whose sums cancelled entirely.
    for (auto it = out.begin(); it != out.end();)
        it = it->second.empty() ? out.erase(it) : std::next(it);
    return out;
}

std::map<std::vector<int>, LaurentPoly> euler_state_sum_open(const BraidWord& b) {
    return euler_state_sum_open(enumerate_enhanced_states(b));
}

}  // namespace khw
