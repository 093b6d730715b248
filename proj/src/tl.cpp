#include "khw/tl.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <queue>
#include <stdexcept>

namespace khw {

namespace {

void check_word(const TLWord& w) {
    if (w.strands < 1) throw std::invalid_argument("TLWord: strand count must be positive");
    for (int g : w.gens)
        if (g < 1 || g > w.strands - 1)
            throw std::invalid_argument("TLWord: generator index out of range");
}

}  // namespace

const char* move_label(MoveKind k) {
    switch (k) {
        case MoveKind::duplicate: return "a+";
        case MoveKind::contract: return "a-";
        case MoveKind::insert_above: return "b+1";
        case MoveKind::contract_above: return "b-1";
        case MoveKind::insert_below: return "b+-1";
        case MoveKind::contract_below: return "b--1";
        case MoveKind::commute: return "c";
    }
    return "?";
}

TLDiagram identity_diagram(int n) {
    if (n < 1) throw std::invalid_argument("identity_diagram: strand count must be positive");
    TLDiagram d;
    d.strands = n;
    d.pairing.resize(2 * static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        d.pairing[j] = n + j;
        d.pairing[n + j] = j;
    }
    return d;
}

TLDiagram compose_gen(const TLDiagram& d, int i) {
    const int n = d.strands;
    if (i < 1 || i > n - 1) throw std::invalid_argument("compose_gen: generator index out of range");
    TLDiagram out = d;
    const int u = n + i - 1;  // right endpoint at strand i
    const int v = n + i;      // right endpoint at strand i+1
    if (out.pairing[u] == v) {
        // The two strands being capped are already each other's ends: the cap
        // closes a loop, and the fresh cup restores the same two endpoints.
        out.loops += 1;
        return out;
    }
    const int a = out.pairing[u];
    const int b = out.pairing[v];
    out.pairing[a] = b;
    out.pairing[b] = a;
    out.pairing[u] = v;
    out.pairing[v] = u;
    return out;
}

TLDiagram evaluate(const TLWord& w) {
    check_word(w);
    TLDiagram d = identity_diagram(w.strands);
    for (int g : w.gens) d = compose_gen(d, g);
    return d;
}

bool move_applies(const TLWord& w, const TLMove& m) {
    const auto& g = w.gens;
    const int len = w.length();
    const int s = m.site - 1;  // 0-based
    const int i = m.index;
    if (s < 0 || i < 1 || i > w.strands - 1) return false;
    switch (m.kind) {
        case MoveKind::duplicate:
            return s < len && g[s] == i;
        case MoveKind::contract:
            return s + 1 < len && g[s] == i && g[s + 1] == i;
        case MoveKind::insert_above:
            return s < len && g[s] == i && i + 1 <= w.strands - 1;
        case MoveKind::contract_above:
            return s + 2 < len && g[s] == i && g[s + 1] == i + 1 && g[s + 2] == i;
        case MoveKind::insert_below:
            return s < len && g[s] == i && i - 1 >= 1;
        case MoveKind::contract_below:
            return s + 2 < len && g[s] == i && g[s + 1] == i - 1 && g[s + 2] == i;
        case MoveKind::commute:
            return s + 1 < len && g[s] == i && std::abs(g[s] - g[s + 1]) >= 2;
    }
    return false;
}

TLWord apply_move(const TLWord& w, const TLMove& m) {
    if (!move_applies(w, m))
        throw std::invalid_argument("apply_move: move does not match the word at its site");
    TLWord out = w;
    auto& g = out.gens;
    const auto s = static_cast<size_t>(m.site - 1);
    const int i = m.index;
    switch (m.kind) {
        case MoveKind::duplicate:
            g.insert(g.begin() + s + 1, i);
            break;
        case MoveKind::contract:
            g.erase(g.begin() + s + 1);
            break;
        case MoveKind::insert_above: {
            const int ins[2] = {i + 1, i};
            g.insert(g.begin() + s + 1, ins, ins + 2);
            break;
        }
        case MoveKind::insert_below: {
            const int ins[2] = {i - 1, i};
            g.insert(g.begin() + s + 1, ins, ins + 2);
            break;
        }
        case MoveKind::contract_above:
        case MoveKind::contract_below:
            g.erase(g.begin() + s + 1, g.begin() + s + 3);
            break;
        case MoveKind::commute:
            std::swap(g[s], g[s + 1]);
            break;
    }
    return out;
}

std::optional<JNFTuple> is_jnf(const TLWord& w) {
    check_word(w);
    JNFTuple t;
    const auto& g = w.gens;
    size_t p = 0;
    while (p < g.size()) {
        const int start = g[p];
        int end = start;
        ++p;
        while (p < g.size() && g[p] == end - 1) {
            end = g[p];
            ++p;
        }
        if (!t.starts.empty() && (start <= t.starts.back() || end <= t.ends.back()))
            return std::nullopt;
        t.starts.push_back(start);
        t.ends.push_back(end);
    }
    return t;
}

// ---------------------------------------------------------------------------
// Monotone normalization
// ---------------------------------------------------------------------------

namespace {

// Applies moves to the last word of a path, window-local: normalize(lo, hi)
// only ever touches letters in [lo, hi) of the current word.
struct Rewriter {
    TLPath path;
    int n;

    const std::vector<int>& g() const { return path.words.back().gens; }

    void emit(MoveKind kind, int site0, int index) {
        TLMove m{kind, site0 + 1, index};
        path.words.push_back(apply_move(path.words.back(), m));
        path.moves.push_back(m);
    }

    bool window_is_jnf(int lo, int hi) const {
        TLWord sub{n, std::vector<int>(g().begin() + lo, g().begin() + hi)};
        return is_jnf(sub).has_value();
    }

    // Exhaust adjacent contractions in [lo, hi), leftmost first.  Returns the
    // new window end.
    int greedy(int lo, int hi) {
        bool again = true;
        while (again) {
            again = false;
            for (int p = lo; p < hi; ++p) {
                if (p + 1 < hi && g()[p] == g()[p + 1]) {
                    emit(MoveKind::contract, p, g()[p]);
                    hi -= 1;
                    again = true;
                    break;
                }
                if (p + 2 < hi && g()[p] == g()[p + 2] && std::abs(g()[p + 1] - g()[p]) == 1) {
                    emit(g()[p + 1] == g()[p] + 1 ? MoveKind::contract_above
                                                  : MoveKind::contract_below,
                         p, g()[p]);
                    hi -= 2;
                    again = true;
                    break;
                }
            }
        }
        return hi;
    }

    // Bring the window [lo, hi) into normal form, monotonically.  Returns the
    // new window end.
    int normalize(int lo, int hi) {
        for (;;) {
            hi = greedy(lo, hi);
            if (hi - lo <= 1) return hi;
            if (window_is_jnf(lo, hi)) return hi;
            const int M = *std::max_element(g().begin() + lo, g().begin() + hi);

            // Normalize every maximal window block free of the top index.
            {
                const size_t before = path.moves.size();
                int p = lo;
                while (p < hi) {
                    if (g()[p] == M) {
                        ++p;
                        continue;
                    }
                    int q = p;
                    while (q < hi && g()[q] != M) ++q;
                    const int nq = normalize(p, q);
                    hi -= q - nq;
                    p = nq + 1;
                }
                if (path.moves.size() != before) continue;
            }

            // Commute each top-index letter rightward past smaller-by-two
            // letters, leftmost top letter first.
            {
                const size_t before = path.moves.size();
                bool moved = true;
                while (moved) {
                    moved = false;
                    for (int p = lo; p + 1 < hi; ++p) {
                        if (g()[p] == M && std::abs(g()[p + 1] - M) >= 2) {
                            emit(MoveKind::commute, p, M);
                            moved = true;
                            break;
                        }
                    }
                }
                if (path.moves.size() != before) continue;
            }

            std::vector<int> tops;
            for (int p = lo; p < hi; ++p)
                if (g()[p] == M) tops.push_back(p);

            if (tops.size() >= 2) {
                // Between the first two top letters: exactly one e_{M-1},
                // sitting right after the first top letter.  March the second
                // top letter left to it and collapse  M (M-1) M  ->  M.
                const int p1 = tops[0];
                int p2 = tops[1];
                assert(g()[p1 + 1] == M - 1);
                while (p2 > p1 + 2) {
                    emit(MoveKind::commute, p2 - 1, g()[p2 - 1]);
                    --p2;
                }
                emit(MoveKind::contract_below, p1, M);
                hi -= 2;
                continue;
            }

            // Single top letter: window is  U . (e_M e_{M-1} ... e_c)  with U
            // in normal form.  Not yet in normal form as a whole, so the last
            // run of U overlaps the tail: its end j meets the tail's e_{j+1}.
            // March U's last letter right, collapse  e_j e_{j+1} e_j -> e_j.
            {
                const int pM = tops[0];
                assert(pM > lo);  // otherwise window would be in normal form
                const int j = g()[pM - 1];
                int pos = pM - 1;
                while (g()[pos + 1] != j + 1) {
                    assert(pos + 1 < hi && g()[pos + 1] >= j + 2);
                    emit(MoveKind::commute, pos, j);
                    ++pos;
                }
                emit(MoveKind::contract_above, pos, j);
                hi -= 2;
                continue;
            }
        }
    }
};

}  // namespace

TLPath reduce_to_jnf(const TLWord& w) {
    check_word(w);
    Rewriter r{TLPath{{w}, {}}, w.strands};
    r.normalize(0, w.length());
    assert(is_jnf(r.path.words.back()).has_value());
    return std::move(r.path);
}

// ---------------------------------------------------------------------------
// Restricted breadth-first reduction
// ---------------------------------------------------------------------------

std::optional<TLPath> d_move_reduce(const TLWord& w) {
    check_word(w);
    const int top = w.strands - 1;

    auto moves_of = [&](const TLWord& u) {
        std::vector<TLMove> out;
        for (int site = 1; site <= u.length(); ++site) {
            const int i = u.gens[static_cast<size_t>(site - 1)];
            TLMove m;
            m.site = site;
            m.index = i;
            m.kind = MoveKind::contract;  // D1, top index only
            if (i == top && move_applies(u, m)) out.push_back(m);
            m.kind = MoveKind::commute;  // D2
            if (move_applies(u, m)) out.push_back(m);
            m.kind = MoveKind::contract_below;  // D3, indices 2..top
            if (i >= 2 && move_applies(u, m)) out.push_back(m);
        }
        return out;
    };

    if (is_jnf(w)) return TLPath{{w}, {}};

    std::map<std::vector<int>, std::pair<std::vector<int>, TLMove>> parent;
    std::queue<TLWord> queue;
    parent.emplace(w.gens, std::make_pair(std::vector<int>{}, TLMove{}));
    queue.push(w);

    auto unwind = [&](TLWord final_word) {
        std::vector<TLWord> words{final_word};
        std::vector<TLMove> moves;
        std::vector<int> cur = final_word.gens;
        while (true) {
            const auto& [prev, mv] = parent.at(cur);
            if (cur == w.gens) break;
            moves.push_back(mv);
            words.push_back(TLWord{w.strands, prev});
            cur = prev;
        }
        std::reverse(words.begin(), words.end());
        std::reverse(moves.begin(), moves.end());
        return TLPath{std::move(words), std::move(moves)};
    };

    while (!queue.empty()) {
        TLWord u = queue.front();
        queue.pop();
        for (const TLMove& m : moves_of(u)) {
            TLWord v = apply_move(u, m);
            if (parent.count(v.gens)) continue;
            parent.emplace(v.gens, std::make_pair(u.gens, m));
            if (is_jnf(v)) return unwind(v);
            queue.push(v);
        }
    }
    return std::nullopt;
}

std::vector<TLWord> enumerate_jnf(int n, int h) {
    if (n < 1) throw std::invalid_argument("enumerate_jnf: strand count must be positive");
    if (h < 0) throw std::invalid_argument("enumerate_jnf: negative length");
    std::vector<TLWord> out;
    std::vector<int> acc;
    // Choose runs (start i, end j) with both coordinates strictly increasing
    // run over run and j <= i; letters i, i-1, ..., j.
    auto rec = [&](auto&& self, int prev_i, int prev_j, int remaining) -> void {
        if (remaining == 0) {
            out.push_back(TLWord{n, acc});
            return;
        }
        for (int i = prev_i + 1; i <= n - 1; ++i) {
            for (int j = prev_j + 1; j <= i; ++j) {
                const int len = i - j + 1;
                if (len > remaining) continue;
                for (int x = i; x >= j; --x) acc.push_back(x);
                self(self, i, j, remaining - len);
                acc.resize(acc.size() - static_cast<size_t>(len));
            }
        }
    };
    rec(rec, 0, 0, h);
    std::sort(out.begin(), out.end(),
              [](const TLWord& a, const TLWord& b) { return a.gens < b.gens; });
    return out;
}

BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (int t = 1; t <= k; ++t) {
        r *= n - k + t;
        r /= t;
    }
    return r;
}

BigInt catalan(int n) {
    if (n < 0) throw std::invalid_argument("catalan: negative index");
    return binomial(2 * n, n) / (n + 1);
}

std::string to_string(const TLWord& w) {
    std::string out;
    for (size_t p = 0; p < w.gens.size(); ++p) {
        if (p) out += ' ';
        out += std::to_string(w.gens[p]);
    }
    return out;
}

std::string to_string(const TLDiagram& d) {
    std::string out;
    std::vector<bool> seen(d.pairing.size(), false);
    for (size_t p = 0; p < d.pairing.size(); ++p) {
        if (seen[p]) continue;
        seen[p] = true;
        seen[static_cast<size_t>(d.pairing[p])] = true;
        out += '(' + std::to_string(p) + '-' + std::to_string(d.pairing[p]) + ')';
    }
    out += ":loops=" + std::to_string(d.loops);
    return out;
}

}  // namespace khw
