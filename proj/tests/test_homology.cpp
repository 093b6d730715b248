#include <map>
#include <utility>
#include <vector>

#include "doctest.h"
#include "khw/braidword.hpp"
#include "khw/homology.hpp"
#include "khw/states.hpp"
#include "khw/tl.hpp"
#include "khw/whittler.hpp"

using namespace khw;

namespace {

int rank_at(const HomologySummary& s, int h) {
    const auto it = s.free_rank.find(h);
    return it == s.free_rank.end() ? 0 : it->second;
}

int qdim_at(const HomologySummary& s, int h, int q) {
    const auto it = s.q_dim.find({h, q});
    return it == s.q_dim.end() ? 0 : it->second;
}

std::vector<BigInt> torsion_at(const HomologySummary& s, int h) {
    const auto it = s.torsion.find(h);
    return it == s.torsion.end() ? std::vector<BigInt>{} : it->second;
}

}  // namespace

TEST_CASE("closure circle counting") {
    CHECK(closure_cycles(identity_diagram(2)) == 2);
    CHECK(closure_cycles(identity_diagram(5)) == 5);
    CHECK(closure_cycles(evaluate(TLWord{2, {1}})) == 1);
    CHECK(closure_cycles(evaluate(TLWord{4, {1}})) == 3);
    CHECK(closure_cycles(evaluate(TLWord{3, {1, 2}})) == 1);
    CHECK(closure_cycles(evaluate(TLWord{4, {2, 1, 3, 2}})) == 2);
}

TEST_CASE("cube dimensions count circle markings") {
    for (auto [n, k] : {std::pair{2, 3}, std::pair{3, 2}, std::pair{4, 2}}) {
        const BraidWord b = make_torus_braid(n, k);
        const IntComplex c = close_and_build(b);
        REQUIRE(c.states.size() == (size_t{1} << b.length()));

        std::map<int, long long> expected;
        for (const KauffmanState& s : enumerate_states(b)) {
            const Resolution r = resolve(s);
            const int circles =
                static_cast<int>(r.loops.size()) + closure_cycles(r.through);
            expected[s.barred_count()] += 1LL << circles;
        }
        for (int h = 0; h <= b.length(); ++h) {
            CHECK(static_cast<long long>(c.basis[static_cast<size_t>(h)].size()) ==
                  expected[h]);
            CHECK(c.basis_q[static_cast<size_t>(h)].size() ==
                  c.basis[static_cast<size_t>(h)].size());
        }
    }
}

TEST_CASE("cube differential squares to zero and preserves q") {
    const BraidWord b = make_torus_braid(2, 3);
    const IntComplex c = close_and_build(b);  // internally asserts d∘d = 0

    for (size_t h = 0; h + 1 < c.diff.size(); ++h) {
        const auto& layer = c.diff[h];
        REQUIRE(layer.size() == c.basis[h].size());
        for (size_t src = 0; src < layer.size(); ++src)
            for (const auto& [dst, coeff] : layer[src]) {
                CHECK((coeff == 1 || coeff == -1));
                REQUIRE(static_cast<size_t>(dst) < c.basis[h + 1].size());
                CHECK(c.basis_q[h + 1][static_cast<size_t>(dst)] == c.basis_q[h][src]);
            }
    }

    // Explicit d∘d = 0 over the integers.
    for (size_t h = 0; h + 2 < c.diff.size(); ++h)
        for (size_t src = 0; src < c.diff[h].size(); ++src) {
            std::map<int, long long> square;
            for (const auto& [mid, c1] : c.diff[h][src])
                for (const auto& [dst, c2] : c.diff[h + 1][static_cast<size_t>(mid)])
                    square[dst] += static_cast<long long>(c1) * c2;
            for (const auto& [dst, total] : square) CHECK(total == 0);
        }
}

TEST_CASE("one-crossing closure has the two-dimensional degree-zero homology") {
    const HomologySummary s = homology(close_and_build(make_torus_braid(2, 1)));
    CHECK(rank_at(s, 0) == 2);
    CHECK(rank_at(s, 1) == 0);
    CHECK(qdim_at(s, 0, -1) == 1);
    CHECK(qdim_at(s, 0, 1) == 1);
    CHECK(torsion_at(s, 0).empty());
    CHECK(torsion_at(s, 1).empty());
}

TEST_CASE("two-crossing closure: two pairs of free generators") {
    const HomologySummary s = homology(close_and_build(make_torus_braid(2, 2)));
    CHECK(rank_at(s, 0) == 2);
    CHECK(rank_at(s, 1) == 0);
    CHECK(rank_at(s, 2) == 2);
    CHECK(qdim_at(s, 0, 0) == 1);
    CHECK(qdim_at(s, 0, 2) == 1);
    CHECK(qdim_at(s, 2, 4) == 1);
    CHECK(qdim_at(s, 2, 6) == 1);
    for (int h = 0; h <= 2; ++h) CHECK(torsion_at(s, h).empty());
}

TEST_CASE("three-crossing closure: free part plus one order-two class") {
    const HomologySummary s = homology(close_and_build(make_torus_braid(2, 3)));
    CHECK(rank_at(s, 0) == 2);
    CHECK(rank_at(s, 1) == 0);
    CHECK(rank_at(s, 2) == 1);
    CHECK(rank_at(s, 3) == 1);
    CHECK(qdim_at(s, 0, 1) == 1);
    CHECK(qdim_at(s, 0, 3) == 1);
    CHECK(qdim_at(s, 2, 5) == 1);
    CHECK(qdim_at(s, 3, 9) == 1);
    REQUIRE(torsion_at(s, 3).size() == 1);
    CHECK(torsion_at(s, 3)[0] == BigInt(2));
    const auto qt = s.q_torsion.find({3, 7});
    REQUIRE(qt != s.q_torsion.end());
    REQUIRE(qt->second.size() == 1);
    CHECK(qt->second[0] == BigInt(2));
}

TEST_CASE("graded Euler characteristic: homology agrees with the state sum") {
    for (auto [n, k] : {std::pair{2, 1}, std::pair{2, 4}, std::pair{3, 2}, std::pair{3, 3},
                        std::pair{4, 2}}) {
        const BraidWord b = make_torus_braid(n, k);
        const LaurentPoly from_states = euler_state_sum_closed(b);
        const LaurentPoly from_homology = euler_from_homology(homology(close_and_build(b)));
        CHECK(from_states == from_homology);
    }
}

TEST_CASE("open state sums are invariant under whittling, class by class") {
    const auto normalized = [](std::map<std::vector<int>, LaurentPoly> classes) {
        for (auto it = classes.begin(); it != classes.end();) {
            for (auto p = it->second.begin(); p != it->second.end();)
                p = p->second == 0 ? it->second.erase(p) : std::next(p);
            it = it->second.empty() ? classes.erase(it) : std::next(it);
        }
        return classes;
    };
    for (auto [n, k] : {std::pair{2, 4}, std::pair{3, 2}, std::pair{3, 3}}) {
        const BraidWord b = make_torus_braid(n, k);
        const auto full = normalized(euler_state_sum_open(b));
        const auto reduced = normalized(euler_state_sum_open(whittle(b).survivors));
        CHECK(full == reduced);
    }
}

TEST_CASE("open state sums split the closed sum by pairing class") {
    const BraidWord b = make_torus_braid(2, 2);
    const auto classes = euler_state_sum_open(b);
    CHECK(classes.size() == 2);  // identity pairing and the turnback pairing

    // Substituting each class's closure circle count reconstitutes the closed
    // sum: every class poly times (q + q^-1)^(cycles) summed over classes.
    LaurentPoly rebuilt;
    for (const auto& [pairing, poly] : classes) {
        TLDiagram d;
        d.strands = b.strands;
        d.pairing = pairing;
        const int cycles = closure_cycles(d);
        LaurentPoly expanded = poly;
        for (int c = 0; c < cycles; ++c) {
            LaurentPoly next;
            for (const auto& [e, coeff] : expanded) {
                next[e + 1] += coeff;
                next[e - 1] += coeff;
            }
            expanded = std::move(next);
        }
        for (const auto& [e, coeff] : expanded) rebuilt[e] += coeff;
    }
    LaurentPoly closed = euler_state_sum_closed(b);
    // Trim zero coefficients before comparing.
    for (auto it = rebuilt.begin(); it != rebuilt.end();)
        it = it->second == 0 ? rebuilt.erase(it) : std::next(it);
    for (auto it = closed.begin(); it != closed.end();)
        it = it->second == 0 ? closed.erase(it) : std::next(it);
    CHECK(rebuilt == closed);
}
