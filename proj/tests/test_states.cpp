#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "khw/braidword.hpp"
#include "khw/states.hpp"
#include "khw/tl.hpp"

using namespace khw;

namespace {

EnhancedState enhance(const BraidWord& b, const std::string& bars, const std::string& marks) {
    EnhancedState e;
    e.state = state_from_string(b, bars);
    for (char c : marks) e.marks.push_back(c == '+' ? +1 : -1);
    return e;
}

}  // namespace

TEST_CASE("state construction and rendering") {
    const BraidWord b = make_torus_braid(2, 3);
    const KauffmanState s = state_from_string(b, "011");
    CHECK(s.bars == 0b110);
    CHECK_FALSE(s.barred(1));
    CHECK(s.barred(2));
    CHECK(s.barred(3));
    CHECK(s.barred_count() == 2);
    CHECK(s.bars_string() == "011");
    CHECK(make_state(b, 5).bars_string() == "101");

    CHECK_THROWS_AS(state_from_string(b, "01"), std::invalid_argument);
    CHECK_THROWS_AS(state_from_string(b, "012"), std::invalid_argument);
    CHECK_THROWS_AS(make_state(b, 8), std::invalid_argument);
}

TEST_CASE("resolutions carry turnback words, loops, and arcs") {
    SUBCASE("two-strand square becomes one loop") {
        const BraidWord b = make_torus_braid(2, 2);
        const Resolution r = resolve(state_from_string(b, "11"));
        CHECK(r.word.gens == std::vector<int>{1, 1});
        CHECK(r.origin == std::vector<int>{1, 2});
        REQUIRE(r.loops.size() == 1);
        CHECK(r.loops[0].boundary == std::vector<int>{1, 2});
        CHECK(r.loops[0].left() == 1);
        CHECK(r.loops[0].right() == 2);
        REQUIRE(r.arcs.size() == 2);
        CHECK(r.arcs[0].end_a == 0);
        CHECK(r.arcs[0].end_b == 1);
    }

    SUBCASE("alternating bars on three strands close a chain of loops") {
        const BraidWord b = make_torus_braid(3, 3);
        const Resolution r = resolve(state_from_string(b, "101010"));
        CHECK(r.word.gens == std::vector<int>{1, 1, 1});
        REQUIRE(r.loops.size() == 2);
        CHECK(r.loops[0].boundary == std::vector<int>{1, 3});
        CHECK(r.loops[1].boundary == std::vector<int>{3, 5});
    }

    SUBCASE("a diverted window closes no loop") {
        const BraidWord b = make_torus_braid(3, 3);
        const Resolution r = resolve(state_from_string(b, "111000"));
        CHECK(r.word.gens == std::vector<int>{1, 2, 1});
        CHECK(r.loops.empty());
    }

    SUBCASE("empty state resolves to through strands") {
        const BraidWord b = make_torus_braid(4, 2);
        const Resolution r = resolve(state_from_string(b, "000000"));
        CHECK(r.word.gens.empty());
        CHECK(r.loops.empty());
        CHECK(r.arcs.size() == 4);
        CHECK(r.through.same_matching(identity_diagram(4)));
    }
}

TEST_CASE("resolution invariants against the diagram monoid") {
    // The through matching must equal the evaluated turnback word, and the
    // word's collected loop count must equal the loop list.
    for (auto [n, k] : {std::pair{2, 4}, std::pair{3, 3}, std::pair{4, 2}}) {
        const BraidWord b = make_torus_braid(n, k);
        for (const KauffmanState& s : enumerate_states(b)) {
            const Resolution r = resolve(s);
            const TLDiagram d = evaluate(r.word);
            CHECK(r.through.same_matching(d));
            CHECK(static_cast<size_t>(d.loops) == r.loops.size());
            CHECK(r.arcs.size() == static_cast<size_t>(n));

            // Loop boundaries are sorted, unique, and close in increasing order.
            int prev_right = 0;
            for (const Loop& loop : r.loops) {
                CHECK(std::is_sorted(loop.boundary.begin(), loop.boundary.end()));
                CHECK(std::adjacent_find(loop.boundary.begin(), loop.boundary.end()) ==
                      loop.boundary.end());
                CHECK(loop.right() > prev_right);
                prev_right = loop.right();
                for (int c : loop.boundary) CHECK(s.barred(c));
            }
            for (const Arc& a : r.arcs) {
                CHECK(std::is_sorted(a.touched.begin(), a.touched.end()));
                CHECK(std::adjacent_find(a.touched.begin(), a.touched.end()) == a.touched.end());
            }
        }
    }
}

TEST_CASE("state enumeration is grouped by degree then bars") {
    const BraidWord b = make_torus_braid(2, 2);
    const auto states = enumerate_states(b);
    REQUIRE(states.size() == 4);
    CHECK(states[0].bars_string() == "00");
    CHECK(states[1].bars_string() == "01");
    CHECK(states[2].bars_string() == "10");
    CHECK(states[3].bars_string() == "11");

    const auto enhanced = enumerate_enhanced_states(b);
    REQUIRE(enhanced.size() == 5);  // 11 has one loop, two markings
    CHECK(enhanced[3].state.bars_string() == "11");
    CHECK(enhanced[3].marks_string() == "+");
    CHECK(enhanced[4].marks_string() == "-");
}

TEST_CASE("marking index order puts + first") {
    CHECK(marks_from_index(0, 2) == std::vector<int8_t>{+1, +1});
    CHECK(marks_from_index(1, 2) == std::vector<int8_t>{+1, -1});
    CHECK(marks_from_index(2, 2) == std::vector<int8_t>{-1, +1});
    CHECK(marks_from_index(3, 2) == std::vector<int8_t>{-1, -1});
    CHECK(marks_from_index(0, 0).empty());
    for (uint64_t m = 0; m + 1 < 8; ++m)
        CHECK(marks_less(marks_from_index(m, 3), marks_from_index(m + 1, 3)));
}

TEST_CASE("gradings under both conventions") {
    const BraidWord b = make_torus_braid(2, 3);

    const Gradings g0 = gradings(enhance(b, "000", ""));
    CHECK(g0.h == 0);
    CHECK(g0.deg == 0);
    CHECK(g0.q == 3);  // deg + h + positive crossings

    const Gradings g2 = gradings(enhance(b, "011", "+"));
    CHECK(g2.h == 2);
    CHECK(g2.deg == 1);
    CHECK(g2.q == 6);

    const Gradings g3 = gradings(enhance(b, "111", "+-"));
    CHECK(g3.h == 3);
    CHECK(g3.deg == 0);
    CHECK(g3.q == 6);

    // With no negative crossings the two printed conventions coincide.
    for (const EnhancedState& e : enumerate_enhanced_states(b)) {
        const Gradings printed = gradings(e, GradingConvention::printed);
        const Gradings shifted = gradings(e, GradingConvention::module_shift);
        CHECK(printed.h == shifted.h);
        CHECK(printed.q == shifted.q);
    }
}

TEST_CASE("differential of an arc pair sheds a loop with both coefficient classes") {
    const BraidWord b = make_torus_braid(2, 2);
    const auto comps = differential_components(enhance(b, "10", ""));
    REQUIRE(comps.size() == 2);
    for (const DiffComponent& d : comps) {
        CHECK(d.crossing == 2);
        CHECK(d.kind == MergeSplitKind::split_arc_off_loop);
        CHECK(d.target.state.bars_string() == "11");
        REQUIRE(d.target.marks.size() == 1);
    }
    CHECK(comps[0].target.marks[0] == +1);
    CHECK(comps[0].coeff == CoeffClass::dotted);
    CHECK(comps[1].target.marks[0] == -1);
    CHECK(comps[1].coeff == CoeffClass::unit);
}

TEST_CASE("a shed loop need not close at the saddle crossing") {
    // Barring crossing 1 of 010 creates the loop bounded by crossings 1 and 2:
    // the loop's closing crossing (2) is not the saddle (1).
    const BraidWord b = make_torus_braid(2, 3);
    const auto comps = differential_components(enhance(b, "010", ""));
    REQUIRE(comps.size() == 4);  // two coefficient classes at each of crossings 1, 3
    bool saw_early = false;
    for (const DiffComponent& d : comps)
        if (d.crossing == 1) {
            CHECK(d.kind == MergeSplitKind::split_arc_off_loop);
            const Resolution r = resolve(d.target.state);
            REQUIRE(r.loops.size() == 1);
            CHECK(r.loops[0].boundary == std::vector<int>{1, 2});
            saw_early = true;
        }
    CHECK(saw_early);
}

TEST_CASE("splitting a loop follows the comultiplication marks") {
    const BraidWord b = make_torus_braid(2, 3);

    const auto from_plus = differential_components(enhance(b, "101", "+"));
    REQUIRE(from_plus.size() == 2);
    std::multiset<std::string> plus_targets;
    for (const DiffComponent& d : from_plus) {
        CHECK(d.crossing == 2);
        CHECK(d.kind == MergeSplitKind::split_loop);
        CHECK(d.coeff == CoeffClass::unit);
        plus_targets.insert(d.target.marks_string());
    }
    CHECK(plus_targets == std::multiset<std::string>{"+-", "-+"});

    const auto from_minus = differential_components(enhance(b, "101", "-"));
    REQUIRE(from_minus.size() == 1);
    CHECK(from_minus[0].target.marks_string() == "--");
    CHECK(from_minus[0].coeff == CoeffClass::unit);
}

TEST_CASE("merging two loops follows the multiplication marks") {
    // Loops (3,6) and (1,7) sit in adjacent strand bands; crossing 5 joins them.
    const BraidWord b = make_torus_braid(4, 3);
    const Resolution r = resolve(state_from_string(b, "101001100"));
    REQUIRE(r.loops.size() == 2);
    CHECK(r.loops[0].boundary == std::vector<int>{3, 6});
    CHECK(r.loops[1].boundary == std::vector<int>{1, 7});

    auto merge_at_5 = [&](const std::string& marks) {
        std::vector<DiffComponent> hits;
        for (auto& d : differential_components(enhance(b, "101001100", marks)))
            if (d.crossing == 5) hits.push_back(d);
        return hits;
    };

    for (const char* marks : {"++", "+-", "-+"}) {
        const auto hits = merge_at_5(marks);
        REQUIRE(hits.size() == 1);
        CHECK(hits[0].kind == MergeSplitKind::merge_loops);
        CHECK(hits[0].coeff == CoeffClass::unit);
        REQUIRE(hits[0].target.marks.size() == 1);
        const int8_t expected = (std::string(marks) == "++") ? +1 : -1;
        CHECK(hits[0].target.marks[0] == expected);
    }
    CHECK(merge_at_5("--").empty());  // x·x = 0
}

TEST_CASE("absorbing a loop into an arc keeps or dots by the loop's mark") {
    const BraidWord b = make_torus_braid(3, 2);
    const std::string bars = "1010";  // loop (1,3); crossing 2 merges it into an arc

    const auto plus = differential_components(enhance(b, bars, "+"));
    const auto at = [](const std::vector<DiffComponent>& v, int crossing) {
        std::vector<DiffComponent> out;
        for (const auto& d : v)
            if (d.crossing == crossing) out.push_back(d);
        return out;
    };

    const auto plus_absorb = at(plus, 2);
    REQUIRE(plus_absorb.size() == 1);
    CHECK(plus_absorb[0].kind == MergeSplitKind::merge_loop_into_arc);
    CHECK(plus_absorb[0].coeff == CoeffClass::unit);
    CHECK(plus_absorb[0].target.marks.empty());

    const auto minus_absorb = at(differential_components(enhance(b, bars, "-")), 2);
    REQUIRE(minus_absorb.size() == 1);
    CHECK(minus_absorb[0].coeff == CoeffClass::dotted);
}

TEST_CASE("reconnecting two arcs keeps the loop set") {
    const BraidWord b = make_torus_braid(3, 2);
    const auto comps = differential_components(enhance(b, "1000", ""));
    bool saw_reconnect = false;
    for (const DiffComponent& d : comps)
        if (d.kind == MergeSplitKind::arc_arc) {
            CHECK(d.coeff == CoeffClass::unit);
            CHECK(resolve(d.target.state).loops.empty());
            saw_reconnect = true;
        }
    CHECK(saw_reconnect);
}

TEST_CASE("grading discipline across every differential component") {
    for (auto [n, k] : {std::pair{2, 4}, std::pair{3, 3}, std::pair{4, 2}}) {
        const BraidWord b = make_torus_braid(n, k);
        std::set<MergeSplitKind> kinds_seen;
        for (const EnhancedState& e : enumerate_enhanced_states(b)) {
            const Gradings gs = gradings(e);
            for (const DiffComponent& d : differential_components(e)) {
                const Gradings gt = gradings(d.target);
                CHECK(gt.h == gs.h + 1);
                const int expected_dq = d.coeff == CoeffClass::dotted             ? 2
                                        : d.kind == MergeSplitKind::arc_arc ? 1
                                                                            : 0;
                CHECK(gt.q - gs.q == expected_dq);
                kinds_seen.insert(d.kind);
            }
        }
        CHECK(kinds_seen.count(MergeSplitKind::split_arc_off_loop) == 1);
        CHECK(kinds_seen.count(MergeSplitKind::arc_arc) == 1);
        CHECK(kinds_seen.count(MergeSplitKind::merge_loop_into_arc) ==
              static_cast<size_t>(n >= 3));
    }
}

TEST_CASE("components are ordered by crossing then target marks") {
    const BraidWord b = make_torus_braid(2, 3);
    for (const EnhancedState& e : enumerate_enhanced_states(b)) {
        const auto comps = differential_components(e);
        for (size_t j = 1; j < comps.size(); ++j) {
            CHECK(comps[j - 1].crossing <= comps[j].crossing);
            if (comps[j - 1].crossing == comps[j].crossing)
                CHECK(marks_less(comps[j - 1].target.marks, comps[j].target.marks));
        }
    }
}

TEST_CASE("enhanced state identity helpers") {
    const BraidWord b = make_torus_braid(2, 2);
    const EnhancedState plus = enhance(b, "11", "+");
    const EnhancedState minus = enhance(b, "11", "-");
    CHECK(same_enhanced(plus, plus));
    CHECK_FALSE(same_enhanced(plus, minus));
    CHECK(enhanced_less(plus, minus));
    CHECK_FALSE(enhanced_less(minus, plus));
    CHECK(enhanced_less(enhance(b, "01", ""), plus));
}

TEST_CASE("label strings") {
    CHECK(std::string(kind_label(MergeSplitKind::merge_loops)) == "merge_loops");
    CHECK(std::string(kind_label(MergeSplitKind::arc_arc)) == "arc_arc");
}
