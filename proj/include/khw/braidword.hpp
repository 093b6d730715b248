#ifndef KHW_BRAIDWORD_HPP
#define KHW_BRAIDWORD_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace khw {

// A positive braid word on `strands` strands.  letters[p-1] is the generator
// index (1-based, in [1, strands-1]) of crossing p; crossings are numbered
// 1..length() left to right.  All crossings are positive, so the count of
// negative crossings is identically zero throughout.
struct BraidWord {
    int strands = 0;
    std::vector<int> letters;

    int length() const { return static_cast<int>(letters.size()); }
    // Generator index of crossing p (1-based).
    int gen(int p) const { return letters[static_cast<size_t>(p - 1)]; }
    int positive_crossings() const { return length(); }
    int negative_crossings() const { return 0; }

    bool operator==(const BraidWord&) const = default;
};

// The braid (s1 s2 ... s_{n-1})^k on n strands: k sweeps of all generators in
// ascending order.  Requires n >= 2 and k >= 1.
BraidWord make_torus_braid(int n, int k);

// True if `b` equals k ascending sweeps for some k >= 0 (the empty word, the
// identity braid, counts as the zeroth power).
bool is_torus_power(const BraidWord& b);

// Grid coordinates of crossing p: {horizontal slot, vertical strand pair},
// i.e. {p, gen(p)}.  1-based; throws std::invalid_argument if out of range.
std::pair<int, int> crossing_position(const BraidWord& b, int p);

// "s1 s2 s1" style rendering, used by logs and error messages.
std::string to_string(const BraidWord& b);

}  // namespace khw

#endif
