#include "khw/braidword.hpp"

#include <stdexcept>

namespace khw {

BraidWord make_torus_braid(int n, int k) {
    if (n < 2) throw std::invalid_argument("make_torus_braid: need at least 2 strands");
    if (k < 1) throw std::invalid_argument("make_torus_braid: need at least one twist");
    BraidWord b;
    b.strands = n;
    b.letters.reserve(static_cast<size_t>(k) * (n - 1));
    for (int sweep = 0; sweep < k; ++sweep)
        for (int i = 1; i <= n - 1; ++i) b.letters.push_back(i);
    return b;
}

bool is_torus_power(const BraidWord& b) {
    if (b.strands < 2) return false;
    const int period = b.strands - 1;
    if (b.length() % period != 0) return false;
    for (int p = 1; p <= b.length(); ++p)
        if (b.gen(p) != (p - 1) % period + 1) return false;
    return true;
}

std::pair<int, int> crossing_position(const BraidWord& b, int p) {
    if (p < 1 || p > b.length())
        throw std::invalid_argument("crossing_position: crossing index out of range");
    return {p, b.gen(p)};
}

std::string to_string(const BraidWord& b) {
    std::string out;
    for (int p = 1; p <= b.length(); ++p) {
        if (p > 1) out += ' ';
        out += 's' + std::to_string(b.gen(p));
    }
    return out;
}

}  // namespace khw
