#include "khw/enumeration.hpp"

#include <stdexcept>

namespace khw {

BigInt ordered_partitions(int n, int k) {
    if (n < 0 || k < 0) throw std::invalid_argument("ordered_partitions: negative argument");
    if (n == 0) return 1;  // p(0, m) = 1 by convention
    if (k == 0) return 0;
    return binomial(n - 1, k - 1);
}

BigInt formula_N(int n, int h) {
    if (n < 2 || h < 0) throw std::invalid_argument("formula_N: need n >= 2, h >= 0");
    BigInt total = 0;
    for (int k = 0; k <= h; ++k) total += binomial(n - 1, k) * ordered_partitions(h, k);
    return total;
}

namespace {

BigInt bound_with(int n, int h, const BigInt& two_block_term) {
    BigInt total = 0;
    for (int m = 0; m <= h; ++m) total += ordered_partitions(h, m);
    total += formula_N(n, h);
    total += (two_block_term + 2) * catalan(n);
    return total;
}

}  // namespace

BigInt count_bound(int n, int k, int h) {
    if (n < 2 || k < 1 || h < 0) throw std::invalid_argument("count_bound: need n >= 2, k >= 1, h >= 0");
    return bound_with(n, h, ordered_partitions(n, 2));
}

BigInt count_bound_alt(int n, int k, int h) {
    if (n < 2 || k < 1 || h < 0) throw std::invalid_argument("count_bound: need n >= 2, k >= 1, h >= 0");
    return bound_with(n, h, ordered_partitions(k, 2));
}

std::optional<SurvivorForm> classify_survivor(const TLWord& w) {
    const int n = w.strands;
    if (n < 2) throw std::invalid_argument("classify_survivor: need at least two strands");
    const int top = n - 1;

    // ---- Form 1: block/gap parse around maximal runs of the top generator.
    auto try_form1 = [&]() -> std::optional<SurvivorForm> {
        struct Token {
            bool is_block;
            int begin, end;  // [begin, end) into w.gens
        };
        std::vector<Token> tokens;
        const int len = static_cast<int>(w.gens.size());
        for (int j = 0; j < len;) {
            const bool blk = w.gens[static_cast<size_t>(j)] == top;
            int e = j;
            while (e < len && (w.gens[static_cast<size_t>(e)] == top) == blk) ++e;
            tokens.push_back(Token{blk, j, e});
            j = e;
        }
        const auto gaps = [&] {
            int g = 0;
            for (const Token& t : tokens)
                if (!t.is_block) ++g;
            return g;
        }();
        if (gaps == 0) return std::nullopt;  // pure power of the top generator

        // Every maximal top block must have raw exponent at least two; the
        // word may start and end with either a block or a gap, and each gap
        // must ascend in consecutive steps to exactly one below the top.
        for (const Token& t : tokens)
            if (t.is_block && t.end - t.begin < 2) return std::nullopt;

        SurvivorForm form;
        form.variant = FormVariant::form1;
        size_t j = 0;
        if (tokens[0].is_block) {
            form.exponents.push_back(tokens[0].end - tokens[0].begin);
            j = 1;
        } else {
            form.exponents.push_back(0);
        }
        for (; j < tokens.size(); j += 2) {
            const Token& gap = tokens[j];
            for (int p = gap.begin; p + 1 < gap.end; ++p)
                if (w.gens[static_cast<size_t>(p + 1)] != w.gens[static_cast<size_t>(p)] + 1)
                    return std::nullopt;
            if (w.gens[static_cast<size_t>(gap.end - 1)] != top - 1) return std::nullopt;
            TLWord tail{n, {}};
            for (int p = gap.begin; p < gap.end; ++p)
                tail.gens.push_back(w.gens[static_cast<size_t>(p)]);
            if (j + 1 < tokens.size()) {
                // A block follows: the tail borrows one top letter from it.
                const Token& blk = tokens[j + 1];
                tail.gens.push_back(top);
                form.tails.push_back(std::move(tail));
                form.exponents.push_back(blk.end - blk.begin - 1);
            } else {
                // The word ends with this gap.
                form.tails.push_back(std::move(tail));
                form.exponents.push_back(0);
            }
        }
        return form;
    };
    if (auto f = try_form1()) return f;

    // ---- Form 2: restricted-move search to Jones normal form.
    if (auto path = d_move_reduce(w)) {
        SurvivorForm form;
        form.variant = FormVariant::form2;
        form.path = std::move(*path);
        return form;
    }
    return std::nullopt;
}

}  // namespace khw
