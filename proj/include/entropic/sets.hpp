#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "entropic/gf2.hpp"

namespace entropic {

/// A finite subset of F_2^n, kept sorted and duplicate free.
struct ElementSet {
    int n = 0;
    std::vector<Bits> elements;

    static ElementSet from(int n, std::vector<Bits> elements);
    std::size_t size() const noexcept { return elements.size(); }
};

/// A + A by pairwise XOR, marked in a bitmap of size 2^n.
ElementSet sumset(const ElementSet& a);

struct DoublingStats {
    std::size_t size = 0;
    std::size_t sumset_size = 0;
    /// 2 - log|A+A| / log|A|; defined as 0 when |A| = 1.
    double eta = 0.0;
};

DoublingStats doubling_stats(const ElementSet& a);

}  // namespace entropic
