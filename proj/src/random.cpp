#include "entropic/random.hpp"

#include "entropic/dist.hpp"
#include "entropic/errors.hpp"

namespace entropic {

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw ValidationError("Rng::below: bound must be positive");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t Rng::pick(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double r = uniform() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        if (r < weights[i]) return i;
        r -= weights[i];
    }
    for (std::size_t i = weights.size(); i > 0; --i) {
        if (weights[i - 1] > 0.0) return i - 1;
    }
    throw ValidationError("Rng::pick: all weights are zero");
}

Dist random_dist(int n, Rng& rng) {
    const std::size_t size = std::size_t{1} << n;
    std::vector<Bits> order(size);
    for (Bits x = 0; x < size; ++x) order[x] = x;
    rng.shuffle(order);
    const std::size_t support = 1 + static_cast<std::size_t>(rng.below(size));
    std::vector<double> m(size, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < support; ++i) {
        const double w = 0.05 + rng.uniform();
        m[order[i]] = w;
        total += w;
    }
    for (double& x : m) x /= total;
    return Dist(n, std::move(m));
}

Subspace random_subspace(int n, int generators, Rng& rng) {
    std::vector<Bits> gens;
    for (int i = 0; i < generators; ++i) gens.push_back(static_cast<Bits>(rng.below(std::uint64_t{1} << n)));
    return span_bits(gens, n);
}

Dist random_coset_uniform(int n, Rng& rng) {
    const auto v = random_subspace(n, static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1)), rng);
    const Bits shift = static_cast<Bits>(rng.below(std::uint64_t{1} << n));
    const auto elems = v.elements();
    std::vector<Bits> coset;
    for (Bits e : elems) coset.push_back(e ^ shift);
    return uniform_on(coset, n);
}

}  // namespace entropic
