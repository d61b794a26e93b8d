#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "entropic/gf2.hpp"

namespace entropic {

class Dist;

/// Seeded generator with a fully specified output stream.
///
/// std::mt19937_64 is bit-exact across standard libraries; the distribution
/// helpers below are written out by hand because the std:: distributions are
/// implementation defined.
class Rng {
  public:
    static constexpr const char* kAlgorithm = "mt19937_64";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform integer in [0, bound) by rejection; bound > 0.
    std::uint64_t below(std::uint64_t bound);
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Index drawn from a discrete distribution given by nonnegative weights.
    std::size_t pick(const std::vector<double>& weights);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

/// Random distribution on F_2^n: random support size, random positive masses.
Dist random_dist(int n, Rng& rng);
/// Random subspace spanned by `generators` random vectors.
Subspace random_subspace(int n, int generators, Rng& rng);
/// Uniform distribution on a random translate of a random subspace.
Dist random_coset_uniform(int n, Rng& rng);

}  // namespace entropic
