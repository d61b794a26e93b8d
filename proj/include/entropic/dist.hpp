#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "entropic/gf2.hpp"

namespace entropic {

/// Probability distribution on F_2^n as a dense table of 2^n masses.
///
/// Distributions on a quotient G/V are stored as distributions on G supported
/// on canonical coset representatives.
class Dist {
  public:
    /// Validates nonnegativity and normalization (within tol::kNormalization).
    Dist(int n, std::vector<double> mass);

    static Dist point_mass(int n, Bits x);
    static Dist uniform_full(int n);

    int n() const noexcept { return n_; }
    std::size_t size() const noexcept { return mass_.size(); }
    double operator[](Bits x) const noexcept { return mass_[x]; }
    std::span<const double> masses() const noexcept { return mass_; }

    std::vector<Bits> support() const;
    Dist translate(Bits by) const;

    bool operator==(const Dist&) const = default;

  private:
    int n_;
    std::vector<double> mass_;
};

/// Product of up to four independent blocks, block 0 in the lowest bits.
class JointDist {
  public:
    JointDist(std::vector<int> block_dims, std::vector<double> mass);

    const std::vector<int>& block_dims() const noexcept { return dims_; }
    std::size_t blocks() const noexcept { return dims_.size(); }
    int total_bits() const noexcept;
    std::span<const double> masses() const noexcept { return mass_; }

    /// Marginal on the listed blocks, in the listed order.
    JointDist marginal(const std::vector<std::size_t>& keep) const;
    /// The marginal of a single block as a Dist.
    Dist block(std::size_t index) const;

    Bits block_value(std::uint64_t index, std::size_t block) const noexcept;

  private:
    std::vector<int> dims_;
    std::vector<int> offsets_;
    std::vector<double> mass_;
};

void check_dense_dim(int n);

Dist uniform_on(std::span<const Bits> set, int n);

/// In-place Walsh-Hadamard transform; the length must be a power of two.
void wht(std::span<double> table);

/// Distribution of X + Y for independent X ~ p, Y ~ q (transform-domain product).
Dist xor_convolve(const Dist& p, const Dist& q);
/// Same result by the explicit double sum; test oracle for xor_convolve.
Dist xor_convolve_naive(const Dist& p, const Dist& q);

/// Distribution of pi_V(X) on canonical representatives.
Dist pushforward_quotient(const Dist& p, const Subspace& v);

/// Pr[X + Y = u] for independent X ~ p, Y ~ q.
double sum_probability(const Dist& p, const Dist& q, Bits u);

/// Law of X given X + Y = u: mass(x) = p(x) q(x+u) / Pr[X+Y = u].
Dist condition_on_sum(const Dist& p, const Dist& q, Bits u);

/// Law of X given pi_V(X) = t; t must be a canonical representative in supp.
Dist condition_on_coset(const Dist& p, const Subspace& v, Bits t);

/// Convex combination sum_i w_i d_i; weights must sum to 1.
Dist mixture(std::span<const double> weights, std::span<const Dist> parts);

JointDist product(std::span<const Dist> factors);

/// Each output block is the XOR of the listed input blocks (equal widths).
using LinearMapSpec = std::vector<std::vector<std::size_t>>;
JointDist map_joint(const JointDist& joint, const LinearMapSpec& spec);

}  // namespace entropic
