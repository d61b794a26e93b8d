#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace entropic {

using Bits = std::uint32_t;

/// A vector of F_2^n packed into the low n bits of an integer.
///
/// Bit i holds coordinate i. Test fixtures write elements as binary numerals
/// (most significant coordinate first), so "110" is the integer 6.
class GroupElement {
  public:
    GroupElement(Bits bits, int n);

    Bits bits() const noexcept { return bits_; }
    int n() const noexcept { return n_; }

    GroupElement operator+(const GroupElement& other) const;
    bool operator==(const GroupElement&) const = default;

  private:
    Bits bits_;
    int n_;
};

/// Parses a binary numeral such as "0110"; n is the string length.
GroupElement parse_binary(const std::string& text);
std::string to_binary(Bits bits, int n);

/// Subspace of F_2^n stored as its unique reduced row echelon basis.
///
/// The pivot of a row is its highest set bit. Rows are kept in strictly
/// decreasing pivot order and every pivot bit is cleared in all other rows,
/// which makes the basis (and therefore operator==) canonical.
class Subspace {
  public:
    /// The zero subspace of F_2^n.
    explicit Subspace(int n);

    /// Validates that `basis` is already in canonical form.
    static Subspace from_rref(int n, std::vector<Bits> basis);
    static Subspace full(int n);

    int n() const noexcept { return n_; }
    int dim() const noexcept { return static_cast<int>(basis_.size()); }
    const std::vector<Bits>& basis() const noexcept { return basis_; }
    Bits pivot_mask() const noexcept { return pivots_; }

    bool contains(Bits x) const noexcept { return reduce(x) == 0; }
    bool contains(const Subspace& other) const;

    /// Canonical coset representative: x with every pivot coordinate cleared.
    Bits reduce(Bits x) const noexcept;

    /// Coordinates of x in the row basis; requires contains(x).
    Bits coordinates(Bits x) const noexcept;
    Bits combine(Bits coords) const noexcept;

    /// All 2^dim elements, indexed by basis coordinates.
    std::vector<Bits> elements() const;

    /// The coordinate subspace {x : x has zeros at every pivot of this}.
    Subspace complement() const;

    std::string to_string() const;

    bool operator==(const Subspace&) const = default;
    std::strong_ordering operator<=>(const Subspace& other) const;

  private:
    friend Subspace span_bits(std::span<const Bits> vectors, int n);

    int n_;
    std::vector<Bits> basis_;
    Bits pivots_ = 0;
};

/// The projection G -> G/V realised on canonical coset representatives.
class QuotientMap {
  public:
    explicit QuotientMap(Subspace v) : v_(std::move(v)) {}

    const Subspace& kernel() const noexcept { return v_; }
    GroupElement project(const GroupElement& x) const;
    Bits project(Bits x) const noexcept { return v_.reduce(x); }

  private:
    Subspace v_;
};

Subspace span(std::span<const GroupElement> vectors, int n);
Subspace span_bits(std::span<const Bits> vectors, int n);

Subspace subspace_sum(const Subspace& a, const Subspace& b);
Subspace subspace_intersect(const Subspace& a, const Subspace& b);

/// Lifts a subspace of the quotient G/V (given as any subspace of G acting on
/// canonical representatives) back to the subspace V + (Vq ∩ complement(V)) of G.
/// Projecting by the result equals projecting by V and then by Vq.
Subspace lift_through_quotient(const Subspace& v, const Subspace& vq);

/// Number of subspaces of F_2^n of dimension k (Gaussian binomial at q = 2).
std::uint64_t gaussian_binomial(int n, int k);

/// Every subspace of F_2^n with dim <= max_dim, ordered by
/// (dim, lexicographic basis). Guarded by caps::kMaxEnumerationDim.
std::span<const Subspace> enumerate_subspaces(int n, int max_dim);

/// Partition of A by cosets of V, keyed by canonical representative.
std::map<Bits, std::vector<Bits>> coset_decompose(std::span<const Bits> set, const Subspace& v);

void check_element(Bits x, int n);

}  // namespace entropic
