#pragma once

#include <span>
#include <vector>

#include "entropic/dist.hpp"
#include "entropic/gf2.hpp"

namespace entropic {

// All entropies are in bits, so H[U_V] = dim V.

using BlockSet = std::vector<std::size_t>;

/// -sum p log2 p over masses above tol::kMassClamp.
double shannon_entropy(const Dist& p);
double shannon_entropy(std::span<const double> masses);

/// Joint entropy of the listed blocks.
double joint_entropy(const JointDist& j, const BlockSet& blocks);
/// H[target | given] = H[target, given] - H[given].
double conditional_entropy(const JointDist& j, const BlockSet& target, const BlockSet& given);
double mutual_information(const JointDist& j, const BlockSet& a, const BlockSet& b);
/// I[A : B | S] = H[A,S] + H[B,S] - H[A,B,S] - H[S].
double conditional_mutual_information(const JointDist& j, const BlockSet& a, const BlockSet& b,
                                      const BlockSet& s);

/// d[X;Y] = H[X'+Y'] - H[X]/2 - H[Y]/2 for independent copies.
double ruzsa_distance(const Dist& p, const Dist& q);
/// s[X;Y] = H[X] + H[Y] - H[X'+Y'] for independent copies.
double doubling_mass(const Dist& p, const Dist& q);

/// H[pi_V(X)] via the pushforward.
double quotient_entropy(const Dist& p, const Subspace& v);
/// H[X + U_V] - H[U_V]; second route to the same number.
double quotient_entropy_via_sum(const Dist& p, const Subspace& v);

/// A weighted family of conditional laws (X | U = u), u ranging over supp U.
struct FiberFamily {
    std::vector<Bits> labels;
    std::vector<double> weights;
    std::vector<Dist> fibers;

    std::size_t size() const noexcept { return fibers.size(); }
    /// The unconditioned law sum_u w_u X_u.
    Dist base() const;
    /// Expected entropy E_u H[X_u] = H[X | U].
    double conditional_entropy() const;
    /// Keeps the `cap` heaviest fibers (ties by label) and renormalizes weights.
    FiberFamily truncated(std::size_t cap) const;
};

/// Fibers of X given X + Y = u for independent X ~ p, Y ~ q.
FiberFamily fibers_of_sum(const Dist& p, const Dist& q);
/// Fibers of X given pi_V(X) = t.
FiberFamily fibers_of_quotient(const Dist& p, const Subspace& v);

/// E_{u,w} s[X_u ; Y_w] over two independent fiber families.
double conditional_doubling_mass(const FiberFamily& fx, const FiberFamily& fy);

/// s[X | pi_V(X) ; Y | pi_V(Y)], evaluated in local coordinates of V.
double fiber_interaction(const Dist& p, const Dist& q, const Subspace& v);
/// s[pi_W(X) | pi_V(X) ; pi_W(Y) | pi_V(Y)] for W contained in V.
double nested_fiber_interaction(const Dist& p, const Dist& q, const Subspace& w, const Subspace& v);

/// Terms of the fibring identity s = s_quotient + s_fiber - residual_mi.
struct FibringReport {
    double s_total = 0.0;
    double s_quotient = 0.0;
    double s_fiber = 0.0;
    double residual_mi = 0.0;

    double identity_gap() const noexcept { return s_total - (s_quotient + s_fiber - residual_mi); }
};

/// The residual I[X+Y : (pi X, pi Y) | pi(X+Y)] is computed from the explicit
/// joint of (X+Y, pi X, pi Y, pi(X+Y)), independently of the other three terms.
FibringReport fibring_decompose(const Dist& p, const Dist& q, const Subspace& v);

}  // namespace entropic
