#pragma once

#include <map>
#include <string>

#include "entropic/certificate.hpp"
#include "entropic/dist.hpp"
#include "entropic/gf2.hpp"

namespace entropic {

// Concrete subspace finders. The entropic PFR theorem is used as a search
// contract here: candidates are found by enumeration or greedy ascent and the
// claimed bounds are checked numerically, never assumed.

enum class Objective {
    MinQuotientDoubling,  // minimize s[pi X; pi Y] over dim V <= budget
    StatementB,           // smallest V satisfying the B inequality (params eta, epsilon)
    StatementA,           // smallest V satisfying the A drop (params eta, c)
    Pfr,                  // smallest V satisfying the PFR bounds
};

const char* to_string(Objective o);

/// Projected entropies of a fixed pair (P, Q), cached by canonical subspace.
class SubspaceScanner {
  public:
    struct Terms {
        double h_proj_x = 0.0;
        double h_proj_y = 0.0;
        double h_proj_sum = 0.0;
    };

    SubspaceScanner(Dist p, Dist q);

    const Dist& p() const noexcept { return p_; }
    const Dist& q() const noexcept { return q_; }
    double h_x() const noexcept { return hx_; }
    double h_y() const noexcept { return hy_; }
    double ruzsa() const noexcept { return d_; }

    const Terms& terms(const Subspace& v);
    std::size_t cache_size() const noexcept { return cache_.size(); }

  private:
    Dist p_, q_, sum_;
    double hx_, hy_, d_;
    std::map<Subspace, Terms> cache_;
};

/// Scans every subspace with dim <= max_dim in (dim, lexicographic) order and
/// returns the first optimum. n <= 6.
SubspaceCertificate exhaustive_best_subspace(const Dist& p, const Dist& q, Objective objective,
                                             int max_dim, const std::map<std::string, double>& params = {});
SubspaceCertificate exhaustive_best_subspace(SubspaceScanner& scanner, Objective objective, int max_dim,
                                             const std::map<std::string, double>& params = {});

enum class PfrSearch { Auto, Exhaustive, Greedy };

/// A subspace meeting the PFR bounds. Auto means exhaustive for n <= 6
/// (smallest qualifying subspace) and greedy ascent above that.
SubspaceCertificate pfr_subspace(const Dist& p, const Dist& q, PfrSearch search = PfrSearch::Auto);

/// Both sides of the entropic Balog-Szemeredi-Gowers inequality for a coupled pair (A, B).
struct BsgReport {
    double expected_distance = 0.0;  // E_{t ~ A+B} d[A | A+B=t ; B | A+B=t]
    double bound = 0.0;              // 3 I[A:B] + 2 H[A+B] - H[A] - H[B]

    bool holds() const noexcept;
};

BsgReport bsg_check(const JointDist& joint);

}  // namespace entropic
