#include "entropic/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "entropic/dist.hpp"
#include "entropic/entropy.hpp"
#include "entropic/errors.hpp"
#include "entropic/pipeline.hpp"
#include "entropic/random.hpp"
#include "entropic/tolerance.hpp"

namespace entropic {

namespace {

constexpr std::size_t kFailuresKept = 5;

std::string describe(const char* what, std::size_t trial, double error) {
    std::ostringstream os;
    os << what << " at trial " << trial << ": error " << error;
    return os.str();
}

// Alternates plain random laws with uniform-on-coset laws, which sit on the
// equality cases of most identities.
Dist trial_dist(int n, std::size_t trial, Rng& rng) {
    return trial % 3 == 0 ? random_coset_uniform(n, rng) : random_dist(n, rng);
}

Subspace trial_subspace(int n, Rng& rng) {
    return random_subspace(n, static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1)), rng);
}

void check_n(int n) {
    if (n < 1 || n > caps::max_dense_dim()) {
        throw CapacityError("suite dimension must lie in [1, " + std::to_string(caps::max_dense_dim()) + "]");
    }
}

SuiteReport new_report(const char* name, int n) {
    SuiteReport r;
    r.name = name;
    r.n = n;
    return r;
}

}  // namespace

void SuiteReport::record(bool ok, double error, const std::string& what) {
    ++checks;
    max_error = std::max(max_error, error);
    if (ok) return;
    ++violations;
    if (failures.size() < kFailuresKept) failures.push_back(what);
}

SuiteReport identity_suite(int n, std::size_t trials, std::uint64_t seed) {
    check_n(n);
    SuiteReport r = new_report("identities", n);
    Rng rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        const Dist p = trial_dist(n, t, rng);
        const Dist q = random_dist(n, rng);
        const Subspace v = trial_subspace(n, rng);
        ++r.trials;

        // H[X | pi X] as an expectation over fibers against H[X, pi X] - H[pi X] = H[X] - H[pi X].
        const double chain = std::abs(fibers_of_quotient(p, v).conditional_entropy() -
                                      (shannon_entropy(p) - quotient_entropy(p, v)));
        r.record(chain <= tol::kIdentity, chain, describe("chain rule", t, chain));

        const double proj = std::abs(quotient_entropy(p, v) - quotient_entropy_via_sum(p, v));
        r.record(proj <= tol::kIdentity, proj, describe("entropy of projection", t, proj));

        const double fiber = std::abs(doubling_mass(p, q) - fibers_of_sum(p, q).conditional_entropy());
        r.record(fiber <= tol::kIdentity, fiber, describe("doubling mass as fiber entropy", t, fiber));

        const double fib = std::abs(fibring_decompose(p, q, v).identity_gap());
        r.record(fib <= tol::kIdentity, fib, describe("fibring identity", t, fib));
    }
    return r;
}

SuiteReport transform_suite(int n, std::size_t trials, std::uint64_t seed) {
    check_n(n);
    SuiteReport r = new_report("xor_transform", n);
    Rng rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        const Dist p = trial_dist(n, t, rng);
        const Dist q = random_dist(n, rng);
        ++r.trials;
        const Dist fast = xor_convolve(p, q);
        const Dist slow = xor_convolve_naive(p, q);
        double err = 0.0;
        for (Bits x = 0; x < fast.size(); ++x) err = std::max(err, std::abs(fast[x] - slow[x]));
        r.record(err <= tol::kOracle, err, describe("xor_convolve vs naive", t, err));
    }
    return r;
}

SuiteReport submodularity_suite(int n, std::size_t dists_per_pair, std::uint64_t seed) {
    if (n < 1 || n > 4) throw CapacityError("the all-pairs submodularity suite is limited to n <= 4");
    SuiteReport r = new_report("subspace_submodularity", n);
    Rng rng(seed);
    const auto all = enumerate_subspaces(n, n);
    std::size_t pair = 0;
    for (const auto& v1 : all) {
        for (const auto& v2 : all) {
            const Subspace sum = subspace_sum(v1, v2);
            const Subspace meet = subspace_intersect(v1, v2);
            const int gap = sum.dim() + meet.dim() - v1.dim() - v2.dim();
            const bool lattice = sum.contains(v1) && sum.contains(v2) && v1.contains(meet) && v2.contains(meet);
            r.record(gap == 0 && lattice, std::abs(gap), describe("dimension formula", pair, gap));
            for (std::size_t k = 0; k < dists_per_pair; ++k) {
                const Dist p = trial_dist(n, k, rng);
                ++r.trials;
                const double deficit = quotient_entropy(p, sum) + quotient_entropy(p, meet) -
                                       quotient_entropy(p, v1) - quotient_entropy(p, v2);
                r.record(deficit <= tol::kIdentity, std::max(deficit, 0.0),
                         describe("subspace submodularity", pair, deficit));
            }
            ++pair;
        }
    }
    return r;
}

SuiteReport base_case_suite(int n, std::size_t trials, std::uint64_t seed) {
    check_n(n);
    SuiteReport r = new_report("sum_dominates_summands", n);
    Rng rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        const Dist p = trial_dist(n, t, rng);
        const Dist q = random_dist(n, rng);
        ++r.trials;
        const double deficit =
            std::max(shannon_entropy(p), shannon_entropy(q)) - shannon_entropy(xor_convolve(p, q));
        r.record(deficit <= tol::kIdentity, std::max(deficit, 0.0), describe("H[X+Y] >= max", t, deficit));
    }
    return r;
}

SuiteReport endgame_suite(int n, std::size_t instances, std::uint64_t seed) {
    check_n(n);
    if (4 * n > caps::max_joint_bits()) throw CapacityError("endgame suite needs the 4n-bit joint");
    SuiteReport r = new_report("endgame", n);
    Rng rng(seed);
    const std::size_t attempt_cap = 20 * instances + 20;
    for (std::size_t t = 0; t < attempt_cap && r.trials < instances; ++t) {
        const Dist p = trial_dist(n, t, rng);
        const Dist q = t % 4 == 1 ? p : random_dist(n, rng);
        const double h = shannon_entropy(p) + shannon_entropy(q);
        const double s = doubling_mass(p, q);
        if (s <= tol::kIdentity || h <= 0) {
            ++r.skipped;
            continue;
        }
        // Largest admissible eta, nudged down so the s >= eta H guard holds in floating point.
        const double eta = std::min(0.5, s / h * (1 - 1e-12));
        const double kappa = endgame_gaps(p, q, eta).kappa();
        const EndgameTranscript tr = endgame(p, q, eta, kappa);
        ++r.trials;
        for (const auto& c : tr.checks()) {
            r.record(c.holds(), std::max(-c.slack(), 0.0), describe(c.name.c_str(), t, -c.slack()));
        }
        // Summing the four hypotheses gives 4 s + I13 + I12 against 4 eta H.
        const double total = tr.gaps.gaps[0] + tr.gaps.gaps[1] + tr.gaps.gaps[2] + tr.gaps.gaps[3];
        const double book = std::abs(total - (4 * tr.gaps.s + tr.i13 + tr.i12 - 4 * eta * h));
        r.record(book <= tol::kIdentity, book, describe("hypothesis bookkeeping", t, book));
    }
    return r;
}

SuiteReport y_size_suite(int n, std::size_t trials, std::uint64_t seed) {
    check_n(n);
    SuiteReport r = new_report("fiber_size_lower_bound", n);
    Rng rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        const Dist p = trial_dist(n, t, rng);
        const Dist q = random_dist(n, rng);
        const Subspace v = trial_subspace(n, rng);
        // W is spanned by random elements of V, so W <= V by construction.
        const auto elems = v.elements();
        std::vector<Bits> gens;
        const auto k = rng.below(static_cast<std::uint64_t>(v.dim()) + 1);
        for (std::uint64_t i = 0; i < k; ++i) gens.push_back(elems[rng.below(elems.size())]);
        const Subspace w = span_bits(gens, n);
        ++r.trials;
        const auto rep = y_size_lower_bound_check(p, q, w, v);
        const double deficit = rep.rhs - rep.lhs;
        r.record(rep.holds, std::max(deficit, 0.0), describe("fiber size bound", t, deficit));
    }
    return r;
}

std::vector<SuiteReport> run_all_suites(int n, std::size_t trials, std::uint64_t seed) {
    std::vector<SuiteReport> out;
    out.push_back(identity_suite(n, trials, seed));
    out.push_back(transform_suite(n, trials, seed + 1));
    out.push_back(submodularity_suite(std::min(n, 4), std::max<std::size_t>(1, trials / 100), seed + 2));
    out.push_back(base_case_suite(n, trials, seed + 3));
    out.push_back(endgame_suite(std::min(n, 3), std::min<std::size_t>(trials, 50), seed + 4));
    out.push_back(y_size_suite(n, trials, seed + 5));
    return out;
}

}  // namespace entropic
