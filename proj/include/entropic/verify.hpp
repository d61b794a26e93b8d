#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace entropic {

// Property suites over seeded random inputs. Each suite compares two
// independent routes to the same quantity, or checks an inequality, and
// counts violations instead of stopping at the first one.

struct SuiteReport {
    std::string name;
    int n = 0;
    std::size_t trials = 0;      // inputs examined
    std::size_t checks = 0;      // individual comparisons made
    std::size_t violations = 0;
    std::size_t skipped = 0;     // inputs that did not meet the suite's preconditions
    double max_error = 0.0;      // largest deviation (identities) or deficit (inequalities)
    std::vector<std::string> failures;  // first few failures, for the report

    bool passed() const noexcept { return violations == 0 && trials > 0; }
    void record(bool ok, double error, const std::string& what);
};

/// Chain rule H[X | pi X] = H[X, pi X] - H[pi X], both quotient-entropy routes,
/// s[X;Y] = H[X | X+Y], and the fibring identity, on random (P, Q, V).
SuiteReport identity_suite(int n, std::size_t trials, std::uint64_t seed);

/// Transform-domain XOR convolution against the explicit double sum (max-abs <= 1e-12).
SuiteReport transform_suite(int n, std::size_t trials, std::uint64_t seed);

/// Dimension formula and subspace submodularity over every pair of subspaces
/// of F_2^n (n <= 4), with `dists_per_pair` random laws for each pair.
SuiteReport submodularity_suite(int n, std::size_t dists_per_pair, std::uint64_t seed);

/// H[X+Y] >= max(H[X], H[Y]) for independent X, Y.
SuiteReport base_case_suite(int n, std::size_t trials, std::uint64_t seed);

/// Endgame transcripts on random pairs with eta = min(1/2, s/H) and measured kappa:
/// the mutual-information, symmetry, spread, BSG and 480 kappa bounds.
SuiteReport endgame_suite(int n, std::size_t instances, std::uint64_t seed);

/// H[Y | pi_W Y] >= s[X | pi_V X; Y | pi_V Y] - H[pi_W X | pi_V X] on random nested W <= V.
SuiteReport y_size_suite(int n, std::size_t trials, std::uint64_t seed);

/// Every suite at dimension n; the expensive suites are scaled down
/// (submodularity runs at min(n, 4), endgame at min(n, 3) with min(trials, 50) instances).
std::vector<SuiteReport> run_all_suites(int n, std::size_t trials, std::uint64_t seed);

}  // namespace entropic
