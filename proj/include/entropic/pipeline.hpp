#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entropic/certificate.hpp"
#include "entropic/dist.hpp"
#include "entropic/entropy.hpp"
#include "entropic/gf2.hpp"
#include "entropic/sets.hpp"

namespace entropic {

// Statements A and B as checkable contracts, the lemmas of the inductive step,
// and the recursion that produces B-certificates. Every subspace handed back by
// these routines has been re-checked numerically; the proof constants are used
// as thresholds only in paper-faithful mode.

enum class RunMode { PaperFaithful, Practical };

const char* to_string(RunMode m);
RunMode run_mode_from_string(const std::string& s);

struct StatementParams {
    double eta = 0.5;
    double epsilon = 1.0;
    double c = 0.5;
    double L = std::numeric_limits<double>::infinity();  // infinite means "not part of the claim"
};

SubspaceCertificate check_statement_B(const Dist& p, const Dist& q, const Subspace& v, const StatementParams& params);
/// The doubling hypothesis is recorded as a ClaimKind::Hypothesis inequality.
SubspaceCertificate check_statement_A(const Dist& p, const Dist& q, const Subspace& v, const StatementParams& params);

/// B(eta, eps, L) gives A(eta', L, eta' - eta - eps); needs eta' > eta + eps.
StatementParams reduce_B_to_A(const StatementParams& b, double eta_prime);
/// A(eta, L, c) gives B(eta, eps, m L) with m = ceil(log2(1/eps) / c).
StatementParams reduce_A_to_B(const StatementParams& a, double epsilon);
std::uint64_t iteration_multiplier(double c, double epsilon);

/// Anything with the statement-B contract for fixed (eta, epsilon).
using BSolver = std::function<SubspaceCertificate(const Dist&, const Dist&)>;

/// Exhaustive ground-truth B solver (n <= 6): smallest V in (dim, lex) order.
BSolver exhaustive_b_solver(double eta, double epsilon);
/// Exhaustive for n <= 6, otherwise a greedy ascent on the B slack. Always certified.
BSolver direct_b_solver(double eta, double epsilon);

enum class StepKind { SumsetFix1, SumsetFix2, Case1, Case2, Endgame, Base, OracleFallback };

const char* to_string(StepKind k);

struct TraceStep {
    StepKind kind = StepKind::Base;
    int iteration = 0;    // index of the enclosing inductive step
    Subspace added{0};    // subspace produced by the step, in the coordinates of its input
    Subspace accumulated{0};  // total subspace of the enclosing solve after the step
    std::string measure;  // which entropy the step lowers
    double before = 0.0;
    double after = 0.0;
    double decrement = 0.0;  // lower bound the drop must meet
};

struct PipelineTrace {
    std::vector<TraceStep> steps;
    std::size_t subsolver_calls = 0;
    std::optional<SubspaceCertificate> final_certificate;

    /// Dimensions nondecreasing; each non-base step drops its measure by >= decrement > 0.
    bool monotone() const;
};

struct PipelineOptions {
    RunMode mode = RunMode::Practical;
    double eta_step = 0.1;        // practical mode: eta0 = min(eta + step, 1/2)
    std::size_t fiber_cap = 16;   // heaviest fibers kept per family inside the pipeline (0 = all)
    std::uint64_t seed = 0;
    int max_depth = 64;
    /// Practical mode: solver levels at or below this depth recurse; deeper
    /// sub-solvers answer by direct B search. Paper-faithful mode always recurses.
    int recursion_levels = 2;
};

// ---------------------------------------------------------------- sumset fixing

struct SumsetFixResult {
    Subspace v0{0};
    std::vector<TraceStep> steps;
    std::vector<Inequality> conclusions;
    std::size_t solver_calls = 0;
};

SumsetFixResult make_sumsets_not_double(const Dist& p, const Dist& q, double eta0, double eps0,
                                        const BSolver& b_solver);

// ---------------------------------------------------------------- endgame

struct EndgameEntry {
    Bits u = 0;
    Bits w = 0;
    double weight = 0.0;
    Subspace v{0};
    double h_xu = 0.0, h_yw = 0.0;
    double h_proj_xu = 0.0, h_proj_yw = 0.0;
    double h_z = 0.0;          // H[X_u + Y_w]
    double distance = 0.0;     // d[Z ; Z + w] = H[Z + Z'] - H[Z]
    bool lemma_dimension = false;  // H[U_V] <= 7 (H[X_u] + H[Y_w]), informational
};

struct EndgameGaps {
    /// Each hypothesis as lhs - eta * (entropy pair); kappa must dominate all four.
    std::array<double, 4> gaps{};
    double s = 0.0;
    double h_x = 0.0, h_y = 0.0;

    double kappa() const noexcept;
};

/// fiber_cap > 0 evaluates the two fiber terms on truncated families.
EndgameGaps endgame_gaps(const Dist& p, const Dist& q, double eta, std::size_t fiber_cap = 0);

struct EndgameOptions {
    std::size_t fiber_cap = 0;  // 0 = exact families
};

struct EndgameTranscript {
    double eta = 0.0;
    double kappa = 0.0;
    EndgameGaps gaps;
    bool z_system = false;     // false when the 4n-bit joint exceeds the cap
    double i13 = 0.0, i12 = 0.0, i23 = 0.0;
    std::array<double, 3> h_z_given_s{};
    double bsg_expected_distance = 0.0;
    bool truncated = false;
    std::size_t pfr_fallbacks = 0;  // greedy PFR search failed; the full space was used
    FiberFamily fibers_x;  // X_1 | X_1 + Y_2 = u
    FiberFamily fibers_y;  // Y_1 | Y_1 + X_2 = w
    std::vector<EndgameEntry> table;  // row-major over (fibers_x, fibers_y)
    double expectation = 0.0;

    std::vector<Inequality> checks() const;
    bool passed() const;
};

/// Throws HypothesisViolation when s[X;Y] < eta (H[X]+H[Y]) or a gap exceeds kappa.
EndgameTranscript endgame(const Dist& p, const Dist& q, double eta, double kappa,
                          const EndgameOptions& options = {});

// ---------------------------------------------------------------- local to global

struct LocalToGlobalOptions {
    std::size_t state_cap = 4096;   // exact h_j while the per-u subspace states stay below this
    std::size_t mc_samples = 4000;
};

struct LocalToGlobalResult {
    Subspace vbar{0};
    double zeta = 0.0;
    double hypothesis_lhs = 0.0;  // E s[X_u | pi X_u ; Y_w | pi Y_w]
    double h_total = 0.0;         // H[X] + H[Y] of the mixtures
    double mean_dim = 0.0;        // E dim V(u, w)
    int k = 0;
    std::vector<double> h;        // h_0 .. h_{kmax+1}
    bool h_exact = true;
    std::size_t h_samples = 0;
    std::uint64_t seed = 0;
    std::size_t attempts = 0;
    std::vector<Inequality> checks;
};

/// table[i][j] is V(u_i, w_j). zeta <= 0 means "use the measured value".
LocalToGlobalResult local_to_global(const FiberFamily& fx, const FiberFamily& fy,
                                    const std::vector<std::vector<Subspace>>& table, double zeta,
                                    std::uint64_t seed, const LocalToGlobalOptions& options = {});

// ---------------------------------------------------------------- fiber size

struct YSizeReport {
    double lhs = 0.0;            // H[Y | pi_W(Y)]
    double s_fiber = 0.0;        // s[X | pi_V X ; Y | pi_V Y]
    double h_w_given_v = 0.0;    // H[pi_W X | pi_V X]
    double rhs = 0.0;
    bool holds = false;
};

YSizeReport y_size_lower_bound_check(const Dist& p, const Dist& q, const Subspace& w, const Subspace& v);

// ---------------------------------------------------------------- inductive step and recursion

struct InductiveResult {
    Subspace v{0};
    std::vector<TraceStep> steps;
    StepKind resolved_by = StepKind::Base;
    double c_target = 0.0;
    double c_achieved = 0.0;
    std::size_t solver_calls = 0;
    SubspaceCertificate certificate;  // statement A at (eta0 - eps0, c_target)
};

InductiveResult inductive_step(const Dist& p, const Dist& q, double eta0, double eps0, const BSolver& b_solver,
                               const PipelineOptions& options = {});

struct SolveResult {
    SubspaceCertificate certificate;
    PipelineTrace trace;
};

/// Recursive statement-B solver with memoized sub-solvers.
class BSolverEngine {
  public:
    explicit BSolverEngine(PipelineOptions options = {});

    SolveResult solve(const Dist& p, const Dist& q, double eta, double epsilon);
    BSolver solver(double eta, double epsilon, int depth = 1);
    const PipelineOptions& options() const noexcept { return options_; }

  private:
    SolveResult solve_at(const Dist& p, const Dist& q, double eta, double epsilon, int depth);

    PipelineOptions options_;
    std::map<std::string, SubspaceCertificate> memo_;
};

SolveResult solve_B(const Dist& p, const Dist& q, double eta, double epsilon, const PipelineOptions& options = {});

/// Rich cosets via solve_B(eps/2, eps/2).
SolveResult rich_cosets(const Dist& p, const Dist& q, double epsilon, const PipelineOptions& options = {});

struct ManySumsResult {
    SubspaceCertificate certificate;
    std::size_t steps = 0;
};

/// Many-fold sums for 2 <= k <= 4 summands.
ManySumsResult many_sums(std::span<const Dist> dists, double epsilon, const PipelineOptions& options = {});

struct AnalyzeResult {
    DoublingStats stats;
    SubspaceCertificate certificate;  // Criterion::Theorem11
    std::optional<SolveResult> solve;
};

/// Coset bound for a set A on X = Y = U_A, using rich_cosets(eps/2).
AnalyzeResult analyze_set(const ElementSet& a, double epsilon, const PipelineOptions& options = {});

}  // namespace entropic
