#include "entropic/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "entropic/errors.hpp"
#include "entropic/oracle.hpp"
#include "entropic/random.hpp"
#include "entropic/tolerance.hpp"

namespace entropic {

namespace {

constexpr double kPaperC = 1.0 / 32768.0;  // 2^-15

double hproj(const Dist& p, const Subspace& v) { return shannon_entropy(pushforward_quotient(p, v)); }

Inequality claim(std::string name, double lhs, Relation rel, double rhs, ClaimKind kind = ClaimKind::Conclusion) {
    Inequality i;
    i.name = std::move(name);
    i.lhs = lhs;
    i.rhs = rhs;
    i.relation = rel;
    i.kind = kind;
    return i;
}

void check_eta(double eta, const char* what) {
    if (!(eta > 0.0 && eta <= 0.5)) {
        throw ValidationError(std::string(what) + ": eta must lie in (0, 1/2], got " + std::to_string(eta));
    }
}

void check_epsilon(double eps, const char* what) {
    if (!(eps > 0.0 && eps <= 1.0)) {
        throw ValidationError(std::string(what) + ": epsilon must lie in (0, 1], got " + std::to_string(eps));
    }
}

void check_pair(const Dist& p, const Dist& q, const char* what) {
    if (p.n() != q.n()) throw DimensionMismatch(std::string(what) + ": inputs differ in dimension");
}

FiberFamily capped(FiberFamily f, std::size_t cap) {
    if (cap > 0 && f.size() > cap) return f.truncated(cap);
    return f;
}

/// s[X_1 | U ; Y_1 | W] - eta (H[X_1 | U] + H[Y_1 | W]) on the given families.
double fiber_margin(const FiberFamily& fx, const FiberFamily& fy, double eta) {
    return conditional_doubling_mass(fx, fy) - eta * (fx.conditional_entropy() + fy.conditional_entropy());
}

std::map<std::string, double> statement_params(double eta, double eps_or_c, const char* key, double L) {
    std::map<std::string, double> m{{"eta", eta}, {key, eps_or_c}};
    if (std::isfinite(L)) m["L"] = L;
    return m;
}

void append_masses(std::ostringstream& os, const Dist& d) {
    os << d.n() << ':';
    for (double m : d.masses()) {
        std::uint64_t bits;
        std::memcpy(&bits, &m, sizeof bits);
        os << std::hex << bits << ',';
    }
    os << std::dec << '|';
}

}  // namespace

const char* to_string(RunMode m) { return m == RunMode::PaperFaithful ? "paper-faithful" : "practical"; }

RunMode run_mode_from_string(const std::string& s) {
    if (s == "paper-faithful" || s == "paper") return RunMode::PaperFaithful;
    if (s == "practical") return RunMode::Practical;
    throw ValidationError("unknown run mode '" + s + "'");
}

const char* to_string(StepKind k) {
    switch (k) {
        case StepKind::SumsetFix1: return "SUMSET_FIX_1";
        case StepKind::SumsetFix2: return "SUMSET_FIX_2";
        case StepKind::Case1: return "CASE1";
        case StepKind::Case2: return "CASE2";
        case StepKind::Endgame: return "ENDGAME";
        case StepKind::Base: return "BASE";
        case StepKind::OracleFallback: return "ORACLE_FALLBACK";
    }
    return "?";
}

// ---------------------------------------------------------------- statements A and B

SubspaceCertificate check_statement_B(const Dist& p, const Dist& q, const Subspace& v, const StatementParams& params) {
    check_pair(p, q, "check_statement_B");
    return certify(Criterion::StatementB, {p, q}, v, statement_params(params.eta, params.epsilon, "epsilon", params.L));
}

SubspaceCertificate check_statement_A(const Dist& p, const Dist& q, const Subspace& v, const StatementParams& params) {
    check_pair(p, q, "check_statement_A");
    return certify(Criterion::StatementA, {p, q}, v, statement_params(params.eta, params.c, "c", params.L));
}

StatementParams reduce_B_to_A(const StatementParams& b, double eta_prime) {
    check_eta(b.eta, "reduce_B_to_A");
    check_epsilon(b.epsilon, "reduce_B_to_A");
    check_eta(eta_prime, "reduce_B_to_A");
    if (!(eta_prime > b.eta + b.epsilon)) throw ValidationError("reduce_B_to_A needs eta' > eta + epsilon");
    StatementParams a;
    a.eta = eta_prime;
    a.epsilon = b.epsilon;
    a.c = eta_prime - b.eta - b.epsilon;
    a.L = b.L;
    return a;
}

std::uint64_t iteration_multiplier(double c, double epsilon) {
    if (!(c > 0.0 && c <= 1.0)) throw ValidationError("iteration_multiplier: c must lie in (0, 1]");
    check_epsilon(epsilon, "iteration_multiplier");
    // Base-2 logarithm: it dominates the natural one, so (1 - c)^m <= epsilon still holds.
    const double raw = std::log2(1.0 / epsilon) / c;
    return static_cast<std::uint64_t>(std::max(0.0, std::ceil(raw - 1e-12)));
}

StatementParams reduce_A_to_B(const StatementParams& a, double epsilon) {
    check_eta(a.eta, "reduce_A_to_B");
    StatementParams b;
    b.eta = a.eta;
    b.epsilon = epsilon;
    b.c = a.c;
    b.L = static_cast<double>(iteration_multiplier(a.c, epsilon)) * a.L;
    return b;
}

BSolver exhaustive_b_solver(double eta, double epsilon) {
    check_eta(eta, "exhaustive_b_solver");
    check_epsilon(epsilon, "exhaustive_b_solver");
    return [eta, epsilon](const Dist& p, const Dist& q) {
        return exhaustive_best_subspace(p, q, Objective::StatementB, p.n(), {{"eta", eta}, {"epsilon", epsilon}});
    };
}

BSolver direct_b_solver(double eta, double epsilon) {
    check_eta(eta, "direct_b_solver");
    check_epsilon(epsilon, "direct_b_solver");
    return [eta, epsilon](const Dist& p, const Dist& q) {
        const std::map<std::string, double> params{{"eta", eta}, {"epsilon", epsilon}};
        if (p.n() <= caps::kMaxEnumerationDim) {
            return exhaustive_best_subspace(p, q, Objective::StatementB, p.n(), params);
        }
        // Greedy ascent on the B slack; the full space always passes, so this terminates.
        const int n = p.n();
        SubspaceScanner scanner(p, q);
        const double hsum = scanner.h_x() + scanner.h_y();
        auto slack = [&](const Subspace& v) {
            const auto& t = scanner.terms(v);
            return t.h_proj_sum - (1 - eta) * (t.h_proj_x + t.h_proj_y) + epsilon * hsum;
        };
        Subspace v(n);
        while (slack(v) < -tol::kIdentity && v.dim() < n) {
            double best = -std::numeric_limits<double>::infinity();
            Subspace best_v = v;
            for (Bits b = 1; b < (Bits{1} << n); ++b) {
                if (v.reduce(b) != b) continue;
                std::vector<Bits> gens = v.basis();
                gens.push_back(b);
                Subspace cand = span_bits(gens, n);
                const double value = slack(cand);
                if (value > best + tol::kOracle) {
                    best = value;
                    best_v = std::move(cand);
                }
            }
            v = std::move(best_v);
        }
        return certify(Criterion::StatementB, {p, q}, v, params, SearchMode::Greedy);
    };
}

bool PipelineTrace::monotone() const {
    int dim = 0;
    for (const auto& s : steps) {
        if (s.accumulated.dim() < dim) return false;
        dim = s.accumulated.dim();
        if (s.kind == StepKind::Base) continue;
        if (!(s.decrement > 0.0)) return false;
        if (s.before - s.after < s.decrement - tol::kIdentity) return false;
    }
    return true;
}

// ---------------------------------------------------------------- sumset fixing

SumsetFixResult make_sumsets_not_double(const Dist& p, const Dist& q, double eta0, double eps0,
                                        const BSolver& b_solver) {
    check_pair(p, q, "make_sumsets_not_double");
    check_eta(eta0, "make_sumsets_not_double");
    check_epsilon(eps0, "make_sumsets_not_double");
    const double h0 = shannon_entropy(p) + shannon_entropy(q);
    const auto cap = static_cast<std::size_t>(std::ceil(2.0 / eps0)) + 1;

    SumsetFixResult r;
    r.v0 = Subspace(p.n());
    for (std::size_t iter = 0;; ++iter) {
        const Dist xp = pushforward_quotient(p, r.v0);
        const Dist yp = pushforward_quotient(q, r.v0);
        const Dist xx = xor_convolve(xp, xp);
        const Dist yy = xor_convolve(yp, yp);
        const Dist xy = xor_convolve(xp, yp);
        const double h_total = shannon_entropy(xor_convolve(xx, yy));
        const double h_xx = shannon_entropy(xx), h_yy = shannon_entropy(yy), h_xy = shannon_entropy(xy);
        auto c1 = claim("sumsets_double_1", h_total, Relation::AtLeast,
                        (1 - eta0) * (h_xx + h_yy) - 4 * eps0 * h0);
        auto c2 = claim("sumsets_double_2", h_total, Relation::AtLeast, (1 - eta0) * (2 * h_xy) - 4 * eps0 * h0);
        if (c1.holds() && c2.holds()) {
            r.conclusions = {c1, c2};
            return r;
        }
        if (iter >= cap) {
            throw SearchFailure("sumset fixing did not terminate within " + std::to_string(cap) + " steps");
        }
        const bool fix1 = !c1.holds();
        const SubspaceCertificate cert = fix1 ? b_solver(xx, yy) : b_solver(xy, xy);
        ++r.solver_calls;
        if (!cert.passed()) throw SearchFailure("B sub-solver returned a failing certificate");
        const Subspace next = lift_through_quotient(r.v0, cert.v);

        TraceStep step;
        step.kind = fix1 ? StepKind::SumsetFix1 : StepKind::SumsetFix2;
        step.added = cert.v;
        step.accumulated = next;
        if (fix1) {
            step.measure = "H[pi(X1+X2)] + H[pi(Y1+Y2)]";
            step.before = h_xx + h_yy;
            step.after = shannon_entropy(xor_convolve(pushforward_quotient(p, next), pushforward_quotient(p, next))) +
                         shannon_entropy(xor_convolve(pushforward_quotient(q, next), pushforward_quotient(q, next)));
        } else {
            step.measure = "H[pi(X1+Y2)] + H[pi(Y1+X2)]";
            step.before = 2 * h_xy;
            step.after =
                2 * shannon_entropy(xor_convolve(pushforward_quotient(p, next), pushforward_quotient(q, next)));
        }
        step.decrement = 2 * eps0 * h0;
        if (step.before - step.after < step.decrement - tol::kIdentity) {
            throw Error("sumset fixing step lowered its measure by less than 2 eps0 (H[X]+H[Y])");
        }
        r.steps.push_back(std::move(step));
        r.v0 = next;
    }
}

// ---------------------------------------------------------------- endgame

double EndgameGaps::kappa() const noexcept { return std::max(0.0, *std::max_element(gaps.begin(), gaps.end())); }

EndgameGaps endgame_gaps(const Dist& p, const Dist& q, double eta, std::size_t fiber_cap) {
    check_pair(p, q, "endgame_gaps");
    EndgameGaps g;
    g.h_x = shannon_entropy(p);
    g.h_y = shannon_entropy(q);
    const Dist xx = xor_convolve(p, p);
    const Dist yy = xor_convolve(q, q);
    const Dist xy = xor_convolve(p, q);
    const double h_xx = shannon_entropy(xx), h_yy = shannon_entropy(yy), h_xy = shannon_entropy(xy);
    g.s = g.h_x + g.h_y - h_xy;
    g.gaps[0] = doubling_mass(xx, yy) - eta * (h_xx + h_yy);
    g.gaps[1] = doubling_mass(xy, xy) - eta * (2 * h_xy);
    g.gaps[2] = fiber_margin(capped(fibers_of_sum(p, p), fiber_cap), capped(fibers_of_sum(q, q), fiber_cap), eta);
    g.gaps[3] = fiber_margin(capped(fibers_of_sum(p, q), fiber_cap), capped(fibers_of_sum(q, p), fiber_cap), eta);
    return g;
}

std::vector<Inequality> EndgameTranscript::checks() const {
    std::vector<Inequality> out;
    if (z_system) {
        out.push_back(claim("z_mi_sum", i13 + i12, Relation::AtMost, 4 * kappa));
        out.push_back(claim("z_symmetry", i13, Relation::Equal, i23));
        double spread = 0.0;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) spread = std::max(spread, std::abs(h_z_given_s[i] - h_z_given_s[j]));
        }
        out.push_back(claim("z_entropy_spread", spread, Relation::AtMost, 4 * kappa));
    }
    out.push_back(claim("bsg_distance", bsg_expected_distance, Relation::AtMost, 20 * kappa));
    out.push_back(claim("endgame_expectation", expectation, Relation::AtMost, 480 * kappa));
    return out;
}

bool EndgameTranscript::passed() const {
    const auto cs = checks();
    return std::all_of(cs.begin(), cs.end(), [](const Inequality& i) { return i.holds(); });
}

EndgameTranscript endgame(const Dist& p, const Dist& q, double eta, double kappa, const EndgameOptions& options) {
    check_pair(p, q, "endgame");
    check_eta(eta, "endgame");
    if (kappa < 0.0) throw ValidationError("endgame: kappa must be nonnegative");
    const int n = p.n();

    EndgameTranscript t;
    t.eta = eta;
    t.kappa = kappa;
    t.gaps = endgame_gaps(p, q, eta, options.fiber_cap);
    const double hsum = t.gaps.h_x + t.gaps.h_y;
    if (t.gaps.s < eta * hsum - tol::kIdentity) {
        throw HypothesisViolation("endgame: s[X;Y] < eta (H[X] + H[Y])", t.gaps.s - eta * hsum);
    }
    static const char* names[4] = {"s[X1+X2; Y1+Y2]", "s[X1+Y2; X2+Y1]", "s[X1|X1+X2; Y1|Y1+Y2]",
                                   "s[X1|X1+Y2; Y1|Y1+X2]"};
    for (int i = 0; i < 4; ++i) {
        if (t.gaps.gaps[i] > kappa + tol::kIdentity) {
            throw HypothesisViolation(std::string("endgame hypothesis on ") + names[i] + " exceeds kappa",
                                      kappa - t.gaps.gaps[i]);
        }
    }

    const FiberFamily fx = fibers_of_sum(p, q);
    const FiberFamily fy = fibers_of_sum(q, p);
    t.truncated = options.fiber_cap > 0 && (fx.size() > options.fiber_cap || fy.size() > options.fiber_cap);
    t.fibers_x = capped(fx, options.fiber_cap);
    t.fibers_y = capped(fy, options.fiber_cap);

    if (4 * n <= caps::max_joint_bits()) {
        // Blocks X1, X2, Y1, Y2 mapped to Z1 = X1+Y1, Z2 = X2+Y1, Z3 = X1+X2, S = X1+X2+Y1+Y2.
        const std::vector<Dist> factors{p, p, q, q};
        const JointDist z = map_joint(product(factors), {{0, 2}, {1, 2}, {0, 1}, {0, 1, 2, 3}});
        t.z_system = true;
        t.i13 = conditional_mutual_information(z, {0}, {2}, {3});
        t.i12 = conditional_mutual_information(z, {0}, {1}, {3});
        t.i23 = conditional_mutual_information(z, {1}, {2}, {3});
        for (std::size_t i = 0; i < 3; ++i) t.h_z_given_s[i] = conditional_entropy(z, {i}, {3});
    }

    t.table.reserve(t.fibers_x.size() * t.fibers_y.size());
    for (std::size_t i = 0; i < t.fibers_x.size(); ++i) {
        const Dist& xu = t.fibers_x.fibers[i];
        for (std::size_t j = 0; j < t.fibers_y.size(); ++j) {
            const Dist& yw = t.fibers_y.fibers[j];
            EndgameEntry e;
            e.u = t.fibers_x.labels[i];
            e.w = t.fibers_y.labels[j];
            e.weight = t.fibers_x.weights[i] * t.fibers_y.weights[j];
            // Given U = u and W = w, Z1 = X_u + Y_w and Z3 = Z1 + w, so the PFR pair is (Z, Z + w).
            const Dist z = xor_convolve(xu, yw);
            try {
                e.v = pfr_subspace(z, z.translate(e.w)).v;
            } catch (const SearchFailure&) {
                e.v = Subspace::full(n);
                ++t.pfr_fallbacks;
            }
            e.h_xu = shannon_entropy(xu);
            e.h_yw = shannon_entropy(yw);
            e.h_proj_xu = hproj(xu, e.v);
            e.h_proj_yw = hproj(yw, e.v);
            e.h_z = shannon_entropy(z);
            e.distance = shannon_entropy(xor_convolve(z, z)) - e.h_z;
            e.lemma_dimension = e.v.dim() <= 7 * (e.h_xu + e.h_yw) + tol::kIdentity;
            t.bsg_expected_distance += e.weight * e.distance;
            t.expectation += e.weight * (e.h_proj_xu + e.h_proj_yw);
            t.table.push_back(std::move(e));
        }
    }
    return t;
}

// ---------------------------------------------------------------- local to global

namespace {

/// h_j = E_u E_{w^(1..j)} H[pi_{V_<=j}(X_u)] for j = 0..levels-1.
struct HCurve {
    std::vector<double> h;
    bool exact = true;
    std::size_t samples = 0;
};

class ProjectionCache {
  public:
    explicit ProjectionCache(const FiberFamily& fx) : fx_(fx), cache_(fx.size()) {}
    double operator()(std::size_t i, const Subspace& v) {
        auto& m = cache_[i];
        auto it = m.find(v);
        if (it != m.end()) return it->second;
        return m.emplace(v, hproj(fx_.fibers[i], v)).first->second;
    }

  private:
    const FiberFamily& fx_;
    std::vector<std::map<Subspace, double>> cache_;
};

bool exact_curve(const FiberFamily& fx, const FiberFamily& fy, const std::vector<std::vector<Subspace>>& table,
                 std::size_t levels, std::size_t state_cap, ProjectionCache& hp, HCurve& out) {
    const int n = fx.fibers.front().n();
    out.h.assign(levels, 0.0);
    for (std::size_t i = 0; i < fx.size(); ++i) {
        std::map<Subspace, double> states{{Subspace(n), 1.0}};
        for (std::size_t lvl = 0; lvl < levels; ++lvl) {
            double e = 0.0;
            for (const auto& [s, pr] : states) e += pr * hp(i, s);
            out.h[lvl] += fx.weights[i] * e;
            if (lvl + 1 == levels) break;
            std::map<Subspace, double> next;
            for (const auto& [s, pr] : states) {
                for (std::size_t j = 0; j < fy.size(); ++j) next[subspace_sum(s, table[i][j])] += pr * fy.weights[j];
            }
            if (next.size() > state_cap) return false;
            states = std::move(next);
        }
    }
    return true;
}

void sampled_curve(const FiberFamily& fx, const FiberFamily& fy, const std::vector<std::vector<Subspace>>& table,
                   std::size_t levels, std::size_t samples, std::uint64_t seed, ProjectionCache& hp, HCurve& out) {
    const int n = fx.fibers.front().n();
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    out.h.assign(levels, 0.0);
    out.exact = false;
    out.samples = samples;
    for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t i = rng.pick(fx.weights);
        Subspace v(n);
        for (std::size_t lvl = 0; lvl < levels; ++lvl) {
            out.h[lvl] += hp(i, v);
            if (lvl + 1 < levels) v = subspace_sum(v, table[i][rng.pick(fy.weights)]);
        }
    }
    for (double& x : out.h) x /= static_cast<double>(samples);
}

}  // namespace

LocalToGlobalResult local_to_global(const FiberFamily& fx, const FiberFamily& fy,
                                    const std::vector<std::vector<Subspace>>& table, double zeta,
                                    std::uint64_t seed, const LocalToGlobalOptions& options) {
    if (fx.size() == 0 || fy.size() == 0) throw EmptySupportError("local_to_global needs nonempty fiber families");
    if (table.size() != fx.size()) throw ValidationError("local_to_global: table rows must match the X family");
    for (const auto& row : table) {
        if (row.size() != fy.size()) throw ValidationError("local_to_global: table columns must match the Y family");
    }
    const int n = fx.fibers.front().n();
    const Dist x = fx.base();
    const Dist y = fy.base();

    LocalToGlobalResult r;
    r.seed = seed;
    r.h_total = shannon_entropy(x) + shannon_entropy(y);
    for (std::size_t i = 0; i < fx.size(); ++i) {
        for (std::size_t j = 0; j < fy.size(); ++j) {
            const double w = fx.weights[i] * fy.weights[j];
            r.hypothesis_lhs += w * fiber_interaction(fx.fibers[i], fy.fibers[j], table[i][j]);
            r.mean_dim += w * table[i][j].dim();
        }
    }
    if (zeta <= 0.0) {
        if (r.h_total <= tol::kIdentity || r.hypothesis_lhs <= tol::kIdentity) {
            throw HypothesisViolation("local_to_global: no fiber interaction to exploit", r.hypothesis_lhs);
        }
        zeta = r.hypothesis_lhs / r.h_total;
    } else if (r.hypothesis_lhs < zeta * r.h_total - tol::kIdentity) {
        throw HypothesisViolation("local_to_global: expected fiber interaction below zeta (H[X]+H[Y])",
                                  r.hypothesis_lhs - zeta * r.h_total);
    }
    r.zeta = zeta;
    r.checks.push_back(
        claim("l2g_hypothesis", r.hypothesis_lhs, Relation::AtLeast, zeta * r.h_total, ClaimKind::Hypothesis));

    const double tau = zeta / 2;
    const auto kmax = static_cast<std::size_t>(std::max(1.0, std::ceil(1.0 / tau - 1e-12)));
    ProjectionCache hp(fx);
    HCurve curve;
    if (!exact_curve(fx, fy, table, kmax + 2, options.state_cap, hp, curve)) {
        sampled_curve(fx, fy, table, kmax + 2, options.mc_samples, seed, hp, curve);
    }
    r.h = curve.h;
    r.h_exact = curve.exact;
    r.h_samples = curve.samples;
    const double h0 = r.h[0];
    // Monte-Carlo estimates get a widened tolerance of a few standard errors.
    const double slack = curve.exact ? tol::kIdentity
                                     : tol::kIdentity + 4.0 * n / std::sqrt(static_cast<double>(curve.samples));
    r.k = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= kmax; ++k) {
        const double gap = r.h[k] - r.h[k + 1];
        if (gap <= tau * h0 + slack) {
            r.k = static_cast<int>(k);
            break;
        }
        if (gap < best_gap) {
            best_gap = gap;
            r.k = static_cast<int>(k);
        }
    }

    const double y_bound = zeta / 4 * r.h_total;
    const double dim_bound = 8.0 / (zeta * zeta) * r.mean_dim;
    const double hy = shannon_entropy(y);
    const auto cap = static_cast<std::size_t>(std::ceil(100.0 / zeta));
    Rng rng(seed);
    for (r.attempts = 1; r.attempts <= cap; ++r.attempts) {
        const std::size_t i = rng.pick(fx.weights);
        Subspace v(n);
        for (int l = 0; l < r.k; ++l) v = subspace_sum(v, table[i][rng.pick(fy.weights)]);
        const double y_fiber = hy - hproj(y, v);
        if (y_fiber >= y_bound - tol::kIdentity && v.dim() <= dim_bound + tol::kIdentity) {
            r.vbar = std::move(v);
            r.checks.push_back(claim("l2g_y_fiber", y_fiber, Relation::AtLeast, y_bound));
            r.checks.push_back(claim("l2g_dimension", r.vbar.dim(), Relation::AtMost, dim_bound));
            return r;
        }
    }
    throw SearchFailure("local_to_global: no draw met both success events within " + std::to_string(cap) +
                        " attempts (seed " + std::to_string(seed) + ")");
}

// ---------------------------------------------------------------- fiber size

YSizeReport y_size_lower_bound_check(const Dist& p, const Dist& q, const Subspace& w, const Subspace& v) {
    check_pair(p, q, "y_size_lower_bound_check");
    if (w.n() != p.n() || v.n() != p.n()) throw DimensionMismatch("y_size_lower_bound_check: subspace dimension");
    if (!v.contains(w)) throw ValidationError("y_size_lower_bound_check needs W contained in V");
    YSizeReport r;
    r.lhs = shannon_entropy(q) - hproj(q, w);
    r.s_fiber = fiber_interaction(p, q, v);
    r.h_w_given_v = hproj(p, w) - hproj(p, v);
    r.rhs = r.s_fiber - r.h_w_given_v;
    r.holds = r.lhs >= r.rhs - tol::kIdentity;
    return r;
}

// ---------------------------------------------------------------- inductive step

namespace {

struct StepContext {
    const Dist& p;
    const Dist& q;
    const Subspace& v0;
    double before;  // H[pi_{V0} X~] + H[pi_{V0} Y~]
    double target;  // (1 - c)(H[X~] + H[Y~])
};

std::optional<TraceStep> progress_step(const StepContext& ctx, StepKind kind, const Subspace& added) {
    const Subspace total = lift_through_quotient(ctx.v0, added);
    const double after = hproj(ctx.p, total) + hproj(ctx.q, total);
    if (after > ctx.target + tol::kIdentity) return std::nullopt;
    TraceStep s;
    s.kind = kind;
    s.added = added;
    s.accumulated = total;
    s.measure = "H[pi X] + H[pi Y]";
    s.before = ctx.before;
    s.after = after;
    s.decrement = ctx.before - ctx.target;
    return s;
}

/// Smallest subspace (exhaustive) or greedy ascent reaching the statement-A target on (X, Y).
Subspace fallback_subspace(const Dist& x, const Dist& y, double target) {
    const int n = x.n();
    SubspaceScanner scanner(x, y);
    if (n <= caps::kMaxEnumerationDim) {
        for (const auto& v : enumerate_subspaces(n, n)) {
            const auto& t = scanner.terms(v);
            if (t.h_proj_x + t.h_proj_y <= target + tol::kIdentity) return v;
        }
        return Subspace::full(n);
    }
    Subspace v(n);
    while (v.dim() < n) {
        const auto& t = scanner.terms(v);
        if (t.h_proj_x + t.h_proj_y <= target + tol::kIdentity) break;
        double best = std::numeric_limits<double>::infinity();
        Subspace best_v = v;
        for (Bits b = 1; b < (Bits{1} << n); ++b) {
            if (v.reduce(b) != b) continue;
            std::vector<Bits> gens = v.basis();
            gens.push_back(b);
            Subspace cand = span_bits(gens, n);
            const auto& ct = scanner.terms(cand);
            if (ct.h_proj_x + ct.h_proj_y < best - tol::kOracle) {
                best = ct.h_proj_x + ct.h_proj_y;
                best_v = std::move(cand);
            }
        }
        v = std::move(best_v);
    }
    return v;
}

std::vector<std::vector<Subspace>> solver_table(const FiberFamily& fx, const FiberFamily& fy, const BSolver& b,
                                                std::size_t& calls) {
    std::vector<std::vector<Subspace>> table(fx.size());
    for (std::size_t i = 0; i < fx.size(); ++i) {
        table[i].reserve(fy.size());
        for (std::size_t j = 0; j < fy.size(); ++j) {
            const SubspaceCertificate cert = b(fx.fibers[i], fy.fibers[j]);
            ++calls;
            if (!cert.passed()) throw SearchFailure("B sub-solver returned a failing certificate on a fiber pair");
            table[i].push_back(cert.v);
        }
    }
    return table;
}

}  // namespace

InductiveResult inductive_step(const Dist& p, const Dist& q, double eta0, double eps0, const BSolver& b_solver,
                               const PipelineOptions& options) {
    check_pair(p, q, "inductive_step");
    check_eta(eta0, "inductive_step");
    if (!(eps0 > 0.0 && eps0 < eta0)) throw ValidationError("inductive_step needs 0 < eps0 < eta0");
    const bool paper = options.mode == RunMode::PaperFaithful;
    if (paper && eps0 > kPaperC * eta0 * eta0 * (1 + 1e-12)) {
        throw ValidationError("paper-faithful inductive step needs eps0 <= 2^-15 eta0^2");
    }
    const double h_tilde = shannon_entropy(p) + shannon_entropy(q);
    const double s_tilde = doubling_mass(p, q);
    if (s_tilde < (eta0 - eps0) * h_tilde - tol::kIdentity) {
        throw HypothesisViolation("inductive_step: s[X;Y] < (eta0 - eps0)(H[X] + H[Y])",
                                  s_tilde - (eta0 - eps0) * h_tilde);
    }

    InductiveResult r;
    r.c_target = std::min(eps0, eta0 * eta0 / 32);
    const double target = (1 - r.c_target) * h_tilde;

    auto finish = [&](Subspace v, StepKind kind) {
        r.v = std::move(v);
        r.resolved_by = kind;
        const double after = hproj(p, r.v) + hproj(q, r.v);
        r.c_achieved = h_tilde > 0 ? 1 - after / h_tilde : 0.0;
        StatementParams a;
        a.eta = eta0 - eps0;
        a.c = r.c_target;
        r.certificate = check_statement_A(p, q, r.v, a);
        if (!r.certificate.inequality("a_conclusion").holds()) {
            throw SearchFailure("inductive step produced a subspace failing the statement-A conclusion");
        }
        return r;
    };

    SumsetFixResult fix = make_sumsets_not_double(p, q, eta0, eps0, b_solver);
    r.solver_calls += fix.solver_calls;
    r.steps = fix.steps;
    const Subspace& v0 = fix.v0;
    const Dist x = pushforward_quotient(p, v0);
    const Dist y = pushforward_quotient(q, v0);
    const double h = shannon_entropy(x) + shannon_entropy(y);
    if (h <= target + tol::kIdentity) {
        return finish(v0, r.steps.empty() ? StepKind::Base : r.steps.back().kind);
    }

    const StepContext ctx{p, q, v0, h, target};
    auto accept = [&](std::optional<TraceStep> step) {
        if (!step) return false;
        r.steps.push_back(*step);
        return true;
    };
    auto run_local = [&](StepKind kind, const FiberFamily& fx, const FiberFamily& fy,
                         const std::vector<std::vector<Subspace>>& table, double zeta) -> std::optional<TraceStep> {
        try {
            const auto l2g = local_to_global(fx, fy, table, zeta, options.seed);
            return progress_step(ctx, kind, l2g.vbar);
        } catch (const HypothesisViolation&) {
            if (paper) throw;
        } catch (const SearchFailure&) {
            if (paper) throw;
        }
        return std::nullopt;
    };

    const FiberFamily fxx = capped(fibers_of_sum(x, x), options.fiber_cap);
    const FiberFamily fyy = capped(fibers_of_sum(y, y), options.fiber_cap);
    const FiberFamily fxy = capped(fibers_of_sum(x, y), options.fiber_cap);
    const FiberFamily fyx = capped(fibers_of_sum(y, x), options.fiber_cap);
    const double m1 = fiber_margin(fxx, fyy, eta0);
    const double m2 = fiber_margin(fxy, fyx, eta0);

    auto fiber_case = [&](StepKind kind, const FiberFamily& fx, const FiberFamily& fy) {
        const auto table = solver_table(fx, fy, b_solver, r.solver_calls);
        return run_local(kind, fx, fy, table, paper ? 7 * eps0 : 0.0);
    };

    auto endgame_case = [&]() -> std::optional<TraceStep> {
        double eta_e, kappa;
        if (paper) {
            eta_e = eta0 - 2 * eps0;
            kappa = 12 * eps0 * h;
        } else {
            eta_e = std::min(0.5, doubling_mass(x, y) / h);
            if (eta_e <= tol::kIdentity) return std::nullopt;
            kappa = endgame_gaps(x, y, eta_e, options.fiber_cap).kappa();
        }
        try {
            const EndgameTranscript t = endgame(x, y, eta_e, kappa, {options.fiber_cap});
            std::vector<std::vector<Subspace>> table(t.fibers_x.size());
            for (std::size_t i = 0; i < t.fibers_x.size(); ++i) {
                for (std::size_t j = 0; j < t.fibers_y.size(); ++j) {
                    table[i].push_back(t.table[i * t.fibers_y.size() + j].v);
                }
            }
            return run_local(StepKind::Endgame, t.fibers_x, t.fibers_y, table, paper ? eta0 * eta0 / 8 : 0.0);
        } catch (const HypothesisViolation&) {
            if (paper) throw;
        }
        return std::nullopt;
    };

    if (paper) {
        const double threshold = 8 * eps0 * h;
        std::optional<TraceStep> step;
        if (m1 >= threshold) {
            step = fiber_case(StepKind::Case1, fxx, fyy);
        } else if (m2 >= threshold) {
            step = fiber_case(StepKind::Case2, fxy, fyx);
        } else {
            step = endgame_case();
        }
        if (!accept(step)) throw SearchFailure("paper-faithful inductive step did not reach the statement-A drop");
        return finish(r.steps.back().accumulated, r.steps.back().kind);
    }

    if (m1 > tol::kIdentity && accept(fiber_case(StepKind::Case1, fxx, fyy))) {
        return finish(r.steps.back().accumulated, StepKind::Case1);
    }
    if (m2 > tol::kIdentity && accept(fiber_case(StepKind::Case2, fxy, fyx))) {
        return finish(r.steps.back().accumulated, StepKind::Case2);
    }
    if (accept(endgame_case())) return finish(r.steps.back().accumulated, StepKind::Endgame);

    const Subspace vf = fallback_subspace(x, y, target);
    auto step = progress_step(ctx, StepKind::OracleFallback, vf);
    if (!accept(step)) throw SearchFailure("fallback search could not reach the statement-A drop");
    return finish(r.steps.back().accumulated, StepKind::OracleFallback);
}

// ---------------------------------------------------------------- recursion

BSolverEngine::BSolverEngine(PipelineOptions options) : options_(options) {
    if (!(options_.eta_step > 0.0)) throw ValidationError("eta_step must be positive");
}

SolveResult BSolverEngine::solve(const Dist& p, const Dist& q, double eta, double epsilon) {
    return solve_at(p, q, eta, epsilon, 0);
}

BSolver BSolverEngine::solver(double eta, double epsilon, int depth) {
    return [this, eta, epsilon, depth](const Dist& p, const Dist& q) {
        return solve_at(p, q, eta, epsilon, depth).certificate;
    };
}

SolveResult BSolverEngine::solve_at(const Dist& p, const Dist& q, double eta, double epsilon, int depth) {
    check_pair(p, q, "solve_B");
    check_eta(eta, "solve_B");
    check_epsilon(epsilon, "solve_B");
    if (depth > options_.max_depth) {
        throw CapacityError("solve_B recursion exceeded depth " + std::to_string(options_.max_depth));
    }
    std::ostringstream key;
    key << std::hexfloat << eta << '/' << epsilon << '/';
    append_masses(key, p);
    append_masses(key, q);
    if (depth > 0) {
        if (auto it = memo_.find(key.str()); it != memo_.end()) return {it->second, {}};
    }

    const int n = p.n();
    const double h0 = shannon_entropy(p) + shannon_entropy(q);
    StatementParams bp;
    bp.eta = eta;
    bp.epsilon = epsilon;

    SolveResult out;
    Subspace v(n);
    SubspaceCertificate cert = check_statement_B(p, q, v, bp);
    if (cert.passed()) {
        TraceStep base;
        base.kind = StepKind::Base;
        base.accumulated = v;
        base.measure = "H[pi X] + H[pi Y]";
        base.before = base.after = h0;
        out.trace.steps.push_back(base);
    } else {
        double eta0, eps0;
        if (options_.mode == RunMode::PaperFaithful) {
            // eta0 - 2^-15 eta0^2 = eta, smaller root.
            eta0 = (1 - std::sqrt(1 - 4 * kPaperC * eta)) / (2 * kPaperC);
            eps0 = kPaperC * eta0 * eta0;
            if (eta0 > 0.5) {
                eta0 = 0.5;
                eps0 = 0.5 - eta;
            }
        } else {
            eta0 = std::min(eta + options_.eta_step, 0.5);
            eps0 = eta0 - eta;
        }
        const double c = std::min(eps0, eta0 * eta0 / 32);
        const std::uint64_t cap = iteration_multiplier(c, epsilon) + 1;
        const bool direct = options_.mode == RunMode::Practical && depth + 1 >= options_.recursion_levels;
        const BSolver sub = direct ? direct_b_solver(eta0, eps0) : solver(eta0, eps0, depth + 1);
        for (std::uint64_t it = 0; !cert.passed(); ++it) {
            if (it >= cap) throw SearchFailure("solve_B exceeded its iteration cap " + std::to_string(cap));
            const Dist x = pushforward_quotient(p, v);
            const Dist y = pushforward_quotient(q, v);
            InductiveResult r = inductive_step(x, y, eta0, eps0, sub, options_);
            out.trace.subsolver_calls += r.solver_calls;
            for (auto& s : r.steps) {
                s.iteration = static_cast<int>(it);
                s.accumulated = lift_through_quotient(v, s.accumulated);
                out.trace.steps.push_back(std::move(s));
            }
            v = lift_through_quotient(v, r.v);
            cert = check_statement_B(p, q, v, bp);
        }
    }
    if (!cert.passed()) throw SearchFailure("solve_B produced a subspace failing check_statement_B");
    if (h0 > 0) cert.measured["L_achieved"] = v.dim() / h0;
    out.certificate = cert;
    out.trace.final_certificate = cert;
    memo_.emplace(key.str(), cert);
    return out;
}

SolveResult solve_B(const Dist& p, const Dist& q, double eta, double epsilon, const PipelineOptions& options) {
    BSolverEngine engine(options);
    return engine.solve(p, q, eta, epsilon);
}

SolveResult rich_cosets(const Dist& p, const Dist& q, double epsilon, const PipelineOptions& options) {
    check_epsilon(epsilon, "rich_cosets");
    SolveResult r = solve_B(p, q, epsilon / 2, epsilon / 2, options);
    SubspaceCertificate cert = certify(Criterion::RichCosets, {p, q}, r.certificate.v, {{"epsilon", epsilon}});
    if (!cert.passed()) throw SearchFailure("rich_cosets certificate failed re-verification");
    r.certificate = std::move(cert);
    return r;
}

ManySumsResult many_sums(std::span<const Dist> dists, double epsilon, const PipelineOptions& options) {
    const std::size_t k = dists.size();
    if (k < 2) throw ValidationError("many_sums needs at least two summands");
    if (k > static_cast<std::size_t>(caps::kMaxJointBlocks)) {
        throw CapacityError("many_sums supports at most " + std::to_string(caps::kMaxJointBlocks) + " summands");
    }
    check_epsilon(epsilon, "many_sums");
    const int n = dists[0].n();
    double h_total = 0.0;
    for (const auto& d : dists) {
        if (d.n() != n) throw DimensionMismatch("many_sums inputs differ in dimension");
        h_total += shannon_entropy(d);
    }
    const double delta = epsilon / static_cast<double>(k - 1);
    const auto cap = static_cast<std::size_t>(std::ceil(2.0 / delta)) + 1;

    ManySumsResult out;
    Subspace w(n);
    while (true) {
        std::optional<std::pair<Dist, Dist>> violating;
        Dist prefix = pushforward_quotient(dists[0], w);
        for (std::size_t j = 1; j < k; ++j) {
            const Dist next = pushforward_quotient(dists[j], w);
            const Dist sum = xor_convolve(prefix, next);
            const double h_sum = shannon_entropy(sum);
            if (h_sum < shannon_entropy(prefix) + shannon_entropy(next) - delta * h_total - tol::kIdentity) {
                violating.emplace(prefix, next);
                break;
            }
            prefix = sum;
        }
        if (!violating) break;
        if (out.steps >= cap) throw SearchFailure("many_sums exceeded its iteration cap");
        const SolveResult r = rich_cosets(violating->first, violating->second, delta / 2, options);
        w = lift_through_quotient(w, r.certificate.v);
        ++out.steps;
    }
    out.certificate = certify(Criterion::ManySums, std::vector<Dist>(dists.begin(), dists.end()), w,
                              {{"epsilon", epsilon}});
    if (!out.certificate.passed()) throw SearchFailure("many_sums certificate failed re-verification");
    return out;
}

AnalyzeResult analyze_set(const ElementSet& a, double epsilon, const PipelineOptions& options) {
    if (a.size() == 0) throw EmptySupportError("analyze_set needs a nonempty set");
    check_epsilon(epsilon, "analyze_set");
    AnalyzeResult out;
    out.stats = doubling_stats(a);
    const Dist u = uniform_on(a.elements, a.n);
    Subspace v(a.n);
    if (a.size() > 1) {
        out.solve = rich_cosets(u, u, epsilon / 2, options);
        v = out.solve->certificate.v;
    }
    out.certificate = certify(Criterion::Theorem11, {u}, v, {{"epsilon", epsilon}});
    return out;
}

}  // namespace entropic
