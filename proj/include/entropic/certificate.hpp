#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entropic/dist.hpp"
#include "entropic/gf2.hpp"
#include "entropic/tolerance.hpp"

namespace entropic {

/// What a certificate claims about its subspace.
enum class Criterion {
    PfrCor22,          // max H[pi X], H[pi Y] <= 12 d[X;Y], H[U_V] <= 7(H[X]+H[Y])
    StatementB,        // the B inequality, plus H[U_V] <= L(H[X]+H[Y]) when L is given
    StatementA,        // doubling hypothesis and the A entropy drop
    Theorem11,         // coset-intersection bound for a set A
    RichCosets,        // both fiber entropies >= s - eps(H[X]+H[Y])
    ManySums,          // k-fold sum inequality
    QuotientDoubling,  // value s[pi X; pi Y] within a dimension budget
};

enum class SearchMode { Exhaustive, Greedy, Prescribed };

enum class Relation { AtMost, AtLeast, Equal };

enum class ClaimKind { Hypothesis, Conclusion };

struct Inequality {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    Relation relation = Relation::AtMost;
    double tolerance = tol::kIdentity;
    ClaimKind kind = ClaimKind::Conclusion;

    /// Signed margin; nonnegative when the claim holds exactly.
    double slack() const noexcept;
    bool holds() const noexcept { return slack() >= -tolerance; }
};

/// A subspace together with everything needed to re-check the claim from scratch.
struct SubspaceCertificate {
    Criterion criterion = Criterion::StatementB;
    SearchMode mode = SearchMode::Prescribed;
    Subspace v{0};
    std::vector<Dist> inputs;
    std::map<std::string, double> params;
    std::map<std::string, double> measured;
    std::vector<Inequality> inequalities;
    std::optional<std::uint64_t> seed;
    std::string rng_algorithm;

    bool passed() const noexcept;
    bool hypotheses_met() const noexcept;
    const Inequality& inequality(const std::string& name) const;
};

/// Evaluates every inequality of `criterion` for (inputs, v). Never throws on a
/// violated claim; missing parameters or malformed inputs raise ValidationError.
SubspaceCertificate certify(Criterion criterion, std::vector<Dist> inputs, Subspace v,
                            std::map<std::string, double> params,
                            SearchMode mode = SearchMode::Prescribed);

struct ReverifyReport {
    bool ok = false;
    double max_deviation = 0.0;
    std::vector<std::string> problems;
};

/// Recomputes a certificate from its inputs and subspace and compares every
/// recorded number within `tolerance`; also requires every claim to hold.
ReverifyReport reverify(const SubspaceCertificate& cert, double tolerance = tol::kIdentity);

const char* to_string(Criterion c);
const char* to_string(SearchMode m);
const char* to_string(Relation r);
const char* to_string(ClaimKind k);
Criterion criterion_from_string(const std::string& s);
SearchMode search_mode_from_string(const std::string& s);
Relation relation_from_string(const std::string& s);
ClaimKind claim_kind_from_string(const std::string& s);

}  // namespace entropic
