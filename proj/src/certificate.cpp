#include "entropic/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "entropic/entropy.hpp"
#include "entropic/errors.hpp"
#include "entropic/sets.hpp"

namespace entropic {

namespace {

double param(const std::map<std::string, double>& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw ValidationError("certificate parameter '" + key + "' is missing");
    return it->second;
}

std::optional<double> optional_param(const std::map<std::string, double>& params,
                                     const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    return it->second;
}

void require_inputs(const std::vector<Dist>& inputs, std::size_t min, std::size_t max,
                    const Subspace& v) {
    if (inputs.size() < min || inputs.size() > max) {
        throw ValidationError("certificate has " + std::to_string(inputs.size()) + " inputs");
    }
    for (const auto& d : inputs) {
        if (d.n() != v.n()) throw DimensionMismatch("certificate input and subspace dimensions differ");
    }
}

Inequality claim(std::string name, double lhs, Relation rel, double rhs,
                 ClaimKind kind = ClaimKind::Conclusion) {
    return Inequality{std::move(name), lhs, rhs, rel, tol::kIdentity, kind};
}

// Entropies shared by the two-input criteria.
struct PairTerms {
    double hx, hy, hsum, hpx, hpy, hpsum, s;
};

PairTerms pair_terms(const Dist& p, const Dist& q, const Subspace& v) {
    PairTerms t{};
    t.hx = shannon_entropy(p);
    t.hy = shannon_entropy(q);
    t.s = t.hx + t.hy - shannon_entropy(xor_convolve(p, q));
    const Dist px = pushforward_quotient(p, v);
    const Dist py = pushforward_quotient(q, v);
    t.hpx = shannon_entropy(px);
    t.hpy = shannon_entropy(py);
    t.hpsum = shannon_entropy(xor_convolve(px, py));
    t.hsum = t.hx + t.hy;
    return t;
}

void size_claim(SubspaceCertificate& c, const std::map<std::string, double>& params, double base,
                const char* name) {
    if (auto l = optional_param(params, "L")) {
        c.inequalities.push_back(claim(name, c.v.dim(), Relation::AtMost, *l * base));
    }
}

}  // namespace

double Inequality::slack() const noexcept {
    switch (relation) {
        case Relation::AtMost:
            return rhs - lhs;
        case Relation::AtLeast:
            return lhs - rhs;
        case Relation::Equal:
            return -std::abs(lhs - rhs);
    }
    return 0.0;
}

bool SubspaceCertificate::passed() const noexcept {
    return std::all_of(inequalities.begin(), inequalities.end(),
                       [](const Inequality& i) { return i.holds(); });
}

bool SubspaceCertificate::hypotheses_met() const noexcept {
    return std::all_of(inequalities.begin(), inequalities.end(), [](const Inequality& i) {
        return i.kind != ClaimKind::Hypothesis || i.holds();
    });
}

const Inequality& SubspaceCertificate::inequality(const std::string& name) const {
    for (const auto& i : inequalities) {
        if (i.name == name) return i;
    }
    throw ValidationError("certificate has no inequality '" + name + "'");
}

SubspaceCertificate certify(Criterion criterion, std::vector<Dist> inputs, Subspace v,
                            std::map<std::string, double> params, SearchMode mode) {
    SubspaceCertificate c;
    c.criterion = criterion;
    c.mode = mode;
    c.v = std::move(v);
    c.inputs = std::move(inputs);
    c.params = std::move(params);
    c.measured["dim_v"] = c.v.dim();

    switch (criterion) {
        case Criterion::PfrCor22: {
            require_inputs(c.inputs, 2, 2, c.v);
            const PairTerms t = pair_terms(c.inputs[0], c.inputs[1], c.v);
            const double d = ruzsa_distance(c.inputs[0], c.inputs[1]);
            c.measured.insert({{"h_x", t.hx}, {"h_y", t.hy}, {"ruzsa_distance", d},
                               {"h_proj_x", t.hpx}, {"h_proj_y", t.hpy}});
            c.inequalities.push_back(claim("cor22_dimension", c.v.dim(), Relation::AtMost, 7 * t.hsum));
            c.inequalities.push_back(claim("cor22_projection_x", t.hpx, Relation::AtMost, 12 * d));
            c.inequalities.push_back(claim("cor22_projection_y", t.hpy, Relation::AtMost, 12 * d));
            break;
        }
        case Criterion::StatementB: {
            require_inputs(c.inputs, 2, 2, c.v);
            const double eta = param(c.params, "eta");
            const double eps = param(c.params, "epsilon");
            const PairTerms t = pair_terms(c.inputs[0], c.inputs[1], c.v);
            c.measured.insert({{"h_x", t.hx}, {"h_y", t.hy}, {"h_proj_x", t.hpx},
                               {"h_proj_y", t.hpy}, {"h_proj_sum", t.hpsum}});
            c.inequalities.push_back(claim("b_inequality", t.hpsum, Relation::AtLeast,
                                           (1 - eta) * (t.hpx + t.hpy) - eps * t.hsum));
            size_claim(c, c.params, t.hsum, "b_dimension");
            break;
        }
        case Criterion::StatementA: {
            require_inputs(c.inputs, 2, 2, c.v);
            const double eta = param(c.params, "eta");
            const double cc = param(c.params, "c");
            const PairTerms t = pair_terms(c.inputs[0], c.inputs[1], c.v);
            c.measured.insert({{"h_x", t.hx}, {"h_y", t.hy}, {"h_proj_x", t.hpx}, {"h_proj_y", t.hpy},
                               {"h_sum", t.hsum - t.s}});
            c.inequalities.push_back(claim("a_hypothesis", t.hsum - t.s, Relation::AtMost,
                                           (1 - eta) * t.hsum, ClaimKind::Hypothesis));
            c.inequalities.push_back(
                claim("a_conclusion", t.hpx + t.hpy, Relation::AtMost, (1 - cc) * t.hsum));
            size_claim(c, c.params, t.hsum, "a_dimension");
            break;
        }
        case Criterion::RichCosets: {
            require_inputs(c.inputs, 2, 2, c.v);
            const double eps = param(c.params, "epsilon");
            const PairTerms t = pair_terms(c.inputs[0], c.inputs[1], c.v);
            const double s_quot = t.hpx + t.hpy - t.hpsum;
            c.measured.insert({{"h_x", t.hx}, {"h_y", t.hy}, {"s", t.s}, {"s_quotient", s_quot},
                               {"s_fiber", fiber_interaction(c.inputs[0], c.inputs[1], c.v)}});
            const double bound = t.s - eps * t.hsum;
            c.inequalities.push_back(claim("rich_x", t.hx - t.hpx, Relation::AtLeast, bound));
            c.inequalities.push_back(claim("rich_y", t.hy - t.hpy, Relation::AtLeast, bound));
            break;
        }
        case Criterion::ManySums: {
            require_inputs(c.inputs, 2, caps::kMaxJointBlocks, c.v);
            const double eps = param(c.params, "epsilon");
            double htot = 0.0, hproj = 0.0;
            Dist total = Dist::point_mass(c.v.n(), 0);
            for (const auto& d : c.inputs) {
                htot += shannon_entropy(d);
                const Dist pd = pushforward_quotient(d, c.v);
                hproj += shannon_entropy(pd);
                total = xor_convolve(total, pd);
            }
            const double hs = shannon_entropy(total);
            c.measured.insert({{"h_total", htot}, {"h_proj_total", hproj}, {"h_proj_sum", hs}});
            c.inequalities.push_back(claim("k_fold", hs, Relation::AtLeast, hproj - eps * htot));
            break;
        }
        case Criterion::Theorem11: {
            require_inputs(c.inputs, 1, 1, c.v);
            const double eps = param(c.params, "epsilon");
            const Dist& u = c.inputs[0];
            const auto support = u.support();
            const double w = 1.0 / static_cast<double>(support.size());
            for (Bits a : support) {
                if (std::abs(u[a] - w) > tol::kNormalization) {
                    throw ValidationError("coset bound certificate input is not uniform on its support");
                }
            }
            const auto stats = doubling_stats(ElementSet::from(u.n(), support));
            const double log_a = std::log2(static_cast<double>(support.size()));
            double expected = 0.0;
            for (const auto& [rep, part] : coset_decompose(support, c.v)) {
                expected += w * static_cast<double>(part.size()) * std::log2(static_cast<double>(part.size()));
            }
            const double cond = shannon_entropy(u) - quotient_entropy(u, c.v);
            c.measured.insert({{"set_size", static_cast<double>(stats.size)},
                               {"sumset_size", static_cast<double>(stats.sumset_size)},
                               {"eta", stats.eta},
                               {"log_size", log_a},
                               {"expected_log_intersection", expected},
                               {"conditional_entropy", cond}});
            c.inequalities.push_back(
                claim("coset_bound", expected, Relation::AtLeast, (stats.eta - eps) * log_a));
            c.inequalities.push_back(claim("coset_identity", cond, Relation::Equal, expected));
            break;
        }
        case Criterion::QuotientDoubling: {
            require_inputs(c.inputs, 2, 2, c.v);
            const PairTerms t = pair_terms(c.inputs[0], c.inputs[1], c.v);
            c.measured.insert({{"h_proj_x", t.hpx},
                               {"h_proj_y", t.hpy},
                               {"s_quotient", t.hpx + t.hpy - t.hpsum}});
            c.inequalities.push_back(
                claim("dimension_budget", c.v.dim(), Relation::AtMost, param(c.params, "max_dim")));
            break;
        }
    }
    return c;
}

ReverifyReport reverify(const SubspaceCertificate& cert, double tolerance) {
    ReverifyReport r;
    SubspaceCertificate fresh;
    try {
        fresh = certify(cert.criterion, cert.inputs, cert.v, cert.params, cert.mode);
    } catch (const Error& e) {
        r.problems.push_back(std::string("recomputation failed: ") + e.what());
        return r;
    }
    for (const auto& rec : cert.inequalities) {
        const Inequality* now = nullptr;
        for (const auto& f : fresh.inequalities) {
            if (f.name == rec.name) now = &f;
        }
        if (now == nullptr) {
            r.problems.push_back("unknown inequality '" + rec.name + "'");
            continue;
        }
        const double dev = std::max(std::abs(now->lhs - rec.lhs), std::abs(now->rhs - rec.rhs));
        r.max_deviation = std::max(r.max_deviation, dev);
        if (dev > tolerance) r.problems.push_back(rec.name + ": recorded values do not reproduce");
        if (now->relation != rec.relation) r.problems.push_back(rec.name + ": relation differs");
    }
    for (const auto& [key, value] : cert.measured) {
        auto it = fresh.measured.find(key);
        if (it == fresh.measured.end()) continue;  // extra annotations are allowed
        const double dev = std::abs(it->second - value);
        r.max_deviation = std::max(r.max_deviation, dev);
        if (dev > tolerance) r.problems.push_back("measured '" + key + "' does not reproduce");
    }
    if (fresh.inequalities.size() != cert.inequalities.size()) {
        r.problems.push_back("inequality count differs from the criterion");
    }
    for (const auto& f : fresh.inequalities) {
        if (!f.holds()) r.problems.push_back(f.name + ": violated by " + std::to_string(-f.slack()));
    }
    r.ok = r.problems.empty();
    return r;
}

const char* to_string(Criterion c) {
    switch (c) {
        case Criterion::PfrCor22: return "PFR_COR22";
        case Criterion::StatementB: return "STATEMENT_B";
        case Criterion::StatementA: return "STATEMENT_A";
        case Criterion::Theorem11: return "THEOREM_11";
        case Criterion::RichCosets: return "RICH_COSETS";
        case Criterion::ManySums: return "MANY_SUMS";
        case Criterion::QuotientDoubling: return "QUOTIENT_DOUBLING";
    }
    return "?";
}

const char* to_string(SearchMode m) {
    switch (m) {
        case SearchMode::Exhaustive: return "exhaustive";
        case SearchMode::Greedy: return "greedy";
        case SearchMode::Prescribed: return "prescribed";
    }
    return "?";
}

const char* to_string(Relation r) {
    switch (r) {
        case Relation::AtMost: return "<=";
        case Relation::AtLeast: return ">=";
        case Relation::Equal: return "==";
    }
    return "?";
}

const char* to_string(ClaimKind k) { return k == ClaimKind::Hypothesis ? "hypothesis" : "conclusion"; }

namespace {

template <typename E, std::size_t N>
E parse_enum(const std::string& s, const E (&values)[N], const char* what) {
    for (E v : values) {
        if (s == to_string(v)) return v;
    }
    throw ValidationError(std::string("unknown ") + what + " '" + s + "'");
}

}  // namespace

Criterion criterion_from_string(const std::string& s) {
    static constexpr Criterion all[] = {Criterion::PfrCor22,   Criterion::StatementB, Criterion::StatementA,
                                        Criterion::Theorem11,  Criterion::RichCosets, Criterion::ManySums,
                                        Criterion::QuotientDoubling};
    return parse_enum(s, all, "criterion");
}

SearchMode search_mode_from_string(const std::string& s) {
    static constexpr SearchMode all[] = {SearchMode::Exhaustive, SearchMode::Greedy, SearchMode::Prescribed};
    return parse_enum(s, all, "search mode");
}

Relation relation_from_string(const std::string& s) {
    static constexpr Relation all[] = {Relation::AtMost, Relation::AtLeast, Relation::Equal};
    return parse_enum(s, all, "relation");
}

ClaimKind claim_kind_from_string(const std::string& s) {
    static constexpr ClaimKind all[] = {ClaimKind::Hypothesis, ClaimKind::Conclusion};
    return parse_enum(s, all, "claim kind");
}

}  // namespace entropic
