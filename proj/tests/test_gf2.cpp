#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "entropic/errors.hpp"
#include "entropic/gf2.hpp"
#include "entropic/random.hpp"
#include "test_util.hpp"

using namespace entropic;
using testutil::b;
using testutil::bs;

TEST(Span, EmptyIsZeroSubspace) {
    const auto v = span_bits(std::vector<Bits>{}, 3);
    EXPECT_EQ(v.dim(), 0);
    EXPECT_EQ(v, Subspace(3));
}

TEST(Span, DependentTripleHasRankTwo) {
    // 110 + 011 = 101, so the span is two-dimensional with RREF basis {101, 011}.
    const auto v = span_bits(bs({"110", "011", "101"}), 3);
    EXPECT_EQ(v.dim(), 2);
    EXPECT_EQ(v.basis(), bs({"101", "011"}));
}

TEST(Span, StandardBasisIsFullSpace) {
    const auto v = span_bits(bs({"100", "010", "001"}), 3);
    EXPECT_EQ(v.dim(), 3);
    EXPECT_EQ(v, Subspace::full(3));
}

TEST(Span, IsIdempotent) {
    const auto v = span_bits(bs({"1101", "0111", "1010"}), 4);
    EXPECT_EQ(span_bits(v.basis(), 4), v);
}

TEST(Span, RejectsMismatchedDimensions) {
    std::vector<GroupElement> gens{GroupElement(1, 3), GroupElement(1, 4)};
    EXPECT_THROW(span(gens, 3), DimensionMismatch);
}

TEST(Span, RejectsOversizedElement) { EXPECT_THROW(span_bits(bs({"1000"}), 3), ValidationError); }

TEST(Span, CanonicalUnderShuffle) {
    Rng rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(8));
        std::vector<Bits> gens;
        const int k = static_cast<int>(rng.below(10));
        for (int i = 0; i < k; ++i) gens.push_back(static_cast<Bits>(rng.below(1u << n)));
        const auto v = span_bits(gens, n);
        rng.shuffle(gens);
        EXPECT_EQ(span_bits(gens, n), v);
        // Membership agrees with the brute closure.
        const auto closure = testutil::brute_span(gens);
        EXPECT_EQ(std::size_t{1} << v.dim(), closure.size());
        for (Bits x : closure) EXPECT_TRUE(v.contains(x));
    }
}

TEST(Subspace, FromRrefValidates) {
    EXPECT_NO_THROW(Subspace::from_rref(3, bs({"101", "011"})));
    EXPECT_THROW(Subspace::from_rref(3, bs({"011", "101"})), ValidationError);
    EXPECT_THROW(Subspace::from_rref(3, bs({"111", "011"})), ValidationError);
    EXPECT_THROW(Subspace::from_rref(3, bs({"000"})), ValidationError);
}

TEST(SubspaceSum, Examples) {
    const auto a = span_bits(bs({"100", "010"}), 3);
    const auto c = span_bits(bs({"010", "001"}), 3);
    EXPECT_EQ(subspace_sum(a, c), Subspace::full(3));
    EXPECT_EQ(subspace_sum(a, Subspace(3)), a);
    EXPECT_EQ(subspace_sum(a, a), a);
    EXPECT_THROW(subspace_sum(a, Subspace(4)), DimensionMismatch);
}

TEST(SubspaceIntersect, Examples) {
    const auto a = span_bits(bs({"100", "010"}), 3);
    const auto c = span_bits(bs({"010", "001"}), 3);
    EXPECT_EQ(subspace_intersect(a, c), span_bits(bs({"010"}), 3));
    EXPECT_EQ(subspace_intersect(a, Subspace::full(3)), a);
    EXPECT_THROW(subspace_intersect(a, Subspace(2)), DimensionMismatch);
}

TEST(SubspaceIntersect, ExhaustiveMembershipAndDimensionFormulaN4) {
    const auto all = enumerate_subspaces(4, 4);
    for (const auto& v1 : all) {
        for (const auto& v2 : all) {
            const auto meet = subspace_intersect(v1, v2);
            const auto join = subspace_sum(v1, v2);
            for (Bits x = 0; x < 16; ++x) {
                ASSERT_EQ(meet.contains(x), v1.contains(x) && v2.contains(x));
            }
            ASSERT_EQ(v1.dim() + v2.dim(), join.dim() + meet.dim());
        }
    }
}

TEST(Project, Examples) {
    const QuotientMap q1(span_bits(bs({"001"}), 3));
    EXPECT_EQ(q1.project(b("101")), b("100"));
    EXPECT_EQ(q1.project(b("001")), 0u);

    const QuotientMap q2(span_bits(bs({"110"}), 3));
    EXPECT_EQ(q2.project(b("100")), q2.project(b("010")));
    EXPECT_THROW(q2.project(GroupElement(1, 4)), DimensionMismatch);
}

TEST(Project, LinearIdempotentExhaustive) {
    for (int n = 1; n <= 4; ++n) {
        for (const auto& v : enumerate_subspaces(n, n)) {
            const QuotientMap q(v);
            for (Bits x = 0; x < (1u << n); ++x) {
                ASSERT_EQ(q.project(q.project(x)), q.project(x));
                ASSERT_EQ(q.project(x) & v.pivot_mask(), 0u);
                for (Bits y = 0; y < (1u << n); ++y) {
                    ASSERT_EQ(q.project(x) ^ q.project(y), q.project(x ^ y));
                    ASSERT_EQ(q.project(x) == q.project(y), v.contains(x ^ y));
                }
            }
            for (Bits e : v.elements()) ASSERT_EQ(q.project(e), 0u);
        }
    }
}

TEST(Enumerate, Counts) {
    EXPECT_EQ(enumerate_subspaces(2, 2).size(), 5u);
    EXPECT_EQ(enumerate_subspaces(3, 3).size(), 16u);
    const auto only_zero = enumerate_subspaces(1, 0);
    ASSERT_EQ(only_zero.size(), 1u);
    EXPECT_EQ(only_zero[0], Subspace(1));
    EXPECT_EQ(enumerate_subspaces(6, 6).size(), 2825u);
    EXPECT_THROW(enumerate_subspaces(7, 1), CapacityError);
}

TEST(Enumerate, DistinctOrderedAndComplete) {
    for (int n = 1; n <= 4; ++n) {
        const auto all = enumerate_subspaces(n, n);
        std::set<std::set<Bits>> seen;
        for (std::size_t i = 0; i < all.size(); ++i) {
            const auto elems = all[i].elements();
            EXPECT_TRUE(seen.insert(std::set<Bits>(elems.begin(), elems.end())).second);
            if (i > 0) {
                EXPECT_LT(all[i - 1], all[i]);
            }
        }
        if (n > 3) continue;
        // Every subset closed under XOR containing 0 is a subspace: count them by brute force.
        std::size_t closed = 0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (1u << n)); ++mask) {
            if (!(mask & 1)) continue;
            bool ok = true;
            for (Bits x = 0; x < (1u << n) && ok; ++x) {
                if (!(mask >> x & 1)) continue;
                for (Bits y = 0; y < (1u << n) && ok; ++y) {
                    if ((mask >> y & 1) && !(mask >> (x ^ y) & 1)) ok = false;
                }
            }
            closed += ok;
        }
        EXPECT_EQ(closed, all.size());
    }
}

TEST(CosetDecompose, Examples) {
    const auto v = span_bits(bs({"001"}), 3);
    const auto parts = coset_decompose(bs({"000", "001", "110"}), v);
    ASSERT_EQ(parts.size(), 2u);
    EXPECT_EQ(parts.at(b("000")), bs({"000", "001"}));
    EXPECT_EQ(parts.at(b("110")), bs({"110"}));

    const auto elems = v.elements();
    EXPECT_EQ(coset_decompose(elems, v).size(), 1u);
    EXPECT_EQ(coset_decompose(bs({"000", "001", "110"}), Subspace(3)).size(), 3u);
}

TEST(CosetDecompose, PartitionProperty) {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(10));
        std::vector<Bits> set;
        for (int i = 0; i < 30; ++i) set.push_back(static_cast<Bits>(rng.below(1u << n)));
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        const auto v = random_subspace(n, static_cast<int>(rng.below(4)), rng);
        std::vector<Bits> joined;
        for (const auto& [rep, part] : coset_decompose(set, v)) {
            for (Bits a : part) {
                EXPECT_EQ(v.reduce(a), rep);
                joined.push_back(a);
            }
        }
        std::sort(joined.begin(), joined.end());
        EXPECT_EQ(joined, set);
    }
}

TEST(Lift, MatchesTwoStageProjection) {
    Rng rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(5));
        const auto v = random_subspace(n, static_cast<int>(rng.below(3)), rng);
        const auto vq = random_subspace(n, static_cast<int>(rng.below(3)), rng);
        const auto lifted = lift_through_quotient(v, vq);
        EXPECT_TRUE(lifted.contains(v));
        for (Bits x = 0; x < (1u << n); ++x) {
            for (Bits y = 0; y < (1u << n); ++y) {
                const bool same_lifted = lifted.reduce(x) == lifted.reduce(y);
                const bool same_staged = vq.reduce(v.reduce(x)) == vq.reduce(v.reduce(y));
                ASSERT_EQ(same_lifted, same_staged);
            }
        }
    }
}

TEST(GaussianBinomial, SmallValues) {
    EXPECT_EQ(gaussian_binomial(3, 1), 7u);
    EXPECT_EQ(gaussian_binomial(4, 2), 35u);
    EXPECT_EQ(gaussian_binomial(4, 5), 0u);
}
