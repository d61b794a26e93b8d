#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <map>

#include "entropic/entropy.hpp"
#include "entropic/errors.hpp"
#include "entropic/random.hpp"
#include "test_util.hpp"

using namespace entropic;
using testutil::b;
using testutil::bs;
using testutil::pair_entropy;

namespace {

Dist three_point() { return uniform_on(bs({"000", "001", "010"}), 3); }

Dist uniform_sub(const Subspace& v) { return uniform_on(v.elements(), v.n()); }

// Entropy of key(x1, x2, y1, y2) for independent x1, x2 ~ p and y1, y2 ~ q.
double quad_entropy(const Dist& p, const Dist& q,
                    const std::function<std::uint64_t(Bits, Bits, Bits, Bits)>& key) {
    std::map<std::uint64_t, double> m;
    const auto sp = p.support();
    const auto sq = q.support();
    for (Bits x1 : sp)
        for (Bits x2 : sp)
            for (Bits y1 : sq)
                for (Bits y2 : sq) m[key(x1, x2, y1, y2)] += p[x1] * p[x2] * q[y1] * q[y2];
    return testutil::brute_entropy(m);
}

JointDist random_joint(const std::vector<int>& dims, Rng& rng) {
    int bits = 0;
    for (int d : dims) bits += d;
    std::vector<double> mass(std::size_t{1} << bits, 0.0);
    double total = 0.0;
    for (double& m : mass) {
        if (rng.below(3) != 0) {
            m = rng.uniform();
            total += m;
        }
    }
    if (total == 0.0) {
        mass[0] = 1.0;
        total = 1.0;
    }
    for (double& m : mass) m /= total;
    return JointDist(dims, mass);
}

}  // namespace

TEST(Shannon, Examples) {
    EXPECT_NEAR(shannon_entropy(Dist::uniform_full(3)), 3.0, 1e-12);
    EXPECT_EQ(shannon_entropy(Dist::point_mass(4, b("1010"))), 0.0);
    EXPECT_NEAR(shannon_entropy(Dist(2, {0.5, 0.25, 0.25, 0.0})), 1.5, 1e-12);
}

TEST(ConditionalEntropy, Examples) {
    Rng rng(3);
    const auto p = random_dist(2, rng);
    const auto q = random_dist(3, rng);
    const auto ind = product(std::vector<Dist>{p, q});
    EXPECT_NEAR(conditional_entropy(ind, {0}, {1}), shannon_entropy(p), 1e-12);

    const auto copied = map_joint(product(std::vector<Dist>{p}), {{0}, {0}});
    EXPECT_NEAR(conditional_entropy(copied, {0}, {1}), 0.0, 1e-12);

    const auto tp = three_point();
    const auto j = map_joint(product(std::vector<Dist>{tp, tp}), {{0}, {0, 1}});
    const double expected = 2 * testutil::dist_entropy(tp) -
                            pair_entropy(tp, tp, [](Bits x, Bits y) { return x ^ y; });
    EXPECT_NEAR(conditional_entropy(j, {0}, {1}), expected, 1e-12);
    EXPECT_NEAR(expected, 1.1950, 5e-5);

    EXPECT_THROW(conditional_entropy(ind, {0}, {4}), ValidationError);
}

TEST(MutualInformation, Examples) {
    Rng rng(4);
    const auto p = random_dist(3, rng);
    const auto q = random_dist(3, rng);
    EXPECT_NEAR(mutual_information(product(std::vector<Dist>{p, q}), {0}, {1}), 0.0, 1e-12);
    const auto copied = map_joint(product(std::vector<Dist>{p}), {{0}, {0}});
    EXPECT_NEAR(mutual_information(copied, {0}, {1}), shannon_entropy(p), 1e-12);

    const auto xn = product(std::vector<Dist>{Dist::uniform_full(1), Dist::point_mass(1, 1)});
    const auto pair = map_joint(xn, {{0}, {0, 1}});
    EXPECT_NEAR(mutual_information(pair, {0}, {1}), 1.0, 1e-12);
    EXPECT_THROW(mutual_information(pair, {0}, {2}), ValidationError);
}

TEST(ConditionalMutualInformation, Examples) {
    Rng rng(5);
    const auto p = random_dist(2, rng);
    const auto j = map_joint(product(std::vector<Dist>{p, random_dist(2, rng), Dist::point_mass(2, 3)}),
                             {{0}, {0, 1}, {2}});
    EXPECT_NEAR(conditional_mutual_information(j, {0}, {1}, {2}), mutual_information(j, {0}, {1}), 1e-12);

    const auto ind = product(std::vector<Dist>{random_dist(2, rng), random_dist(2, rng), random_dist(2, rng)});
    EXPECT_NEAR(conditional_mutual_information(ind, {0}, {1}, {2}), 0.0, 1e-12);

    // Z1 = X1+Y1, Z2 = X2+Y1, S = X1+X2+Y1+Y2 over four iid uniform bits: enumerate the 16 tuples.
    const auto bit = Dist::uniform_full(1);
    const auto four = product(std::vector<Dist>{bit, bit, bit, bit});
    const auto z = map_joint(four, {{0, 2}, {1, 2}, {0, 1, 2, 3}});
    std::map<std::uint64_t, double> zs, z1s, z2s, s;
    for (unsigned t = 0; t < 16; ++t) {
        const unsigned x1 = t & 1, x2 = t >> 1 & 1, y1 = t >> 2 & 1, y2 = t >> 3 & 1;
        const unsigned z1 = x1 ^ y1, z2 = x2 ^ y1, sv = x1 ^ x2 ^ y1 ^ y2;
        zs[z1 | z2 << 1 | sv << 2] += 1.0 / 16;
        z1s[z1 | sv << 2] += 1.0 / 16;
        z2s[z2 | sv << 2] += 1.0 / 16;
        s[sv] += 1.0 / 16;
    }
    const double brute = testutil::brute_entropy(z1s) + testutil::brute_entropy(z2s) -
                         testutil::brute_entropy(zs) - testutil::brute_entropy(s);
    EXPECT_NEAR(brute, 0.0, 1e-12);
    EXPECT_NEAR(conditional_mutual_information(z, {0}, {1}, {2}), brute, 1e-12);
}

TEST(Ruzsa, Examples) {
    const auto v = span_bits(bs({"110", "011"}), 3);
    const auto w = Subspace::full(3);
    EXPECT_NEAR(ruzsa_distance(uniform_sub(v), uniform_sub(v)), 0.0, 1e-12);
    EXPECT_NEAR(ruzsa_distance(uniform_sub(v), uniform_sub(w)), 0.5, 1e-12);

    const auto tp = three_point();
    const double expected = pair_entropy(tp, tp, [](Bits x, Bits y) { return x ^ y; }) -
                            testutil::dist_entropy(tp);
    EXPECT_NEAR(ruzsa_distance(tp, tp), expected, 1e-12);
    EXPECT_NEAR(expected, 0.3900, 5e-5);
    EXPECT_THROW(ruzsa_distance(tp, Dist::point_mass(2, 0)), DimensionMismatch);
}

TEST(DoublingMass, Examples) {
    const auto v = span_bits(bs({"110", "011"}), 3);
    EXPECT_NEAR(doubling_mass(uniform_sub(v), uniform_sub(v)), 2.0, 1e-12);
    Rng rng(6);
    EXPECT_NEAR(doubling_mass(random_dist(3, rng), Dist::point_mass(3, b("101"))), 0.0, 1e-12);
    const auto tp = three_point();
    const double expected = 2 * testutil::dist_entropy(tp) -
                            pair_entropy(tp, tp, [](Bits x, Bits y) { return x ^ y; });
    EXPECT_NEAR(doubling_mass(tp, tp), expected, 1e-12);
    EXPECT_NEAR(expected, 1.1950, 5e-5);
    EXPECT_THROW(doubling_mass(tp, Dist::point_mass(2, 0)), DimensionMismatch);
}

TEST(DoublingMass, EqualsFiberSizeAndTrivialBound) {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(6));
        const auto p = random_dist(n, rng);
        const auto q = random_dist(n, rng);
        const double s = doubling_mass(p, q);
        const double h_given_sum = pair_entropy(p, q, [n](Bits x, Bits y) {
                                       return static_cast<std::uint64_t>(x) | (std::uint64_t{x ^ y} << n);
                                   }) -
                                   pair_entropy(p, q, [](Bits x, Bits y) { return x ^ y; });
        ASSERT_NEAR(s, h_given_sum, 1e-9);
        ASSERT_LE(s, std::min(shannon_entropy(p), shannon_entropy(q)) + 1e-9);
        ASSERT_GE(s, -1e-9);
    }
}

TEST(ConditionalDoublingMass, Examples) {
    Rng rng(8);
    const auto p = random_dist(3, rng);
    const auto q = random_dist(3, rng);
    FiberFamily fp{{0}, {1.0}, {p}};
    FiberFamily fq{{0}, {1.0}, {q}};
    EXPECT_NEAR(conditional_doubling_mass(fp, fq), doubling_mass(p, q), 1e-12);

    FiberFamily points{{1, 2}, {0.4, 0.6}, {Dist::point_mass(3, 1), Dist::point_mass(3, 2)}};
    EXPECT_NEAR(conditional_doubling_mass(points, points), 0.0, 1e-12);

    FiberFamily bad{{0}, {0.5, 0.5}, {p}};
    EXPECT_THROW(conditional_doubling_mass(bad, fq), ValidationError);
}

TEST(ConditionalDoublingMass, SecondFibringIdentityBy81Tuples) {
    const auto tp = three_point();
    const auto fx = fibers_of_sum(tp, tp);  // X1 | X1 + Y2
    const auto fy = fibers_of_sum(tp, tp);  // Y1 | Y1 + X2
    const double cond = conditional_doubling_mass(fx, fy);

    const int n = 3;
    auto key = [n](std::initializer_list<Bits> parts) {
        std::uint64_t k = 0;
        int shift = 0;
        for (Bits v : parts) {
            k |= static_cast<std::uint64_t>(v) << shift;
            shift += n;
        }
        return k;
    };
    auto h = [&](auto f) { return quad_entropy(tp, tp, f); };
    // H[X1 | U] + H[Y1 | W] - H[X1 + Y1 | U, W], U = X1 + Y2, W = Y1 + X2.
    const double brute_cond =
        h([&](Bits x1, Bits, Bits, Bits y2) { return key({x1, x1 ^ y2}); }) -
        h([&](Bits x1, Bits, Bits, Bits y2) { return key({x1 ^ y2}); }) +
        h([&](Bits, Bits x2, Bits y1, Bits) { return key({y1, y1 ^ x2}); }) -
        h([&](Bits, Bits x2, Bits y1, Bits) { return key({y1 ^ x2}); }) -
        h([&](Bits x1, Bits x2, Bits y1, Bits y2) { return key({x1 ^ y1, x1 ^ y2, y1 ^ x2}); }) +
        h([&](Bits x1, Bits x2, Bits y1, Bits y2) { return key({x1 ^ y2, y1 ^ x2}); });
    EXPECT_NEAR(cond, brute_cond, 1e-12);

    // 2 s[X;Y] = s[X1+Y2 ; X2+Y1] + cond - I[Z1 : Z2 | S].
    const double s_uw = h([&](Bits x1, Bits, Bits, Bits y2) { return key({x1 ^ y2}); }) +
                        h([&](Bits, Bits x2, Bits y1, Bits) { return key({x2 ^ y1}); }) -
                        h([&](Bits x1, Bits x2, Bits y1, Bits y2) { return key({x1 ^ y2 ^ x2 ^ y1}); });
    auto z1 = [](Bits x1, Bits, Bits y1, Bits) { return x1 ^ y1; };
    auto z2 = [](Bits, Bits x2, Bits y1, Bits) { return x2 ^ y1; };
    auto sv = [](Bits x1, Bits x2, Bits y1, Bits y2) { return x1 ^ x2 ^ y1 ^ y2; };
    const double cmi =
        h([&](Bits a, Bits c, Bits d, Bits e) { return key({z1(a, c, d, e), sv(a, c, d, e)}); }) +
        h([&](Bits a, Bits c, Bits d, Bits e) { return key({z2(a, c, d, e), sv(a, c, d, e)}); }) -
        h([&](Bits a, Bits c, Bits d, Bits e) {
            return key({z1(a, c, d, e), z2(a, c, d, e), sv(a, c, d, e)});
        }) -
        h([&](Bits a, Bits c, Bits d, Bits e) { return key({sv(a, c, d, e)}); });
    EXPECT_NEAR(2 * doubling_mass(tp, tp), s_uw + cond - cmi, 1e-12);
}

TEST(ConditionalDoublingMass, MatchesJointFormulaOnRandomInputs) {
    Rng rng(9);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(4));
        const auto p = random_dist(n, rng);
        const auto q = random_dist(n, rng);
        const auto v = random_subspace(n, static_cast<int>(rng.below(n + 1)), rng);
        const auto fx = fibers_of_quotient(p, v);
        const auto fy = fibers_of_quotient(q, v);
        // H[X | piX] + H[Y | piY] - H[X + Y | piX, piY] by pair enumeration.
        auto pk = [&](Bits x, Bits y) {
            return static_cast<std::uint64_t>(v.reduce(x)) | (std::uint64_t{v.reduce(y)} << n);
        };
        const double brute =
            pair_entropy(p, q, [&](Bits x, Bits) { return std::uint64_t{x}; }) -
            pair_entropy(p, q, [&](Bits x, Bits) { return std::uint64_t{v.reduce(x)}; }) +
            pair_entropy(p, q, [&](Bits, Bits y) { return std::uint64_t{y}; }) -
            pair_entropy(p, q, [&](Bits, Bits y) { return std::uint64_t{v.reduce(y)}; }) -
            pair_entropy(p, q, [&](Bits x, Bits y) { return pk(x, y) | (std::uint64_t{x ^ y} << (2 * n)); }) +
            pair_entropy(p, q, pk);
        ASSERT_NEAR(conditional_doubling_mass(fx, fy), brute, 1e-9);
        ASSERT_NEAR(fiber_interaction(p, q, v), brute, 1e-9);
    }
}

TEST(Fibring, TrivialSubspaces) {
    Rng rng(10);
    const auto p = random_dist(4, rng);
    const auto q = random_dist(4, rng);
    const auto zero = fibring_decompose(p, q, Subspace(4));
    EXPECT_NEAR(zero.s_quotient, zero.s_total, 1e-12);
    EXPECT_NEAR(zero.s_fiber, 0.0, 1e-12);
    EXPECT_NEAR(zero.residual_mi, 0.0, 1e-12);

    const auto full = fibring_decompose(p, q, Subspace::full(4));
    EXPECT_NEAR(full.s_fiber, full.s_total, 1e-12);
    EXPECT_NEAR(full.s_quotient, 0.0, 1e-12);
    EXPECT_NEAR(full.residual_mi, 0.0, 1e-12);
    EXPECT_THROW(fibring_decompose(p, q, Subspace(3)), DimensionMismatch);
}

TEST(Fibring, BruteForceNinePairs) {
    const auto a = uniform_on(bs({"000", "001", "110"}), 3);
    const auto v = span_bits(bs({"001"}), 3);
    const auto r = fibring_decompose(a, a, v);
    const int n = 3;
    auto pr = [&](Bits x) { return std::uint64_t{v.reduce(x)}; };
    auto hp = [&](auto f) { return pair_entropy(a, a, f); };

    const double hx = testutil::dist_entropy(a);
    const double s_total = 2 * hx - hp([](Bits x, Bits y) { return std::uint64_t{x ^ y}; });
    const double hpx = hp([&](Bits x, Bits) { return pr(x); });
    const double s_quot = 2 * hpx - hp([&](Bits x, Bits y) { return pr(x ^ y); });
    const double h_x_given = hx - hpx;
    auto pk = [&](Bits x, Bits y) { return pr(x) | (pr(y) << n); };
    const double h_sum_given = hp([&](Bits x, Bits y) { return pk(x, y) | (std::uint64_t{x ^ y} << (2 * n)); }) -
                               hp(pk);
    const double s_fiber = 2 * h_x_given - h_sum_given;
    auto s_key = [&](Bits x, Bits y) { return pr(x ^ y) << (3 * n); };
    const double resid = hp([&](Bits x, Bits y) { return (x ^ y) | s_key(x, y); }) +
                         hp([&](Bits x, Bits y) { return (pk(x, y) << n) | s_key(x, y); }) -
                         hp([&](Bits x, Bits y) { return (x ^ y) | (pk(x, y) << n) | s_key(x, y); }) -
                         hp(s_key);

    EXPECT_NEAR(r.s_total, s_total, 1e-12);
    EXPECT_NEAR(r.s_quotient, s_quot, 1e-12);
    EXPECT_NEAR(r.s_fiber, s_fiber, 1e-12);
    EXPECT_NEAR(r.residual_mi, resid, 1e-12);
    EXPECT_LT(std::abs(r.identity_gap()), 1e-12);
}

TEST(Fibring, IdentityOnRandomInputs) {
    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(7));
        const auto p = random_dist(n, rng);
        const auto q = random_dist(n, rng);
        const auto v = random_subspace(n, static_cast<int>(rng.below(n + 1)), rng);
        const auto r = fibring_decompose(p, q, v);
        ASSERT_LT(std::abs(r.identity_gap()), 1e-9);
        ASSERT_GE(r.residual_mi, -1e-9);
    }
}

TEST(QuotientEntropy, Examples) {
    Rng rng(12);
    const auto p = random_dist(3, rng);
    EXPECT_NEAR(quotient_entropy(p, Subspace(3)), shannon_entropy(p), 1e-12);
    const auto v = span_bits(bs({"110", "011"}), 3);
    EXPECT_NEAR(quotient_entropy(uniform_sub(v), v), 0.0, 1e-12);
    const auto a = uniform_on(bs({"000", "001", "110"}), 3);
    const double h23 = -(2.0 / 3) * std::log2(2.0 / 3) - (1.0 / 3) * std::log2(1.0 / 3);
    EXPECT_NEAR(quotient_entropy(a, span_bits(bs({"001"}), 3)), h23, 1e-12);
    EXPECT_NEAR(h23, 0.9183, 5e-5);
}

TEST(QuotientEntropy, TwoRoutesAgree) {
    Rng rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(8));
        const auto p = random_dist(n, rng);
        const auto v = random_subspace(n, static_cast<int>(rng.below(n + 1)), rng);
        ASSERT_NEAR(quotient_entropy(p, v), quotient_entropy_via_sum(p, v), 1e-9);
    }
}

TEST(Properties, ChainRuleAndSubmodularity) {
    Rng rng(14);
    for (int trial = 0; trial < 1000; ++trial) {
        const int k = 2 + static_cast<int>(rng.below(3));
        std::vector<int> dims;
        for (int i = 0; i < k; ++i) dims.push_back(1 + static_cast<int>(rng.below(3)));
        const auto j = random_joint(dims, rng);
        ASSERT_NEAR(joint_entropy(j, {0, 1}), joint_entropy(j, {1}) + conditional_entropy(j, {0}, {1}), 1e-9);
        // Conditional entropy equals the average entropy of the conditional laws.
        const auto m = j.marginal({0, 1});
        std::map<Bits, std::map<std::uint64_t, double>> by_u;
        std::map<Bits, double> pu;
        for (std::size_t idx = 0; idx < m.masses().size(); ++idx) {
            const double w = m.masses()[idx];
            if (w == 0.0) continue;
            const Bits x = static_cast<Bits>(idx) & ((1u << dims[0]) - 1);
            const Bits u = static_cast<Bits>(idx >> dims[0]);
            by_u[u][x] += w;
            pu[u] += w;
        }
        double avg = 0.0;
        for (auto& [u, tab] : by_u) {
            for (auto& [x, w] : tab) w /= pu[u];
            avg += pu[u] * testutil::brute_entropy(tab);
        }
        ASSERT_NEAR(conditional_entropy(j, {0}, {1}), avg, 1e-9);
        const BlockSet s = k > 2 ? BlockSet{2} : BlockSet{};
        ASSERT_GE(conditional_mutual_information(j, {0}, {1}, s), -1e-9);
        ASSERT_GE(mutual_information(j, {0}, {1}), -1e-9);
    }
}

TEST(Properties, SubspaceSubmodularityExhaustiveN4) {
    Rng rng(15);
    const auto all = enumerate_subspaces(4, 4);
    for (int trial = 0; trial < 3; ++trial) {
        const auto p = random_dist(4, rng);
        for (const auto& v1 : all) {
            for (const auto& v2 : all) {
                const double lhs = quotient_entropy(p, v1) + quotient_entropy(p, v2);
                const double rhs =
                    quotient_entropy(p, subspace_sum(v1, v2)) + quotient_entropy(p, subspace_intersect(v1, v2));
                ASSERT_GE(lhs, rhs - 1e-9);
            }
        }
    }
}

TEST(Properties, FiberInteractionInequality) {
    Rng rng(16);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(5));
        const auto p = random_dist(n, rng);
        const auto q = random_dist(n, rng);
        const auto v = random_subspace(n, 1 + static_cast<int>(rng.below(n)), rng);
        std::vector<Bits> sub;
        for (Bits e : v.basis()) {
            if (rng.below(2)) sub.push_back(e);
        }
        const auto w = span_bits(sub, n);
        ASSERT_TRUE(v.contains(w));
        const double lhs = fiber_interaction(p, q, v);
        const double rhs = fiber_interaction(p, q, w) + nested_fiber_interaction(p, q, w, v);
        ASSERT_LE(lhs, rhs + 1e-9);
    }
    EXPECT_THROW(nested_fiber_interaction(Dist::uniform_full(2), Dist::uniform_full(2), Subspace::full(2),
                                          Subspace(2)),
                 ValidationError);
}

TEST(Properties, BaseCaseAndRuzsaBounds) {
    Rng rng(17);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(6));
        const auto p = random_dist(n, rng);
        const auto q = random_dist(n, rng);
        const double hx = shannon_entropy(p);
        const double hy = shannon_entropy(q);
        const double hs = shannon_entropy(xor_convolve(p, q));
        ASSERT_GE(hs, std::max(hx, hy) - 1e-9);
        const double d = ruzsa_distance(p, q);
        ASSERT_GE(d, 0.5 * std::abs(hx - hy) - 1e-9);
        ASSERT_LE(d, 0.5 * (hx + hy) + 1e-9);
        ASSERT_LE(hx, n + 1e-12);
        ASSERT_GE(hx, -1e-12);
    }
}

TEST(FiberFamily, TruncationKeepsHeaviest) {
    const auto tp = three_point();
    const auto fam = fibers_of_sum(tp, tp);
    ASSERT_EQ(fam.size(), 4u);
    EXPECT_LT(std::abs(fam.conditional_entropy() - doubling_mass(tp, tp)), 1e-12);
    const auto top = fam.truncated(1);
    ASSERT_EQ(top.size(), 1u);
    EXPECT_EQ(top.labels[0], 0u);
    EXPECT_DOUBLE_EQ(top.weights[0], 1.0);
    for (Bits x = 0; x < 8; ++x) EXPECT_NEAR(fam.base()[x], tp[x], 1e-12);
}
