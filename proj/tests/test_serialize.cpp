#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "entropic/errors.hpp"
#include "entropic/pipeline.hpp"
#include "entropic/random.hpp"
#include "entropic/serialize.hpp"
#include "test_util.hpp"

using namespace entropic;
using testutil::b;
using testutil::bs;

namespace {

Json reparse(const Json& j) { return Json::parse(j.dump()); }

}  // namespace

TEST(Hex, ParseAndPrint) {
    EXPECT_EQ(to_hex(0), "0x0");
    EXPECT_EQ(to_hex(0x1f), "0x1f");
    EXPECT_EQ(parse_hex("0x1f"), 0x1fu);
    EXPECT_EQ(parse_hex("1F"), 0x1fu);
    EXPECT_EQ(parse_hex("0X0a"), 0xau);
    for (const char* bad : {"", "0x", "xyz", "0x1g", "-1", "0x123456789"}) {
        EXPECT_THROW(parse_hex(bad), ValidationError) << bad;
    }
}

TEST(SubspaceJson, RoundTripAndRejection) {
    const Subspace v = span_bits(bs({"1100", "0110"}), 4);
    const Json j = reparse(to_json(v));
    EXPECT_EQ(j.at("basis").size(), 2u);
    EXPECT_EQ(subspace_from_json(j), v);

    // Two rows sharing a pivot are not in reduced row echelon form.
    EXPECT_THROW(subspace_from_json(Json::parse(R"({"n":4,"basis":["0xc","0x8"]})")), ValidationError);
    EXPECT_THROW(subspace_from_json(Json::parse(R"({"n":2,"basis":["0x4"]})")), ValidationError);
    EXPECT_THROW(subspace_from_json(Json::parse(R"({"basis":[]})")), ValidationError);
    EXPECT_THROW(subspace_from_json(Json::parse(R"({"n":"4","basis":[]})")), ValidationError);
    EXPECT_EQ(subspace_from_json(Json::parse(R"({"n":3,"basis":[]})")).dim(), 0);
}

TEST(DistJson, DenseAndSparseRoundTripExactly) {
    Rng rng(5);
    const Dist dense = random_dist(4, rng);
    const Json jd = reparse(to_json(dense));
    EXPECT_TRUE(jd.contains("mass"));
    EXPECT_EQ(dist_from_json(jd), dense);

    const Dist sparse = uniform_on(bs({"000000", "101010"}), 6);
    const Json js = reparse(to_json(sparse));
    EXPECT_TRUE(js.contains("support"));
    EXPECT_EQ(js.at("support").size(), 2u);
    EXPECT_EQ(dist_from_json(js), sparse);
}

TEST(DistJson, Rejection) {
    EXPECT_THROW(dist_from_json(Json::parse(R"({"n":1,"mass":[0.5,0.6]})")), ValidationError);
    EXPECT_THROW(dist_from_json(Json::parse(R"({"n":1,"mass":[1.5,-0.5]})")), ValidationError);
    EXPECT_THROW(dist_from_json(Json::parse(R"({"n":2,"mass":[1,0]})")), ValidationError);
    EXPECT_THROW(dist_from_json(Json::parse(R"({"n":2,"support":{"0x4":1}})")), ValidationError);
    EXPECT_THROW(dist_from_json(Json::parse(R"({"n":2,"support":{"0x1":"one"}})")), ValidationError);
    EXPECT_THROW(dist_from_json(Json::parse(R"({"n":2})")), ValidationError);
    EXPECT_THROW(dist_from_json(Json::parse(R"({"n":30,"support":{"0x0":1}})")), Error);
}

TEST(SetJson, RoundTripAndRejection) {
    const auto a = ElementSet::from(5, bs({"00011", "10000", "00000"}));
    const Json j = reparse(to_json(a));
    EXPECT_EQ(j.at("elements")[0], "0x0");
    const auto back = set_from_json(j);
    EXPECT_EQ(back.n, 5);
    EXPECT_EQ(back.elements, a.elements);
    EXPECT_THROW(set_from_json(Json::parse(R"({"n":3,"elements":["0x8"]})")), ValidationError);
    EXPECT_THROW(set_from_json(Json::parse(R"({"n":3,"elements":[]})")), ValidationError);
}

TEST(InequalityJson, NonFiniteValuesSurvive) {
    Inequality q;
    q.name = "bound";
    q.lhs = 1.25;
    q.rhs = std::numeric_limits<double>::infinity();
    q.relation = Relation::AtMost;
    q.kind = ClaimKind::Hypothesis;
    const Json j = reparse(to_json(q));
    EXPECT_EQ(j.at("rhs"), "inf");
    EXPECT_TRUE(j.at("holds").get<bool>());
    const Inequality back = inequality_from_json(j);
    EXPECT_EQ(back.name, "bound");
    EXPECT_EQ(back.lhs, 1.25);
    EXPECT_TRUE(std::isinf(back.rhs));
    EXPECT_EQ(back.kind, ClaimKind::Hypothesis);
    EXPECT_EQ(back.relation, Relation::AtMost);
}

TEST(CertificateJson, SolveBundleRoundTripsAndReverifies) {
    Rng rng(17);
    const Dist p = random_dist(3, rng);
    const Dist q = random_dist(3, rng);
    PipelineOptions options;
    options.seed = 17;
    const SolveResult r = solve_B(p, q, 0.3, 0.1, options);
    const Json bundle = reparse(solve_bundle(r, options));
    for (const char* key : {"inputs_digest", "seed", "rng_algorithm", "mode", "trace", "final_subspace", "certificate"}) {
        EXPECT_TRUE(bundle.contains(key)) << key;
    }
    EXPECT_EQ(bundle.at("inputs_digest"), inputs_digest({p, q}));
    EXPECT_EQ(bundle.at("inputs_digest").get<std::string>().size(), 16u);
    const Json& cert = bundle.at("certificate");
    EXPECT_EQ(cert.at("tolerances").at("identity"), 1e-9);
    for (const auto& ineq : cert.at("inequalities")) {
        for (const char* key : {"name", "lhs", "relation", "rhs", "tolerance", "slack", "holds"}) {
            EXPECT_TRUE(ineq.contains(key)) << key;
        }
    }

    const SubspaceCertificate back = certificate_from_document(bundle);
    EXPECT_EQ(back.v, r.certificate.v);
    EXPECT_EQ(back.inputs, r.certificate.inputs);
    EXPECT_EQ(back.passed(), r.certificate.passed());
    EXPECT_TRUE(reverify(back).ok);
    EXPECT_TRUE(reverify(certificate_from_document(bundle.at("certificate"))).ok);
}

TEST(CertificateJson, TamperingIsDetected) {
    const Dist p = uniform_on(bs({"000", "001", "010"}), 3);
    const SolveResult r = solve_B(p, p, 0.3, 0.1);
    Json j = reparse(to_json(r.certificate));
    ASSERT_TRUE(reverify(certificate_from_json(j)).ok);

    Json lhs = j;
    lhs["inequalities"][0]["lhs"] = lhs["inequalities"][0]["lhs"].get<double>() + 1e-3;
    EXPECT_FALSE(reverify(certificate_from_json(lhs)).ok);

    Json sub = j;
    sub["subspace"] = to_json(Subspace::full(3));
    EXPECT_FALSE(reverify(certificate_from_json(sub)).ok);

    Json missing = j;
    missing.erase("inputs");
    EXPECT_THROW(certificate_from_json(missing), ValidationError);
}

TEST(InputsDigest, SensitiveToEveryBit) {
    const Dist p = Dist::uniform_full(2);
    std::vector<double> m(p.masses().begin(), p.masses().end());
    m[0] = std::nextafter(m[0], 1.0);
    m[1] = std::nextafter(m[1], 0.0);
    const Dist nudged(2, m);
    EXPECT_NE(inputs_digest({p}), inputs_digest({nudged}));
    EXPECT_EQ(inputs_digest({p, nudged}), inputs_digest({p, nudged}));
    EXPECT_NE(inputs_digest({p, nudged}), inputs_digest({nudged, p}));
}

TEST(ReportJson, FibringAndEndgame) {
    Rng rng(3);
    const Dist p = random_dist(3, rng);
    const Dist q = random_dist(3, rng);
    const Json f = to_json(fibring_decompose(p, q, span_bits(bs({"001"}), 3)));
    EXPECT_LE(std::abs(f.at("identity_residual").get<double>()), 1e-9);
    EXPECT_EQ(f.size(), 5u);

    const Dist u = uniform_on(bs({"000", "001", "010"}), 3);
    const double eta = std::min(0.5, doubling_mass(u, u) / (2 * shannon_entropy(u)) * (1 - 1e-12));
    const Json t = to_json(endgame(u, u, eta, endgame_gaps(u, u, eta).kappa()));
    EXPECT_TRUE(t.is_object());
    EXPECT_FALSE(t.empty());
}

TEST(Files, ReadErrors) {
    EXPECT_THROW(read_json_file("/nonexistent/dir/file.json"), Error);
    const std::string path = ::testing::TempDir() + "entropic_bad.json";
    write_text_file(path, "{not json");
    EXPECT_THROW(read_json_file(path), ValidationError);
    write_text_file(path, R"({"n":2,"elements":["0x3"]})");
    EXPECT_EQ(set_from_json(read_json_file(path)).elements, std::vector<Bits>{3});
}
