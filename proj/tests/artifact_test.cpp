#include <gtest/gtest.h>

#include <string>

#include "oracles.hpp"

using namespace latentdir;

namespace {

DirectionArtifact sample_artifact() {
    oracle::Rng rng(20);
    DirectionArtifact a;
    a.feature_name = "smile";
    a.method = Method::Discretized;
    a.n = rng.unit(5);
    a.lambda = 0.1234567890123456;
    a.intercept = 0.4999999999999999;
    a.epsilon_used = 3.0e-7;
    a.eigenvalue = 12.5;
    a.bins = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    a.sign_aligned = true;
    a.raw_sign_flipped = true;
    a.training_set_fingerprint = "fnv1a64:00112233aabbccdd";
    a.seed_info = {42, 0.2, {"s1", "s7"}};
    return a;
}

ordered_json sample_json() { return to_json(sample_artifact()); }

void expect_parse_error(const ordered_json& doc, const std::string& fragment) {
    try {
        artifact_from_json(doc);
        FAIL() << "accepted " << doc.dump();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
        EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
}

} // namespace

TEST(Artifact, RoundTripIsByteIdentical) {
    const std::string text = serialize_artifact(sample_artifact());
    const auto parsed = parse_artifact(text);
    EXPECT_EQ(serialize_artifact(parsed), text);
    EXPECT_EQ(parsed.n, sample_artifact().n);
    EXPECT_EQ(parsed.lambda, sample_artifact().lambda);
    EXPECT_EQ(parsed.intercept, sample_artifact().intercept);
    EXPECT_EQ(parsed.seed_info.holdout_ids, sample_artifact().seed_info.holdout_ids);
}

TEST(Artifact, RoundTripPreservesRandomDoubles) {
    oracle::Rng rng(21);
    for (int t = 0; t < 50; ++t) {
        DirectionArtifact a = sample_artifact();
        a.n = rng.unit(1 + static_cast<Eigen::Index>(rng.index(40)));
        a.lambda = rng.normal() * 1e-5;
        a.intercept = rng.normal() * 1e8;
        const auto b = parse_artifact(serialize_artifact(a));
        EXPECT_EQ(b.n, a.n);
        EXPECT_EQ(b.lambda, a.lambda);
        EXPECT_EQ(b.intercept, a.intercept);
    }
}

TEST(Artifact, NullOptionalsRoundTrip) {
    DirectionArtifact a = sample_artifact();
    a.method = Method::CenterDiff;
    a.epsilon_used.reset();
    a.eigenvalue.reset();
    a.bins.clear();
    const auto doc = to_json(a);
    EXPECT_TRUE(doc["epsilon_used"].is_null());
    EXPECT_TRUE(doc["eigenvalue"].is_null());
    const auto b = artifact_from_json(doc);
    EXPECT_FALSE(b.epsilon_used.has_value());
    EXPECT_FALSE(b.eigenvalue.has_value());
    EXPECT_EQ(b.method, Method::CenterDiff);
}

TEST(Artifact, KeyOrderIsStable) {
    const auto doc = sample_json();
    std::vector<std::string> keys;
    for (const auto& [k, _] : doc.items()) keys.push_back(k);
    const std::vector<std::string> expected = {
        "schema_version", "feature_name", "method", "dim", "n", "lambda", "intercept", "intercept_mode",
        "epsilon_used", "eigenvalue", "bins", "quantiles", "sign_aligned", "raw_sign_flipped",
        "training_set_fingerprint", "seed_info"};
    EXPECT_EQ(keys, expected);
}

TEST(Artifact, ModelAndDirectionViews) {
    const auto a = sample_artifact();
    const auto m = a.model();
    EXPECT_EQ(m.lambda, a.lambda);
    EXPECT_EQ(m.intercept, a.intercept);
    EXPECT_EQ(m.direction.n, a.n);
    EXPECT_EQ(m.direction.method, a.method);
    EXPECT_EQ(a.direction().feature_name, "smile");
}

TEST(Artifact, RejectsMalformedDocuments) {
    auto doc = sample_json();
    doc["extra"] = 1;
    expect_parse_error(doc, "extra");

    doc = sample_json();
    doc["seed_info"]["salt"] = 3;
    expect_parse_error(doc, "salt");

    doc = sample_json();
    doc["n"][0] = doc["n"][0].get<double>() + 0.01;
    expect_parse_error(doc, "unit");

    doc = sample_json();
    doc["dim"] = 4;
    expect_parse_error(doc, "dim");

    doc = sample_json();
    doc.erase("lambda");
    expect_parse_error(doc, "lambda");

    doc = sample_json();
    doc["lambda"] = "big";
    expect_parse_error(doc, "lambda");

    doc = sample_json();
    doc["method"] = "pca";
    expect_parse_error(doc, "pca");

    doc = sample_json();
    doc["schema_version"] = 2;
    expect_parse_error(doc, "schema_version");

    doc = sample_json();
    doc["intercept_mode"] = "maybe";
    expect_parse_error(doc, "intercept_mode");

    try {
        parse_artifact("{not json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
    }
}

TEST(GroundTruth, RoundTripsPlantedDirection) {
    SyntheticConfig cfg;
    cfg.dim = 6;
    cfg.n_samples = 20;
    cfg.seed = 99;
    const auto data = generate_planted_dataset(cfg);
    const auto doc = ground_truth_json(cfg, data);
    EXPECT_EQ(doc["rng"], kRngScheme);
    EXPECT_EQ(doc["seed"], 99u);
    const auto planted = planted_from_json(ordered_json::parse(doc.dump()));
    EXPECT_EQ(planted, data.planted);
}
