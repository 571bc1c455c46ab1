#ifndef LATENTDIR_ARTIFACT_HPP
#define LATENTDIR_ARTIFACT_HPP

// JSON documents: persisted directions and synthetic ground truth.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "latentdir/error.hpp"
#include "latentdir/estimators.hpp"
#include "latentdir/semantics.hpp"
#include "latentdir/synthetic.hpp"

namespace latentdir {

using ordered_json = nlohmann::ordered_json;

inline constexpr int kArtifactSchemaVersion = 1;

struct SeedInfo {
    std::uint64_t seed = 0;
    double holdout_fraction = 0.0;
    std::vector<std::string> holdout_ids;
};

/// A persisted editing direction with its fitted linear model.
struct DirectionArtifact {
    int schema_version = kArtifactSchemaVersion;
    std::string feature_name;
    Method method = Method::Discretized;
    LatentVector n;
    double lambda = 0.0;
    double intercept = 0.0;
    InterceptMode intercept_mode = InterceptMode::Fit;
    std::optional<double> epsilon_used;
    std::optional<double> eigenvalue;
    std::vector<double> bins;      // discretized only
    std::vector<double> quantiles; // bipolar only
    bool sign_aligned = false;
    bool raw_sign_flipped = false;
    std::string training_set_fingerprint;
    SeedInfo seed_info;

    Eigen::Index dim() const noexcept { return n.size(); }

    EditingDirection direction() const {
        EditingDirection d;
        d.n = n;
        d.method = method;
        d.eigenvalue = eigenvalue;
        d.epsilon_used = epsilon_used;
        d.feature_name = feature_name;
        d.sign_aligned = sign_aligned;
        d.raw_sign_flipped = raw_sign_flipped;
        return d;
    }

    LinearSemanticModel model() const { return LinearSemanticModel{direction(), lambda, intercept, intercept_mode}; }
};

namespace detail {

inline ordered_json optional_number(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

inline std::vector<double> vector_to_list(const LatentVector& v) { return {v.data(), v.data() + v.size()}; }

template <typename T>
T require(const ordered_json& doc, const char* key) {
    if (!doc.contains(key)) fail(ErrorCode::ParseError, std::string("missing key '") + key + "'");
    try {
        return doc.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, std::string("key '") + key + "': " + e.what());
    }
}

inline std::optional<double> optional_field(const ordered_json& doc, const char* key) {
    if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
    return require<double>(doc, key);
}

inline void reject_unknown_keys(const ordered_json& doc, std::initializer_list<const char*> known, const char* what) {
    for (const auto& [k, _] : doc.items()) {
        bool ok = false;
        for (const char* name : known) ok = ok || k == name;
        if (!ok) fail(ErrorCode::ParseError, std::string("unknown key '") + k + "' in " + what);
    }
}

} // namespace detail

inline const char* intercept_mode_name(InterceptMode m) { return m == InterceptMode::Fit ? "fit" : "zero"; }

inline InterceptMode parse_intercept_mode(const std::string& s) {
    if (s == "fit") return InterceptMode::Fit;
    if (s == "zero") return InterceptMode::Zero;
    fail(ErrorCode::ParseError, "intercept_mode must be 'fit' or 'zero'");
}

inline ordered_json to_json(const DirectionArtifact& a) {
    ordered_json doc;
    doc["schema_version"] = a.schema_version;
    doc["feature_name"] = a.feature_name;
    doc["method"] = std::string(method_name(a.method));
    doc["dim"] = a.dim();
    doc["n"] = detail::vector_to_list(a.n);
    doc["lambda"] = a.lambda;
    doc["intercept"] = a.intercept;
    doc["intercept_mode"] = intercept_mode_name(a.intercept_mode);
    doc["epsilon_used"] = detail::optional_number(a.epsilon_used);
    doc["eigenvalue"] = detail::optional_number(a.eigenvalue);
    doc["bins"] = a.bins;
    doc["quantiles"] = a.quantiles;
    doc["sign_aligned"] = a.sign_aligned;
    doc["raw_sign_flipped"] = a.raw_sign_flipped;
    doc["training_set_fingerprint"] = a.training_set_fingerprint;
    doc["seed_info"] = {{"seed", a.seed_info.seed},
                        {"holdout_fraction", a.seed_info.holdout_fraction},
                        {"holdout_ids", a.seed_info.holdout_ids}};
    return doc;
}

inline std::string serialize_artifact(const DirectionArtifact& a) { return to_json(a).dump(2) + "\n"; }

inline DirectionArtifact artifact_from_json(const ordered_json& doc) {
    if (!doc.is_object()) fail(ErrorCode::ParseError, "artifact must be a JSON object");
    detail::reject_unknown_keys(doc,
                                {"schema_version", "feature_name", "method", "dim", "n", "lambda", "intercept",
                                 "intercept_mode", "epsilon_used", "eigenvalue", "bins", "quantiles", "sign_aligned",
                                 "raw_sign_flipped", "training_set_fingerprint", "seed_info"},
                                "artifact");
    DirectionArtifact a;
    a.schema_version = detail::require<int>(doc, "schema_version");
    if (a.schema_version != kArtifactSchemaVersion)
        fail(ErrorCode::ParseError, "unsupported schema_version " + std::to_string(a.schema_version));
    a.feature_name = detail::require<std::string>(doc, "feature_name");
    try {
        a.method = parse_method(detail::require<std::string>(doc, "method"));
    } catch (const Error& e) {
        fail(ErrorCode::ParseError, e.what());
    }
    const auto dim = detail::require<Eigen::Index>(doc, "dim");
    const auto values = detail::require<std::vector<double>>(doc, "n");
    if (dim <= 0 || static_cast<Eigen::Index>(values.size()) != dim)
        fail(ErrorCode::ParseError, "'n' must have 'dim' entries");
    a.n = Eigen::Map<const LatentVector>(values.data(), dim);
    if (!a.n.allFinite() || std::abs(a.n.norm() - 1.0) > 1e-9)
        fail(ErrorCode::ParseError, "'n' must be a unit vector");
    a.lambda = detail::require<double>(doc, "lambda");
    a.intercept = detail::require<double>(doc, "intercept");
    a.intercept_mode = parse_intercept_mode(detail::require<std::string>(doc, "intercept_mode"));
    a.epsilon_used = detail::optional_field(doc, "epsilon_used");
    a.eigenvalue = detail::optional_field(doc, "eigenvalue");
    a.bins = detail::require<std::vector<double>>(doc, "bins");
    a.quantiles = detail::require<std::vector<double>>(doc, "quantiles");
    a.sign_aligned = detail::require<bool>(doc, "sign_aligned");
    a.raw_sign_flipped = detail::require<bool>(doc, "raw_sign_flipped");
    a.training_set_fingerprint = detail::require<std::string>(doc, "training_set_fingerprint");
    const auto seed = detail::require<ordered_json>(doc, "seed_info");
    if (!seed.is_object()) fail(ErrorCode::ParseError, "'seed_info' must be an object");
    detail::reject_unknown_keys(seed, {"seed", "holdout_fraction", "holdout_ids"}, "seed_info");
    a.seed_info.seed = detail::require<std::uint64_t>(seed, "seed");
    a.seed_info.holdout_fraction = detail::require<double>(seed, "holdout_fraction");
    a.seed_info.holdout_ids = detail::require<std::vector<std::string>>(seed, "holdout_ids");
    return a;
}

inline DirectionArtifact parse_artifact(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, e.what());
    }
    return artifact_from_json(doc);
}

inline constexpr const char* kRngScheme = "splitmix64-counter/box-muller/v1";

inline ordered_json ground_truth_json(const SyntheticConfig& cfg, const PlantedDataset& data) {
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["rng"] = kRngScheme;
    doc["seed"] = cfg.seed;
    doc["dim"] = cfg.dim;
    doc["n_samples"] = cfg.n_samples;
    doc["label_model"] = std::string(label_model_name(cfg.label_model));
    doc["slope"] = cfg.slope;
    doc["offset"] = cfg.offset;
    doc["noise_sigma"] = cfg.noise_sigma;
    doc["clipped_fraction"] = data.clipped_fraction();
    doc["planted"] = detail::vector_to_list(data.planted);
    return doc;
}

/// Planted direction from a ground-truth document.
inline LatentVector planted_from_json(const ordered_json& doc) {
    const auto values = detail::require<std::vector<double>>(doc, "planted");
    if (values.empty()) fail(ErrorCode::ParseError, "'planted' is empty");
    LatentVector v = Eigen::Map<const LatentVector>(values.data(), static_cast<Eigen::Index>(values.size()));
    if (!v.allFinite() || std::abs(v.norm() - 1.0) > 1e-9) fail(ErrorCode::ParseError, "'planted' must be unit");
    return v;
}

} // namespace latentdir

#endif
