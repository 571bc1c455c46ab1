#ifndef LATENTDIR_SYNTHETIC_HPP
#define LATENTDIR_SYNTHETIC_HPP

// Latent datasets with a planted semantic direction.
//
// Randomness comes from a counter-based stream: every value is a pure
// function of (seed, record, word index), so records can be generated in any
// order or in parallel and any language can reproduce them. The scheme is
// documented in docs/FORMATS.md and pinned by tests/golden.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latentdir/dataset.hpp"
#include "latentdir/error.hpp"

namespace latentdir {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based stream for one (seed, record) pair.
class CounterStream {
public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    static constexpr double kTwoPi = 6.283185307179586;

    constexpr CounterStream(std::uint64_t seed, std::uint64_t record) noexcept
        : key_(mix64(mix64(seed) + kGamma * (record + 1))) {}

    constexpr std::uint64_t word(std::uint64_t k) const noexcept { return mix64(key_ + kGamma * (k + 1)); }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    constexpr double uniform(std::uint64_t k) const noexcept {
        return (static_cast<double>(word(k) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal number j. Box-Muller on words (2p, 2p+1), p = j / 2:
    /// even j takes the cosine branch, odd j the sine branch.
    double normal(std::uint64_t j) const {
        const std::uint64_t p = j / 2;
        const double r = std::sqrt(-2.0 * std::log(uniform(2 * p)));
        const double theta = kTwoPi * uniform(2 * p + 1);
        return (j % 2 == 0) ? r * std::cos(theta) : r * std::sin(theta);
    }

private:
    std::uint64_t key_;
};

/// Stream reserved for drawing a random planted direction.
inline constexpr std::uint64_t kPlantedRecord = std::numeric_limits<std::uint64_t>::max();

enum class LabelModel { LinearClipped, ThresholdBinary };

constexpr std::string_view label_model_name(LabelModel m) noexcept {
    return m == LabelModel::LinearClipped ? "linear_clipped" : "threshold_binary";
}

inline LabelModel parse_label_model(std::string_view name) {
    if (name == "linear_clipped") return LabelModel::LinearClipped;
    if (name == "threshold_binary") return LabelModel::ThresholdBinary;
    fail(ErrorCode::InvalidConfig, "unknown label model '" + std::string(name) + "'");
}

struct SyntheticConfig {
    Eigen::Index dim = 8;
    std::size_t n_samples = 200;
    // Explicit unit direction; drawn from the planted stream when empty.
    std::optional<LatentVector> planted;
    double slope = 0.1;
    double offset = 0.5;
    double noise_sigma = 0.0;
    LabelModel label_model = LabelModel::LinearClipped;
    std::uint64_t seed = 0;
};

struct PlantedDataset {
    LabeledLatentSet set;
    LatentVector planted;
    std::size_t clipped = 0;

    double clipped_fraction() const {
        return set.empty() ? 0.0 : static_cast<double>(clipped) / static_cast<double>(set.size());
    }
};

/// Sequential dot product, index order. Fixed summation order keeps labels
/// reproducible outside this library.
inline double ordered_dot(const LatentVector& a, const LatentVector& b) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

inline LatentVector random_unit_vector(Eigen::Index dim, std::uint64_t seed) {
    const CounterStream stream(seed, kPlantedRecord);
    LatentVector v(dim);
    for (Eigen::Index k = 0; k < dim; ++k) v[k] = stream.normal(static_cast<std::uint64_t>(k));
    double sq = 0.0;
    for (Eigen::Index k = 0; k < dim; ++k) sq += v[k] * v[k];
    return v / std::sqrt(sq);
}

inline void validate(const SyntheticConfig& cfg) {
    if (cfg.dim <= 0) fail(ErrorCode::InvalidConfig, "dim must be positive");
    if (cfg.n_samples == 0) fail(ErrorCode::InvalidConfig, "n must be positive");
    if (!(cfg.slope > 0.0) || !std::isfinite(cfg.slope)) fail(ErrorCode::InvalidConfig, "slope must be positive");
    if (!std::isfinite(cfg.offset)) fail(ErrorCode::InvalidConfig, "offset must be finite");
    if (!(cfg.noise_sigma >= 0.0) || !std::isfinite(cfg.noise_sigma))
        fail(ErrorCode::InvalidConfig, "noise_sigma must be nonnegative");
    if (cfg.planted) {
        if (cfg.planted->size() != cfg.dim) fail(ErrorCode::InvalidConfig, "planted direction has wrong dimension");
        if (std::abs(cfg.planted->norm() - 1.0) > 1e-9) fail(ErrorCode::InvalidConfig, "planted direction must be unit");
    }
}

/// Record i: z_k = normal(k) for k < dim, label noise = sigma * normal(dim),
/// all from CounterStream(seed, i). Ids are "s<i>".
inline PlantedDataset generate_planted_dataset(const SyntheticConfig& cfg) {
    validate(cfg);
    PlantedDataset out;
    out.planted = cfg.planted ? *cfg.planted : random_unit_vector(cfg.dim, cfg.seed);

    std::vector<LatentRecord> records(cfg.n_samples);
    for (std::size_t i = 0; i < cfg.n_samples; ++i) {
        const CounterStream stream(cfg.seed, i);
        LatentRecord& rec = records[i];
        rec.id = "s" + std::to_string(i);
        rec.z.resize(cfg.dim);
        for (Eigen::Index k = 0; k < cfg.dim; ++k) rec.z[k] = stream.normal(static_cast<std::uint64_t>(k));
        const double noise = cfg.noise_sigma * stream.normal(static_cast<std::uint64_t>(cfg.dim));
        const double t = ordered_dot(out.planted, rec.z);
        if (cfg.label_model == LabelModel::ThresholdBinary) {
            rec.label = (t + noise > 0.0) ? 1.0 : 0.0;
        } else {
            const double raw = cfg.offset + cfg.slope * t + noise;
            rec.label = std::clamp(raw, 0.0, 1.0);
            if (rec.label != raw) ++out.clipped;
        }
    }
    out.set = LabeledLatentSet(cfg.dim, std::move(records));
    return out;
}

} // namespace latentdir

#endif
