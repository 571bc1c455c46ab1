#ifndef LATENTDIR_EVALUATION_HPP
#define LATENTDIR_EVALUATION_HPP

// Direction quality metrics: projection/strength correlation, distances
// between directions, recovery of a planted direction.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "latentdir/dataset.hpp"
#include "latentdir/error.hpp"
#include "latentdir/estimators.hpp"

namespace latentdir {

enum class CorrelationKind { Pearson, Spearman };

/// Average ranks (1-based); ties share the mean of their positions.
inline Eigen::VectorXd average_ranks(const Eigen::VectorXd& v) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(v.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return v[a] < v[b]; });
    Eigen::VectorXd ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

/// Correlation between n' z_i and label_i over the set.
inline double projection_strength_correlation(const EditingDirection& dir, const LabeledLatentSet& set,
                                              CorrelationKind kind = CorrelationKind::Pearson) {
    if (set.size() < 3) fail(ErrorCode::ConstantSeries, "need at least 3 records, got " + std::to_string(set.size()));
    if (set.dim() != dir.dim()) fail(ErrorCode::DimensionMismatch, "set and direction differ in dimension");
    Eigen::VectorXd proj = set.latents() * dir.n;
    Eigen::VectorXd labels = set.labels();
    if (kind == CorrelationKind::Spearman) {
        proj = average_ranks(proj);
        labels = average_ranks(labels);
    }
    const auto r = pearson(proj, labels);
    if (!r) fail(ErrorCode::ConstantSeries, "projections or labels are constant");
    return std::clamp(*r, -1.0, 1.0);
}

struct DirectionComparison {
    double cosine = 0.0;
    double l2_raw = 0.0;
    double l2_sign_aligned = 0.0;
    double angle_degrees = 0.0; // from the raw cosine
};

inline DirectionComparison compare_directions(const LatentVector& a, const LatentVector& b) {
    if (a.size() != b.size()) fail(ErrorCode::DimensionMismatch, "directions differ in dimension");
    DirectionComparison out;
    out.cosine = std::clamp(a.dot(b), -1.0, 1.0);
    out.l2_raw = (a - b).norm();
    out.l2_sign_aligned = std::min(out.l2_raw, (a + b).norm());
    out.angle_degrees = std::acos(out.cosine) * 180.0 / 3.141592653589793;
    return out;
}

inline DirectionComparison compare_directions(const EditingDirection& a, const EditingDirection& b) {
    return compare_directions(a.n, b.n);
}

struct RecoveryReport {
    double cosine_to_planted = 0.0; // |estimated' planted|
    double correlation_on_holdout = 0.0;
    std::size_t n_train = 0;
    std::size_t n_holdout = 0;
    std::string method;
};

/// Recovery metrics on records the estimator never saw. When `training_ids`
/// is given, any overlap with the holdout raises HoldoutOverlap.
inline RecoveryReport recovery_report(const EditingDirection& estimated, const LatentVector& planted,
                                      const LabeledLatentSet& holdout,
                                      std::span<const std::string> training_ids = {},
                                      CorrelationKind kind = CorrelationKind::Pearson) {
    if (planted.size() != estimated.dim()) fail(ErrorCode::DimensionMismatch, "planted and estimate differ in dimension");
    if (std::abs(planted.norm() - 1.0) > 1e-9) fail(ErrorCode::InvalidArgument, "planted direction must be unit");
    if (!training_ids.empty()) {
        const std::unordered_set<std::string> train(training_ids.begin(), training_ids.end());
        for (const auto& r : holdout.records())
            if (train.count(r.id)) fail(ErrorCode::HoldoutOverlap, r.id + " is in both training and holdout");
    }
    RecoveryReport out;
    out.cosine_to_planted = std::min(1.0, std::abs(estimated.n.dot(planted)));
    out.correlation_on_holdout = projection_strength_correlation(estimated, holdout, kind);
    out.n_train = training_ids.size();
    out.n_holdout = holdout.size();
    out.method = std::string(method_name(estimated.method));
    return out;
}

} // namespace latentdir

#endif
