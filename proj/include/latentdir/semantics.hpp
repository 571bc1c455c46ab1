#ifndef LATENTDIR_SEMANTICS_HPP
#define LATENTDIR_SEMANTICS_HPP

// Linear semantic model: strength = lambda * (n' z) + intercept.

#include <cmath>

#include "latentdir/dataset.hpp"
#include "latentdir/error.hpp"
#include "latentdir/estimators.hpp"

namespace latentdir {

enum class InterceptMode {
    Fit,  // least squares with a free intercept
    Zero, // strength = lambda * d(n, z) exactly
};

struct LinearSemanticModel {
    EditingDirection direction;
    double lambda = 0.0;
    double intercept = 0.0;
    InterceptMode mode = InterceptMode::Fit;
};

/// n' z. Negative on the far side of the hyperplane through the origin.
inline double signed_distance(const EditingDirection& dir, const LatentVector& z) {
    if (z.size() != dir.n.size())
        fail(ErrorCode::DimensionMismatch, "latent has " + std::to_string(z.size()) + " components, direction has " +
                                               std::to_string(dir.n.size()));
    return dir.n.dot(z);
}

/// Least-squares slope (and intercept, unless mode is Zero) of label on n' z.
inline LinearSemanticModel fit_lambda(const EditingDirection& dir, const LabeledLatentSet& set,
                                      InterceptMode mode = InterceptMode::Fit) {
    if (set.size() < 2) fail(ErrorCode::ConstantLabels, "need at least two records");
    if (set.dim() != dir.dim()) fail(ErrorCode::DimensionMismatch, "set and direction differ in dimension");
    const Eigen::VectorXd x = set.latents() * dir.n;
    const Eigen::VectorXd y = set.labels();
    if ((y.array() == y[0]).all()) fail(ErrorCode::ConstantLabels, "all labels equal " + format_double(y[0]));

    LinearSemanticModel model{dir, 0.0, 0.0, mode};
    if (mode == InterceptMode::Zero) {
        const double sxx = x.squaredNorm();
        if (!(sxx > 0.0)) fail(ErrorCode::DegenerateDistances, "all distances are zero");
        model.lambda = x.dot(y) / sxx;
        return model;
    }
    const double mx = x.mean();
    const double my = y.mean();
    const Eigen::ArrayXd dx = x.array() - mx;
    const double sxx = dx.square().sum();
    if (!(sxx > 0.0) || (x.array() == x[0]).all()) fail(ErrorCode::DegenerateDistances, "all distances equal");
    model.lambda = (dx * (y.array() - my)).sum() / sxx;
    model.intercept = my - model.lambda * mx;
    return model;
}

/// Raw model output; not clamped to [0, 1].
inline double predict_strength(const LinearSemanticModel& model, const LatentVector& z) {
    return model.lambda * signed_distance(model.direction, z) + model.intercept;
}

/// z + scale * n.
inline LatentVector apply_edit(const LatentVector& z, const EditingDirection& dir, double scale) {
    if (z.size() != dir.n.size()) fail(ErrorCode::DimensionMismatch, "latent and direction differ in dimension");
    if (!std::isfinite(scale)) fail(ErrorCode::InvalidArgument, "edit scale must be finite");
    return z + scale * dir.n;
}

} // namespace latentdir

#endif
