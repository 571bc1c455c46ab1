#ifndef LATENTDIR_ESTIMATORS_HPP
#define LATENTDIR_ESTIMATORS_HPP

// Editing-direction estimators.
//
//   binary_lda   two-class Fisher solution (V + eps I)^-1 (m_1 - m_0)
//   center_diff  normalized m_1 - m_0
//   bipolar      binary_lda on the low and high label tails
//   discretized  top generalized eigenvector of (S, V + eps I) over label bins

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "latentdir/dataset.hpp"
#include "latentdir/error.hpp"
#include "latentdir/linalg.hpp"
#include "latentdir/types.hpp"

namespace latentdir {

enum class Method { BinaryLda, CenterDiff, Bipolar, Discretized };

constexpr std::string_view method_name(Method m) noexcept {
    switch (m) {
    case Method::BinaryLda: return "binary_lda";
    case Method::CenterDiff: return "center_diff";
    case Method::Bipolar: return "bipolar";
    case Method::Discretized: return "discretized";
    }
    return "unknown";
}

inline Method parse_method(std::string_view name) {
    for (auto m : {Method::BinaryLda, Method::CenterDiff, Method::Bipolar, Method::Discretized})
        if (method_name(m) == name) return m;
    fail(ErrorCode::InvalidConfig, "unknown method '" + std::string(name) + "'");
}

/// A unit editing direction and how it was obtained.
struct EditingDirection {
    LatentVector n;
    Method method = Method::Discretized;
    std::optional<double> eigenvalue;
    std::optional<double> epsilon_used;
    std::string feature_name;
    bool sign_aligned = false;
    // True when alignment negated the solver's raw output.
    bool raw_sign_flipped = false;

    Eigen::Index dim() const noexcept { return n.size(); }
};

/// Pearson correlation of two equally long series; nullopt when either is
/// constant or shorter than 2.
inline std::optional<double> pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size() || x.size() < 2) return std::nullopt;
    const Eigen::ArrayXd dx = x.array() - x.mean();
    const Eigen::ArrayXd dy = y.array() - y.mean();
    const double sxx = dx.square().sum();
    const double syy = dy.square().sum();
    if (!(sxx > 0.0) || !(syy > 0.0)) return std::nullopt;
    return (dx * dy).sum() / std::sqrt(sxx * syy);
}

/// Negate `dir.n` if its projections correlate negatively with the labels.
inline void align_sign(EditingDirection& dir, const LatentMatrix& latents, const Eigen::VectorXd& labels) {
    const Eigen::VectorXd proj = latents * dir.n;
    const auto r = pearson(proj, labels);
    if (!r) return;
    if (*r < 0.0) {
        dir.n = -dir.n;
        dir.raw_sign_flipped = !dir.raw_sign_flipped;
    }
    dir.sign_aligned = true;
}

inline void align_sign(EditingDirection& dir, const LabeledLatentSet& set) {
    align_sign(dir, set.latents(), set.labels());
}

namespace detail {

inline void require_two_groups(const GroupedLatentSet& groups) {
    std::size_t nonempty = 0;
    for (const auto& g : groups.groups) nonempty += g.empty() ? 0 : 1;
    if (nonempty != 2)
        fail(ErrorCode::DegenerateBinning, "two non-empty groups required, got " + std::to_string(nonempty));
}

inline std::pair<const LatentGroup*, const LatentGroup*> two_groups(const GroupedLatentSet& groups) {
    require_two_groups(groups);
    const LatentGroup* lo = nullptr;
    const LatentGroup* hi = nullptr;
    for (const auto& g : groups.groups) {
        if (g.empty()) continue;
        (lo ? hi : lo) = &g;
    }
    return {lo, hi};
}

} // namespace detail

/// Two-class Fisher direction (V + eps I)^-1 (m_1 - m_0), unit norm, pointing
/// from group 0 toward group 1. Not yet sign-aligned to labels.
inline EditingDirection fisher_two_class(const GroupedLatentSet& groups, const EpsilonPolicy& policy = {}) {
    const auto [lo, hi] = detail::two_groups(groups);
    const SymmetricMatrix within = scatter_within(groups);
    const RegularizedFactor factor = factor_regularized(within, policy);
    LatentVector w = factor.llt.solve(group_mean(*hi) - group_mean(*lo));
    const double norm = w.norm();
    if (!(norm > 1e-300) || !w.allFinite())
        fail(ErrorCode::CoincidentCenters, "class centers coincide");
    w /= norm;

    EditingDirection dir;
    dir.n = std::move(w);
    dir.method = Method::BinaryLda;
    dir.epsilon_used = factor.epsilon;
    dir.eigenvalue = rayleigh_quotient(dir.n, scatter_between(groups), regularize(within, factor.epsilon));
    return dir;
}

/// Two-class LDA on a set whose labels are exactly 0 or 1.
inline EditingDirection estimate_binary_lda(const LabeledLatentSet& set, const EpsilonPolicy& policy = {},
                                            std::string feature_name = {}) {
    EditingDirection dir = fisher_two_class(split_binary(set), policy);
    dir.feature_name = std::move(feature_name);
    align_sign(dir, set);
    return dir;
}

/// Unit vector from the center of group 0 to the center of group 1.
inline EditingDirection estimate_center_difference(const GroupedLatentSet& groups, std::string feature_name = {}) {
    const auto [lo, hi] = detail::two_groups(groups);
    const LatentVector diff = group_mean(*hi) - group_mean(*lo);
    const double norm = diff.norm();
    if (!(norm >= 1e-12)) fail(ErrorCode::CoincidentCenters, "||m_1 - m_0|| = " + format_double(norm));

    EditingDirection dir;
    dir.n = diff / norm;
    dir.method = Method::CenterDiff;
    dir.feature_name = std::move(feature_name);
    // Oriented from the lower group to the higher one by construction.
    dir.sign_aligned = true;
    return dir;
}

/// Binary LDA between the low and high label tails.
inline EditingDirection estimate_bipolar(const LabeledLatentSet& set, double low_quantile = 1.0 / 3.0,
                                         double high_quantile = 2.0 / 3.0, const EpsilonPolicy& policy = {},
                                         std::string feature_name = {}) {
    EditingDirection dir = fisher_two_class(split_bipolar(set, low_quantile, high_quantile), policy);
    dir.method = Method::Bipolar;
    dir.feature_name = std::move(feature_name);
    align_sign(dir, set);
    return dir;
}

/// Single projection maximizing between-bin over within-bin scatter, from
/// already grouped data. Sign is the solver's canonical sign.
inline EditingDirection estimate_discretized_groups(const GroupedLatentSet& groups, const EpsilonPolicy& policy = {},
                                                    BetweenWeighting weighting = BetweenWeighting::Unweighted) {
    const SymmetricMatrix between = scatter_between(groups, weighting);
    const SymmetricMatrix within = scatter_within(groups);
    const EigenSolution sol = top_generalized_eigenpair(between, within, policy);
    EditingDirection dir;
    dir.n = sol.direction;
    dir.method = Method::Discretized;
    dir.eigenvalue = sol.eigenvalue;
    dir.epsilon_used = sol.epsilon_used;
    return dir;
}

/// Bin the labels and solve the modified multi-class LDA problem.
inline EditingDirection estimate_discretized(const LabeledLatentSet& set,
                                             const BinEdges& edges = BinEdges::default_five(),
                                             const EpsilonPolicy& policy = {}, std::string feature_name = {},
                                             BetweenWeighting weighting = BetweenWeighting::Unweighted) {
    EditingDirection dir = estimate_discretized_groups(bin_labels(set, edges), policy, weighting);
    dir.feature_name = std::move(feature_name);
    align_sign(dir, set);
    return dir;
}

} // namespace latentdir

#endif
