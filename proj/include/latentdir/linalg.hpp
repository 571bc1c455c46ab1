#ifndef LATENTDIR_LINALG_HPP
#define LATENTDIR_LINALG_HPP

// Scatter matrices and the regularized generalized eigensolver.
//
// The direction estimate maximizes the Fisher ratio
//
//     mu' S mu / mu' (V + eps I) mu
//
// with S the between-group scatter and V the within-group scatter. The
// solver takes the numerator and denominator explicitly, so the reversed
// ratio can be posed through the same entry point.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "latentdir/error.hpp"
#include "latentdir/types.hpp"

namespace latentdir {

/// Dense real symmetric matrix. Construction symmetrizes its input, so
/// entry (i, j) and (j, i) are bitwise equal.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;

    explicit SymmetricMatrix(const Eigen::MatrixXd& m) {
        if (m.rows() != m.cols())
            fail(ErrorCode::DimensionMismatch, "symmetric matrix must be square");
        // (a + b) / 2 is commutative in floating point, so the result is
        // exactly symmetric.
        m_ = 0.5 * (m + m.transpose());
    }

    static SymmetricMatrix zero(Eigen::Index dim) {
        return SymmetricMatrix(Eigen::MatrixXd::Zero(dim, dim));
    }
    static SymmetricMatrix identity(Eigen::Index dim) {
        return SymmetricMatrix(Eigen::MatrixXd::Identity(dim, dim));
    }

    Eigen::Index dim() const noexcept { return m_.rows(); }
    const Eigen::MatrixXd& matrix() const noexcept { return m_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
    double trace() const { return m_.trace(); }

    double quadratic_form(const LatentVector& u) const {
        if (u.size() != dim()) fail(ErrorCode::DimensionMismatch, "vector/matrix dimension differ");
        return u.dot(m_ * u);
    }

private:
    Eigen::MatrixXd m_;
};

/// How the between-group sum weights each group deviation.
enum class BetweenWeighting {
    Unweighted, // sum_i (m_i - m)(m_i - m)', as the discriminating objective is written
    GroupSize,  // sum_i n_i (m_i - m)(m_i - m)', the classical total-scatter split
};

struct ScatterPair {
    SymmetricMatrix between;
    SymmetricMatrix within;
    std::vector<std::size_t> group_sizes;
    LatentVector global_mean;
};

namespace detail {

inline void check_groups(const GroupedLatentSet& groups, std::size_t min_nonempty) {
    std::size_t nonempty = 0;
    for (const auto& g : groups.groups) {
        if (g.empty()) continue;
        if (g.members.cols() != groups.dim)
            fail(ErrorCode::DimensionMismatch,
                 "group " + std::to_string(g.index) + " has dimension " +
                     std::to_string(g.members.cols()) + ", expected " + std::to_string(groups.dim));
        ++nonempty;
    }
    if (nonempty < min_nonempty)
        fail(ErrorCode::EmptyGroupSet, "need at least " + std::to_string(min_nonempty) +
                                           " non-empty groups, got " + std::to_string(nonempty));
}

// Sum of outer products of the rows of `deviations`, built on the lower
// triangle and mirrored.
inline void accumulate_gram(Eigen::MatrixXd& acc, const LatentMatrix& deviations) {
    acc.selfadjointView<Eigen::Lower>().rankUpdate(deviations.transpose());
}

inline SymmetricMatrix mirror_lower(Eigen::MatrixXd acc) {
    acc.triangularView<Eigen::StrictlyUpper>() = acc.transpose();
    return SymmetricMatrix(acc);
}

} // namespace detail

/// Member-weighted center of every retained latent.
inline LatentVector global_mean(const GroupedLatentSet& groups) {
    LatentVector sum = LatentVector::Zero(groups.dim);
    std::size_t n = 0;
    for (const auto& g : groups.groups) {
        if (g.empty()) continue;
        sum += g.members.colwise().sum().transpose();
        n += g.size();
    }
    if (n == 0) fail(ErrorCode::EmptyGroupSet, "no members");
    return sum / static_cast<double>(n);
}

inline LatentVector group_mean(const LatentGroup& group) {
    return group.members.colwise().mean().transpose();
}

/// Between-group scatter S around the whole-dataset center.
inline SymmetricMatrix scatter_between(const GroupedLatentSet& groups,
                                       BetweenWeighting weighting = BetweenWeighting::Unweighted) {
    detail::check_groups(groups, 2);
    const LatentVector center = global_mean(groups);
    const Eigen::Index d = groups.dim;
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
    for (const auto& g : groups.groups) {
        if (g.empty()) continue;
        const LatentVector u = group_mean(g) - center;
        const double w = weighting == BetweenWeighting::GroupSize ? static_cast<double>(g.size()) : 1.0;
        acc.selfadjointView<Eigen::Lower>().rankUpdate(u, w);
    }
    return detail::mirror_lower(std::move(acc));
}

/// Within-group scatter V. Singleton groups contribute nothing.
inline SymmetricMatrix scatter_within(const GroupedLatentSet& groups) {
    detail::check_groups(groups, 1);
    const Eigen::Index d = groups.dim;
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
    for (const auto& g : groups.groups) {
        if (g.empty()) continue;
        const Eigen::RowVectorXd m = g.members.colwise().mean();
        const LatentMatrix dev = g.members.rowwise() - m;
        detail::accumulate_gram(acc, dev);
    }
    return detail::mirror_lower(std::move(acc));
}

/// Sum over all retained latents of (x - m)(x - m)'.
inline SymmetricMatrix scatter_total(const GroupedLatentSet& groups) {
    detail::check_groups(groups, 1);
    const LatentVector center = global_mean(groups);
    const Eigen::Index d = groups.dim;
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
    for (const auto& g : groups.groups) {
        if (g.empty()) continue;
        const LatentMatrix dev = g.members.rowwise() - center.transpose();
        detail::accumulate_gram(acc, dev);
    }
    return detail::mirror_lower(std::move(acc));
}

inline ScatterPair scatter_pair(const GroupedLatentSet& groups,
                                BetweenWeighting weighting = BetweenWeighting::Unweighted) {
    ScatterPair out{scatter_between(groups, weighting), scatter_within(groups), {}, global_mean(groups)};
    for (const auto& g : groups.groups)
        if (!g.empty()) out.group_sizes.push_back(g.size());
    return out;
}

/// m + eps I.
inline SymmetricMatrix regularize(const SymmetricMatrix& m, double epsilon) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
        fail(ErrorCode::InvalidArgument, "epsilon must be a finite nonnegative number");
    Eigen::MatrixXd r = m.matrix();
    r.diagonal().array() += epsilon;
    return SymmetricMatrix(r);
}

/// Ridge added to the denominator before it is factored.
///
/// The first attempt uses `initial` if set, otherwise
/// relative_scale * trace(denominator) / d. Each failed Cholesky multiplies
/// the ridge by `growth`, up to `max_escalations` times. An explicit zero
/// start escalates from the relative default.
struct EpsilonPolicy {
    std::optional<double> initial;
    double relative_scale = 1e-6;
    double growth = 10.0;
    int max_escalations = 6;

    static EpsilonPolicy fixed(double epsilon) {
        EpsilonPolicy p;
        p.initial = epsilon;
        return p;
    }

    double relative_default(const SymmetricMatrix& denominator) const {
        const auto d = static_cast<double>(denominator.dim());
        return relative_scale * std::max(0.0, denominator.trace()) / d;
    }
};

/// Cholesky factor of denominator + epsilon I.
struct RegularizedFactor {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double epsilon = 0.0;
};

namespace detail {

// Eigen's LLT accepts any positive pivot, so a rank-deficient PSD matrix can
// "factor" with pivots at rounding level. Those are rejected here.
inline bool factor_is_usable(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::MatrixXd& a) {
    if (llt.info() != Eigen::Success) return false;
    const Eigen::VectorXd pivots = Eigen::MatrixXd(llt.matrixL()).diagonal();
    if (!pivots.allFinite()) return false;
    const double scale = a.diagonal().cwiseAbs().maxCoeff();
    if (!(scale > 0.0)) return false;
    return pivots.array().square().minCoeff() >= 1e-14 * scale;
}

} // namespace detail

inline RegularizedFactor factor_regularized(const SymmetricMatrix& denominator,
                                            const EpsilonPolicy& policy = {}) {
    if (!denominator.matrix().allFinite())
        fail(ErrorCode::NonFiniteInput, "denominator has non-finite entries");
    const double base = policy.relative_default(denominator);
    double eps = policy.initial.value_or(base);
    if (!(eps >= 0.0) || !std::isfinite(eps))
        fail(ErrorCode::InvalidArgument, "epsilon must be a finite nonnegative number");
    for (int attempt = 0; attempt <= policy.max_escalations; ++attempt) {
        const SymmetricMatrix a = regularize(denominator, eps);
        RegularizedFactor f{Eigen::LLT<Eigen::MatrixXd>(a.matrix()), eps};
        if (detail::factor_is_usable(f.llt, a.matrix())) return f;
        eps = eps > 0.0 ? eps * policy.growth : base;
    }
    fail(ErrorCode::SingularDenominator,
         "Cholesky failed after " + std::to_string(policy.max_escalations) + " epsilon escalations");
}

struct EigenSolution {
    LatentVector direction; // unit norm, first nonzero component positive
    double eigenvalue = 0.0;
    double epsilon_used = 0.0;
    double residual = 0.0; // ||(den + eps I)^-1 num mu - lambda mu||
};

/// Flip `v` so its first component with |v_i| > tol * ||v||_inf is positive.
inline void canonical_sign(LatentVector& v, double tol = 1e-12) {
    const double scale = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > tol * scale) {
            if (v[i] < 0.0) v = -v;
            return;
        }
    }
}

/// mu' num mu / mu' den mu.
inline double rayleigh_quotient(const LatentVector& mu, const SymmetricMatrix& numerator,
                                const SymmetricMatrix& denominator) {
    if (numerator.dim() != denominator.dim() || mu.size() != numerator.dim())
        fail(ErrorCode::DimensionMismatch, "rayleigh_quotient operands differ in dimension");
    if (!(mu.norm() > 0.0)) fail(ErrorCode::ZeroDenominatorForm, "zero vector");
    const double den = denominator.quadratic_form(mu);
    if (!(den > 0.0)) fail(ErrorCode::ZeroDenominatorForm, "denominator form is not positive at mu");
    return numerator.quadratic_form(mu) / den;
}

/// Largest generalized eigenpair of (numerator, denominator + eps I), i.e. the
/// maximizer of the Rayleigh quotient. Solved by whitening with the Cholesky
/// factor L of the regularized denominator and a symmetric eigensolve of
/// L^-1 num L^-T.
///
/// When the top eigenvalue is tied (gap < 1e-10 * lambda_1), the returned
/// direction is the projection of e_0 (or the first e_k with a nonzero
/// projection) onto the tied eigenspace.
inline EigenSolution top_generalized_eigenpair(const SymmetricMatrix& numerator,
                                               const SymmetricMatrix& denominator,
                                               const EpsilonPolicy& policy = {}) {
    if (numerator.dim() != denominator.dim())
        fail(ErrorCode::DimensionMismatch, "numerator and denominator differ in dimension");
    if (numerator.dim() == 0) fail(ErrorCode::DimensionMismatch, "empty matrices");
    if (!numerator.matrix().allFinite() || !denominator.matrix().allFinite())
        fail(ErrorCode::NonFiniteInput, "non-finite matrix entries");

    const Eigen::Index d = numerator.dim();
    const RegularizedFactor factor = factor_regularized(denominator, policy);
    const auto lower = factor.llt.matrixL();

    // C = L^-1 N L^-T
    Eigen::MatrixXd half = lower.solve(numerator.matrix());
    Eigen::MatrixXd whitened = lower.solve(half.transpose());
    whitened = 0.5 * (whitened + whitened.transpose()).eval();

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(whitened);
    if (eig.info() != Eigen::Success)
        fail(ErrorCode::NonFiniteInput, "symmetric eigensolve did not converge");
    const Eigen::VectorXd& values = eig.eigenvalues();
    const double top = values[d - 1];

    Eigen::Index tied = 1;
    while (tied < d && top - values[d - 1 - tied] <= 1e-10 * std::abs(top)) ++tied;

    const auto upper = factor.llt.matrixU();
    LatentVector mu;
    if (tied == 1) {
        mu = upper.solve(eig.eigenvectors().col(d - 1));
    } else {
        const Eigen::MatrixXd basis = upper.solve(eig.eigenvectors().rightCols(tied));
        const Eigen::MatrixXd q = basis.householderQr().householderQ() * Eigen::MatrixXd::Identity(d, tied);
        for (Eigen::Index k = 0; k < d; ++k) {
            mu = q * q.row(k).transpose();
            if (mu.norm() > 1e-8) break;
        }
    }
    mu.normalize();
    canonical_sign(mu);

    const SymmetricMatrix regularized = regularize(denominator, factor.epsilon);
    const double lambda = std::max(0.0, rayleigh_quotient(mu, numerator, regularized));
    const LatentVector image = factor.llt.solve(numerator.matrix() * mu);
    return EigenSolution{mu, lambda, factor.epsilon, (image - lambda * mu).norm()};
}

} // namespace latentdir

#endif
