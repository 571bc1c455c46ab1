#ifndef LATENTDIR_TYPES_HPP
#define LATENTDIR_TYPES_HPP

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace latentdir {

/// A point in the d-dimensional latent space.
using LatentVector = Eigen::VectorXd;

/// Rows are latent codes, one per record.
using LatentMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class GroupingKind { Bins, Binary, Bipolar };

/// One labeled group X_i. `index` is the bin (or class) it came from, so a
/// dropped empty bin leaves a gap in the sequence of indices.
struct LatentGroup {
    int index = 0;
    std::vector<std::string> ids;
    std::vector<double> labels;
    LatentMatrix members;

    std::size_t size() const noexcept { return static_cast<std::size_t>(members.rows()); }
    bool empty() const noexcept { return members.rows() == 0; }
};

/// A partition of (part of) a labeled set. Groups are ordered by increasing
/// label range and members keep input order.
struct GroupedLatentSet {
    Eigen::Index dim = 0;
    std::vector<LatentGroup> groups;
    GroupingKind kind = GroupingKind::Bins;
    // Bin edges for Bins, {low_cut, high_cut} for Bipolar, empty for Binary.
    std::vector<double> cuts;
    std::string provenance;
    std::vector<std::string> warnings;

    std::size_t retained() const noexcept {
        std::size_t n = 0;
        for (const auto& g : groups) n += g.size();
        return n;
    }
};

} // namespace latentdir

#endif
