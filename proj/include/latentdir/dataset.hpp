#ifndef LATENTDIR_DATASET_HPP
#define LATENTDIR_DATASET_HPP

// Labeled latent sets: CSV ingestion, binning, bipolar splits, group means.
//
// CSV layout (header required):
//
//     id,label,z0,z1,...,z{d-1}
//
// ids match [A-Za-z0-9_-]+, labels are decimals in [0, 1].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "latentdir/error.hpp"
#include "latentdir/format.hpp"
#include "latentdir/linalg.hpp"
#include "latentdir/types.hpp"

namespace latentdir {

struct LatentRecord {
    std::string id;
    LatentVector z;
    double label = 0.0;
};

/// Latent codes with scalar feature strengths in [0, 1], in input order.
class LabeledLatentSet {
public:
    LabeledLatentSet() = default;

    LabeledLatentSet(Eigen::Index dim, std::vector<LatentRecord> records)
        : dim_(dim), records_(std::move(records)) {
        if (dim_ <= 0) fail(ErrorCode::DimensionMismatch, "dimension must be positive");
        std::unordered_set<std::string> seen;
        for (const auto& r : records_) {
            if (r.z.size() != dim_)
                fail(ErrorCode::DimensionMismatch, r.id + " has " + std::to_string(r.z.size()) +
                                                       " components, expected " + std::to_string(dim_));
            if (!(r.label >= 0.0 && r.label <= 1.0)) fail(ErrorCode::LabelOutOfRange, r.id);
            if (!seen.insert(r.id).second) fail(ErrorCode::DuplicateId, r.id);
        }
    }

    Eigen::Index dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }
    const std::vector<LatentRecord>& records() const noexcept { return records_; }
    const LatentRecord& operator[](std::size_t i) const { return records_[i]; }

    bool is_binary() const {
        return std::all_of(records_.begin(), records_.end(),
                           [](const LatentRecord& r) { return r.label == 0.0 || r.label == 1.0; });
    }

    Eigen::VectorXd labels() const {
        Eigen::VectorXd out(static_cast<Eigen::Index>(size()));
        for (std::size_t i = 0; i < size(); ++i) out[static_cast<Eigen::Index>(i)] = records_[i].label;
        return out;
    }

    LatentMatrix latents() const {
        LatentMatrix out(static_cast<Eigen::Index>(size()), dim_);
        for (std::size_t i = 0; i < size(); ++i) out.row(static_cast<Eigen::Index>(i)) = records_[i].z.transpose();
        return out;
    }

    /// Records at `indices`, in the order given.
    LabeledLatentSet subset(std::span<const std::size_t> indices) const {
        std::vector<LatentRecord> picked;
        picked.reserve(indices.size());
        for (auto i : indices) picked.push_back(records_.at(i));
        return LabeledLatentSet(dim_, std::move(picked));
    }

private:
    Eigen::Index dim_ = 0;
    std::vector<LatentRecord> records_;
};

/// Strictly increasing edges 0 = e_0 < ... < e_M = 1, M >= 2. Bin i is
/// [e_i, e_{i+1}); the last bin is closed.
class BinEdges {
public:
    explicit BinEdges(std::vector<double> edges) : edges_(std::move(edges)) {
        if (edges_.size() < 3) fail(ErrorCode::InvalidArgument, "need at least 2 bins");
        if (edges_.front() != 0.0 || edges_.back() != 1.0)
            fail(ErrorCode::InvalidArgument, "bin edges must start at 0 and end at 1");
        for (std::size_t i = 1; i < edges_.size(); ++i)
            if (!(edges_[i] > edges_[i - 1])) fail(ErrorCode::InvalidArgument, "bin edges must increase strictly");
    }

    /// [0,.2) [.2,.4) [.4,.6) [.6,.8) [.8,1]
    static BinEdges default_five() { return BinEdges({0.0, 0.2, 0.4, 0.6, 0.8, 1.0}); }

    static BinEdges uniform(std::size_t bins) {
        if (bins < 2) fail(ErrorCode::InvalidArgument, "need at least 2 bins");
        std::vector<double> e(bins + 1);
        for (std::size_t i = 0; i <= bins; ++i) e[i] = static_cast<double>(i) / static_cast<double>(bins);
        e.back() = 1.0;
        return BinEdges(std::move(e));
    }

    std::size_t bins() const noexcept { return edges_.size() - 1; }
    const std::vector<double>& edges() const noexcept { return edges_; }

    std::size_t bin_of(double label) const {
        const auto it = std::upper_bound(edges_.begin(), edges_.end(), label);
        const auto i = static_cast<std::size_t>(std::distance(edges_.begin(), it));
        return std::min(i == 0 ? 0 : i - 1, bins() - 1);
    }

private:
    std::vector<double> edges_;
};

struct GroupStatistics {
    std::vector<LatentVector> means;
    std::vector<std::size_t> counts;
    LatentVector global_mean;
};

namespace detail {

inline bool valid_id(std::string_view id) {
    return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
               c == '-';
    });
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& what) {
    fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

inline LatentGroup make_group(int index, const LabeledLatentSet& set, const std::vector<std::size_t>& rows) {
    LatentGroup g;
    g.index = index;
    g.members.resize(static_cast<Eigen::Index>(rows.size()), set.dim());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = set[rows[k]];
        g.ids.push_back(r.id);
        g.labels.push_back(r.label);
        g.members.row(static_cast<Eigen::Index>(k)) = r.z.transpose();
    }
    return g;
}

} // namespace detail

/// Parse the dataset CSV. Records keep file order; dim comes from the header.
inline LabeledLatentSet load_labeled_latents(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    };

    if (!next_line()) detail::parse_fail(1, "missing header");
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const auto header = detail::split_commas(line);
    if (header.size() < 3 || header[0] != "id" || header[1] != "label")
        detail::parse_fail(1, "header must be id,label,z0,...");
    for (std::size_t k = 2; k < header.size(); ++k)
        if (header[k] != "z" + std::to_string(k - 2)) detail::parse_fail(1, "expected column z" + std::to_string(k - 2));
    const auto dim = static_cast<Eigen::Index>(header.size() - 2);

    std::vector<LatentRecord> records;
    std::unordered_set<std::string> seen;
    while (next_line()) {
        if (line.empty()) continue;
        const auto fields = detail::split_commas(line);
        if (fields.empty() || !detail::valid_id(fields[0])) detail::parse_fail(lineno, "invalid id");
        std::string id(fields[0]);
        if (fields.size() != header.size())
            fail(ErrorCode::DimensionMismatch, id + " has " + std::to_string(fields.size()) + " fields on line " +
                                                   std::to_string(lineno) + ", header has " +
                                                   std::to_string(header.size()));
        const auto label = parse_double(fields[1]);
        if (!label || !std::isfinite(*label)) detail::parse_fail(lineno, "bad label");
        if (!(*label >= 0.0 && *label <= 1.0)) fail(ErrorCode::LabelOutOfRange, id);
        if (!seen.insert(id).second) fail(ErrorCode::DuplicateId, id);
        LatentRecord rec{std::move(id), LatentVector(dim), *label};
        for (Eigen::Index k = 0; k < dim; ++k) {
            const auto v = parse_double(fields[static_cast<std::size_t>(k) + 2]);
            if (!v || !std::isfinite(*v)) detail::parse_fail(lineno, "bad value in column z" + std::to_string(k));
            rec.z[k] = *v;
        }
        records.push_back(std::move(rec));
    }
    return LabeledLatentSet(dim, std::move(records));
}

inline void write_labeled_latents(std::ostream& out, const LabeledLatentSet& set) {
    out << "id,label";
    for (Eigen::Index k = 0; k < set.dim(); ++k) out << ",z" << k;
    out << '\n';
    for (const auto& r : set.records()) {
        out << r.id << ',' << format_double(r.label);
        for (Eigen::Index k = 0; k < set.dim(); ++k) out << ',' << format_double(r.z[k]);
        out << '\n';
    }
}

/// Group records by label bin. Empty bins are dropped and noted in
/// `warnings`; fewer than two surviving bins is an error.
inline GroupedLatentSet bin_labels(const LabeledLatentSet& set, const BinEdges& edges) {
    std::vector<std::vector<std::size_t>> rows(edges.bins());
    for (std::size_t i = 0; i < set.size(); ++i) rows[edges.bin_of(set[i].label)].push_back(i);

    GroupedLatentSet out;
    out.dim = set.dim();
    out.kind = GroupingKind::Bins;
    out.cuts = edges.edges();
    out.provenance = "bins:" + std::to_string(edges.bins());
    for (std::size_t b = 0; b < rows.size(); ++b) {
        if (rows[b].empty()) {
            out.warnings.push_back("bin " + std::to_string(b) + " [" + format_double(edges.edges()[b]) + ", " +
                                   format_double(edges.edges()[b + 1]) + ") is empty and was dropped");
            continue;
        }
        out.groups.push_back(detail::make_group(static_cast<int>(b), set, rows[b]));
    }
    if (out.groups.size() < 2)
        fail(ErrorCode::DegenerateBinning,
             "only " + std::to_string(out.groups.size()) + " non-empty bin(s) out of " + std::to_string(edges.bins()));
    return out;
}

/// Two classes from binary labels: 0 -> group 0, 1 -> group 1.
inline GroupedLatentSet split_binary(const LabeledLatentSet& set) {
    if (!set.is_binary()) fail(ErrorCode::NonBinaryLabels, "labels must be exactly 0 or 1");
    std::vector<std::size_t> zero, one;
    for (std::size_t i = 0; i < set.size(); ++i) (set[i].label == 0.0 ? zero : one).push_back(i);
    if (zero.empty() || one.empty()) fail(ErrorCode::DegenerateBinning, "a binary class is empty");
    GroupedLatentSet out;
    out.dim = set.dim();
    out.kind = GroupingKind::Binary;
    out.provenance = "binary";
    out.groups.push_back(detail::make_group(0, set, zero));
    out.groups.push_back(detail::make_group(1, set, one));
    return out;
}

namespace detail {

// ceil(x), except that an x a rounding step above an integer (1/3 * 9)
// counts as that integer.
inline double rank_ceil(double x) {
    double k = std::ceil(x);
    if (k - x > 1.0 - 1e-9) k -= 1.0;
    return k;
}

} // namespace detail

/// Nearest-rank empirical quantile: the ceil(q N)-th smallest label.
inline double nearest_rank_quantile(std::vector<double> values, double q) {
    if (values.empty()) fail(ErrorCode::InvalidArgument, "quantile of an empty set");
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    const double k = std::clamp(detail::rank_ceil(q * n), 1.0, n);
    return values[static_cast<std::size_t>(k) - 1];
}

/// Upper-tail nearest rank: the ceil((1 - q) N)-th largest label. Mirrors
/// nearest_rank_quantile so that reflecting labels swaps the two tails.
inline double nearest_rank_upper_quantile(std::vector<double> values, double q) {
    if (values.empty()) fail(ErrorCode::InvalidArgument, "quantile of an empty set");
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    const double k = std::clamp(detail::rank_ceil((1.0 - q) * n), 1.0, n);
    return values[values.size() - static_cast<std::size_t>(k)];
}

/// Low tail (labels <= low-quantile cut) against high tail (labels >=
/// high-quantile cut); the middle is discarded.
inline GroupedLatentSet split_bipolar(const LabeledLatentSet& set, double low_quantile = 1.0 / 3.0,
                                      double high_quantile = 2.0 / 3.0) {
    if (!(0.0 < low_quantile && low_quantile < high_quantile && high_quantile < 1.0))
        fail(ErrorCode::InvalidArgument, "bipolar quantiles must satisfy 0 < low < high < 1");
    if (set.empty()) fail(ErrorCode::DegenerateBinning, "empty set");
    std::vector<double> labels;
    labels.reserve(set.size());
    for (const auto& r : set.records()) labels.push_back(r.label);
    const double low_cut = nearest_rank_quantile(labels, low_quantile);
    const double high_cut = nearest_rank_upper_quantile(labels, high_quantile);
    if (!(low_cut < high_cut))
        fail(ErrorCode::DegenerateBinning, "bipolar cuts coincide at " + format_double(low_cut));

    std::vector<std::size_t> low, high;
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (set[i].label <= low_cut) low.push_back(i);
        else if (set[i].label >= high_cut) high.push_back(i);
    }
    if (low.empty() || high.empty()) fail(ErrorCode::DegenerateBinning, "a bipolar class is empty");
    GroupedLatentSet out;
    out.dim = set.dim();
    out.kind = GroupingKind::Bipolar;
    out.cuts = {low_cut, high_cut};
    out.provenance = "bipolar:" + format_double(low_quantile) + "," + format_double(high_quantile);
    out.groups.push_back(detail::make_group(0, set, low));
    out.groups.push_back(detail::make_group(1, set, high));
    return out;
}

inline GroupStatistics group_stats(const GroupedLatentSet& groups) {
    if (groups.groups.empty()) fail(ErrorCode::EmptyGroupSet, "no groups");
    GroupStatistics out;
    for (const auto& g : groups.groups) {
        if (g.empty()) continue;
        out.means.push_back(group_mean(g));
        out.counts.push_back(g.size());
    }
    out.global_mean = global_mean(groups);
    return out;
}

} // namespace latentdir

#endif
