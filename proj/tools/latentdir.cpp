// latentdir: estimate, evaluate and apply latent editing directions.
//
//   latentdir synth    --output data.csv --dim 8 --n 200 --seed 7
//   latentdir estimate --input data.csv --output dir.json --method discretized
//   latentdir eval     --input data.csv --artifact dir.json [--artifact-b other.json] [--truth data.csv.truth.json]
//   latentdir apply    --input data.csv --artifact dir.json --output edited.csv --scales=-2,-1,0,1,2
//
// Exit codes: 0 success, 2 config error, 3 I/O error, 4 domain error.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "CLI11.hpp"

#include "latentdir/latentdir.hpp"

namespace {

using latentdir::ordered_json;

enum ExitCode { kOk = 0, kConfigError = 2, kIoError = 3, kDomainError = 4 };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Flat key-value run configuration: defaults < config file < flags.

enum class Kind { Text, Count, Real, OptionalReal, RealList };

struct Key {
    std::string name;
    Kind kind;
    ordered_json fallback;
    std::string help;
};

std::string flag_name(const std::string& key) {
    std::string f = key;
    std::replace(f.begin(), f.end(), '_', '-');
    return "--" + f;
}

std::vector<double> parse_real_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = latentdir::parse_double(item);
        if (!v) throw ConfigError("invalid value for '" + key + "': '" + item + "' is not a number");
        out.push_back(*v);
    }
    if (out.empty()) throw ConfigError("invalid value for '" + key + "': empty list");
    return out;
}

ordered_json parse_flag_value(const Key& key, const std::string& text) {
    switch (key.kind) {
    case Kind::Text: return text;
    case Kind::Count: {
        std::uint64_t v = 0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
        if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
            throw ConfigError("invalid value for '" + key.name + "': expected a nonnegative integer");
        return v;
    }
    case Kind::Real:
    case Kind::OptionalReal: {
        if (key.kind == Kind::OptionalReal && text == "none") return nullptr;
        const auto v = latentdir::parse_double(text);
        if (!v) throw ConfigError("invalid value for '" + key.name + "': expected a number");
        return *v;
    }
    case Kind::RealList: return parse_real_list(key.name, text);
    }
    return nullptr;
}

void check_type(const Key& key, const ordered_json& v) {
    bool ok = false;
    switch (key.kind) {
    case Kind::Text: ok = v.is_string(); break;
    case Kind::Count: ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0); break;
    case Kind::Real: ok = v.is_number(); break;
    case Kind::OptionalReal: ok = v.is_number() || v.is_null(); break;
    case Kind::RealList:
        ok = v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), [](const auto& e) { return e.is_number(); });
        break;
    }
    if (!ok) throw ConfigError("invalid value for '" + key.name + "' in config file");
}

class Command {
public:
    Command(CLI::App& app, std::string name, std::string description, std::vector<Key> keys)
        : keys_(std::move(keys)), flags_(keys_.size()) {
        sub_ = app.add_subcommand(std::move(name), std::move(description));
        sub_->add_option("--config", config_path_, "JSON file with a flat object of settings");
        sub_->add_flag("--print-config", print_config_, "print the resolved configuration and exit");
        for (std::size_t i = 0; i < keys_.size(); ++i)
            sub_->add_option(flag_name(keys_[i].name), flags_[i], keys_[i].help)->allow_extra_args(false);
    }

    CLI::App* app() const { return sub_; }
    bool print_config() const { return print_config_; }

    ordered_json resolve() const {
        ordered_json doc = ordered_json::object();
        for (const auto& k : keys_) doc[k.name] = k.fallback;
        if (!config_path_.empty()) {
            std::ifstream in(config_path_);
            if (!in) throw IoError("cannot read config file " + config_path_);
            ordered_json file;
            try {
                file = ordered_json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
            }
            if (!file.is_object()) throw ConfigError("config file must hold a JSON object");
            for (const auto& [name, value] : file.items()) {
                const Key* key = find(name);
                if (!key) throw ConfigError("unknown key '" + name + "' in config file");
                check_type(*key, value);
                doc[name] = value;
            }
        }
        for (std::size_t i = 0; i < keys_.size(); ++i)
            if (sub_->get_option(flag_name(keys_[i].name))->count() > 0)
                doc[keys_[i].name] = parse_flag_value(keys_[i], flags_[i]);
        return doc;
    }

private:
    const Key* find(const std::string& name) const {
        for (const auto& k : keys_)
            if (k.name == name) return &k;
        return nullptr;
    }

    std::vector<Key> keys_;
    std::vector<std::string> flags_;
    std::string config_path_;
    bool print_config_ = false;
    CLI::App* sub_ = nullptr;
};

// ---------------------------------------------------------------------------
// Helpers over the resolved document.

std::string text(const ordered_json& cfg, const char* key) { return cfg.at(key).get<std::string>(); }
double real(const ordered_json& cfg, const char* key) { return cfg.at(key).get<double>(); }
std::uint64_t count(const ordered_json& cfg, const char* key) { return cfg.at(key).get<std::uint64_t>(); }

std::string required_path(const ordered_json& cfg, const char* key) {
    std::string p = text(cfg, key);
    if (p.empty()) throw ConfigError("missing required key '" + std::string(key) + "'");
    return p;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out.flush()) throw IoError("failed writing " + path);
}

latentdir::LabeledLatentSet load_dataset(const std::string& bytes) {
    std::istringstream in(bytes);
    return latentdir::load_labeled_latents(in);
}

std::string fingerprint(const std::string& bytes) { return "fnv1a64:" + latentdir::hex64(latentdir::fnv1a64(bytes)); }

latentdir::DirectionArtifact load_artifact(const std::string& path) { return latentdir::parse_artifact(read_file(path)); }

ordered_json optional_number(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

// Holdout membership: the floor(fraction * N) records with the smallest
// per-record hash key under the seed, ties broken by index.
std::vector<bool> select_holdout(std::size_t n, double fraction, std::uint64_t seed) {
    const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
    const latentdir::CounterStream salted(seed, 0x686F6C646F7574ULL); // "holdout"
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed(n);
    for (std::size_t i = 0; i < n; ++i) keyed[i] = {latentdir::mix64(salted.word(i)), i};
    std::sort(keyed.begin(), keyed.end());
    std::vector<bool> holdout(n, false);
    for (std::size_t k = 0; k < count; ++k) holdout[keyed[k].second] = true;
    return holdout;
}

// ---------------------------------------------------------------------------
// synth

int run_synth(const ordered_json& cfg) {
    latentdir::SyntheticConfig sc;
    const auto dim = count(cfg, "dim");
    if (dim == 0) throw ConfigError("invalid value for 'dim': must be positive");
    sc.dim = static_cast<Eigen::Index>(dim);
    sc.n_samples = count(cfg, "n");
    if (sc.n_samples == 0) throw ConfigError("invalid value for 'n': must be positive");
    sc.seed = count(cfg, "seed");
    sc.slope = real(cfg, "slope");
    if (!(sc.slope > 0.0)) throw ConfigError("invalid value for 'slope': must be positive");
    sc.offset = real(cfg, "offset");
    sc.noise_sigma = real(cfg, "noise_sigma");
    if (!(sc.noise_sigma >= 0.0)) throw ConfigError("invalid value for 'noise_sigma': must be nonnegative");
    try {
        sc.label_model = latentdir::parse_label_model(text(cfg, "label_model"));
    } catch (const latentdir::Error&) {
        throw ConfigError("invalid value for 'label_model': expected linear_clipped or threshold_binary");
    }
    const std::string planted_path = text(cfg, "input");
    if (!planted_path.empty()) {
        ordered_json doc;
        try {
            doc = ordered_json::parse(read_file(planted_path));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("planted direction file is not valid JSON: " + std::string(e.what()));
        }
        sc.planted = latentdir::planted_from_json(doc);
    }

    const std::string output = required_path(cfg, "output");
    std::string truth = text(cfg, "truth");
    if (truth.empty()) truth = output + ".truth.json";

    const auto data = latentdir::generate_planted_dataset(sc);
    std::ostringstream csv;
    latentdir::write_labeled_latents(csv, data.set);
    write_file(output, csv.str());
    write_file(truth, latentdir::ground_truth_json(sc, data).dump(2) + "\n");
    return kOk;
}

// ---------------------------------------------------------------------------
// estimate

int run_estimate(const ordered_json& cfg) {
    const std::string input = required_path(cfg, "input");
    const std::string output = required_path(cfg, "output");
    latentdir::Method method;
    try {
        method = latentdir::parse_method(text(cfg, "method"));
    } catch (const latentdir::Error&) {
        throw ConfigError("invalid value for 'method': expected binary_lda, center_diff, bipolar or discretized");
    }
    const double holdout = real(cfg, "holdout");
    if (!(holdout >= 0.0 && holdout < 1.0)) throw ConfigError("invalid value for 'holdout': must be in [0, 1)");
    const auto weighting_name = text(cfg, "between_weighting");
    if (weighting_name != "unweighted" && weighting_name != "group_size")
        throw ConfigError("invalid value for 'between_weighting': expected unweighted or group_size");
    const auto weighting = weighting_name == "group_size" ? latentdir::BetweenWeighting::GroupSize
                                                          : latentdir::BetweenWeighting::Unweighted;
    const auto intercept_name = text(cfg, "intercept");
    if (intercept_name != "fit" && intercept_name != "zero")
        throw ConfigError("invalid value for 'intercept': expected fit or zero");
    const auto intercept = latentdir::parse_intercept_mode(intercept_name);

    latentdir::EpsilonPolicy policy;
    policy.relative_scale = real(cfg, "epsilon_relative");
    if (!(policy.relative_scale >= 0.0)) throw ConfigError("invalid value for 'epsilon_relative': must be nonnegative");
    if (!cfg.at("epsilon").is_null()) {
        policy.initial = real(cfg, "epsilon");
        if (!(*policy.initial >= 0.0)) throw ConfigError("invalid value for 'epsilon': must be nonnegative");
    }
    const auto edges_list = cfg.at("edges").get<std::vector<double>>();
    const double low_q = real(cfg, "low_quantile");
    const double high_q = real(cfg, "high_quantile");
    if (!(0.0 < low_q && low_q < high_q && high_q < 1.0))
        throw ConfigError("invalid value for 'low_quantile'/'high_quantile': need 0 < low < high < 1");
    std::optional<latentdir::BinEdges> edges;
    try {
        edges.emplace(edges_list);
    } catch (const latentdir::Error& e) {
        throw ConfigError("invalid value for 'edges': " + std::string(e.what()));
    }
    const std::uint64_t seed = count(cfg, "seed");
    const std::string feature = text(cfg, "feature");

    const std::string bytes = read_file(input);
    const auto full = load_dataset(bytes);
    const auto in_holdout = select_holdout(full.size(), holdout, seed);
    std::vector<std::size_t> train_rows;
    latentdir::SeedInfo seed_info{seed, holdout, {}};
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (in_holdout[i]) seed_info.holdout_ids.push_back(full[i].id);
        else train_rows.push_back(i);
    }
    const auto train = full.subset(train_rows);

    latentdir::DirectionArtifact artifact;
    latentdir::EditingDirection dir;
    switch (method) {
    case latentdir::Method::BinaryLda: dir = latentdir::estimate_binary_lda(train, policy, feature); break;
    case latentdir::Method::CenterDiff: {
        const auto groups = train.is_binary() ? latentdir::split_binary(train)
                                              : latentdir::split_bipolar(train, low_q, high_q);
        dir = latentdir::estimate_center_difference(groups, feature);
        if (!train.is_binary()) artifact.quantiles = {low_q, high_q};
        break;
    }
    case latentdir::Method::Bipolar:
        dir = latentdir::estimate_bipolar(train, low_q, high_q, policy, feature);
        artifact.quantiles = {low_q, high_q};
        break;
    case latentdir::Method::Discretized:
        dir = latentdir::estimate_discretized(train, *edges, policy, feature, weighting);
        artifact.bins = edges_list;
        break;
    }
    const auto model = latentdir::fit_lambda(dir, train, intercept);
    const double train_corr = latentdir::projection_strength_correlation(dir, train);

    artifact.feature_name = feature;
    artifact.method = dir.method;
    artifact.n = dir.n;
    artifact.lambda = model.lambda;
    artifact.intercept = model.intercept;
    artifact.intercept_mode = intercept;
    artifact.epsilon_used = dir.epsilon_used;
    artifact.eigenvalue = dir.eigenvalue;
    artifact.sign_aligned = dir.sign_aligned;
    artifact.raw_sign_flipped = dir.raw_sign_flipped;
    artifact.training_set_fingerprint = fingerprint(bytes);
    artifact.seed_info = seed_info;
    write_file(output, latentdir::serialize_artifact(artifact));

    ordered_json summary;
    summary["method"] = std::string(latentdir::method_name(dir.method));
    summary["feature"] = feature;
    summary["eigenvalue"] = optional_number(dir.eigenvalue);
    summary["epsilon_used"] = optional_number(dir.epsilon_used);
    summary["training_correlation"] = train_corr;
    summary["lambda"] = model.lambda;
    summary["intercept"] = model.intercept;
    summary["n_train"] = train.size();
    summary["n_holdout"] = seed_info.holdout_ids.size();
    std::cout << summary.dump() << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------
// eval

struct Split {
    latentdir::LabeledLatentSet train;
    std::optional<latentdir::LabeledLatentSet> holdout;
    std::vector<std::string> train_ids;
};

Split split_by_artifact(const latentdir::LabeledLatentSet& set, const latentdir::DirectionArtifact& a) {
    const std::unordered_set<std::string> hold(a.seed_info.holdout_ids.begin(), a.seed_info.holdout_ids.end());
    std::vector<std::size_t> tr, ho;
    Split s;
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (hold.count(set[i].id)) {
            ho.push_back(i);
        } else {
            tr.push_back(i);
            s.train_ids.push_back(set[i].id);
        }
    }
    s.train = set.subset(tr);
    if (!ho.empty()) s.holdout = set.subset(ho);
    return s;
}

ordered_json maybe_correlation(const latentdir::EditingDirection& d, const latentdir::LabeledLatentSet* set,
                               latentdir::CorrelationKind kind) {
    if (!set || set->size() < 3) return nullptr;
    try {
        return latentdir::projection_strength_correlation(d, *set, kind);
    } catch (const latentdir::Error& e) {
        if (e.code() == latentdir::ErrorCode::ConstantSeries) return nullptr;
        throw;
    }
}

std::string cell(const ordered_json& v) {
    if (v.is_null()) return "-";
    if (v.is_number_float()) {
        std::ostringstream ss;
        ss << std::fixed << std::setprecision(6) << v.get<double>();
        return ss.str();
    }
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string render_text(const ordered_json& report) {
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("dataset_fingerprint", cell(report["dataset_fingerprint"]));
    rows.emplace_back("n_records", cell(report["n_records"]));
    rows.emplace_back("correlation_kind", cell(report["correlation_kind"]));
    for (const auto& d : report["directions"]) {
        const std::string p = d["name"].get<std::string>() + ".";
        rows.emplace_back(p + "method", cell(d["method"]));
        rows.emplace_back(p + "correlation_all", cell(d["correlation"]["all"]));
        rows.emplace_back(p + "correlation_train", cell(d["correlation"]["train"]));
        rows.emplace_back(p + "correlation_holdout", cell(d["correlation"]["holdout"]));
    }
    if (!report["comparison"].is_null())
        for (const auto& [k, v] : report["comparison"].items()) rows.emplace_back("comparison." + k, cell(v));
    if (!report["recovery"].is_null())
        for (const auto& r : report["recovery"])
            for (const auto& [k, v] : r.items())
                if (k != "name") rows.emplace_back("recovery." + r["name"].get<std::string>() + "." + k, cell(v));
    std::size_t width = 0;
    for (const auto& [k, _] : rows) width = std::max(width, k.size());
    std::ostringstream out;
    for (const auto& [k, v] : rows) out << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
    return out.str();
}

int run_eval(const ordered_json& cfg) {
    const std::string input = required_path(cfg, "input");
    const std::string artifact_path = required_path(cfg, "artifact");
    const std::string artifact_b_path = text(cfg, "artifact_b");
    const std::string truth_path = text(cfg, "truth");
    const std::string output = text(cfg, "output");
    const std::string kind_name = text(cfg, "correlation");
    if (kind_name != "pearson" && kind_name != "spearman")
        throw ConfigError("invalid value for 'correlation': expected pearson or spearman");
    const auto kind =
        kind_name == "spearman" ? latentdir::CorrelationKind::Spearman : latentdir::CorrelationKind::Pearson;
    const std::string format = text(cfg, "format");
    if (format != "json" && format != "text") throw ConfigError("invalid value for 'format': expected json or text");

    const std::string bytes = read_file(input);
    const auto set = load_dataset(bytes);
    std::vector<std::pair<std::string, latentdir::DirectionArtifact>> artifacts;
    artifacts.emplace_back("a", load_artifact(artifact_path));
    if (!artifact_b_path.empty()) artifacts.emplace_back("b", load_artifact(artifact_b_path));
    for (const auto& [name, a] : artifacts)
        if (a.dim() != set.dim())
            latentdir::fail(latentdir::ErrorCode::DimensionMismatch,
                            "artifact " + name + " has dim " + std::to_string(a.dim()) + ", dataset has " +
                                std::to_string(set.dim()));

    std::optional<latentdir::LatentVector> planted;
    if (!truth_path.empty()) {
        ordered_json doc;
        try {
            doc = ordered_json::parse(read_file(truth_path));
        } catch (const nlohmann::json::exception& e) {
            latentdir::fail(latentdir::ErrorCode::ParseError, "ground truth: " + std::string(e.what()));
        }
        planted = latentdir::planted_from_json(doc);
        if (planted->size() != set.dim())
            latentdir::fail(latentdir::ErrorCode::DimensionMismatch, "ground truth and dataset differ in dimension");
    }

    ordered_json report;
    report["schema_version"] = 1;
    report["dataset_fingerprint"] = fingerprint(bytes);
    report["n_records"] = set.size();
    report["correlation_kind"] = kind_name;
    report["directions"] = ordered_json::array();
    ordered_json recovery = ordered_json::array();
    for (const auto& [name, a] : artifacts) {
        const auto dir = a.direction();
        const Split split = split_by_artifact(set, a);
        ordered_json entry;
        entry["name"] = name;
        entry["method"] = std::string(latentdir::method_name(a.method));
        entry["feature_name"] = a.feature_name;
        entry["correlation"] = {{"all", maybe_correlation(dir, &set, kind)},
                                {"train", maybe_correlation(dir, &split.train, kind)},
                                {"holdout", maybe_correlation(dir, split.holdout ? &*split.holdout : nullptr, kind)}};
        report["directions"].push_back(entry);
        if (planted) {
            ordered_json r;
            r["name"] = name;
            r["method"] = entry["method"];
            r["cosine_to_planted"] = std::min(1.0, std::abs(dir.n.dot(*planted)));
            if (split.holdout) {
                const auto rep = latentdir::recovery_report(dir, *planted, *split.holdout, split.train_ids, kind);
                r["correlation_on_holdout"] = rep.correlation_on_holdout;
            } else {
                r["correlation_on_holdout"] = nullptr;
            }
            r["n_train"] = split.train.size();
            r["n_holdout"] = split.holdout ? split.holdout->size() : 0;
            recovery.push_back(r);
        }
    }
    if (artifacts.size() == 2) {
        const auto c = latentdir::compare_directions(artifacts[0].second.n, artifacts[1].second.n);
        report["comparison"] = {{"cosine", c.cosine},
                                {"l2_raw", c.l2_raw},
                                {"l2_sign_aligned", c.l2_sign_aligned},
                                {"angle_degrees", c.angle_degrees}};
    } else {
        report["comparison"] = nullptr;
    }
    report["recovery"] = planted ? recovery : ordered_json(nullptr);

    const std::string rendered = format == "json" ? report.dump(2) + "\n" : render_text(report);
    if (output.empty()) std::cout << rendered;
    else write_file(output, rendered);
    return kOk;
}

// ---------------------------------------------------------------------------
// apply

int run_apply(const ordered_json& cfg) {
    const std::string input = required_path(cfg, "input");
    const std::string artifact_path = required_path(cfg, "artifact");
    const std::string output = required_path(cfg, "output");
    const auto scales = cfg.at("scales").get<std::vector<double>>();
    for (double s : scales)
        if (!std::isfinite(s)) throw ConfigError("invalid value for 'scales': must be finite");

    const auto set = load_dataset(read_file(input));
    const auto artifact = load_artifact(artifact_path);
    if (artifact.dim() != set.dim())
        latentdir::fail(latentdir::ErrorCode::DimensionMismatch,
                        "artifact has dim " + std::to_string(artifact.dim()) + ", dataset has " +
                            std::to_string(set.dim()));
    const auto dir = artifact.direction();
    const auto model = artifact.model();

    std::ostringstream out;
    out << "id,scale,predicted";
    for (Eigen::Index k = 0; k < set.dim(); ++k) out << ",z" << k;
    out << '\n';
    for (const auto& r : set.records()) {
        for (double s : scales) {
            const auto z = latentdir::apply_edit(r.z, dir, s);
            out << r.id << ',' << latentdir::format_double(s) << ','
                << latentdir::format_double(latentdir::predict_strength(model, z));
            for (Eigen::Index k = 0; k < z.size(); ++k) out << ',' << latentdir::format_double(z[k]);
            out << '\n';
        }
    }
    write_file(output, out.str());
    return kOk;
}

ordered_json default_edges() { return ordered_json::array({0.0, 0.2, 0.4, 0.6, 0.8, 1.0}); }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Estimate, evaluate and apply latent-space editing directions"};
    app.require_subcommand(1);

    Command synth(app, "synth", "generate a dataset with a planted direction",
                  {{"input", Kind::Text, "", "optional JSON file whose 'planted' array is used as the direction"},
                   {"output", Kind::Text, "", "dataset CSV to write"},
                   {"truth", Kind::Text, "", "ground-truth JSON (default: <output>.truth.json)"},
                   {"dim", Kind::Count, 8, "latent dimension"},
                   {"n", Kind::Count, 200, "number of records"},
                   {"seed", Kind::Count, 0, "stream seed"},
                   {"label_model", Kind::Text, "linear_clipped", "linear_clipped or threshold_binary"},
                   {"slope", Kind::Real, 0.1, "label slope along the planted direction"},
                   {"offset", Kind::Real, 0.5, "label offset"},
                   {"noise_sigma", Kind::Real, 0.0, "label noise standard deviation"}});

    Command estimate(app, "estimate", "estimate an editing direction from a labeled dataset",
                     {{"input", Kind::Text, "", "dataset CSV"},
                      {"output", Kind::Text, "", "direction artifact JSON to write"},
                      {"method", Kind::Text, "discretized", "binary_lda, center_diff, bipolar or discretized"},
                      {"feature", Kind::Text, "", "feature name stored in the artifact"},
                      {"edges", Kind::RealList, default_edges(), "bin edges for discretized"},
                      {"low_quantile", Kind::Real, 1.0 / 3.0, "bipolar low cut quantile"},
                      {"high_quantile", Kind::Real, 2.0 / 3.0, "bipolar high cut quantile"},
                      {"epsilon", Kind::OptionalReal, nullptr, "fixed starting ridge (none: relative)"},
                      {"epsilon_relative", Kind::Real, 1e-6, "ridge as a fraction of trace/d"},
                      {"between_weighting", Kind::Text, "unweighted", "unweighted or group_size"},
                      {"intercept", Kind::Text, "fit", "fit or zero"},
                      {"holdout", Kind::Real, 0.0, "fraction of records held out"},
                      {"seed", Kind::Count, 0, "holdout selection seed"}});

    Command eval(app, "eval", "evaluate one or two direction artifacts on a dataset",
                 {{"input", Kind::Text, "", "dataset CSV"},
                  {"artifact", Kind::Text, "", "direction artifact JSON"},
                  {"artifact_b", Kind::Text, "", "second artifact to compare against"},
                  {"truth", Kind::Text, "", "ground-truth JSON from synth"},
                  {"output", Kind::Text, "", "report path (default: stdout)"},
                  {"correlation", Kind::Text, "pearson", "pearson or spearman"},
                  {"format", Kind::Text, "json", "json or text"},
                  {"seed", Kind::Count, 0, "unused; accepted for uniformity"}});

    Command apply(app, "apply", "move latents along a direction",
                  {{"input", Kind::Text, "", "dataset CSV"},
                   {"artifact", Kind::Text, "", "direction artifact JSON"},
                   {"output", Kind::Text, "", "edited latents CSV"},
                   {"scales", Kind::RealList, ordered_json::array({-2.0, -1.0, 0.0, 1.0, 2.0}), "edit scales"},
                   {"seed", Kind::Count, 0, "unused; accepted for uniformity"}});

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    const std::pair<Command*, std::function<int(const ordered_json&)>> commands[] = {
        {&synth, run_synth}, {&estimate, run_estimate}, {&eval, run_eval}, {&apply, run_apply}};
    for (const auto& [cmd, run] : commands) {
        if (!cmd->app()->parsed()) continue;
        try {
            const ordered_json cfg = cmd->resolve();
            if (cmd->print_config()) {
                std::cout << cfg.dump(2) << '\n';
                return kOk;
            }
            return run(cfg);
        } catch (const ConfigError& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return kConfigError;
        } catch (const IoError& e) {
            std::cerr << "I/O error: " << e.what() << '\n';
            return kIoError;
        } catch (const latentdir::Error& e) {
            std::cerr << e.what() << '\n';
            return e.code() == latentdir::ErrorCode::InvalidConfig ? kConfigError : kDomainError;
        }
    }
    return kConfigError;
}
