// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"

using namespace latentdir;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(const std::string& name, const std::function<Verdict()>& check) {
    Verdict v;
    try {
        v = check();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("%s  %-34s %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

PlantedDataset planted(Eigen::Index dim, std::size_t n, std::uint64_t seed, double sigma) {
    SyntheticConfig cfg;
    cfg.dim = dim;
    cfg.n_samples = n;
    cfg.seed = seed;
    cfg.noise_sigma = sigma;
    return generate_planted_dataset(cfg);
}

// ---------------------------------------------------------------------------

Verdict headline_recovery() {
    int hits = 0;
    double worst_cos = 1.0, worst_time = 0.0;
    std::string per_seed;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto data = planted(512, 1000, seed, 0.05);
        const auto t0 = std::chrono::steady_clock::now();
        const auto dir = estimate_discretized(data.set);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double c = std::abs(dir.n.dot(data.planted));
        hits += c >= 0.9 && secs <= 10.0;
        worst_cos = std::min(worst_cos, c);
        worst_time = std::max(worst_time, secs);
        per_seed += fmt(" %.3f", c);
    }
    return {hits >= 9, std::to_string(hits) + "/10 seeds with |cos| >= 0.9 in <= 10 s; |cos| =" + per_seed +
                           "; slowest " + fmt("%.2f s", worst_time)};
}

Verdict eigensolver() {
    oracle::Rng rng(1001);
    double worst_gap = INFINITY;
    for (int t = 0; t < 200; ++t) {
        const auto num = rng.psd(2, 1 + rng.index(2));
        const auto den = rng.psd(2, 2, 1e-3 * rng.uniform());
        const auto sol = top_generalized_eigenpair(oracle::to_symmetric(num), oracle::to_symmetric(den),
                                                   EpsilonPolicy::fixed(0.0));
        auto den_eps = den;
        for (std::size_t i = 0; i < 2; ++i) den_eps[i][i] += sol.epsilon_used;
        const double got = rayleigh_quotient(sol.direction, oracle::to_symmetric(num), oracle::to_symmetric(den_eps));
        worst_gap = std::min(worst_gap, got - oracle::grid_max_quotient_2d(num, den_eps));
    }
    // Residual measured with the oracle's own elimination. Full-rank
    // denominators are held to the absolute bound. Rank-deficient ones push
    // lambda to ~1/eps, so they are held to the same bound relative to lambda.
    double worst_residual = 0.0, worst_relative = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const bool full_rank = t % 2 == 0;
        const std::size_t d = 1 + rng.index(6);
        const auto num = rng.psd(d, 1 + rng.index(d));
        const auto den = full_rank ? rng.psd(d, d + 2) : rng.psd(d, 1 + rng.index(d));
        const auto sol = top_generalized_eigenpair(oracle::to_symmetric(num), oracle::to_symmetric(den));
        auto den_eps = den;
        for (std::size_t i = 0; i < d; ++i) den_eps[i][i] += sol.epsilon_used;
        const auto mu = oracle::to_vec(sol.direction);
        oracle::Vec s_mu(d, 0.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) s_mu[i] += num[i][j] * mu[j];
        const auto x = oracle::solve(den_eps, s_mu);
        double r2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) r2 += std::pow(x[i] - sol.eigenvalue * mu[i], 2);
        if (full_rank) worst_residual = std::max(worst_residual, std::sqrt(r2));
        else worst_relative = std::max(worst_relative, std::sqrt(r2) / std::max(1.0, sol.eigenvalue));
    }
    return {worst_gap >= -1e-9 && worst_residual <= 1e-8 && worst_relative <= 1e-8,
            "200 pairs d=2: min(q_solved - q_grid) = " + fmt("%.3g", worst_gap) +
                "; 500 full-rank solves d<=6: max residual = " + fmt("%.3g", worst_residual) +
                "; 500 rank-deficient: max residual/lambda = " + fmt("%.3g", worst_relative)};
}

std::vector<oracle::Group> classes_of(const LabeledLatentSet& set) {
    std::vector<oracle::Group> g(2);
    for (const auto& r : set.records()) g[r.label == 1.0 ? 1 : 0].push_back(oracle::to_vec(r.z));
    return g;
}

Verdict closed_form_two_class() {
    oracle::Rng rng(1002);
    double worst = 1.0;
    for (int t = 0; t < 50; ++t) {
        const auto d = 1 + static_cast<Eigen::Index>(rng.index(16));
        const auto set = oracle::binary_set(rng, 5 + rng.index(60), d, rng.uniform(0.1, 3.0));
        const auto dir = estimate_binary_lda(set);
        const auto g = classes_of(set);
        worst = std::min(worst, oracle::cosine(oracle::to_vec(dir.n), oracle::two_class_fisher(g[0], g[1], *dir.epsilon_used)));
    }
    return {worst >= 1.0 - 1e-10, "50 instances d<=16: min cosine = 1 - " + fmt("%.3g", 1.0 - worst)};
}

Verdict two_bin_reduction() {
    oracle::Rng rng(1003);
    double worst = 1.0;
    for (int t = 0; t < 20; ++t) {
        const auto d = 1 + static_cast<Eigen::Index>(rng.index(16));
        const auto set = oracle::binary_set(rng, 5 + rng.index(60), d, rng.uniform(0.1, 3.0));
        const auto disc = estimate_discretized(set, BinEdges({0.0, 0.5, 1.0}));
        worst = std::min(worst, disc.n.dot(estimate_binary_lda(set).n));
    }
    return {worst >= 1.0 - 1e-9, "20 instances: min cosine = 1 - " + fmt("%.3g", 1.0 - worst)};
}

Verdict bipolar_consistency() {
    double worst = 1.0;
    std::string per_seed;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto data = planted(8, 500, seed, 0.0);
        const double c = estimate_bipolar(data.set).n.dot(estimate_discretized(data.set).n);
        worst = std::min(worst, c);
        per_seed += fmt(" %.3f", c);
    }
    return {worst >= 0.95, "10 seeds d=8 N=500: cosine =" + per_seed};
}

Verdict metric_identities() {
    oracle::Rng rng(1004);
    double l2_err = 0.0, corr_err = 0.0, lin_err = 0.0;
    for (int t = 0; t < 200; ++t) {
        const auto d = 2 + static_cast<Eigen::Index>(rng.index(40));
        const LatentVector a = rng.unit(d), b = rng.unit(d);
        const auto c = compare_directions(a, b);
        l2_err = std::max(l2_err, std::abs(c.l2_raw * c.l2_raw - (2.0 - 2.0 * c.cosine)));

        // Labels exactly affine in the projection, either orientation.
        std::vector<LatentRecord> recs;
        const double sign = t % 2 ? 1.0 : -1.0;
        for (int i = 0; i < 20; ++i) {
            LatentVector z = Eigen::Map<LatentVector>(rng.normal_vec(static_cast<std::size_t>(d)).data(), d);
            const double p = z.dot(a);
            z -= (p - (0.05 * i - 0.5)) * a; // projection 0.05 i - 0.5
            recs.push_back({"m" + std::to_string(i), z, 0.5 + sign * (0.05 * i - 0.5)});
        }
        EditingDirection dir;
        dir.n = a;
        const double r = projection_strength_correlation(dir, LabeledLatentSet(d, std::move(recs)));
        corr_err = std::max(corr_err, std::abs(r - sign));

        const LatentVector z1 = rng.unit(d) * 3.0, z2 = rng.unit(d);
        const double x = rng.uniform(-5, 5), y = rng.uniform(-5, 5);
        lin_err = std::max(lin_err, std::abs(signed_distance(dir, x * z1 + y * z2) -
                                             (x * signed_distance(dir, z1) + y * signed_distance(dir, z2))));
    }
    const bool ok = l2_err <= 1e-12 && corr_err <= 1e-12 && lin_err <= 1e-12;
    return {ok, "max |l2^2 - (2 - 2cos)| = " + fmt("%.2g", l2_err) + "; max |r -/+ 1| = " + fmt("%.2g", corr_err) +
                    "; max linearity error = " + fmt("%.2g", lin_err)};
}

Verdict scatter_identities() {
    oracle::Rng rng(1005);
    double decomp = 0.0;
    for (int t = 0; t < 50; ++t) {
        const std::size_t d = 1 + rng.index(8);
        oracle::Groups gs(2 + rng.index(5));
        for (auto& g : gs) g = rng.gaussian_group(1 + rng.index(12), rng.normal_vec(d, 3.0));
        const auto grouped = oracle::to_grouped(gs);
        const Eigen::MatrixXd lhs =
            scatter_within(grouped).matrix() + scatter_between(grouped, BetweenWeighting::GroupSize).matrix();
        const auto total = oracle::total(gs);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                decomp = std::max(decomp, std::abs(lhs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                                                   total[i][j]));
    }

    const std::vector<std::pair<const char*, std::function<EditingDirection(const LabeledLatentSet&)>>> methods = {
        {"discretized", [](const LabeledLatentSet& s) { return estimate_discretized(s); }},
        {"bipolar", [](const LabeledLatentSet& s) { return estimate_bipolar(s); }},
        {"center_diff", [](const LabeledLatentSet& s) { return estimate_center_difference(split_bipolar(s)); }},
        {"binary_lda", [](const LabeledLatentSet& s) { return estimate_binary_lda(s); }},
    };
    double worst = 1.0;
    std::string worst_name;
    for (const auto& [name, run] : methods) {
        oracle::Rng r(1006);
        for (int t = 0; t < 20; ++t) {
            const Eigen::Index d = 6;
            const auto set = std::string(name) == "binary_lda" ? oracle::binary_set(r, 40, d, 1.5)
                                                               : oracle::planted_set(r, 200, r.unit(d), 0.1, 0.05);
            const auto base = run(set);
            LatentVector shift(d);
            for (Eigen::Index k = 0; k < d; ++k) shift[k] = 10.0 * r.normal();
            const Eigen::MatrixXd q = r.orthogonal(d);
            const double tr = base.n.dot(run(oracle::transform(set, Eigen::MatrixXd::Identity(d, d), shift)).n);
            const double rot = (q * base.n).dot(run(oracle::transform(set, q, LatentVector::Zero(d))).n);
            if (std::min(tr, rot) < worst) {
                worst = std::min(tr, rot);
                worst_name = name;
            }
        }
    }
    return {decomp <= 1e-9 && worst >= 1.0 - 1e-9,
            "decomposition max error = " + fmt("%.2g", decomp) + "; translation/rotation min cosine = 1 - " +
                fmt("%.2g", 1.0 - worst) + " (" + worst_name + ")"};
}

// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(const std::string& args) {
    const std::string cmd = std::string("\"") + LATENTDIR_CLI + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict determinism() {
    const fs::path dir = fs::temp_directory_path() / ("latentdir_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto p = [&](const std::string& n) { return (dir / n).string(); };
    std::vector<std::string> diffs;
    for (int run = 1; run <= 2; ++run) {
        const std::string r = std::to_string(run);
        int rc = cli("synth --dim 16 --n 300 --seed 11 --noise-sigma 0.05 --output " + p("d" + r + ".csv"));
        rc |= cli("estimate --holdout 0.2 --seed 3 --input " + p("d1.csv") + " --output " + p("a" + r + ".json"));
        rc |= cli("estimate --method bipolar --input " + p("d1.csv") + " --output " + p("b" + r + ".json"));
        rc |= cli("eval --input " + p("d1.csv") + " --artifact " + p("a1.json") + " --artifact-b " + p("b1.json") +
                  " --truth " + p("d1.csv.truth.json") + " --output " + p("r" + r + ".json"));
        rc |= cli("apply --input " + p("d1.csv") + " --artifact " + p("a1.json") + " --output " + p("e" + r + ".csv"));
        if (rc != 0) diffs.push_back("nonzero exit in run " + r);
    }
    for (const char* stem : {"d%.csv", "d%.csv.truth.json", "a%.json", "b%.json", "r%.json", "e%.csv"}) {
        std::string one = stem, two = stem;
        one.replace(one.find('%'), 1, "1");
        two.replace(two.find('%'), 1, "2");
        const auto x = slurp(dir / one);
        if (x.empty() || x != slurp(dir / two)) diffs.push_back(one);
    }
    const auto text = slurp(dir / "a1.json");
    if (serialize_artifact(parse_artifact(text)) != text) diffs.push_back("artifact round trip");
    fs::remove_all(dir);
    if (!diffs.empty()) {
        std::string d;
        for (const auto& s : diffs) d += s + " ";
        return {false, "differs: " + d};
    }
    return {true, "synth/estimate/eval/apply byte-identical across two runs; artifact round trip byte-identical"};
}

} // namespace

int main() {
    report("reproducibility-statement", [] {
        return Verdict{true, "results on real generator latents need annotated image data; "
                             "acceptance rests on the synthetic and property checks below"};
    });
    report("planted-recovery-headline", headline_recovery);
    report("eigensolver-correctness", eigensolver);
    report("closed-form-two-class", closed_form_two_class);
    report("two-bin-reduction", two_bin_reduction);
    report("bipolar-discretized-consistency", bipolar_consistency);
    report("metric-identities", metric_identities);
    report("scatter-identities", scatter_identities);
    report("cli-determinism", determinism);
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
