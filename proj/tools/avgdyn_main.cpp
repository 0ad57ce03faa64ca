#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "avgdyn/dynamics.hpp"
#include "avgdyn/evaluation.hpp"
#include "avgdyn/generators.hpp"
#include "avgdyn/graph.hpp"
#include "avgdyn/graph_io.hpp"
#include "avgdyn/serialize.hpp"
#include "avgdyn/spectral.hpp"

namespace fs = std::filesystem;
using avgdyn::json;

namespace {

constexpr int exit_usage = 2;
constexpr int exit_graph = 3;
constexpr int exit_window = 4;
constexpr int exit_invariant = 5;

struct CliError : std::runtime_error {
    int code;
    CliError(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

std::uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string::npos ? pos : pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

int parse_int(const std::string& token, const std::string& what) {
    try {
        std::size_t used = 0;
        int value = std::stoi(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return value;
    } catch (const std::exception&) {
        throw CliError(exit_usage, "cannot parse " + what + ": '" + token + "'");
    }
}

double parse_number(const std::string& token, const std::string& what) {
    try {
        std::size_t used = 0;
        double value = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return value;
    } catch (const std::exception&) {
        throw CliError(exit_usage, "cannot parse " + what + ": '" + token + "'");
    }
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<int> values;
    for (const auto& token : split(text, ',')) values.push_back(parse_int(token, what));
    return values;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
    std::vector<double> values;
    for (const auto& token : split(text, ',')) values.push_back(parse_number(token, what));
    return values;
}

avgdyn::Matrix parse_matrix(const std::string& text) {
    auto rows = split(text, ';');
    const int k = static_cast<int>(rows.size());
    avgdyn::Matrix m(k, k);
    for (int i = 0; i < k; ++i) {
        auto entries = parse_double_list(rows[i], "coupling entry");
        if (static_cast<int>(entries.size()) != k)
            throw CliError(exit_usage, "coupling matrix must be square (row " + std::to_string(i) +
                                           " has " + std::to_string(entries.size()) + " of " +
                                           std::to_string(k) + " entries)");
        for (int j = 0; j < k; ++j) m.at(i, j) = entries[j];
    }
    return m;
}

avgdyn::GraphFile load_graph(const std::string& path) {
    try {
        return avgdyn::read_graph_file(path);
    } catch (const avgdyn::GraphFormatError& e) {
        throw CliError(exit_usage, path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw CliError(exit_usage, path + ": " + e.what());
    } catch (const std::runtime_error& e) {
        throw CliError(exit_usage, std::string(e.what()));
    }
}

std::string default_outdir() {
    const char* env = std::getenv("AVGDYN_OUT");
    return env && *env ? env : ".";
}

void write_json_file(const fs::path& path, const json& j) {
    avgdyn::atomic_write_file(path.string(), avgdyn::dump_json(j));
}

void ensure_outdir(const std::string& outdir) {
    std::error_code ec;
    fs::create_directories(outdir, ec);
    if (ec) throw CliError(exit_usage, "cannot create output directory " + outdir);
}

avgdyn::Variant parse_variant(const std::string& name) {
    if (name == "standard") return avgdyn::Variant::standard;
    if (name == "even-round" || name == "even") return avgdyn::Variant::even_round;
    if (name == "avg-bip" || name == "bip" || name == "bipartite") return avgdyn::Variant::two_phase;
    throw CliError(exit_usage, "unknown variant '" + name + "'");
}

// Round for labeling: explicit integer, or "auto" = window midpoint. Even-only
// variants get bumped to the next even round, where their labels exist.
int resolve_round(const std::string& flag, avgdyn::Variant variant, const avgdyn::WeightedGraph& g,
                  const std::optional<avgdyn::Partition>& partition,
                  const avgdyn::SpectralSummary& summary) {
    int round = 0;
    if (flag == "auto") {
        if (!partition)
            throw CliError(exit_usage, "--round auto needs a graph file with a stored partition");
        auto hyp = avgdyn::check_hypotheses(g, *partition, summary);
        try {
            round = avgdyn::resolve_auto_round(hyp);
        } catch (const avgdyn::WindowEmptyError& e) {
            throw CliError(exit_window, e.what());
        }
    } else {
        round = parse_int(flag, "--round");
        if (round <= 0) throw CliError(exit_usage, "--round must be positive or 'auto'");
    }
    if (variant != avgdyn::Variant::standard) {
        if (round % 2 != 0) ++round;
        if (round < 2) round = 2;
    }
    return round;
}

double weighted_average(const avgdyn::WeightedGraph& g, const std::vector<double>& x) {
    double total = 0.0;
    for (int u = 0; u < g.num_nodes(); ++u) total += g.volume(u) * x[u];
    return total / g.total_volume();
}

struct GenerateOpts {
    std::string sizes, coupling, stay, scales, scale_range, bipartite;
    int blocks = 0;
    int community_size = 0, din = 0, dout = 0;
    double rho = 0.0, density = 0.2;
    bool weighted = false;
    std::uint64_t seed = 0;
    std::string outdir;
    CLI::Option *rho_opt = nullptr, *seed_opt = nullptr;
};

void run_generate(GenerateOpts& o) {
    if (o.seed_opt->count() == 0) o.seed = entropy_seed();
    ensure_outdir(o.outdir);

    json config{{"command", "generate"}, {"seed", o.seed}, {"out", o.outdir}};
    avgdyn::GeneratedInstance instance{avgdyn::WeightedGraph(), avgdyn::Partition(), {}};

    try {
        if (!o.bipartite.empty()) {
            auto sides = parse_int_list(o.bipartite, "--bipartite");
            if (sides.size() != 2) throw CliError(exit_usage, "--bipartite wants n1,n2");
            instance = avgdyn::generate_bipartite(sides[0], sides[1], o.density, o.weighted, o.seed);
            config["model"] = "bipartite";
            config["sides"] = sides;
            config["density"] = o.density;
            config["weighted"] = o.weighted;
        } else if (o.din > 0 || o.dout > 0) {
            if (o.blocks <= 0 || o.community_size <= 0)
                throw CliError(exit_usage, "regular model wants --blocks, --community-size, --din, --dout");
            instance = avgdyn::generate_regular_clustered(o.blocks, o.community_size, o.din, o.dout, o.seed);
            config["model"] = "regular";
            config["blocks"] = o.blocks;
            config["community_size"] = o.community_size;
            config["din"] = o.din;
            config["dout"] = o.dout;
        } else {
            if (o.sizes.empty()) throw CliError(exit_usage, "--sizes is required for block models");
            if (o.coupling.empty()) throw CliError(exit_usage, "--coupling is required for block models");
            avgdyn::BlockSpec spec;
            spec.sizes = parse_int_list(o.sizes, "--sizes");
            spec.coupling = parse_matrix(o.coupling);
            if (!o.stay.empty()) spec.stay = parse_double_list(o.stay, "--stay");
            if (o.blocks > 0 && o.blocks != static_cast<int>(spec.sizes.size()))
                throw CliError(exit_usage, "--blocks disagrees with the number of --sizes entries");
            config["sizes"] = spec.sizes;
            json coupling_rows = json::array();
            for (int i = 0; i < spec.coupling.rows(); ++i) {
                json row = json::array();
                for (int j = 0; j < spec.coupling.cols(); ++j) row.push_back(spec.coupling.at(i, j));
                coupling_rows.push_back(row);
            }
            config["coupling"] = coupling_rows;
            if (!spec.stay.empty()) config["stay"] = spec.stay;

            std::vector<double> scales;
            if (!o.scales.empty()) {
                scales = parse_double_list(o.scales, "--scales");
                config["scales"] = scales;
            } else if (!o.scale_range.empty()) {
                auto range = parse_double_list(o.scale_range, "--scale-range");
                if (range.size() != 2) throw CliError(exit_usage, "--scale-range wants lo,hi");
                scales = avgdyn::random_scales(spec.total_nodes(), range[0], range[1], o.seed);
                config["scale_range"] = range;
            }

            if (o.rho_opt->count() > 0) {
                if (scales.empty()) scales.assign(spec.total_nodes(), 1.0);
                instance = avgdyn::generate_clustered_blocks(spec, scales, o.rho);
                config["model"] = "clustered";
                config["rho"] = o.rho;
            } else if (!scales.empty()) {
                instance = avgdyn::generate_scaled_blocks(spec, scales);
                config["model"] = "scaled";
            } else {
                instance = avgdyn::generate_homogeneous_blocks(spec);
                config["model"] = "homogeneous";
            }
        }
    } catch (const std::invalid_argument& e) {
        throw CliError(exit_usage, std::string("invalid generator spec: ") + e.what());
    } catch (const CliError&) {
        throw;
    } catch (const std::runtime_error& e) {
        throw CliError(exit_graph, std::string(e.what()));
    }

    fs::path out(o.outdir);
    avgdyn::write_graph_file((out / "graph.txt").string(), instance.graph, instance.partition);
    write_json_file(out / "report.json", avgdyn::to_json(instance.report));
    write_json_file(out / "config.json", config);
    std::cout << "wrote " << (out / "graph.txt").string() << " (n=" << instance.graph.num_nodes()
              << ", m=" << instance.graph.num_edges() << ")\n";
}

struct SpectrumOpts {
    std::string graph_path, outdir;
    int dense_limit = 4096;
};

void run_spectrum(SpectrumOpts& o) {
    auto file = load_graph(o.graph_path);
    if (!file.graph.connected()) throw CliError(exit_graph, "graph is disconnected");
    ensure_outdir(o.outdir);

    avgdyn::SpectralSummary summary;
    try {
        summary = avgdyn::decompose(file.graph, o.dense_limit);
    } catch (const std::invalid_argument& e) {
        throw CliError(exit_graph, std::string(e.what()));
    }

    json doc = avgdyn::spectrum_json(summary);
    auto floor = avgdyn::cheeger_floor(summary, file.graph);
    doc["cheeger_floor"] = {{"floor", floor.floor}, {"gap", floor.gap}, {"holds", floor.holds}};
    doc["symmetry_defect"] = avgdyn::spectrum_symmetry_defect(summary);

    if (file.partition) {
        const auto& p = *file.partition;
        doc["stepwise"] = avgdyn::to_json(avgdyn::stepwise_flags(summary, p));
        doc["clustered_check"] = avgdyn::to_json(avgdyn::is_clustered_volume_regular(file.graph, p, summary));
        doc["hypotheses"] = avgdyn::to_json(avgdyn::check_hypotheses(file.graph, p, summary));
    }

    fs::path out(o.outdir);
    write_json_file(out / "spectrum.json", doc);
    write_json_file(out / "config.json", json{{"command", "spectrum"},
                                              {"graph", o.graph_path},
                                              {"dense_limit", o.dense_limit},
                                              {"out", o.outdir}});
    std::cout << "wrote " << (out / "spectrum.json").string() << "\n";
}

struct RunOpts {
    std::string graph_path, outdir, variant = "standard", round;
    int rounds = 100;
    int history_cap = 512;
    bool decompose = false;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
};

void run_run(RunOpts& o) {
    if (o.seed_opt->count() == 0) o.seed = entropy_seed();
    auto file = load_graph(o.graph_path);
    if (!file.graph.connected()) throw CliError(exit_graph, "graph is disconnected");
    ensure_outdir(o.outdir);

    const avgdyn::Variant variant = parse_variant(o.variant);

    // The oracle is needed for auto rounds, decompositions, and the
    // oscillation note of the two-phase variant.
    std::optional<avgdyn::SpectralSummary> summary;
    const bool needs_oracle = o.decompose || !o.round.empty() || variant == avgdyn::Variant::two_phase;
    if (needs_oracle) {
        try {
            summary.emplace(avgdyn::decompose(file.graph));
        } catch (const std::invalid_argument& e) {
            throw CliError(exit_graph, std::string(e.what()));
        }
    }

    int labeled_round = 0;
    if (!o.round.empty())
        labeled_round = resolve_round(o.round, variant, file.graph, file.partition, *summary);

    avgdyn::RunParams params;
    params.variant = variant;
    params.rounds = std::max(o.rounds, labeled_round);
    params.seed = o.seed;
    params.history_cap = o.history_cap;
    auto traj = avgdyn::run_dynamics(file.graph, params);

    json doc{{"variant", avgdyn::variant_name(variant)},
             {"seed", o.seed},
             {"rounds", params.rounds},
             {"n", traj.n}};
    const double avg0 = weighted_average(file.graph, traj.states.front());
    const double avg_last = weighted_average(file.graph, traj.last_state);
    doc["weighted_average_start"] = avg0;
    doc["weighted_average_end"] = avg_last;
    doc["weighted_average_drift"] = std::abs(avg_last - avg0) / std::max(1.0, std::abs(avg0));
    if (labeled_round > 0) {
        doc["round"] = labeled_round;
        json bits = json::array();
        for (std::uint8_t b : traj.labels[labeled_round]) bits.push_back(static_cast<int>(b));
        doc["labels_at_round"] = bits;
    }
    if (summary) {
        const double lambda_min = summary->eigenvalues.back();
        doc["lambda_min"] = lambda_min;
        doc["oscillation"] = std::abs(lambda_min) >= 1.0 - 1e-9;
    }

    fs::path out(o.outdir);
    avgdyn::atomic_write_file((out / "trajectory.csv").string(), avgdyn::trajectory_csv(traj));
    write_json_file(out / "run.json", doc);

    if (o.decompose) {
        if (!file.partition)
            throw CliError(exit_usage, "--decompose needs a graph file with a stored partition");
        auto d = avgdyn::decompose_run(traj, *summary, file.graph, *file.partition);
        write_json_file(out / "decomposition.json", avgdyn::to_json(d));
    }

    write_json_file(out / "config.json", json{{"command", "run"},
                                              {"graph", o.graph_path},
                                              {"variant", o.variant},
                                              {"rounds", params.rounds},
                                              {"round", o.round.empty() ? json() : json(o.round)},
                                              {"history_cap", o.history_cap},
                                              {"decompose", o.decompose},
                                              {"seed", o.seed},
                                              {"out", o.outdir}});
    std::cout << "wrote " << (out / "trajectory.csv").string() << " (" << params.rounds
              << " rounds)\n";
}

struct EvaluateOpts {
    std::string graph_path, outdir, variant = "standard", round = "auto", strategy = "dynamics";
    int runs = 0;
    int trials = 500;
    int mc_floor_trials = 0;
    int mc_sign_trials = 0;
    int mc_pairs = 100;
    double alpha = 0.1, beta = 0.4;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
};

void run_evaluate(EvaluateOpts& o) {
    if (o.seed_opt->count() == 0) o.seed = entropy_seed();
    auto file = load_graph(o.graph_path);
    if (!file.graph.connected()) throw CliError(exit_graph, "graph is disconnected");
    ensure_outdir(o.outdir);

    const avgdyn::Variant variant = parse_variant(o.variant);
    avgdyn::SpectralSummary summary;
    try {
        summary = avgdyn::decompose(file.graph);
    } catch (const std::invalid_argument& e) {
        throw CliError(exit_graph, std::string(e.what()));
    }

    const int round = resolve_round(o.round, variant, file.graph, file.partition, summary);
    const int runs = o.runs > 0 ? o.runs : avgdyn::default_signature_runs(file.graph.num_nodes());

    auto signatures = avgdyn::build_signatures(file.graph, variant, runs, round, o.seed);
    auto clusters = avgdyn::threshold_cluster(signatures, o.alpha, o.beta);

    json doc{{"runs", runs},
             {"round", round},
             {"variant", avgdyn::variant_name(variant)},
             {"cluster", avgdyn::to_json(clusters)}};

    if (file.partition) {
        const auto& p = *file.partition;
        doc["accuracy"] = avgdyn::match_accuracy(clusters.assignment, p);
        doc["exact_recovery"] =
            clusters.clusters == p.num_blocks() && avgdyn::match_accuracy(clusters.assignment, p) == 1.0;

        avgdyn::LabelStrategy strategy = avgdyn::LabelStrategy::dynamics;
        if (o.strategy == "constant") strategy = avgdyn::LabelStrategy::constant_one;
        else if (o.strategy == "coin") strategy = avgdyn::LabelStrategy::coin;
        else if (o.strategy != "dynamics")
            throw CliError(exit_usage, "unknown strategy '" + o.strategy + "'");
        doc["agreement"] = avgdyn::to_json(avgdyn::estimate_epsilon_delta(
            file.graph, p, strategy, variant, round, o.trials, o.seed));
        doc["strategy"] = o.strategy;

        if (o.mc_floor_trials > 0)
            doc["projection_floor"] = avgdyn::to_json(
                avgdyn::mc_projection_floor(file.graph, p, o.mc_floor_trials, o.seed));
        if (o.mc_sign_trials > 0)
            doc["sign_separation"] = avgdyn::to_json(avgdyn::mc_sign_separation(
                file.graph, p, o.mc_sign_trials, o.mc_pairs, o.seed));
    }

    fs::path out(o.outdir);
    write_json_file(out / "evaluate.json", doc);
    write_json_file(out / "config.json", json{{"command", "evaluate"},
                                              {"graph", o.graph_path},
                                              {"variant", o.variant},
                                              {"runs", runs},
                                              {"round", round},
                                              {"alpha", o.alpha},
                                              {"beta", o.beta},
                                              {"strategy", o.strategy},
                                              {"trials", o.trials},
                                              {"mc_floor_trials", o.mc_floor_trials},
                                              {"mc_sign_trials", o.mc_sign_trials},
                                              {"mc_pairs", o.mc_pairs},
                                              {"seed", o.seed},
                                              {"out", o.outdir}});
    std::cout << "wrote " << (out / "evaluate.json").string() << "\n";
}

struct BipartiteOpts {
    std::string graph_path, outdir;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
};

void run_bipartite(BipartiteOpts& o) {
    if (o.seed_opt->count() == 0) o.seed = entropy_seed();
    auto file = load_graph(o.graph_path);
    if (!file.graph.connected()) throw CliError(exit_graph, "graph is disconnected");
    ensure_outdir(o.outdir);

    avgdyn::SpectralSummary summary;
    try {
        summary = avgdyn::decompose(file.graph);
    } catch (const std::invalid_argument& e) {
        throw CliError(exit_graph, std::string(e.what()));
    }
    const int n = summary.n;
    auto coloring = avgdyn::two_coloring(file.graph);

    auto x0 = avgdyn::rademacher_state(n, o.seed);
    auto alpha = avgdyn::state_coefficients(summary, x0);
    const double alpha_n = alpha[n - 1];
    const bool degenerate = std::abs(alpha_n) < 1e-13;

    // Oscillation decay is governed by the largest middle-band magnitude.
    double lambda_mid = 0.0;
    for (int i = 1; i + 1 < n; ++i) lambda_mid = std::max(lambda_mid, std::abs(summary.eigenvalues[i]));

    const double sqrt_dn = std::sqrt(file.graph.volume_ratio() * n);
    double horizon = 0.0;
    if (!degenerate && lambda_mid > 1e-15 && lambda_mid < 1.0) {
        double target = sqrt_dn / std::abs(alpha_n);
        if (target > 1.0) horizon = std::log(target) / (2.0 * std::log(1.0 / lambda_mid));
    }
    const int t_star = 2 * static_cast<int>(std::ceil(horizon)) + 2;

    avgdyn::RunParams params;
    params.variant = avgdyn::Variant::two_phase;
    params.rounds = t_star;
    params.seed = o.seed;
    params.history_cap = 4;
    auto traj = avgdyn::run_dynamics(file.graph, params);
    const auto& labels = traj.labels[t_star];

    bool matches = false;
    if (coloring) {
        bool direct = true, flipped = true;
        for (int u = 0; u < n; ++u) {
            const int side = (*coloring)[u];
            if (labels[u] != (side == 0 ? 1 : 0)) direct = false;
            if (labels[u] != (side == 1 ? 1 : 0)) flipped = false;
        }
        matches = direct || flipped;
    }

    json bits = json::array();
    for (std::uint8_t b : labels) bits.push_back(static_cast<int>(b));
    const double lambda_min = summary.eigenvalues.back();
    json doc{{"n", n},
             {"bipartite", coloring.has_value()},
             {"lambda_mid", lambda_mid},
             {"lambda_min", lambda_min},
             {"oscillation", std::abs(lambda_min) >= 1.0 - 1e-9},
             {"symmetry_defect", avgdyn::spectrum_symmetry_defect(summary)},
             {"alpha_n", alpha_n},
             {"degenerate", degenerate},
             {"horizon", horizon},
             {"t_star", t_star},
             {"labels", bits},
             {"matches_bipartition", matches},
             {"seed", o.seed}};

    fs::path out(o.outdir);
    write_json_file(out / "bipartite.json", doc);
    write_json_file(out / "config.json", json{{"command", "bipartite"},
                                              {"graph", o.graph_path},
                                              {"seed", o.seed},
                                              {"out", o.outdir}});
    std::cout << "wrote " << (out / "bipartite.json").string() << " (t*=" << t_star
              << ", matches=" << (matches ? "yes" : "no") << ")\n";
}

struct VerifyOpts {
    std::string graph_path, outdir;
    int rounds = 50;
    bool no_assert_hypotheses = false;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
};

void run_verify(VerifyOpts& o) {
    if (o.seed_opt->count() == 0) o.seed = entropy_seed();
    auto file = load_graph(o.graph_path);
    if (!file.partition)
        throw CliError(exit_usage, "verify needs a graph file with a stored partition");
    if (!file.graph.connected()) throw CliError(exit_graph, "graph is disconnected");
    ensure_outdir(o.outdir);

    const auto& g = file.graph;
    const auto& p = *file.partition;
    std::vector<std::string> failures;

    auto vr = avgdyn::is_volume_regular(g, p);
    if (!vr.holds) failures.push_back("volume_regular");

    auto transition = g.transition_matrix();
    const bool lumpable = avgdyn::is_ordinary_lumpable(transition, p).holds;
    if (!lumpable) failures.push_back("ordinary_lumpable");

    avgdyn::SpectralSummary summary;
    try {
        summary = avgdyn::decompose(g);
    } catch (const std::invalid_argument& e) {
        throw CliError(exit_graph, std::string(e.what()));
    }
    if (summary.max_residual > 1e-8) failures.push_back("spectral_residual");

    auto clustered = avgdyn::is_clustered_volume_regular(g, p, summary);
    if (!clustered.clustered) failures.push_back("clustered");

    auto hyp = avgdyn::check_hypotheses(g, p, summary);
    if (!o.no_assert_hypotheses && !hyp.hypotheses_ok) failures.push_back("hypotheses");

    avgdyn::RunParams params;
    params.variant = avgdyn::Variant::standard;
    params.rounds = o.rounds;
    params.seed = o.seed;
    params.history_cap = std::max(o.rounds, 2);
    auto traj = avgdyn::run_dynamics(g, params);

    double drift = 0.0;
    const double avg0 = weighted_average(g, traj.states.front());
    for (const auto& state : traj.states)
        drift = std::max(drift, std::abs(weighted_average(g, state) - avg0));
    drift /= std::max(1.0, std::abs(avg0));
    if (drift > 1e-9) failures.push_back("conservation");

    auto d = avgdyn::decompose_run(traj, summary, g, p);
    if (d.max_reconstruction_residual > 1e-8) failures.push_back("reconstruction");
    if (clustered.clustered && d.span_residual > 1e-9 * std::max(1.0, std::abs(d.alpha[0])))
        failures.push_back("span");

    auto bounds = avgdyn::verify_bounds(traj, summary, g, p, o.tol);
    const bool assert_bounds = bounds.asserted && !o.no_assert_hypotheses;
    if (assert_bounds && !bounds.ok()) failures.push_back("bounds");

    json doc{{"volume_regular", vr.holds},
             {"ordinary_lumpable", lumpable},
             {"spectral_residual", summary.max_residual},
             {"clustered_check", avgdyn::to_json(clustered)},
             {"hypotheses", avgdyn::to_json(hyp)},
             {"conservation_drift", drift},
             {"reconstruction_residual", d.max_reconstruction_residual},
             {"span_residual", d.span_residual},
             {"bounds", avgdyn::to_json(bounds)},
             {"bounds_asserted", assert_bounds},
             {"seed", o.seed},
             {"rounds", o.rounds},
             {"failures", failures},
             {"pass", failures.empty()}};
    if (!vr.holds && vr.witness) {
        doc["volume_regular_witness"] = json{{"block_i", vr.witness->block_i},
                                             {"block_j", vr.witness->block_j},
                                             {"u", vr.witness->u},
                                             {"v", vr.witness->v},
                                             {"ratio_u", vr.witness->ratio_u},
                                             {"ratio_v", vr.witness->ratio_v}};
    }

    fs::path out(o.outdir);
    write_json_file(out / "verify.json", doc);
    write_json_file(out / "config.json", json{{"command", "verify"},
                                              {"graph", o.graph_path},
                                              {"rounds", o.rounds},
                                              {"tol", o.tol},
                                              {"no_assert_hypotheses", o.no_assert_hypotheses},
                                              {"seed", o.seed},
                                              {"out", o.outdir}});

    if (!failures.empty()) {
        std::string joined;
        for (const auto& f : failures) joined += (joined.empty() ? "" : ", ") + f;
        throw CliError(exit_invariant, "invariant violations: " + joined);
    }
    std::cout << "all asserted invariants hold\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Community detection via averaging dynamics on weighted graphs"};
    app.require_subcommand(1);

    GenerateOpts gen;
    gen.outdir = default_outdir();
    auto* cmd_gen = app.add_subcommand("generate", "Generate a block-model instance");
    cmd_gen->add_option("--sizes", gen.sizes, "Comma-separated block sizes");
    cmd_gen->add_option("--coupling", gen.coupling, "Block coupling matrix, rows ';'-separated");
    cmd_gen->add_option("--blocks", gen.blocks, "Number of blocks (checked against --sizes)");
    cmd_gen->add_option("--stay", gen.stay, "Per-block self-loop weights");
    cmd_gen->add_option("--scales", gen.scales, "Per-node scale factors");
    cmd_gen->add_option("--scale-range", gen.scale_range, "lo,hi for random per-node scales");
    gen.rho_opt = cmd_gen->add_option("--rho", gen.rho, "Uniform non-stepwise eigenvalue (clustered model)");
    cmd_gen->add_option("--community-size", gen.community_size, "Nodes per community (regular model)");
    cmd_gen->add_option("--din", gen.din, "Intra-community degree (regular model)");
    cmd_gen->add_option("--dout", gen.dout, "Per-pair cross degree (regular model)");
    cmd_gen->add_option("--bipartite", gen.bipartite, "n1,n2 random connected bipartite graph");
    cmd_gen->add_option("--density", gen.density, "Extra cross-edge density (bipartite)");
    cmd_gen->add_flag("--weighted", gen.weighted, "Random uniform(0.5,1.5) weights (bipartite)");
    gen.seed_opt = cmd_gen->add_option("--seed", gen.seed, "Master seed (entropy if omitted)");
    cmd_gen->add_option("--out", gen.outdir, "Output directory")->capture_default_str();
    cmd_gen->callback([&gen] { run_generate(gen); });

    SpectrumOpts spec_opts;
    spec_opts.outdir = default_outdir();
    auto* cmd_spec = app.add_subcommand("spectrum", "Eigendecomposition and structure checks");
    cmd_spec->add_option("--graph", spec_opts.graph_path, "Graph file")->required();
    cmd_spec->add_option("--dense-limit", spec_opts.dense_limit, "Largest n accepted");
    cmd_spec->add_option("--out", spec_opts.outdir, "Output directory")->capture_default_str();
    cmd_spec->callback([&spec_opts] { run_spectrum(spec_opts); });

    RunOpts run_opts;
    run_opts.outdir = default_outdir();
    auto* cmd_run = app.add_subcommand("run", "Run the averaging dynamics");
    cmd_run->add_option("--graph", run_opts.graph_path, "Graph file")->required();
    cmd_run->add_option("--variant", run_opts.variant, "standard | even-round | avg-bip")
        ->capture_default_str();
    cmd_run->add_option("--rounds", run_opts.rounds, "Rounds to simulate")->capture_default_str();
    cmd_run->add_option("--round", run_opts.round, "Labeling round to report ('auto' = window midpoint)");
    cmd_run->add_option("--history-cap", run_opts.history_cap, "Stored-state cap")->capture_default_str();
    cmd_run->add_flag("--decompose", run_opts.decompose, "Write the spectral decomposition of the run");
    run_opts.seed_opt = cmd_run->add_option("--seed", run_opts.seed, "Master seed (entropy if omitted)");
    cmd_run->add_option("--out", run_opts.outdir, "Output directory")->capture_default_str();
    cmd_run->callback([&run_opts] { run_run(run_opts); });

    EvaluateOpts eval_opts;
    eval_opts.outdir = default_outdir();
    auto* cmd_eval = app.add_subcommand("evaluate", "Signature clustering and agreement estimates");
    cmd_eval->add_option("--graph", eval_opts.graph_path, "Graph file")->required();
    cmd_eval->add_option("--variant", eval_opts.variant, "standard | even-round | avg-bip")
        ->capture_default_str();
    cmd_eval->add_option("--runs", eval_opts.runs, "Ensemble size (0 = ceil(4 log2 n))");
    cmd_eval->add_option("--round", eval_opts.round, "Labeling round ('auto' = window midpoint)")
        ->capture_default_str();
    cmd_eval->add_option("--alpha", eval_opts.alpha, "Near threshold fraction")->capture_default_str();
    cmd_eval->add_option("--beta", eval_opts.beta, "Far threshold fraction")->capture_default_str();
    cmd_eval->add_option("--strategy", eval_opts.strategy, "dynamics | constant | coin")
        ->capture_default_str();
    cmd_eval->add_option("--trials", eval_opts.trials, "Agreement-estimate trials")->capture_default_str();
    cmd_eval->add_option("--mc-floor-trials", eval_opts.mc_floor_trials,
                         "Projection-floor Monte-Carlo trials (0 = skip)");
    cmd_eval->add_option("--mc-sign-trials", eval_opts.mc_sign_trials,
                         "Sign-separation Monte-Carlo trials (0 = skip)");
    cmd_eval->add_option("--mc-pairs", eval_opts.mc_pairs, "Cross pairs sampled")->capture_default_str();
    eval_opts.seed_opt = cmd_eval->add_option("--seed", eval_opts.seed, "Master seed (entropy if omitted)");
    cmd_eval->add_option("--out", eval_opts.outdir, "Output directory")->capture_default_str();
    cmd_eval->callback([&eval_opts] { run_evaluate(eval_opts); });

    BipartiteOpts bip_opts;
    bip_opts.outdir = default_outdir();
    auto* cmd_bip = app.add_subcommand("bipartite", "Two-phase labeling of a bipartition");
    cmd_bip->add_option("--graph", bip_opts.graph_path, "Graph file")->required();
    bip_opts.seed_opt = cmd_bip->add_option("--seed", bip_opts.seed, "Master seed (entropy if omitted)");
    cmd_bip->add_option("--out", bip_opts.outdir, "Output directory")->capture_default_str();
    cmd_bip->callback([&bip_opts] { run_bipartite(bip_opts); });

    VerifyOpts verify_opts;
    verify_opts.outdir = default_outdir();
    auto* cmd_verify = app.add_subcommand("verify", "Assert structural and dynamic invariants");
    cmd_verify->add_option("--graph", verify_opts.graph_path, "Graph file")->required();
    cmd_verify->add_option("--rounds", verify_opts.rounds, "Rounds to verify")->capture_default_str();
    cmd_verify->add_option("--tol", verify_opts.tol, "Bound tolerance")->capture_default_str();
    cmd_verify->add_flag("--no-assert-hypotheses", verify_opts.no_assert_hypotheses,
                         "Report hypotheses and bounds informationally");
    verify_opts.seed_opt = cmd_verify->add_option("--seed", verify_opts.seed, "Master seed");
    cmd_verify->add_option("--out", verify_opts.outdir, "Output directory")->capture_default_str();
    cmd_verify->callback([&verify_opts] { run_verify(verify_opts); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code;
    } catch (const avgdyn::WindowEmptyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_window;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_graph;
    }
    return 0;
}
