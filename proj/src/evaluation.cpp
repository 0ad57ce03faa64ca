#include "avgdyn/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>

#include "avgdyn/rng.hpp"

namespace avgdyn {

namespace {

int find_root(std::vector<int>& parent, int u) {
    while (parent[u] != u) {
        parent[u] = parent[parent[u]];
        u = parent[u];
    }
    return u;
}

void unite(std::vector<int>& parent, int a, int b) {
    a = find_root(parent, a);
    b = find_root(parent, b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
}

double binomial_radius(double p, int trials) {
    if (trials <= 0) return 0.0;
    return 1.96 * std::sqrt(std::max(p * (1.0 - p), 0.0) / trials);
}

std::vector<std::uint8_t> labels_for_trial(const WeightedGraph& g, LabelStrategy strategy,
                                           Variant variant, int round, std::uint64_t master_seed,
                                           int trial) {
    const int n = g.num_nodes();
    std::vector<std::uint8_t> labels(n, 1);
    switch (strategy) {
    case LabelStrategy::constant_one:
        return labels;
    case LabelStrategy::coin: {
        Rng coin = Rng(master_seed).split("coin-run", static_cast<std::uint64_t>(trial));
        for (int u = 0; u < n; ++u) labels[u] = static_cast<std::uint8_t>(coin.at(u) >> 63);
        return labels;
    }
    case LabelStrategy::dynamics: {
        RunParams params;
        params.variant = variant;
        params.rounds = round;
        params.seed = Rng(master_seed).split("signature-run", static_cast<std::uint64_t>(trial)).key();
        params.history_cap = 2;  // only labels are consumed here
        Trajectory traj = run_dynamics(g, params);
        if (!traj.has_labels(round))
            throw std::invalid_argument("labels are undefined at the requested round for this variant");
        const auto& src = traj.labels[round];
        std::copy(src.begin(), src.end(), labels.begin());
        return labels;
    }
    }
    throw std::logic_error("unreachable label strategy");
}

} // namespace

int resolve_auto_round(const HypothesisReport& hyp) {
    if (!hyp.window_nonempty)
        throw WindowEmptyError("detection window is empty; no valid labeling round exists");
    int lo = static_cast<int>(std::floor(hyp.t1)) + 1;
    if (hyp.t2_infinite) return std::max(lo, 1);
    int hi = static_cast<int>(std::floor(hyp.t2));
    int mid = static_cast<int>(std::ceil((hyp.t1 + hyp.t2) / 2.0));
    return std::max(1, std::clamp(mid, lo, hi));
}

int default_signature_runs(int n) {
    if (n < 2) return 4;
    return static_cast<int>(std::ceil(4.0 * std::log2(static_cast<double>(n))));
}

SignatureMatrix build_signatures(const WeightedGraph& g, Variant variant, int runs, int round,
                                 std::uint64_t master_seed) {
    if (runs <= 0) throw std::invalid_argument("signature ensemble needs at least one run");
    if (round <= 0) throw std::invalid_argument("labeling round must be positive");

    SignatureMatrix sig;
    sig.n = g.num_nodes();
    sig.runs = runs;
    sig.round = round;
    sig.variant = variant;
    sig.master_seed = master_seed;
    sig.run_seeds.reserve(runs);
    sig.bits.assign(static_cast<std::size_t>(runs) * sig.n, 0);

    Rng master(master_seed);
    for (int j = 0; j < runs; ++j) {
        std::uint64_t seed = master.split("signature-run", static_cast<std::uint64_t>(j)).key();
        sig.run_seeds.push_back(seed);

        RunParams params;
        params.variant = variant;
        params.rounds = round;
        params.seed = seed;
        params.history_cap = 2;
        Trajectory traj = run_dynamics(g, params);
        if (!traj.has_labels(round))
            throw std::invalid_argument("labels are undefined at the requested round for this variant");
        const auto& labels = traj.labels[round];
        std::copy(labels.begin(), labels.end(),
                  sig.bits.begin() + static_cast<std::size_t>(j) * sig.n);
    }
    return sig;
}

std::vector<std::vector<int>> hamming_matrix(const SignatureMatrix& sig) {
    const int n = sig.n;
    std::vector<std::vector<int>> h(n, std::vector<int>(n, 0));
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            int d = 0;
            for (int j = 0; j < sig.runs; ++j) d += sig.at(j, u) != sig.at(j, v);
            h[u][v] = d;
            h[v][u] = d;
        }
    }
    return h;
}

ClusterResult threshold_cluster(const SignatureMatrix& sig, double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta >= alpha) || !(beta <= 1.0))
        throw std::invalid_argument("thresholds must satisfy 0 < alpha <= beta <= 1");

    const int n = sig.n;
    auto h = hamming_matrix(sig);
    const double near = alpha * sig.runs;

    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (h[u][v] < near) unite(parent, u, v);

    ClusterResult result;
    result.alpha = alpha;
    result.beta = beta;
    result.assignment.assign(n, -1);
    std::vector<int> label_of_root(n, -1);
    for (int u = 0; u < n; ++u) {
        int r = find_root(parent, u);
        if (label_of_root[r] < 0) label_of_root[r] = result.clusters++;
        result.assignment[u] = label_of_root[r];
    }

    const double far = beta * sig.runs;
    result.consistent = true;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (result.assignment[u] != result.assignment[v]) continue;
            result.max_intra_hamming = std::max(result.max_intra_hamming, h[u][v]);
            if (h[u][v] >= far) result.consistent = false;
        }
    }
    return result;
}

double match_accuracy(const std::vector<int>& assignment, const Partition& truth) {
    const int n = static_cast<int>(assignment.size());
    if (truth.assignment().size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("assignment and ground truth cover different node sets");
    int clusters = 0;
    for (int c : assignment) clusters = std::max(clusters, c + 1);
    const int k = truth.num_blocks();

    // Confusion counts: cluster c x block b.
    std::vector<std::vector<int>> overlap(clusters, std::vector<int>(k, 0));
    for (int u = 0; u < n; ++u) ++overlap[assignment[u]][truth.block_of(u)];

    // Exact injective matching via bitmask DP over the larger side when it
    // fits; greedy otherwise (exactness only matters near-correct anyway).
    const bool map_clusters = clusters <= k;
    const int small = map_clusters ? clusters : k;
    const int big = map_clusters ? k : clusters;
    if (big <= 16) {
        auto value = [&](int i, int b) { return map_clusters ? overlap[i][b] : overlap[b][i]; };
        std::vector<long> dp(1u << big, -1);
        dp[0] = 0;
        long best = 0;
        for (unsigned mask = 0; mask < dp.size(); ++mask) {
            if (dp[mask] < 0) continue;
            const int i = __builtin_popcount(mask);
            if (i >= small) {
                best = std::max(best, dp[mask]);
                continue;
            }
            for (int b = 0; b < big; ++b) {
                if (mask & (1u << b)) continue;
                long cand = dp[mask] + value(i, b);
                if (cand > dp[mask | (1u << b)]) dp[mask | (1u << b)] = cand;
            }
        }
        return static_cast<double>(best) / n;
    }

    std::vector<char> used(k, 0);
    long matched = 0;
    for (int c = 0; c < clusters; ++c) {
        int best_b = -1;
        for (int b = 0; b < k; ++b)
            if (!used[b] && (best_b < 0 || overlap[c][b] > overlap[c][best_b])) best_b = b;
        if (best_b < 0) break;
        used[best_b] = 1;
        matched += overlap[c][best_b];
    }
    return static_cast<double>(matched) / n;
}

AgreementEstimate estimate_epsilon_delta(const WeightedGraph& g, const Partition& p,
                                         LabelStrategy strategy, Variant variant, int round,
                                         int trials, std::uint64_t master_seed) {
    if (trials <= 0) throw std::invalid_argument("agreement estimate needs at least one trial");
    const int n = g.num_nodes();
    if (p.assignment().size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("partition does not cover the graph");

    // Upper-triangle disagreement counts.
    std::vector<int> diff(static_cast<std::size_t>(n) * n, 0);
    for (int t = 0; t < trials; ++t) {
        auto labels = labels_for_trial(g, strategy, variant, round, master_seed, t);
        for (int u = 0; u < n; ++u) {
            const std::uint8_t lu = labels[u];
            int* row = diff.data() + static_cast<std::size_t>(u) * n;
            for (int v = u + 1; v < n; ++v) row[v] += lu != labels[v];
        }
    }

    AgreementEstimate est;
    est.trials = trials;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            const double disagree = static_cast<double>(diff[static_cast<std::size_t>(u) * n + v]) / trials;
            if (p.block_of(u) == p.block_of(v)) {
                if (disagree >= est.eps_hat) {
                    est.eps_hat = disagree;
                    est.worst_same = {u, v};
                }
            } else {
                const double agree = 1.0 - disagree;
                if (agree >= est.delta_hat) {
                    est.delta_hat = agree;
                    est.worst_cross = {u, v};
                }
            }
        }
    }
    est.radius_eps = binomial_radius(est.eps_hat, trials);
    est.radius_delta = binomial_radius(est.delta_hat, trials);
    return est;
}

ProjectionFloorResult mc_projection_floor(const WeightedGraph& g, const Partition& p, int trials,
                                          std::uint64_t master_seed) {
    if (trials <= 0) throw std::invalid_argument("projection floor needs at least one trial");
    const int n = g.num_nodes();
    ChiBasis basis = chi_basis(g, p);

    ProjectionFloorResult result;
    result.trials = trials;
    result.threshold = 1.0 / (g.volume_ratio() * n);
    result.frequency.assign(n, 0.0);

    std::vector<int> hits(n, 0);
    Rng master(master_seed);
    for (int t = 0; t < trials; ++t) {
        std::uint64_t seed = master.split("floor-trial", static_cast<std::uint64_t>(t)).key();
        auto x = rademacher_state(n, seed);
        auto gamma = chi_coefficients(basis, g, x);
        auto y = y_vector(basis, gamma);
        for (int u = 0; u < n; ++u)
            if (std::abs(y[u]) >= result.threshold) ++hits[u];
    }
    result.min_frequency = 1.0;
    for (int u = 0; u < n; ++u) {
        result.frequency[u] = static_cast<double>(hits[u]) / trials;
        result.min_frequency = std::min(result.min_frequency, result.frequency[u]);
    }
    return result;
}

SignSeparationResult mc_sign_separation(const WeightedGraph& g, const Partition& p, int trials,
                                        int max_pairs, std::uint64_t master_seed) {
    if (trials <= 0) throw std::invalid_argument("sign separation needs at least one trial");
    if (max_pairs <= 0) throw std::invalid_argument("sign separation needs at least one pair");
    const int n = g.num_nodes();
    if (p.num_blocks() < 2)
        throw std::invalid_argument("sign separation needs at least two communities");

    ChiBasis basis = chi_basis(g, p);

    // Deterministic sample of cross-community pairs.
    Rng pair_rng = Rng(master_seed).split("cross-pairs");
    std::vector<std::pair<int, int>> pairs;
    int attempts = 0;
    while (static_cast<int>(pairs.size()) < max_pairs && attempts < max_pairs * 64) {
        int u = static_cast<int>(pair_rng.below(static_cast<std::uint64_t>(n)));
        int v = static_cast<int>(pair_rng.below(static_cast<std::uint64_t>(n)));
        ++attempts;
        if (p.block_of(u) == p.block_of(v)) continue;
        pairs.emplace_back(u, v);
    }
    if (pairs.empty()) throw std::logic_error("failed to sample any cross-community pair");

    std::vector<int> opposite(pairs.size(), 0);
    Rng master(master_seed);
    for (int t = 0; t < trials; ++t) {
        std::uint64_t seed = master.split("separation-trial", static_cast<std::uint64_t>(t)).key();
        auto x = rademacher_state(n, seed);
        auto gamma = chi_coefficients(basis, g, x);
        auto y = y_vector(basis, gamma);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const double a = y[pairs[i].first];
            const double b = y[pairs[i].second];
            if (a * b < 0.0) ++opposite[i];
        }
    }

    SignSeparationResult result;
    result.trials = trials;
    result.pairs = static_cast<int>(pairs.size());
    result.min_frequency = 1.0;
    double total = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double f = static_cast<double>(opposite[i]) / trials;
        result.min_frequency = std::min(result.min_frequency, f);
        total += f;
    }
    result.mean_frequency = total / static_cast<double>(pairs.size());
    return result;
}

} // namespace avgdyn
