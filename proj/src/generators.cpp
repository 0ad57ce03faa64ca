#include "avgdyn/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "avgdyn/rng.hpp"

namespace avgdyn {

namespace {

Partition block_partition(const std::vector<int>& sizes) {
    int n = 0;
    for (int s : sizes) n += s;
    std::vector<int> assignment(n);
    int u = 0;
    for (int i = 0; i < static_cast<int>(sizes.size()); ++i)
        for (int c = 0; c < sizes[i]; ++c) assignment[u++] = i;
    return Partition(n, static_cast<int>(sizes.size()), std::move(assignment));
}

void finish_report(GeneratedInstance& inst) {
    inst.report.n = inst.graph.num_nodes();
    inst.report.k = inst.partition.num_blocks();
    inst.report.connected = inst.graph.connected();
    inst.report.volume_regular = static_cast<bool>(is_volume_regular(inst.graph, inst.partition));
    inst.report.volume_ratio = inst.graph.volume_ratio();
    if (!inst.report.connected)
        throw std::invalid_argument("generated graph is disconnected; raise couplings or degrees");
    inst.report.non_stepwise_bound = 0.0;
    for (const auto& lvl : inst.report.non_stepwise)
        inst.report.non_stepwise_bound = std::max(inst.report.non_stepwise_bound, std::abs(lvl.value));
}

// Stepwise eigenvalues from analytically known lumped entries.
std::vector<double> stepwise_from_lumped(const Matrix& lumped, const std::vector<double>& block_vols) {
    return lumped_eigenvalues(lumped, block_vols);
}

} // namespace

int BlockSpec::total_nodes() const {
    int n = 0;
    for (int s : sizes) n += s;
    return n;
}

void BlockSpec::validate() const {
    const int k = static_cast<int>(sizes.size());
    if (k == 0) throw std::invalid_argument("block spec needs at least one block");
    for (int s : sizes)
        if (s < 1) throw std::invalid_argument("block sizes must be at least 1");
    if (coupling.rows() != k || coupling.cols() != k)
        throw std::invalid_argument("coupling matrix must be k x k");
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            if (coupling.at(i, j) < 0.0 || !std::isfinite(coupling.at(i, j)))
                throw std::invalid_argument("couplings must be nonnegative and finite");
            if (coupling.at(i, j) != coupling.at(j, i))
                throw std::invalid_argument("coupling matrix must be symmetric");
        }
    if (!stay.empty()) {
        if (static_cast<int>(stay.size()) != k)
            throw std::invalid_argument("stay vector must have one entry per block");
        for (double t : stay)
            if (t < 0.0 || !std::isfinite(t))
                throw std::invalid_argument("stay weights must be nonnegative and finite");
    }
}

GeneratedInstance generate_homogeneous_blocks(const BlockSpec& spec) {
    spec.validate();
    const int k = static_cast<int>(spec.sizes.size());
    const int n = spec.total_nodes();
    std::vector<int> start(k + 1, 0);
    for (int i = 0; i < k; ++i) start[i + 1] = start[i] + spec.sizes[i];
    auto stay = [&](int i) { return spec.stay.empty() ? 0.0 : spec.stay[i]; };

    std::vector<Edge> edges;
    for (int i = 0; i < k; ++i) {
        double cii = spec.coupling.at(i, i);
        for (int u = start[i]; u < start[i + 1]; ++u) {
            if (stay(i) > 0.0) edges.push_back({u, u, stay(i)});
            if (cii > 0.0)
                for (int v = u + 1; v < start[i + 1]; ++v) edges.push_back({u, v, cii});
        }
        for (int j = i + 1; j < k; ++j) {
            double cij = spec.coupling.at(i, j);
            if (cij <= 0.0) continue;
            for (int u = start[i]; u < start[i + 1]; ++u)
                for (int v = start[j]; v < start[j + 1]; ++v) edges.push_back({u, v, cij});
        }
    }

    GeneratedInstance inst{WeightedGraph(n, std::move(edges)), block_partition(spec.sizes), {}};
    inst.report.model = "homogeneous";

    std::vector<double> delta(k, 0.0);
    for (int i = 0; i < k; ++i) {
        delta[i] = stay(i) + spec.coupling.at(i, i) * (spec.sizes[i] - 1);
        for (int j = 0; j < k; ++j)
            if (j != i) delta[i] += spec.coupling.at(i, j) * spec.sizes[j];
    }
    Matrix lumped(k, k);
    std::vector<double> block_vols(k);
    for (int j = 0; j < k; ++j) {
        block_vols[j] = delta[j] * spec.sizes[j];
        for (int i = 0; i < k; ++i)
            lumped.at(j, i) = (i == j)
                                  ? (stay(j) + spec.coupling.at(j, j) * (spec.sizes[j] - 1)) / delta[j]
                                  : spec.coupling.at(j, i) * spec.sizes[i] / delta[j];
    }
    inst.report.stepwise_exact = true;
    inst.report.predicted_stepwise = stepwise_from_lumped(lumped, block_vols);
    inst.report.non_stepwise_exact = true;
    for (int i = 0; i < k; ++i)
        if (spec.sizes[i] >= 2)
            inst.report.non_stepwise.push_back(
                {i, (stay(i) - spec.coupling.at(i, i)) / delta[i], spec.sizes[i] - 1});
    finish_report(inst);
    return inst;
}

GeneratedInstance generate_scaled_blocks(const BlockSpec& spec, std::vector<double> scales) {
    spec.validate();
    const int k = static_cast<int>(spec.sizes.size());
    const int n = spec.total_nodes();
    if (static_cast<int>(scales.size()) != n)
        throw std::invalid_argument("need one scale per node");
    for (double a : scales)
        if (!(a > 0.0) || !std::isfinite(a))
            throw std::invalid_argument("scales must be positive and finite");
    if (!spec.stay.empty())
        throw std::invalid_argument("scaled blocks take no stay weights; use the clustered model");

    std::vector<int> start(k + 1, 0);
    for (int i = 0; i < k; ++i) start[i + 1] = start[i] + spec.sizes[i];
    std::vector<double> big_a(k, 0.0);
    for (int i = 0; i < k; ++i)
        for (int u = start[i]; u < start[i + 1]; ++u) big_a[i] += scales[u];

    std::vector<Edge> edges;
    for (int i = 0; i < k; ++i) {
        double cii = spec.coupling.at(i, i);
        if (cii > 0.0)
            for (int u = start[i]; u < start[i + 1]; ++u)
                edges.push_back({u, u, cii * scales[u] * big_a[i]});
        for (int j = i + 1; j < k; ++j) {
            double cij = spec.coupling.at(i, j);
            if (cij <= 0.0) continue;
            for (int u = start[i]; u < start[i + 1]; ++u)
                for (int v = start[j]; v < start[j + 1]; ++v)
                    edges.push_back({u, v, cij * scales[u] * scales[v]});
        }
    }

    GeneratedInstance inst{WeightedGraph(n, std::move(edges)), block_partition(spec.sizes), {}};
    inst.report.model = "scaled";

    std::vector<double> g(k, 0.0);
    for (int i = 0; i < k; ++i)
        for (int l = 0; l < k; ++l) g[i] += spec.coupling.at(i, l) * big_a[l];
    Matrix lumped(k, k);
    std::vector<double> block_vols(k);
    for (int j = 0; j < k; ++j) {
        block_vols[j] = big_a[j] * g[j];
        for (int i = 0; i < k; ++i) lumped.at(j, i) = spec.coupling.at(j, i) * big_a[i] / g[j];
    }
    inst.report.stepwise_exact = true;
    inst.report.predicted_stepwise = stepwise_from_lumped(lumped, block_vols);
    inst.report.non_stepwise_exact = true;
    for (int i = 0; i < k; ++i)
        if (spec.sizes[i] >= 2)
            inst.report.non_stepwise.push_back(
                {i, spec.coupling.at(i, i) * big_a[i] / g[i], spec.sizes[i] - 1});
    finish_report(inst);
    return inst;
}

GeneratedInstance generate_clustered_blocks(const BlockSpec& spec, std::vector<double> scales,
                                            double rho) {
    spec.validate();
    const int k = static_cast<int>(spec.sizes.size());
    const int n = spec.total_nodes();
    if (static_cast<int>(scales.size()) != n)
        throw std::invalid_argument("need one scale per node");
    for (double a : scales)
        if (!(a > 0.0) || !std::isfinite(a))
            throw std::invalid_argument("scales must be positive and finite");
    if (!(rho >= 0.0 && rho < 1.0))
        throw std::invalid_argument("rho must lie in [0, 1)");
    if (!spec.stay.empty())
        throw std::invalid_argument("clustered blocks derive stay weights from rho");

    std::vector<int> start(k + 1, 0);
    for (int i = 0; i < k; ++i) start[i + 1] = start[i] + spec.sizes[i];
    std::vector<double> big_a(k, 0.0);
    for (int i = 0; i < k; ++i)
        for (int u = start[i]; u < start[i + 1]; ++u) big_a[i] += scales[u];

    // G_i solves G = sum_l c_il A_l + tau_i with tau_i = rho G_i, which pins
    // every non-stepwise eigenvalue to tau_i / G_i = rho.
    std::vector<double> g(k, 0.0), tau(k, 0.0);
    for (int i = 0; i < k; ++i) {
        double base = 0.0;
        for (int l = 0; l < k; ++l) base += spec.coupling.at(i, l) * big_a[l];
        if (base <= 0.0) throw std::invalid_argument("each block needs positive coupling mass");
        g[i] = base / (1.0 - rho);
        tau[i] = rho * g[i];
    }

    std::vector<Edge> edges;
    for (int i = 0; i < k; ++i) {
        double cii = spec.coupling.at(i, i);
        for (int u = start[i]; u < start[i + 1]; ++u) {
            double loop = cii * scales[u] * scales[u] + tau[i] * scales[u];
            if (loop > 0.0) edges.push_back({u, u, loop});
            if (cii > 0.0)
                for (int v = u + 1; v < start[i + 1]; ++v)
                    edges.push_back({u, v, cii * scales[u] * scales[v]});
        }
        for (int j = i + 1; j < k; ++j) {
            double cij = spec.coupling.at(i, j);
            if (cij <= 0.0) continue;
            for (int u = start[i]; u < start[i + 1]; ++u)
                for (int v = start[j]; v < start[j + 1]; ++v)
                    edges.push_back({u, v, cij * scales[u] * scales[v]});
        }
    }

    GeneratedInstance inst{WeightedGraph(n, std::move(edges)), block_partition(spec.sizes), {}};
    inst.report.model = "clustered";

    Matrix lumped(k, k);
    std::vector<double> block_vols(k);
    for (int j = 0; j < k; ++j) {
        block_vols[j] = big_a[j] * g[j];
        for (int i = 0; i < k; ++i)
            lumped.at(j, i) = (i == j) ? (spec.coupling.at(j, j) * big_a[j] + tau[j]) / g[j]
                                       : spec.coupling.at(j, i) * big_a[i] / g[j];
    }
    inst.report.stepwise_exact = true;
    inst.report.predicted_stepwise = stepwise_from_lumped(lumped, block_vols);
    inst.report.non_stepwise_exact = true;
    for (int i = 0; i < k; ++i)
        if (spec.sizes[i] >= 2) inst.report.non_stepwise.push_back({i, rho, spec.sizes[i] - 1});
    finish_report(inst);
    return inst;
}

GeneratedInstance generate_regular_clustered(int k, int community_size, int d_in, int d_out,
                                             std::uint64_t seed) {
    const int s = community_size;
    if (k < 1 || s < 1) throw std::invalid_argument("need at least one community and one node");
    if (d_in < 0 || d_in > s - 1) throw std::invalid_argument("d_in out of range");
    if (d_out < 0 || d_out > s) throw std::invalid_argument("d_out out of range");
    if (d_in % 2 == 1 && s % 2 == 1)
        throw std::invalid_argument("odd d_in needs an even community size");

    Rng rng(Rng(seed).split("regular-clustered").key());
    auto permuted = [&](int block, std::string_view label) {
        std::vector<int> order(s);
        std::iota(order.begin(), order.end(), 0);
        Rng r = rng.split(label, static_cast<std::uint64_t>(block));
        for (int i = s - 1; i > 0; --i)
            std::swap(order[i], order[static_cast<int>(r.below(static_cast<std::uint64_t>(i + 1)))]);
        return order;
    };

    std::vector<Edge> edges;
    // Intra-community: circulant offsets on a randomly permuted cycle.
    for (int b = 0; b < k; ++b) {
        auto order = permuted(b, "intra");
        int base = b * s;
        for (int off = 1; off <= d_in / 2; ++off)
            for (int t = 0; t < s; ++t) {
                int u = base + order[t];
                int v = base + order[(t + off) % s];
                edges.push_back({std::min(u, v), std::max(u, v), 1.0});
            }
        if (d_in % 2 == 1)
            for (int t = 0; t < s / 2; ++t) {
                int u = base + order[t];
                int v = base + order[t + s / 2];
                edges.push_back({std::min(u, v), std::max(u, v), 1.0});
            }
    }
    // Cross pairs: d_out shifted matchings between permuted sides.
    for (int b = 0; b < k; ++b)
        for (int c = b + 1; c < k; ++c) {
            auto left = permuted(b * k + c, "cross-left");
            auto right = permuted(b * k + c, "cross-right");
            for (int shift = 0; shift < d_out; ++shift)
                for (int t = 0; t < s; ++t)
                    edges.push_back({b * s + left[t], c * s + right[(t + shift) % s], 1.0});
        }

    GeneratedInstance inst{WeightedGraph(k * s, std::move(edges)),
                           block_partition(std::vector<int>(k, s)),
                           {}};
    inst.report.model = "regular-clustered";
    inst.report.seed = seed;

    double vol = d_in + static_cast<double>(k - 1) * d_out;
    Matrix lumped(k, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i) lumped.at(j, i) = (i == j ? d_in : d_out) / vol;
    inst.report.stepwise_exact = true;
    inst.report.predicted_stepwise = stepwise_from_lumped(lumped, std::vector<double>(k, vol * s));
    inst.report.non_stepwise_exact = false;
    finish_report(inst);
    return inst;
}

GeneratedInstance generate_bipartite(int n1, int n2, double density, bool weighted,
                                     std::uint64_t seed) {
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("both sides need at least one node");
    if (!(density >= 0.0 && density <= 1.0))
        throw std::invalid_argument("density must lie in [0, 1]");
    const int n = n1 + n2;

    Rng rng(Rng(seed).split("bipartite").key());
    auto shuffle = [&](std::vector<int>& v, Rng r) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i)
            std::swap(v[i], v[static_cast<int>(r.below(static_cast<std::uint64_t>(i + 1)))]);
    };

    std::vector<int> left(n1), right(n2);
    std::iota(left.begin(), left.end(), 0);
    std::iota(right.begin(), right.end(), n1);
    shuffle(left, rng.split("order-left"));
    shuffle(right, rng.split("order-right"));

    // Random cross spanning tree: every new node attaches to a uniformly
    // random already-placed node of the other side.
    std::vector<int> placed_left{left[0]}, placed_right;
    std::vector<int> pending(right.begin(), right.end());
    pending.insert(pending.end(), left.begin() + 1, left.end());
    shuffle(pending, rng.split("order-merge"));
    // The other side starts empty, so a right-side node has to come first.
    if (pending.front() < n1)
        for (auto& u : pending)
            if (u >= n1) {
                std::swap(pending.front(), u);
                break;
            }

    std::vector<char> is_edge(static_cast<std::size_t>(n1) * n2, 0);
    std::vector<Edge> edges;
    Rng attach = rng.split("attach");
    auto add_edge = [&](int u, int v) {  // u on the left side, v on the right
        is_edge[static_cast<std::size_t>(u) * n2 + (v - n1)] = 1;
        edges.push_back({u, v, 1.0});
    };
    for (int u : pending) {
        bool u_left = u < n1;
        auto& other = u_left ? placed_right : placed_left;
        int target = other[static_cast<int>(attach.below(static_cast<std::uint64_t>(other.size())))];
        add_edge(u_left ? u : target, u_left ? target : u);
        (u_left ? placed_left : placed_right).push_back(u);
    }

    Rng extra = rng.split("extra");
    for (int u = 0; u < n1; ++u)
        for (int v = n1; v < n; ++v) {
            if (is_edge[static_cast<std::size_t>(u) * n2 + (v - n1)]) continue;
            if (extra.unit_at(static_cast<std::uint64_t>(u) * n2 + (v - n1)) < density)
                add_edge(u, v);
        }

    if (weighted) {
        std::sort(edges.begin(), edges.end(),
                  [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
        Rng wrng = rng.split("weights");
        for (std::size_t i = 0; i < edges.size(); ++i)
            edges[i].w = 0.5 + wrng.unit_at(i);
    }

    std::vector<int> assignment(n, 0);
    for (int v = n1; v < n; ++v) assignment[v] = 1;
    GeneratedInstance inst{WeightedGraph(n, std::move(edges)), Partition(n, 2, std::move(assignment)), {}};
    inst.report.model = "bipartite";
    inst.report.seed = seed;
    inst.report.stepwise_exact = true;
    inst.report.predicted_stepwise = {1.0, -1.0};
    inst.report.non_stepwise_exact = false;
    finish_report(inst);
    return inst;
}

std::vector<double> random_scales(int n, double lo, double hi, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("need at least one node");
    if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("need 0 < lo <= hi");
    Rng rng(Rng(seed).split("scales").key());
    std::vector<double> scales(n);
    for (int u = 0; u < n; ++u)
        scales[u] = lo + (hi - lo) * rng.unit_at(static_cast<std::uint64_t>(u));
    return scales;
}

} // namespace avgdyn
