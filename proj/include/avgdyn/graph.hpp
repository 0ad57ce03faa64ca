#pragma once

#include <optional>
#include <string>
#include <vector>

#include "avgdyn/matrix.hpp"

namespace avgdyn {

struct Edge {
    int u;
    int v;
    double w;
};

// Undirected weighted graph on vertices 0..n-1. Self-loops are allowed and
// their weight counts once in the volume. Immutable after construction.
class WeightedGraph {
public:
    WeightedGraph() = default;
    // Edges must be unique as unordered pairs; weights must be positive finite.
    WeightedGraph(int n, std::vector<Edge> edges);

    int num_nodes() const { return n_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }

    double volume(int u) const { return volume_[u]; }
    const std::vector<double>& volumes() const { return volume_; }
    double total_volume() const { return total_volume_; }
    double min_volume() const { return min_volume_; }
    double max_volume() const { return max_volume_; }
    // max volume over min volume; the formulas in the analysis assume the
    // minimum is 1, and this ratio is what they see after that rescaling.
    double volume_ratio() const { return max_volume_ / min_volume_; }

    int degree(int u) const { return offsets_[u + 1] - offsets_[u]; }
    const int* neighbors(int u) const { return adj_nodes_.data() + offsets_[u]; }
    const double* weights(int u) const { return adj_weights_.data() + offsets_[u]; }

    bool connected() const;

    // One synchronous averaging step: out(u) = sum_v w(u,v) x(v) / volume(u).
    std::vector<double> apply_transition(const std::vector<double>& x) const;

    Matrix transition_matrix() const;

    // Same graph with every weight divided by the minimum volume.
    WeightedGraph normalize_min_volume() const;

    // Graph of the two-step walk: w2(u,v) = sum_z w(u,z) w(z,v) / volume(z).
    // Volumes are preserved and its transition matrix equals P squared.
    WeightedGraph two_step_graph() const;

private:
    int n_ = 0;
    std::vector<Edge> edges_;  // canonical u <= v, sorted
    std::vector<int> offsets_;
    std::vector<int> adj_nodes_;
    std::vector<double> adj_weights_;
    std::vector<double> volume_;
    double total_volume_ = 0.0;
    double min_volume_ = 0.0;
    double max_volume_ = 0.0;
};

// Partition of 0..n-1 into k non-empty blocks labelled 0..k-1.
class Partition {
public:
    Partition() = default;
    Partition(int n, int k, std::vector<int> assignment);

    int num_nodes() const { return static_cast<int>(assignment_.size()); }
    int num_blocks() const { return k_; }
    int block_of(int u) const { return assignment_[u]; }
    const std::vector<int>& assignment() const { return assignment_; }
    const std::vector<int>& block(int i) const { return blocks_[i]; }
    int block_size(int i) const { return static_cast<int>(blocks_[i].size()); }
    int min_block_size() const;
    int max_block_size() const;

private:
    int k_ = 0;
    std::vector<int> assignment_;
    std::vector<std::vector<int>> blocks_;
};

// vol(V_i) for every block.
std::vector<double> block_volumes(const WeightedGraph& g, const Partition& p);

// Weight from u into block i, for all blocks: delta_i(u).
std::vector<double> block_weights_of_node(const WeightedGraph& g, const Partition& p, int u);

struct RegularityWitness {
    int block_i = -1;   // block whose ranks disagree
    int block_j = -1;   // target block of the disagreeing ratio
    int u = -1;
    int v = -1;
    double ratio_u = 0.0;
    double ratio_v = 0.0;
};

struct RegularityResult {
    bool holds = false;
    std::optional<RegularityWitness> witness;
    explicit operator bool() const { return holds; }
};

// Volume regularity: delta_j(u)/delta(u) identical for all u in the same
// block, for every target block j.
RegularityResult is_volume_regular(const WeightedGraph& g, const Partition& p, double tol = 1e-9);

// Ordinary lumpability of a row-stochastic matrix: row sums into each block
// constant across every source block.
RegularityResult is_ordinary_lumpable(const Matrix& transition, const Partition& p, double tol = 1e-9);

// k x k lumped transition matrix; entry (j, i) is the mass a block-j node
// sends into block i. Requires lumpability at the given tolerance.
Matrix lumped_matrix(const WeightedGraph& g, const Partition& p, double tol = 1e-9);

// Eigenvalues of the lumped matrix, descending. The lumped chain of a
// volume-regular graph is reversible with respect to block volumes, which
// turns this into a symmetric eigenproblem.
std::vector<double> lumped_eigenvalues(const Matrix& lumped, const std::vector<double>& block_vols);

// Random-walk graph of a reversible chain: w(u,v) = pi(u) P(u,v). The chain
// must satisfy detailed balance for the result to be symmetric.
WeightedGraph graph_from_reversible_chain(const Matrix& transition, const std::vector<double>& pi,
                                          double tol = 1e-9);

// BFS two-coloring: side (0/1) per node if the graph is bipartite, empty otherwise.
std::optional<std::vector<int>> two_coloring(const WeightedGraph& g);

} // namespace avgdyn
