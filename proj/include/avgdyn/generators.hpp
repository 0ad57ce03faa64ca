#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "avgdyn/graph.hpp"

namespace avgdyn {

// Parameters for the block-model family. coupling(i, j) is the pairwise base
// weight between blocks i and j; the diagonal governs intra-block weight.
// stay adds an optional per-block self-loop weight on every node.
struct BlockSpec {
    std::vector<int> sizes;
    Matrix coupling;
    std::vector<double> stay;

    int total_nodes() const;
    void validate() const;
};

struct NonStepwiseLevel {
    int block = 0;
    double value = 0.0;
    int multiplicity = 0;
};

struct GeneratorReport {
    std::string model;
    std::uint64_t seed = 0;
    int n = 0;
    int k = 0;
    bool volume_regular = false;
    bool connected = false;
    double volume_ratio = 1.0;
    bool stepwise_exact = false;      // predicted_stepwise is a closed form
    bool non_stepwise_exact = false;  // non_stepwise levels are a closed form
    std::vector<double> predicted_stepwise;       // descending
    std::vector<NonStepwiseLevel> non_stepwise;   // per block, blocks of size >= 2
    double non_stepwise_bound = 0.0;              // max |value| above
};

struct GeneratedInstance {
    WeightedGraph graph;
    Partition partition;
    GeneratorReport report;
};

// Complete block-weighted graph: w(u,v) = coupling(i,j) for u in V_i, v in
// V_j, u != v (diagonal blocks are weighted cliques), plus stay[i] self-loops
// when given. Exactly volume-regular. Non-stepwise eigenvalues are
// (stay[i] - c_ii) / delta_i per block.
GeneratedInstance generate_homogeneous_blocks(const BlockSpec& spec);

// Heterogeneous-degree variant: w(u,v) = c_ij a(u) a(v) across blocks, and
// self-loops w(u,u) = c_ii a(u) A_i inside, so delta_j(u)/delta(u) =
// c_ij A_j / sum_l c_il A_l exactly. Non-stepwise eigenvalues c_ii A_i / G_i.
GeneratedInstance generate_scaled_blocks(const BlockSpec& spec, std::vector<double> scales);

// Strong-community variant with a tunable positive non-stepwise level:
// scaled cliques w(u,v) = c_ij a(u) a(v) on all pairs plus self-loops
// w(u,u) = c_ii a(u)^2 + tau_i a(u) with tau_i chosen so every non-stepwise
// eigenvalue equals rho. A uniform sub-stepwise band keeps the decay
// envelope of the error contribution tight at every round.
GeneratedInstance generate_clustered_blocks(const BlockSpec& spec, std::vector<double> scales,
                                            double rho);

// Unweighted d_in-regular communities with d_out-regular bipartite couplings
// between every pair, built from permuted circulants and shifted matchings.
GeneratedInstance generate_regular_clustered(int k, int community_size, int d_in, int d_out,
                                             std::uint64_t seed);

// Connected random bipartite graph: a uniform cross spanning tree plus
// density-sampled extra cross pairs; optional uniform(0.5, 1.5) weights.
// The stored partition is the bipartition.
GeneratedInstance generate_bipartite(int n1, int n2, double density, bool weighted,
                                     std::uint64_t seed);

// n node scales drawn uniformly from [lo, hi], one counter slot per node.
std::vector<double> random_scales(int n, double lo, double hi, std::uint64_t seed);

} // namespace avgdyn
