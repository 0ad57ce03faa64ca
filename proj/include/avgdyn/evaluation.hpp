#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "avgdyn/dynamics.hpp"
#include "avgdyn/graph.hpp"
#include "avgdyn/spectral.hpp"

namespace avgdyn {

struct WindowEmptyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Label round for signature building: the (rounded-up) midpoint of the
// [T1, T2] window, or the first integer past T1 when T2 is infinite.
int resolve_auto_round(const HypothesisReport& hyp);

// ceil(4 log2 n), the default ensemble size.
int default_signature_runs(int n);

// One label vector per run; run j uses the seed derived from (master, j).
struct SignatureMatrix {
    int n = 0;
    int runs = 0;
    int round = 0;
    Variant variant = Variant::standard;
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> run_seeds;
    std::vector<std::uint8_t> bits;  // runs x n, row-major

    std::uint8_t at(int run, int u) const { return bits[static_cast<std::size_t>(run) * n + u]; }
};

SignatureMatrix build_signatures(const WeightedGraph& g, Variant variant, int runs, int round,
                                 std::uint64_t master_seed);

// Hamming distance between the signatures of u and v.
std::vector<std::vector<int>> hamming_matrix(const SignatureMatrix& sig);

// Clusters = connected components of { (u,v) : h(u,v) < alpha * runs }.
// Consistent when no intra-cluster pair reaches beta * runs.
struct ClusterResult {
    int clusters = 0;
    std::vector<int> assignment;
    bool consistent = false;
    int max_intra_hamming = 0;
    double alpha = 0.0;
    double beta = 0.0;
};

ClusterResult threshold_cluster(const SignatureMatrix& sig, double alpha, double beta);

// Fraction of nodes matched to the ground truth under the best injective
// relabeling of clusters (exhaustive for small cluster counts).
double match_accuracy(const std::vector<int>& assignment, const Partition& truth);

// How labels are produced for the agreement estimate. The two degenerate
// strategies calibrate the estimator: constant labels must give (0, 1) and
// independent coins push both estimates toward 1/2.
enum class LabelStrategy { dynamics, constant_one, coin };

struct AgreementEstimate {
    int trials = 0;
    double eps_hat = 0.0;    // worst same-community disagreement frequency
    double delta_hat = 0.0;  // worst cross-community agreement frequency
    double radius_eps = 0.0;    // 95% normal-approximation radii
    double radius_delta = 0.0;
    std::pair<int, int> worst_same{-1, -1};
    std::pair<int, int> worst_cross{-1, -1};
};

AgreementEstimate estimate_epsilon_delta(const WeightedGraph& g, const Partition& p,
                                         LabelStrategy strategy, Variant variant, int round,
                                         int trials, std::uint64_t master_seed);

// Frequency of |y(u)| >= 1/(Delta n) per node over Rademacher draws.
struct ProjectionFloorResult {
    int trials = 0;
    double threshold = 0.0;
    std::vector<double> frequency;
    double min_frequency = 0.0;
};

ProjectionFloorResult mc_projection_floor(const WeightedGraph& g, const Partition& p, int trials,
                                          std::uint64_t master_seed);

// Frequency of sgn y(u) != sgn y(v) over cross-community pairs.
struct SignSeparationResult {
    int trials = 0;
    int pairs = 0;
    double min_frequency = 0.0;
    double mean_frequency = 0.0;
};

SignSeparationResult mc_sign_separation(const WeightedGraph& g, const Partition& p, int trials,
                                        int max_pairs, std::uint64_t master_seed);

} // namespace avgdyn
