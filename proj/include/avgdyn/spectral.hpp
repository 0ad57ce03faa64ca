#pragma once

#include <vector>

#include "avgdyn/graph.hpp"
#include "avgdyn/matrix.hpp"

namespace avgdyn {

// Eigendecomposition of N = D^{-1/2} W D^{-1/2}. N shares its spectrum with
// the transition matrix P; v = D^{-1/2} w maps eigenvectors across.
struct SpectralSummary {
    int n = 0;
    std::vector<double> eigenvalues;  // descending
    Matrix w_vectors;                 // columns: orthonormal eigenvectors of N
    Matrix p_vectors;                 // columns: D^{-1/2} w, rescaled to sup-norm 1
    std::vector<double> volume;
    std::vector<double> sqrt_volume;
    double total_volume = 0.0;
    double max_residual = 0.0;        // max_i ||N w_i - lambda_i w_i||_inf
};

// Dense decomposition; refuses graphs above the dense limit or disconnected
// ones (the analysis assumes a connected graph).
SpectralSummary decompose(const WeightedGraph& g, int dense_limit = 4096);

// Projection coefficients of a state: alpha_i = x^T D v_i / ||D^{1/2} v_i||^2.
std::vector<double> state_coefficients(const SpectralSummary& s, const std::vector<double>& x);

// sum_i lambda_i^t alpha_i v_i.
std::vector<double> reconstruct_state(const SpectralSummary& s, const std::vector<double>& alpha,
                                      int t);

// max_i |lambda_i + lambda_{n-1-i}|; zero for bipartite graphs.
double spectrum_symmetry_defect(const SpectralSummary& s);

// A maximal run of eigenvalue indices closer than the grouping tolerance,
// treated as one eigenspace when deciding stepwise structure.
struct EigenGroup {
    int lo = 0;
    int hi = 0;            // inclusive
    int stepwise_dim = 0;  // dimensions of the group's eigenspace inside the indicator span
};

struct StepwiseAnalysis {
    std::vector<char> flags;   // per eigen index; within a multiplet the first
                               // stepwise_dim indices carry the flag
    std::vector<EigenGroup> groups;
    int stepwise_total = 0;
    Matrix stepwise_basis;     // n x stepwise_total, orthonormal in w-space
    std::vector<int> stepwise_group_of;  // group index per basis column
};

// An eigenvector is stepwise when it is constant on every block. Degenerate
// multiplets are handled by intersecting the eigenspace with the indicator
// span instead of inspecting individual basis vectors.
StepwiseAnalysis stepwise_flags(const SpectralSummary& s, const Partition& p,
                                double group_tol = 1e-7, double flag_tol = 1e-6);

struct ClusteredCheck {
    bool clustered = false;
    bool volume_regular = false;
    int stepwise_in_top_k = 0;
    std::vector<int> stepwise_indices;      // eigen indices carrying the top-k stepwise basis
    std::vector<double> indicator_residuals;  // per block, against that basis
    double max_indicator_residual = 0.0;
};

// Clustered volume regularity: volume-regular and a k-dimensional stepwise
// eigenbasis inside the top-k eigenspaces.
ClusteredCheck is_clustered_volume_regular(const WeightedGraph& g, const Partition& p,
                                           const SpectralSummary& s, double vr_tol = 1e-9,
                                           double group_tol = 1e-7, double flag_tol = 1e-6);

// The community-indicator combinations chi_1..chi_{k-1}: chi_i is
// sqrt(mhat_i/m_i) on V_i, -sqrt(m_i/mhat_i) on V_{i+1}..V_k, 0 before V_i,
// with mhat_i the volume after block i. D-orthogonal to each other and to 1.
struct ChiBasis {
    Matrix chi;                     // n x (k-1)
    std::vector<double> d_norm_sq;  // ||D^{1/2} chi_i||^2 = m_i + mhat_i
    std::vector<double> block_volumes;
};

ChiBasis chi_basis(const WeightedGraph& g, const Partition& p);

// gamma_i = x^T D chi_i / ||D^{1/2} chi_i||^2.
std::vector<double> chi_coefficients(const ChiBasis& basis, const WeightedGraph& g,
                                     const std::vector<double>& x);

// y = sum_i gamma_i chi_i; block-constant by construction.
std::vector<double> y_vector(const ChiBasis& basis, const std::vector<double>& gamma);

struct HypothesisReport {
    int n = 0;
    int k = 0;
    double scale_factor = 1.0;   // min volume of the input graph
    double volume_ratio = 1.0;   // max/min volume; the Delta the formulas use
    int n_min = 0;
    int n_max = 0;
    double lambda_2 = 0.0;
    double lambda_k = 0.0;
    double lambda_k1 = 0.0;
    bool lambda_k1_positive = false;
    bool connected = false;
    bool clustered = false;
    bool spread_ok = false;     // lambda_k >= (7 lambda_2 - 5) / 2
    bool gap_ok = false;        // 1 - lambda_2 <= lambda_k log(lambda_k/|lambda_k1|) / (7 log(2 Delta n))
    bool size_ok = false;       // Delta <= sqrt(n_min) / 25
    bool balance_ok = false;    // 2 Delta n_max/n_min < k <= sqrt(n)
    double t1 = 0.0;            // entry of the detection window, |y|_min floored at 1/(Delta n)
    double t2 = 0.0;            // lambda_k / (2 (1 - lambda_2)); +inf when lambda_k == lambda_2
    bool t2_infinite = false;
    bool window_nonempty = false;
    bool hypotheses_ok = false; // connected, clustered, spread, gap, positive lambda_k1
    bool regime_ok = false;     // the asymptotic size conditions, reported informationally
};

HypothesisReport check_hypotheses(const WeightedGraph& g, const Partition& p,
                                  const SpectralSummary& s);

struct CheegerFloor {
    double floor = 0.0;  // 1 / (2 Delta^2 n^2)
    double gap = 0.0;    // 1 - lambda_2
    bool holds = false;
};

CheegerFloor cheeger_floor(const SpectralSummary& s, const WeightedGraph& g);

} // namespace avgdyn
