#pragma once

#include <cstdint>
#include <vector>

#include "avgdyn/graph.hpp"
#include "avgdyn/spectral.hpp"

namespace avgdyn {

enum class Variant {
    standard,    // label(t): x(t) >= x(t-1), every round
    even_round,  // label(2t): x(2t) >= x(2t-2)
    two_phase,   // label(2t): x(2t) >= x(2t-1); separates the sides of a bipartition
};

const char* variant_name(Variant v);

struct RunParams {
    Variant variant = Variant::standard;
    int rounds = 100;
    std::uint64_t seed = 0;
    int history_cap = 512;  // full states kept up to here; always the last two beyond
};

struct Trajectory {
    Variant variant = Variant::standard;
    std::uint64_t seed = 0;
    int n = 0;
    int rounds = 0;
    int history_cap = 0;
    bool truncated = false;
    std::vector<std::vector<double>> states;          // t = 0..min(rounds, cap)
    std::vector<double> prev_state;                   // x^(rounds-1)
    std::vector<double> last_state;                   // x^(rounds)
    std::vector<std::vector<std::uint8_t>> labels;    // labels[t]; empty when undefined at t

    bool has_state(int t) const;
    const std::vector<double>& state(int t) const;
    bool has_labels(int t) const { return t >= 0 && t <= rounds && !labels[t].empty(); }
};

// x^(0): one Rademacher draw per node, in vertex order.
std::vector<double> rademacher_state(int n, std::uint64_t seed);

Trajectory run_dynamics(const WeightedGraph& g, const RunParams& params);

// Spectral split of a run. For the standard and even-round variants the core
// carries eigenvalues 2..k and the error everything after k. For the
// two-phase variant the oscillation carries the eigenvalue at -1 and the
// error all of 2..n-1.
struct RunDecomposition {
    std::vector<double> alpha;   // per eigen index
    std::vector<double> gamma;   // chi coefficients, k-1 entries
    std::vector<double> y;       // sum gamma_i chi_i
    std::vector<double> z;       // projection on the top-k eigendirections
    std::vector<double> osc;     // alpha_n v_n (two-phase variant only)
    double span_residual = 0.0;  // ||y - (z - alpha_1 1)||_inf; small iff clustered
    std::vector<std::vector<double>> core;   // c^(t) for stored t
    std::vector<std::vector<double>> error;  // e^(t) for stored t
    double max_reconstruction_residual = 0.0;
};

RunDecomposition decompose_run(const Trajectory& traj, const SpectralSummary& s,
                               const WeightedGraph& g, const Partition& p);

// Checks the decay bound on the error term and the sign/magnitude bound on
// consecutive core differences, plus the sign of the raw state differences
// inside the (T1, T2] window. Bounds are asserted when the gap hypotheses
// hold; otherwise the counts are informational.
struct BoundCheck {
    HypothesisReport hypothesis;
    bool asserted = false;
    int rounds_checked = 0;
    double tol = 1e-9;
    double degenerate_tol = 1e-12;

    int error_violations = 0;
    double max_error_ratio = 0.0;  // max |e^(t)(u)| / bound(t)

    int degenerate_nodes = 0;      // |y(u)| <= degenerate_tol, skipped
    int core_sign_violations = 0;
    int core_magnitude_violations = 0;
    int core_rounds_checked = 0;   // t range 0..min(rounds-1, floor(T2))

    int window_lo = 0;             // first integer t > T1
    int window_hi = -1;            // min(floor(T2), rounds-1)
    int window_sign_violations = 0;

    bool ok() const {
        return error_violations == 0 && core_sign_violations == 0 &&
               core_magnitude_violations == 0 && window_sign_violations == 0;
    }
};

BoundCheck verify_bounds(const Trajectory& traj, const SpectralSummary& s, const WeightedGraph& g,
                         const Partition& p, double tol = 1e-9);

} // namespace avgdyn
