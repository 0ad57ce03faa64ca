#include "avgdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "avgdyn/rng.hpp"

namespace avgdyn {

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::standard: return "standard";
        case Variant::even_round: return "even-round";
        case Variant::two_phase: return "avg-bip";
    }
    return "?";
}

bool Trajectory::has_state(int t) const {
    return (t >= 0 && t < static_cast<int>(states.size())) || t == rounds || t == rounds - 1;
}

const std::vector<double>& Trajectory::state(int t) const {
    if (t >= 0 && t < static_cast<int>(states.size())) return states[t];
    if (t == rounds) return last_state;
    if (t == rounds - 1) return prev_state;
    throw std::out_of_range("state dropped by the history cap");
}

std::vector<double> rademacher_state(int n, std::uint64_t seed) {
    Rng rng = Rng(seed).split("rademacher-init");
    std::vector<double> x(n);
    for (int u = 0; u < n; ++u) x[u] = static_cast<double>(rng.rademacher_at(static_cast<std::uint64_t>(u)));
    return x;
}

Trajectory run_dynamics(const WeightedGraph& g, const RunParams& params) {
    if (params.rounds < 0) throw std::invalid_argument("rounds must be nonnegative");
    if (params.history_cap < 1) throw std::invalid_argument("history cap must be positive");
    const int n = g.num_nodes();

    Trajectory traj;
    traj.variant = params.variant;
    traj.seed = params.seed;
    traj.n = n;
    traj.rounds = params.rounds;
    traj.history_cap = params.history_cap;
    traj.labels.assign(params.rounds + 1, {});

    std::vector<double> x = rademacher_state(n, params.seed);
    std::vector<double> prev2, prev;
    traj.states.push_back(x);

    for (int t = 1; t <= params.rounds; ++t) {
        prev2 = std::move(prev);
        prev = std::move(x);
        x = g.apply_transition(prev);
        if (t <= params.history_cap)
            traj.states.push_back(x);
        else
            traj.truncated = true;

        bool label_now = false;
        const std::vector<double>* reference = nullptr;
        switch (params.variant) {
            case Variant::standard:
                label_now = true;
                reference = &prev;
                break;
            case Variant::even_round:
                label_now = t % 2 == 0 && t >= 2;
                reference = &prev2;
                break;
            case Variant::two_phase:
                label_now = t % 2 == 0 && t >= 2;
                reference = &prev;
                break;
        }
        if (label_now) {
            auto& lab = traj.labels[t];
            lab.resize(n);
            for (int u = 0; u < n; ++u) lab[u] = x[u] >= (*reference)[u] ? 1 : 0;
        }
    }

    if (params.rounds == 0) {
        traj.prev_state = traj.states[0];
        traj.last_state = traj.states[0];
    } else {
        traj.prev_state = std::move(prev);
        traj.last_state = std::move(x);
    }
    return traj;
}

RunDecomposition decompose_run(const Trajectory& traj, const SpectralSummary& s,
                               const WeightedGraph& g, const Partition& p) {
    if (traj.n != s.n || g.num_nodes() != s.n || p.num_nodes() != s.n)
        throw std::invalid_argument("trajectory, summary, graph and partition must agree");
    const int n = s.n;
    const int k = p.num_blocks();
    const auto& x0 = traj.state(0);

    RunDecomposition d;
    d.alpha = state_coefficients(s, x0);

    auto basis = chi_basis(g, p);
    d.gamma = chi_coefficients(basis, g, x0);
    d.y = y_vector(basis, d.gamma);

    d.z.assign(n, 0.0);
    for (int j = 0; j < k; ++j)
        for (int u = 0; u < n; ++u) d.z[u] += d.alpha[j] * s.p_vectors.at(u, j);
    // alpha_1 v_1 with v_1 the constant vector; use the actual stored column
    // so the residual reflects the decomposition as computed.
    for (int u = 0; u < n; ++u) {
        double lead = d.alpha[0] * s.p_vectors.at(u, 0);
        d.span_residual = std::max(d.span_residual, std::abs(d.y[u] - (d.z[u] - lead)));
    }

    const bool two_phase = traj.variant == Variant::two_phase;
    if (two_phase) {
        d.osc.assign(n, 0.0);
        for (int u = 0; u < n; ++u) d.osc[u] = d.alpha[n - 1] * s.p_vectors.at(u, n - 1);
    }
    int core_lo = 1, core_hi = k - 1;      // eigen indices (0-based) 1..k-1
    int err_lo = k, err_hi = n - 1;        // k..n-1
    if (two_phase) {
        core_lo = 1; core_hi = 0;          // empty
        err_lo = 1; err_hi = n - 2;        // middle band
    }

    const int stored = static_cast<int>(traj.states.size()) - 1;
    d.core.resize(stored + 1);
    d.error.resize(stored + 1);
    std::vector<double> powers(n, 1.0);  // lambda_i^t per index, updated per round
    for (int t = 0; t <= stored; ++t) {
        if (t > 0)
            for (int j = 0; j < n; ++j) powers[j] *= s.eigenvalues[j];
        auto& core = d.core[t];
        auto& err = d.error[t];
        core.assign(n, 0.0);
        err.assign(n, 0.0);
        for (int j = core_lo; j <= core_hi; ++j) {
            double coeff = powers[j] * d.alpha[j];
            for (int u = 0; u < n; ++u) core[u] += coeff * s.p_vectors.at(u, j);
        }
        for (int j = err_lo; j <= err_hi; ++j) {
            double coeff = powers[j] * d.alpha[j];
            for (int u = 0; u < n; ++u) err[u] += coeff * s.p_vectors.at(u, j);
        }
        const auto& xt = traj.state(t);
        for (int u = 0; u < n; ++u) {
            double rec = powers[0] * d.alpha[0] * s.p_vectors.at(u, 0) + core[u] + err[u];
            if (two_phase) rec += powers[n - 1] * d.alpha[n - 1] * s.p_vectors.at(u, n - 1);
            d.max_reconstruction_residual =
                std::max(d.max_reconstruction_residual, std::abs(rec - xt[u]));
        }
    }
    return d;
}

BoundCheck verify_bounds(const Trajectory& traj, const SpectralSummary& s, const WeightedGraph& g,
                         const Partition& p, double tol) {
    if (traj.truncated)
        throw std::invalid_argument("bound verification needs the full state history");
    if (traj.variant != Variant::standard)
        throw std::invalid_argument("bound verification applies to the standard variant");

    BoundCheck check;
    check.tol = tol;
    check.hypothesis = check_hypotheses(g, p, s);
    check.asserted = check.hypothesis.hypotheses_ok;

    auto d = decompose_run(traj, s, g, p);
    const int n = s.n;
    const int rounds = traj.rounds;
    check.rounds_checked = rounds;

    const double delta = g.volume_ratio();
    const double sqrt_dn = std::sqrt(delta * n);
    const double abs_k1 = std::abs(check.hypothesis.lambda_k1);
    for (int t = 0; t <= rounds; ++t) {
        double bound = std::pow(abs_k1, t) * sqrt_dn + tol;
        for (int u = 0; u < n; ++u) {
            double mag = std::abs(d.error[t][u]);
            if (mag > bound) ++check.error_violations;
            check.max_error_ratio = std::max(check.max_error_ratio, mag / bound);
        }
    }

    for (int u = 0; u < n; ++u)
        if (std::abs(d.y[u]) <= check.degenerate_tol) ++check.degenerate_nodes;

    const double lambda_2 = check.hypothesis.lambda_2;
    const double lambda_k = check.hypothesis.lambda_k;
    double t2 = check.hypothesis.t2;
    int core_hi = rounds - 1;
    if (std::isfinite(t2)) core_hi = std::min(core_hi, static_cast<int>(std::floor(t2)));
    check.core_rounds_checked = core_hi + 1;
    for (int t = 0; t <= core_hi; ++t) {
        double factor = std::pow(lambda_k, t) * (1.0 - lambda_2);
        for (int u = 0; u < n; ++u) {
            double yu = d.y[u];
            if (std::abs(yu) <= check.degenerate_tol) continue;
            double diff = d.core[t][u] - d.core[t + 1][u];
            double sign = yu > 0.0 ? 1.0 : -1.0;
            if (diff * sign <= 0.0) {
                ++check.core_sign_violations;
            } else if (diff * sign < factor * std::abs(yu) - tol) {
                ++check.core_magnitude_violations;
            }
        }
    }

    double t1 = check.hypothesis.t1;
    check.window_lo = std::isfinite(t1) ? static_cast<int>(std::floor(t1)) + 1 : rounds;
    check.window_hi = core_hi;
    for (int t = check.window_lo; t <= check.window_hi; ++t) {
        const auto& xt = traj.state(t);
        const auto& xt1 = traj.state(t + 1);
        for (int u = 0; u < n; ++u) {
            if (std::abs(d.y[u]) <= check.degenerate_tol) continue;
            double diff = xt[u] - xt1[u];
            if ((d.y[u] > 0.0) != (diff > 0.0) || diff == 0.0) ++check.window_sign_violations;
        }
    }
    return check;
}

} // namespace avgdyn
