#include "avgdyn/serialize.hpp"

#include <cmath>
#include <cstddef>

#include "avgdyn/graph_io.hpp"

namespace avgdyn {

namespace {

json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

} // namespace

json to_json(const GeneratorReport& report) {
    json levels = json::array();
    for (const auto& level : report.non_stepwise)
        levels.push_back({{"block", level.block},
                          {"value", level.value},
                          {"multiplicity", level.multiplicity}});
    return {
        {"model", report.model},
        {"seed", report.seed},
        {"n", report.n},
        {"k", report.k},
        {"volume_regular", report.volume_regular},
        {"connected", report.connected},
        {"volume_ratio", report.volume_ratio},
        {"stepwise_exact", report.stepwise_exact},
        {"non_stepwise_exact", report.non_stepwise_exact},
        {"predicted_stepwise", report.predicted_stepwise},
        {"non_stepwise_levels", levels},
        {"non_stepwise_bound", report.non_stepwise_bound},
    };
}

json to_json(const StepwiseAnalysis& analysis) {
    json groups = json::array();
    for (const auto& g : analysis.groups)
        groups.push_back({{"lo", g.lo}, {"hi", g.hi}, {"stepwise_dim", g.stepwise_dim}});
    json flags = json::array();
    for (char f : analysis.flags) flags.push_back(static_cast<bool>(f));
    return {
        {"flags", flags},
        {"groups", groups},
        {"stepwise_total", analysis.stepwise_total},
    };
}

json to_json(const ClusteredCheck& check) {
    return {
        {"clustered", check.clustered},
        {"volume_regular", check.volume_regular},
        {"stepwise_in_top_k", check.stepwise_in_top_k},
        {"stepwise_indices", check.stepwise_indices},
        {"indicator_residuals", check.indicator_residuals},
        {"max_indicator_residual", check.max_indicator_residual},
    };
}

json to_json(const HypothesisReport& hyp) {
    return {
        {"n", hyp.n},
        {"k", hyp.k},
        {"scale_factor", hyp.scale_factor},
        {"volume_ratio", hyp.volume_ratio},
        {"n_min", hyp.n_min},
        {"n_max", hyp.n_max},
        {"lambda_2", hyp.lambda_2},
        {"lambda_k", hyp.lambda_k},
        {"lambda_k1", hyp.lambda_k1},
        {"lambda_k1_positive", hyp.lambda_k1_positive},
        {"connected", hyp.connected},
        {"clustered", hyp.clustered},
        {"spread_ok", hyp.spread_ok},
        {"gap_ok", hyp.gap_ok},
        {"size_ok", hyp.size_ok},
        {"balance_ok", hyp.balance_ok},
        {"t1", finite_or_null(hyp.t1)},
        {"t2", finite_or_null(hyp.t2)},
        {"t2_infinite", hyp.t2_infinite},
        {"window_nonempty", hyp.window_nonempty},
        {"hypotheses_ok", hyp.hypotheses_ok},
        {"regime_ok", hyp.regime_ok},
    };
}

json to_json(const BoundCheck& check) {
    return {
        {"hypothesis", to_json(check.hypothesis)},
        {"asserted", check.asserted},
        {"rounds_checked", check.rounds_checked},
        {"tol", check.tol},
        {"degenerate_tol", check.degenerate_tol},
        {"error_violations", check.error_violations},
        {"max_error_ratio", check.max_error_ratio},
        {"degenerate_nodes", check.degenerate_nodes},
        {"core_sign_violations", check.core_sign_violations},
        {"core_magnitude_violations", check.core_magnitude_violations},
        {"core_rounds_checked", check.core_rounds_checked},
        {"window_lo", check.window_lo},
        {"window_hi", check.window_hi},
        {"window_sign_violations", check.window_sign_violations},
        {"ok", check.ok()},
    };
}

json to_json(const RunDecomposition& d) {
    return {
        {"alpha", d.alpha},
        {"gamma", d.gamma},
        {"y", d.y},
        {"z", d.z},
        {"osc", d.osc},
        {"span_residual", d.span_residual},
        {"max_reconstruction_residual", d.max_reconstruction_residual},
    };
}

json to_json(const ClusterResult& c) {
    return {
        {"clusters", c.clusters},
        {"assignment", c.assignment},
        {"consistent", c.consistent},
        {"max_intra_hamming", c.max_intra_hamming},
        {"alpha", c.alpha},
        {"beta", c.beta},
    };
}

json to_json(const AgreementEstimate& est) {
    return {
        {"trials", est.trials},
        {"eps_hat", est.eps_hat},
        {"delta_hat", est.delta_hat},
        {"radius_eps", est.radius_eps},
        {"radius_delta", est.radius_delta},
        {"worst_same", {est.worst_same.first, est.worst_same.second}},
        {"worst_cross", {est.worst_cross.first, est.worst_cross.second}},
    };
}

json to_json(const ProjectionFloorResult& r) {
    return {
        {"trials", r.trials},
        {"threshold", r.threshold},
        {"frequency", r.frequency},
        {"min_frequency", r.min_frequency},
    };
}

json to_json(const SignSeparationResult& r) {
    return {
        {"trials", r.trials},
        {"pairs", r.pairs},
        {"min_frequency", r.min_frequency},
        {"mean_frequency", r.mean_frequency},
    };
}

json spectrum_json(const SpectralSummary& s) {
    return {
        {"n", s.n},
        {"eigenvalues", s.eigenvalues},
        {"total_volume", s.total_volume},
        {"max_residual", s.max_residual},
    };
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,node,x,label\n";
    auto emit_round = [&](int t, const std::vector<double>& state) {
        const bool labeled = traj.has_labels(t);
        for (int u = 0; u < traj.n; ++u) {
            out += std::to_string(t);
            out += ',';
            out += std::to_string(u);
            out += ',';
            out += format_double(state[u]);
            out += ',';
            if (labeled) out += traj.labels[t][u] ? '1' : '0';
            out += '\n';
        }
    };
    const int stored = static_cast<int>(traj.states.size());  // rounds 0..stored-1
    for (int t = 0; t < stored; ++t) emit_round(t, traj.states[t]);
    if (traj.truncated) {
        if (traj.rounds - 1 >= stored) emit_round(traj.rounds - 1, traj.prev_state);
        if (traj.rounds >= stored) emit_round(traj.rounds, traj.last_state);
    }
    return out;
}

std::string dump_json(const json& j) {
    return j.dump(2) + "\n";
}

} // namespace avgdyn
