#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "avgdyn/dynamics.hpp"
#include "avgdyn/generators.hpp"
#include "avgdyn/graph.hpp"
#include "avgdyn/spectral.hpp"

using namespace avgdyn;

namespace {

WeightedGraph k2() { return WeightedGraph(2, {{0, 1, 1.0}}); }

WeightedGraph triangle() {
    return WeightedGraph(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}});
}

WeightedGraph k22() {
    return WeightedGraph(4, {{0, 2, 1.0}, {0, 3, 1.0}, {1, 2, 1.0}, {1, 3, 1.0}});
}

// First seed below 4096 whose Rademacher draw matches `want`.
std::uint64_t seed_with_init(int n, const std::vector<double>& want) {
    for (std::uint64_t seed = 0; seed < 4096; ++seed) {
        if (rademacher_state(n, seed) == want) return seed;
    }
    REQUIRE(false);
    return 0;
}

GeneratedInstance small_clustered() {
    BlockSpec spec;
    spec.sizes = {8, 8};
    spec.coupling = Matrix(2, 2);
    spec.coupling.at(0, 0) = spec.coupling.at(1, 1) = 1.0;
    spec.coupling.at(0, 1) = spec.coupling.at(1, 0) = 0.05;
    return generate_homogeneous_blocks(spec);
}

} // namespace

TEST_CASE("two-node period-2 oscillation") {
    auto g = k2();
    RunParams params;
    params.rounds = 4;
    params.seed = seed_with_init(2, {1.0, -1.0});
    auto traj = run_dynamics(g, params);

    CHECK(traj.states[1] == std::vector<double>{-1.0, 1.0});
    CHECK(traj.states[2] == std::vector<double>{1.0, -1.0});
    CHECK(traj.labels[1] == std::vector<std::uint8_t>{0, 1});
    CHECK(traj.labels[2] == std::vector<std::uint8_t>{1, 0});
    CHECK(traj.labels[3] == std::vector<std::uint8_t>{0, 1});
}

TEST_CASE("all-equal start is a fixed point with all-ones labels") {
    auto g = k2();
    RunParams params;
    params.rounds = 3;
    params.seed = seed_with_init(2, {1.0, 1.0});
    auto traj = run_dynamics(g, params);
    for (int t = 1; t <= 3; ++t) {
        CHECK(traj.states[t] == std::vector<double>{1.0, 1.0});
        CHECK(traj.labels[t] == std::vector<std::uint8_t>{1, 1});  // ties label 1
    }
}

TEST_CASE("triangle single step") {
    auto g = triangle();
    RunParams params;
    params.rounds = 1;
    params.seed = seed_with_init(3, {1.0, -1.0, 1.0});
    auto traj = run_dynamics(g, params);
    CHECK(traj.states[1][0] == doctest::Approx(0.0));
    CHECK(traj.states[1][1] == doctest::Approx(1.0));
    CHECK(traj.states[1][2] == doctest::Approx(0.0));
    CHECK(traj.labels[1] == std::vector<std::uint8_t>{0, 1, 0});
}

TEST_CASE("replay determinism and seed sensitivity") {
    auto inst = small_clustered();
    RunParams params;
    params.rounds = 20;
    params.seed = 99;
    auto a = run_dynamics(inst.graph, params);
    auto b = run_dynamics(inst.graph, params);
    CHECK(a.states == b.states);
    CHECK(a.labels == b.labels);

    params.seed = 100;
    auto c = run_dynamics(inst.graph, params);
    CHECK(a.states[0] != c.states[0]);
}

TEST_CASE("weighted average is conserved") {
    auto inst = small_clustered();
    RunParams params;
    params.rounds = 40;
    params.seed = 7;
    auto traj = run_dynamics(inst.graph, params);

    const auto& g = inst.graph;
    auto mean = [&](const std::vector<double>& x) {
        double total = 0.0;
        for (int u = 0; u < g.num_nodes(); ++u) total += g.volume(u) * x[u];
        return total / g.total_volume();
    };
    const double m0 = mean(traj.states[0]);
    for (const auto& state : traj.states)
        CHECK(mean(state) == doctest::Approx(m0).epsilon(1e-9));
}

TEST_CASE("states replay the transition exactly") {
    auto inst = small_clustered();
    RunParams params;
    params.rounds = 10;
    params.seed = 3;
    auto traj = run_dynamics(inst.graph, params);
    for (int t = 1; t <= 10; ++t) {
        auto want = inst.graph.apply_transition(traj.states[t - 1]);
        for (int u = 0; u < traj.n; ++u)
            CHECK(traj.states[t][u] == doctest::Approx(want[u]).epsilon(1e-12));
    }
}

TEST_CASE("history cap keeps the prefix and the last two rounds") {
    auto inst = small_clustered();
    RunParams params;
    params.rounds = 20;
    params.seed = 5;
    params.history_cap = 5;
    auto capped = run_dynamics(inst.graph, params);
    params.history_cap = 512;
    auto full = run_dynamics(inst.graph, params);

    CHECK(capped.truncated);
    CHECK(capped.states.size() == 6);  // rounds 0..5
    for (int t = 0; t <= 5; ++t) CHECK(capped.states[t] == full.states[t]);
    CHECK(capped.prev_state == full.states[19]);
    CHECK(capped.last_state == full.states[20]);
    CHECK(capped.labels == full.labels);  // labels are never dropped
    CHECK(capped.has_state(3));
    CHECK_FALSE(capped.has_state(10));
    CHECK_THROWS_AS(capped.state(10), std::out_of_range);
}

TEST_CASE("label definedness per variant") {
    auto g = k22();
    RunParams params;
    params.rounds = 6;
    params.seed = 2;

    params.variant = Variant::standard;
    auto std_traj = run_dynamics(g, params);
    CHECK_FALSE(std_traj.has_labels(0));
    for (int t = 1; t <= 6; ++t) CHECK(std_traj.has_labels(t));

    params.variant = Variant::even_round;
    auto even_traj = run_dynamics(g, params);
    for (int t = 0; t <= 6; ++t) CHECK(even_traj.has_labels(t) == (t >= 2 && t % 2 == 0));

    params.variant = Variant::two_phase;
    auto bip_traj = run_dynamics(g, params);
    for (int t = 0; t <= 6; ++t) CHECK(bip_traj.has_labels(t) == (t >= 2 && t % 2 == 0));
}

TEST_CASE("even-round labels equal standard labels on the two-step graph") {
    auto inst = small_clustered();
    auto two_step = inst.graph.two_step_graph();
    for (std::uint64_t seed : {1u, 12u, 123u}) {
        RunParams even_params;
        even_params.variant = Variant::even_round;
        even_params.rounds = 20;
        even_params.seed = seed;
        auto even_traj = run_dynamics(inst.graph, even_params);

        RunParams std_params;
        std_params.rounds = 10;
        std_params.seed = seed;
        auto std_traj = run_dynamics(two_step, std_params);

        CHECK(even_traj.states[0] == std_traj.states[0]);
        for (int t = 1; t <= 10; ++t) CHECK(even_traj.labels[2 * t] == std_traj.labels[t]);
    }
}

TEST_CASE("two-phase labeling separates the complete bipartite sides") {
    auto g = k22();
    RunParams params;
    params.variant = Variant::two_phase;
    params.rounds = 2;
    params.seed = seed_with_init(4, {1.0, 1.0, -1.0, -1.0});
    auto traj = run_dynamics(g, params);
    CHECK(traj.states[1] == std::vector<double>{-1.0, -1.0, 1.0, 1.0});
    CHECK(traj.states[2] == std::vector<double>{1.0, 1.0, -1.0, -1.0});
    CHECK(traj.labels[2] == std::vector<std::uint8_t>{1, 1, 0, 0});
}

TEST_CASE("run decomposition reconstructs the trajectory") {
    auto inst = small_clustered();
    auto s = decompose(inst.graph);
    RunParams params;
    params.rounds = 50;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        params.seed = seed;
        auto traj = run_dynamics(inst.graph, params);
        auto d = decompose_run(traj, s, inst.graph, inst.partition);
        CHECK(d.max_reconstruction_residual <= 1e-8);
        CHECK(d.span_residual <= 1e-9);

        // alpha_1 is the volume-weighted mean of the start state.
        double mean = 0.0;
        for (int u = 0; u < traj.n; ++u) mean += inst.graph.volume(u) * traj.states[0][u];
        mean /= inst.graph.total_volume();
        CHECK(d.alpha[0] == doctest::Approx(mean).epsilon(1e-10));
    }
}

TEST_CASE("two-phase decomposition isolates the oscillating direction") {
    auto inst = generate_bipartite(5, 6, 0.3, false, 21);
    auto s = decompose(inst.graph);
    RunParams params;
    params.variant = Variant::two_phase;
    params.rounds = 24;
    params.seed = 13;
    auto traj = run_dynamics(inst.graph, params);
    auto d = decompose_run(traj, s, inst.graph, inst.partition);
    CHECK(d.max_reconstruction_residual <= 1e-8);

    // osc carries the bottom eigendirection: alpha_n * v_n.
    const int n = s.n;
    for (int u = 0; u < n; ++u)
        CHECK(d.osc[u] == doctest::Approx(d.alpha[n - 1] * s.p_vectors.at(u, n - 1)).epsilon(1e-12));

    // Even states converge to alpha_1 1 + osc at rate lambda_mid^2.
    double lambda_mid = 0.0;
    for (int i = 1; i + 1 < n; ++i) lambda_mid = std::max(lambda_mid, std::abs(s.eigenvalues[i]));
    const double sqrt_dn = std::sqrt(inst.graph.volume_ratio() * n);
    for (int t = 2; t <= 24; t += 2) {
        double residual = 0.0;
        for (int u = 0; u < n; ++u) {
            double osc_term = d.alpha[0] * s.p_vectors.at(u, 0) + d.osc[u];
            residual = std::max(residual, std::abs(traj.states[t][u] - osc_term));
        }
        CHECK(residual <= 2.0 * sqrt_dn * std::pow(lambda_mid, t) + 1e-12);
    }
}

TEST_CASE("bound verification on a strong two-block instance") {
    auto inst = small_clustered();
    auto s = decompose(inst.graph);
    RunParams params;
    params.rounds = 50;
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        params.seed = seed;
        auto traj = run_dynamics(inst.graph, params);
        auto check = verify_bounds(traj, s, inst.graph, inst.partition);
        CHECK(check.error_violations == 0);
        CHECK(check.max_error_ratio <= 1.0);
        // k = 2 means lambda_k = lambda_2: the window never closes.
        CHECK(check.hypothesis.t2_infinite);
        if (check.degenerate_nodes == 0) {
            CHECK(check.core_sign_violations == 0);
            CHECK(check.core_magnitude_violations == 0);
            CHECK(check.window_sign_violations == 0);
            ++checked;
        }
    }
    CHECK(checked >= 20);  // nearly all seeds are non-degenerate
}

TEST_CASE("equal stepwise eigenvalues make the core difference exact") {
    // k = 2 symmetric couplings: lambda_k = lambda_2, and the core difference
    // collapses to lambda_k^t (1 - lambda_2) y(u) exactly.
    auto inst = small_clustered();
    auto s = decompose(inst.graph);
    const double lambda_2 = s.eigenvalues[1];
    RunParams params;
    params.rounds = 50;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        params.seed = seed;
        auto traj = run_dynamics(inst.graph, params);
        auto d = decompose_run(traj, s, inst.graph, inst.partition);
        double factor = 1.0 - lambda_2;  // lambda_k^0 (1 - lambda_2)
        for (int t = 0; t < 50; ++t) {
            for (int u = 0; u < traj.n; ++u) {
                double diff = d.core[t][u] - d.core[t + 1][u];
                CHECK(std::abs(diff - factor * d.y[u]) <= 1e-9);
            }
            factor *= lambda_2;
        }
    }
}

TEST_CASE("bound verification rejects unusable trajectories") {
    auto inst = small_clustered();
    auto s = decompose(inst.graph);
    RunParams params;
    params.rounds = 20;
    params.seed = 1;
    params.history_cap = 4;
    auto truncated = run_dynamics(inst.graph, params);
    CHECK_THROWS_AS(verify_bounds(truncated, s, inst.graph, inst.partition), std::invalid_argument);

    params.history_cap = 512;
    params.variant = Variant::even_round;
    auto even_traj = run_dynamics(inst.graph, params);
    CHECK_THROWS_AS(verify_bounds(even_traj, s, inst.graph, inst.partition), std::invalid_argument);
}
