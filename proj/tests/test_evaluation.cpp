#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "avgdyn/dynamics.hpp"
#include "avgdyn/evaluation.hpp"
#include "avgdyn/generators.hpp"
#include "avgdyn/graph.hpp"
#include "avgdyn/rng.hpp"
#include "avgdyn/spectral.hpp"

using namespace avgdyn;

namespace {

SignatureMatrix make_signature(int n, int runs, std::vector<std::uint8_t> bits) {
    SignatureMatrix sig;
    sig.n = n;
    sig.runs = runs;
    sig.round = 1;
    sig.bits = std::move(bits);
    return sig;
}

GeneratedInstance two_block(int size, double cross) {
    BlockSpec spec;
    spec.sizes = {size, size};
    spec.coupling = Matrix(2, 2);
    spec.coupling.at(0, 0) = spec.coupling.at(1, 1) = 1.0;
    spec.coupling.at(0, 1) = spec.coupling.at(1, 0) = cross;
    return generate_homogeneous_blocks(spec);
}

HypothesisReport window(double t1, double t2, bool infinite) {
    HypothesisReport hyp;
    hyp.t1 = t1;
    hyp.t2 = t2;
    hyp.t2_infinite = infinite;
    hyp.window_nonempty = true;
    return hyp;
}

} // namespace

TEST_CASE("hamming distances") {
    // rows: (0,1,1), (0,0,1), (1,0,0)
    auto sig = make_signature(3, 3, {0, 0, 1, 1, 0, 0, 1, 1, 0});
    auto h = hamming_matrix(sig);
    CHECK(h[0][0] == 0);
    CHECK(h[0][1] == 1);  // differ in run 1
    CHECK(h[1][0] == 1);
    CHECK(h[0][2] == 3);  // complementary columns
    CHECK(h[1][2] == 2);
}

TEST_CASE("threshold clustering groups identical signatures") {
    auto sig = make_signature(4, 2, {1, 1, 0, 0, 0, 0, 1, 1});
    auto r = threshold_cluster(sig, 0.5, 0.5);
    CHECK(r.clusters == 2);
    CHECK(r.assignment[0] == r.assignment[1]);
    CHECK(r.assignment[2] == r.assignment[3]);
    CHECK(r.assignment[0] != r.assignment[2]);
    CHECK(r.consistent);
    CHECK(r.max_intra_hamming == 0);

    auto all_zero = make_signature(3, 4, std::vector<std::uint8_t>(12, 0));
    auto rz = threshold_cluster(all_zero, 0.25, 0.5);
    CHECK(rz.clusters == 1);
    CHECK(rz.consistent);
}

TEST_CASE("transitive merge across a gap is flagged inconsistent") {
    // 4 runs: a=(0,0,0,0), b=(0,0,1,1), c=(1,1,1,1).
    // h(a,b)=h(b,c)=2 < 3 = alpha*runs merges all three, but h(a,c)=4 >= beta*runs.
    auto sig = make_signature(3, 4, {0, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 1});
    auto r = threshold_cluster(sig, 0.75, 0.9);
    CHECK(r.clusters == 1);
    CHECK_FALSE(r.consistent);
    CHECK(r.max_intra_hamming == 4);
}

TEST_CASE("threshold parameters are validated") {
    auto sig = make_signature(2, 2, {0, 0, 0, 0});
    CHECK_THROWS_AS(threshold_cluster(sig, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(threshold_cluster(sig, 0.6, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(threshold_cluster(sig, 0.5, 1.5), std::invalid_argument);
}

TEST_CASE("accuracy maximizes over cluster relabelings") {
    Partition truth(6, 2, {0, 0, 0, 1, 1, 1});
    CHECK(match_accuracy({1, 1, 1, 0, 0, 0}, truth) == doctest::Approx(1.0));
    CHECK(match_accuracy({0, 0, 0, 1, 1, 1}, truth) == doctest::Approx(1.0));
    CHECK(match_accuracy({0, 0, 1, 1, 1, 1}, truth) == doctest::Approx(5.0 / 6.0));
    // More clusters than truth blocks: the two largest survive matching.
    CHECK(match_accuracy({0, 0, 2, 1, 1, 2}, truth) == doctest::Approx(4.0 / 6.0));
    // One cluster covering everything matches the larger block.
    Partition skew(5, 2, {0, 0, 0, 0, 1});
    CHECK(match_accuracy({0, 0, 0, 0, 0}, skew) == doctest::Approx(4.0 / 5.0));
}

TEST_CASE("default ensemble size") {
    CHECK(default_signature_runs(256) == 32);
    CHECK(default_signature_runs(100) == 27);  // ceil(4 log2 100)
    CHECK(default_signature_runs(2) == 4);
    CHECK(default_signature_runs(1) == 4);
}

TEST_CASE("auto round picks the window midpoint") {
    CHECK(resolve_auto_round(window(2.0, 10.0, false)) == 6);
    CHECK(resolve_auto_round(window(2.9, 3.05, false)) == 3);   // clamped to the window
    CHECK(resolve_auto_round(window(3.2, 0.0, true)) == 4);     // first integer past T1
    CHECK(resolve_auto_round(window(-5.0, 0.0, true)) == 1);    // at least one step

    HypothesisReport empty;
    empty.window_nonempty = false;
    CHECK_THROWS_AS(resolve_auto_round(empty), WindowEmptyError);
}

TEST_CASE("signatures replay runs bit for bit") {
    auto inst = two_block(8, 0.05);
    auto sig = build_signatures(inst.graph, Variant::standard, 6, 4, 77);
    auto again = build_signatures(inst.graph, Variant::standard, 6, 4, 77);
    CHECK(sig.bits == again.bits);
    CHECK(sig.run_seeds == again.run_seeds);
    CHECK(sig.runs == 6);
    CHECK(sig.n == 16);

    // Row j is exactly the label vector of the run seeded from (master, j).
    for (int j = 0; j < sig.runs; ++j) {
        RunParams params;
        params.rounds = 4;
        params.seed = sig.run_seeds[j];
        params.history_cap = 2;
        auto traj = run_dynamics(inst.graph, params);
        for (int u = 0; u < sig.n; ++u) CHECK(sig.at(j, u) == traj.labels[4][u]);
    }

    auto other = build_signatures(inst.graph, Variant::standard, 6, 4, 78);
    CHECK(sig.bits != other.bits);

    // Round with undefined labels for the variant is rejected.
    CHECK_THROWS_AS(build_signatures(inst.graph, Variant::even_round, 4, 3, 1),
                    std::invalid_argument);
}

TEST_CASE("strong two-block instance recovers the planted communities") {
    auto inst = two_block(12, 0.02);
    auto s = decompose(inst.graph);
    auto hyp = check_hypotheses(inst.graph, inst.partition, s);
    REQUIRE(hyp.window_nonempty);
    const int round = resolve_auto_round(hyp);
    auto sig = build_signatures(inst.graph, Variant::standard, default_signature_runs(24), round, 5);
    auto r = threshold_cluster(sig, 0.1, 0.4);
    CHECK(r.clusters == 2);
    CHECK(r.consistent);
    CHECK(match_accuracy(r.assignment, inst.partition) == doctest::Approx(1.0));
}

TEST_CASE("agreement estimator calibration") {
    auto inst = two_block(6, 0.05);

    auto constant = estimate_epsilon_delta(inst.graph, inst.partition, LabelStrategy::constant_one,
                                           Variant::standard, 3, 200, 11);
    CHECK(constant.eps_hat == doctest::Approx(0.0));
    CHECK(constant.delta_hat == doctest::Approx(1.0));

    auto coin = estimate_epsilon_delta(inst.graph, inst.partition, LabelStrategy::coin,
                                       Variant::standard, 3, 2000, 11);
    CHECK(std::abs(coin.eps_hat - 0.5) <= 0.05);
    CHECK(std::abs(coin.delta_hat - 0.5) <= 0.05);
    CHECK(coin.radius_eps > 0.0);
    CHECK(coin.radius_eps <= 0.025);  // 1.96 sqrt(.25/2000)

    // Dynamics labels inside the window beat a coin on both estimates.
    auto s = decompose(inst.graph);
    const int round = resolve_auto_round(check_hypotheses(inst.graph, inst.partition, s));
    auto dyn = estimate_epsilon_delta(inst.graph, inst.partition, LabelStrategy::dynamics,
                                      Variant::standard, round, 300, 11);
    CHECK(dyn.eps_hat < 0.35);
    CHECK(dyn.delta_hat < 0.35);
    CHECK(dyn.worst_same.first >= 0);
    CHECK(dyn.worst_cross.first >= 0);

    auto replay = estimate_epsilon_delta(inst.graph, inst.partition, LabelStrategy::dynamics,
                                         Variant::standard, round, 300, 11);
    CHECK(replay.eps_hat == dyn.eps_hat);
    CHECK(replay.delta_hat == dyn.delta_hat);
}

TEST_CASE("projection floor frequencies") {
    auto inst = two_block(8, 0.05);
    auto r = mc_projection_floor(inst.graph, inst.partition, 400, 9);
    CHECK(r.trials == 400);
    CHECK(r.threshold == doctest::Approx(1.0 / (inst.graph.volume_ratio() * 16)));
    CHECK(static_cast<int>(r.frequency.size()) == 16);
    double lo = 1.0;
    for (double f : r.frequency) {
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        lo = std::min(lo, f);
    }
    CHECK(r.min_frequency == doctest::Approx(lo));
    // Blocks are interchangeable here, so per-node frequencies stay in a tight band.
    CHECK(r.min_frequency > 0.5);

    auto again = mc_projection_floor(inst.graph, inst.partition, 400, 9);
    CHECK(again.frequency == r.frequency);
}

TEST_CASE("sign separation across communities") {
    auto inst = two_block(8, 0.05);
    auto r = mc_sign_separation(inst.graph, inst.partition, 300, 40, 4);
    CHECK(r.trials == 300);
    CHECK(r.pairs > 0);
    CHECK(r.pairs <= 40);
    CHECK(r.min_frequency >= 0.0);
    CHECK(r.mean_frequency >= r.min_frequency);
    CHECK(r.mean_frequency <= 1.0);
    // Opposite signs dominate for a symmetric two-block instance.
    CHECK(r.min_frequency > 0.5);

    auto again = mc_sign_separation(inst.graph, inst.partition, 300, 40, 4);
    CHECK(again.min_frequency == r.min_frequency);
    CHECK(again.mean_frequency == r.mean_frequency);
}
