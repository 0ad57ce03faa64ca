#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "avgdyn/generators.hpp"
#include "avgdyn/graph.hpp"
#include "avgdyn/spectral.hpp"

using namespace avgdyn;

namespace {

Matrix coupling2(double on, double off, double on2 = -1.0) {
    Matrix c(2, 2);
    c.at(0, 0) = on;
    c.at(1, 1) = on2 < 0.0 ? on : on2;
    c.at(0, 1) = c.at(1, 0) = off;
    return c;
}

// Full predicted spectrum of a block-model report: stepwise values plus the
// per-block levels with their multiplicities, sorted descending.
std::vector<double> predicted_spectrum(const GeneratorReport& report) {
    std::vector<double> all = report.predicted_stepwise;
    for (const auto& level : report.non_stepwise)
        for (int i = 0; i < level.multiplicity; ++i) all.push_back(level.value);
    std::sort(all.rbegin(), all.rend());
    return all;
}

void check_spectrum_matches(const GeneratedInstance& inst, double tol) {
    auto s = decompose(inst.graph);
    auto want = predicted_spectrum(inst.report);
    REQUIRE(static_cast<int>(want.size()) == s.n);
    for (int i = 0; i < s.n; ++i)
        CHECK(s.eigenvalues[i] == doctest::Approx(want[i]).epsilon(1e-9).scale(1.0 * tol));
}

} // namespace

TEST_CASE("block spec validation") {
    CHECK_THROWS_AS(generate_homogeneous_blocks({{}, Matrix(0, 0), {}}), std::invalid_argument);
    CHECK_THROWS_AS(generate_homogeneous_blocks({{3, 0}, coupling2(1, 0.1), {}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_homogeneous_blocks({{3, 3}, Matrix(3, 3), {}}), std::invalid_argument);
    Matrix askew = coupling2(1, 0.1);
    askew.at(0, 1) = 0.2;
    CHECK_THROWS_AS(generate_homogeneous_blocks({{3, 3}, askew, {}}), std::invalid_argument);
    CHECK_THROWS_AS(generate_homogeneous_blocks({{3, 3}, coupling2(1, 0.1), {0.5}}),
                    std::invalid_argument);
}

TEST_CASE("homogeneous blocks have closed-form spectrum") {
    auto inst = generate_homogeneous_blocks({{3, 3}, coupling2(1, 0.1), {}});
    CHECK(inst.report.model == "homogeneous");
    CHECK(inst.report.volume_regular);
    CHECK(inst.report.connected);
    CHECK(inst.report.stepwise_exact);
    CHECK(inst.report.non_stepwise_exact);

    // delta = 2 + 0.3 = 2.3; intra-block remainder level is -1/2.3.
    REQUIRE(inst.report.non_stepwise.size() == 2);
    for (const auto& level : inst.report.non_stepwise) {
        CHECK(level.value == doctest::Approx(-1.0 / 2.3).epsilon(1e-12));
        CHECK(level.multiplicity == 2);
    }
    REQUIRE(inst.report.predicted_stepwise.size() == 2);
    CHECK(inst.report.predicted_stepwise[0] == doctest::Approx(1.0));
    CHECK(inst.report.predicted_stepwise[1] == doctest::Approx(1.7 / 2.3).epsilon(1e-12));
    check_spectrum_matches(inst, 1e-9);

    // A single block of 4 is the complete graph: remainder level -1/3.
    Matrix c1(1, 1);
    c1.at(0, 0) = 1.0;
    auto k4 = generate_homogeneous_blocks({{4}, c1, {}});
    REQUIRE(k4.report.non_stepwise.size() == 1);
    CHECK(k4.report.non_stepwise[0].value == doctest::Approx(-1.0 / 3.0));
    CHECK(k4.report.non_stepwise[0].multiplicity == 3);
}

TEST_CASE("stay weights shift the intra-block level") {
    auto inst = generate_homogeneous_blocks({{3, 3}, coupling2(1, 0.1), {0.5, 0.5}});
    // delta = 0.5 + 2 + 0.3 = 2.8; level = (0.5 - 1) / 2.8.
    for (const auto& level : inst.report.non_stepwise)
        CHECK(level.value == doctest::Approx(-0.5 / 2.8).epsilon(1e-12));
    check_spectrum_matches(inst, 1e-9);
    CHECK(is_volume_regular(inst.graph, inst.partition).holds);
}

TEST_CASE("scaled blocks are exactly volume regular with per-block levels") {
    BlockSpec spec{{5, 4}, coupling2(1.0, 0.06, 0.8), {}};
    auto scales = random_scales(9, 0.5, 2.0, 11);
    auto inst = generate_scaled_blocks(spec, scales);
    CHECK(inst.report.model == "scaled");
    CHECK(is_volume_regular(inst.graph, inst.partition, 1e-9).holds);
    CHECK(inst.report.volume_ratio > 1.5);  // scales spread the volumes
    check_spectrum_matches(inst, 1e-9);

    // Level oracle: mu_i = c_ii A_i / G_i computed independently.
    double a0 = 0.0, a1 = 0.0;
    for (int u = 0; u < 5; ++u) a0 += scales[u];
    for (int u = 5; u < 9; ++u) a1 += scales[u];
    const double g0 = 1.0 * a0 + 0.06 * a1;
    const double g1 = 0.06 * a0 + 0.8 * a1;
    REQUIRE(inst.report.non_stepwise.size() == 2);
    CHECK(inst.report.non_stepwise[0].value == doctest::Approx(1.0 * a0 / g0).epsilon(1e-12));
    CHECK(inst.report.non_stepwise[1].value == doctest::Approx(0.8 * a1 / g1).epsilon(1e-12));

    CHECK_THROWS_AS(generate_scaled_blocks(spec, {1.0}), std::invalid_argument);
    BlockSpec with_stay = spec;
    with_stay.stay = {0.1, 0.1};
    CHECK_THROWS_AS(generate_scaled_blocks(with_stay, scales), std::invalid_argument);
}

TEST_CASE("clustered blocks pin every remainder eigenvalue at rho") {
    BlockSpec spec{{6, 5}, coupling2(1.0, 0.04, 0.9), {}};
    auto scales = random_scales(11, 0.8, 1.6, 3);
    const double rho = 0.3;
    auto inst = generate_clustered_blocks(spec, scales, rho);
    CHECK(inst.report.model == "clustered");
    CHECK(is_volume_regular(inst.graph, inst.partition, 1e-9).holds);
    CHECK(inst.report.non_stepwise_bound == doctest::Approx(rho));
    for (const auto& level : inst.report.non_stepwise)
        CHECK(level.value == doctest::Approx(rho).epsilon(1e-12));
    check_spectrum_matches(inst, 1e-9);

    auto s = decompose(inst.graph);
    auto check = is_clustered_volume_regular(inst.graph, inst.partition, s);
    CHECK(check.clustered);

    CHECK_THROWS_AS(generate_clustered_blocks(spec, scales, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(generate_clustered_blocks(spec, scales, -0.1), std::invalid_argument);
}

TEST_CASE("regular clustered instances are degree-regular and volume regular") {
    auto inst = generate_regular_clustered(3, 8, 4, 2, 5);
    CHECK(inst.report.model == "regular-clustered");
    CHECK(inst.report.connected);
    CHECK(inst.report.volume_regular);
    CHECK(inst.graph.num_nodes() == 24);
    // d_in + (k-1) d_out = 8 incident unit edges per node.
    for (int u = 0; u < 24; ++u) CHECK(inst.graph.volume(u) == doctest::Approx(8.0));
    CHECK(is_volume_regular(inst.graph, inst.partition).holds);

    // Stepwise eigenvalues against the lumped chain.
    auto lumped = lumped_eigenvalues(lumped_matrix(inst.graph, inst.partition),
                                     block_volumes(inst.graph, inst.partition));
    REQUIRE(lumped.size() == inst.report.predicted_stepwise.size());
    for (std::size_t i = 0; i < lumped.size(); ++i)
        CHECK(lumped[i] == doctest::Approx(inst.report.predicted_stepwise[i]).epsilon(1e-10));

    // Odd intra-degree with odd community size has no antipodal pairing.
    CHECK_THROWS_AS(generate_regular_clustered(2, 7, 3, 1, 1), std::invalid_argument);
    auto odd_ok = generate_regular_clustered(2, 8, 3, 1, 1);
    for (int u = 0; u < 16; ++u) CHECK(odd_ok.graph.volume(u) == doctest::Approx(4.0));
}

TEST_CASE("bipartite generator is connected with a symmetric spectrum") {
    for (std::uint64_t seed : {1u, 2u, 9u}) {
        auto inst = generate_bipartite(7, 9, 0.25, seed % 2 == 1, seed);
        CHECK(inst.report.model == "bipartite");
        CHECK(inst.graph.connected());
        CHECK(inst.partition.num_blocks() == 2);

        auto side = two_coloring(inst.graph);
        REQUIRE(side.has_value());
        // The stored partition is the bipartition (up to flip).
        const int flip = (*side)[0] == inst.partition.block_of(0) ? 0 : 1;
        for (int u = 0; u < 16; ++u)
            CHECK(((*side)[u] ^ flip) == inst.partition.block_of(u));

        auto s = decompose(inst.graph);
        CHECK(spectrum_symmetry_defect(s) <= 1e-9);
        CHECK(s.eigenvalues.back() == doctest::Approx(-1.0).epsilon(1e-12));
    }

    // Weight range sanity on the weighted variant.
    auto weighted = generate_bipartite(6, 6, 0.4, true, 17);
    for (const auto& e : weighted.graph.edges()) {
        CHECK(e.w >= 0.5);
        CHECK(e.w < 1.5);
    }
    // Determinism: the same seed reproduces the edge list exactly.
    auto again = generate_bipartite(6, 6, 0.4, true, 17);
    REQUIRE(again.graph.num_edges() == weighted.graph.num_edges());
    for (int i = 0; i < again.graph.num_edges(); ++i) {
        CHECK(again.graph.edges()[i].u == weighted.graph.edges()[i].u);
        CHECK(again.graph.edges()[i].v == weighted.graph.edges()[i].v);
        CHECK(again.graph.edges()[i].w == weighted.graph.edges()[i].w);
    }
}

TEST_CASE("random scales are deterministic and in range") {
    auto a = random_scales(50, 0.5, 1.5, 123);
    auto b = random_scales(50, 0.5, 1.5, 123);
    REQUIRE(a.size() == 50);
    CHECK(a == b);
    for (double s : a) {
        CHECK(s >= 0.5);
        CHECK(s < 1.5);
    }
    auto c = random_scales(50, 0.5, 1.5, 124);
    CHECK(a != c);
    CHECK_THROWS_AS(random_scales(3, 0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("disconnected couplings are rejected") {
    // Zero cross-coupling and no intra edges beyond self-loops: disconnected.
    CHECK_THROWS_WITH_AS(generate_homogeneous_blocks({{3, 3}, coupling2(1.0, 0.0), {}}),
                         "generated graph is disconnected; raise couplings or degrees",
                         std::invalid_argument);
}
