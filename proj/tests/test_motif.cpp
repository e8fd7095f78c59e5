#include <numeric>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "repsim/motif.hpp"
#include "repsim/synthetic.hpp"

using namespace repsim;

namespace {

RepresentationGraph complete(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return RepresentationGraph::from_edges(n, e);
}

RepresentationGraph erdos_renyi(std::size_t n, double p, synthetic::Rng& rng) {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.uniform() < p) e.emplace_back(i, j);
    return RepresentationGraph::from_edges(n, e);
}

LabelVector random_labels(std::size_t n, std::size_t classes, synthetic::Rng& rng) {
    LabelVector l(n);
    for (auto& s : l) s = std::to_string(rng.below(classes));
    return l;
}

} // namespace

TEST(MotifBfs, SingleSameLabelTriangle) {
    EXPECT_EQ(count_motifs_bfs(complete(3), {"a", "a", "a"}), (MotifCensus{1, 0, 0, 1}));
}

TEST(MotifBfs, K4HandEnumeration) {
    // {0,1,2}: a a b, {0,1,3}: a a c, {0,2,3}: a b c, {1,2,3}: a b c
    EXPECT_EQ(count_motifs_bfs(complete(4), {"a", "a", "b", "c"}), (MotifCensus{0, 2, 2, 4}));
}

TEST(MotifBfs, PathHasNoTriangles) {
    const auto c = count_motifs_bfs(RepresentationGraph::from_edges(3, {{0, 1}, {1, 2}}), {"a", "a", "a"});
    EXPECT_EQ(c, MotifCensus{});
    EXPECT_EQ(type1_ratio(c), 0.0);
}

TEST(MotifBfs, LabelLengthMismatch) {
    EXPECT_THROW(count_motifs_bfs(complete(3), {"a", "b"}), Error);
    EXPECT_THROW(count_motifs_bruteforce(complete(3), {"a", "b", "c", "d"}), Error);
}

TEST(MotifBruteforce, SmallCases) {
    EXPECT_EQ(count_motifs_bruteforce(RepresentationGraph::from_edges(5, {}), LabelVector(5, "x")), MotifCensus{});
    EXPECT_EQ(count_motifs_bruteforce(complete(3), {"a", "b", "b"}), (MotifCensus{0, 1, 0, 1}));
    EXPECT_EQ(count_motifs_bruteforce(complete(3), {"a", "b", "c"}), (MotifCensus{0, 0, 1, 1}));
}

TEST(MotifBruteforce, SizeGuard) {
    const auto big = RepresentationGraph::from_edges(bruteforce_node_limit + 1, {});
    EXPECT_THROW(count_motifs_bruteforce(big, LabelVector(bruteforce_node_limit + 1, "a")), Error);
    EXPECT_NO_THROW(count_motifs_bfs(big, LabelVector(bruteforce_node_limit + 1, "a")));
}

TEST(MotifBfs, AgreesWithBruteForceAndTraceOnRandomGraphs) {
    synthetic::Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = erdos_renyi(25, 0.3, rng);
        const auto labels = random_labels(25, 3, rng);
        const auto bfs = count_motifs_bfs(g, labels);
        EXPECT_EQ(bfs, count_motifs_bruteforce(g, labels));
        EXPECT_EQ(bfs.total, oracle::triangles_by_trace(g));
        EXPECT_EQ(bfs.total, bfs.type1 + bfs.type2 + bfs.type3);
    }
}

TEST(MotifBfs, DenseAndSparseExtremes) {
    synthetic::Rng rng(7);
    for (double p : {0.0, 0.05, 0.9, 1.0}) {
        const auto g = erdos_renyi(30, p, rng);
        const auto labels = random_labels(30, 4, rng);
        EXPECT_EQ(count_motifs_bfs(g, labels), count_motifs_bruteforce(g, labels));
    }
    EXPECT_EQ(count_motifs_bfs(complete(10), LabelVector(10, "z")).total, 120u);
}

TEST(MotifBfs, InvariantUnderConsistentNodePermutation) {
    synthetic::Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 20;
        const auto g = erdos_renyi(n, 0.35, rng);
        const auto labels = random_labels(n, 3, rng);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        LabelVector permuted(n);
        for (std::size_t i = 0; i < n; ++i) {
            permuted[perm[i]] = labels[i];
            for (std::size_t j = i + 1; j < n; ++j)
                if (g.has_edge(i, j)) edges.emplace_back(perm[i], perm[j]);
        }
        EXPECT_EQ(count_motifs_bfs(g, labels),
                  count_motifs_bfs(RepresentationGraph::from_edges(n, edges), permuted));
    }
}

TEST(MotifBfs, DeterministicAcrossThreads) {
    synthetic::Rng rng(10);
    const auto g = build_graph(synthetic::gaussian_matrix(200, 8, rng), 5);
    const auto labels = random_labels(200, 10, rng);
    EXPECT_EQ(count_motifs_bfs(g, labels, 1), count_motifs_bfs(g, labels, 4));
}

TEST(Type1Ratio, Arithmetic) {
    EXPECT_EQ(type1_ratio({1, 0, 0, 1}), 1.0);
    EXPECT_EQ(type1_ratio({0, 2, 2, 4}), 0.0);
    EXPECT_EQ(type1_ratio({3, 1, 0, 4}), 0.75);
    EXPECT_EQ(type1_ratio({}), 0.0);
}

TEST(Type1Ratio, RatiosSumToOne) {
    synthetic::Rng rng(12);
    const auto g = erdos_renyi(25, 0.4, rng);
    const auto c = count_motifs_bfs(g, random_labels(25, 3, rng));
    ASSERT_GT(c.total, 0u);
    const double t = static_cast<double>(c.total);
    EXPECT_NEAR(c.type1 / t + c.type2 / t + c.type3 / t, 1.0, 1e-12);
}
