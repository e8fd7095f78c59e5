#pragma once

// Invariance property suite on synthetic data, run by `repsim selftest`.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "repsim/graph.hpp"
#include "repsim/harness.hpp"
#include "repsim/motif.hpp"
#include "repsim/similarity.hpp"
#include "repsim/synthetic.hpp"

namespace repsim::selftest {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace detail {

inline std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

inline RepresentationGraph random_graph(std::size_t n, double p, synthetic::Rng& rng) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.uniform() < p) edges.emplace_back(i, j);
    return RepresentationGraph::from_edges(n, edges);
}

inline LabelVector random_labels(std::size_t n, std::size_t classes, synthetic::Rng& rng) {
    LabelVector labels(n);
    for (auto& l : labels) l = "c" + std::to_string(rng.below(classes));
    return labels;
}

} // namespace detail

inline CheckResult orthogonal_invariance(synthetic::Rng& rng, std::size_t trials = 20, std::size_t n = 50,
                                         std::size_t m = 30, std::size_t k = 5) {
    double worst_gbs = 0.0, worst_cka = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const Matrix x = synthetic::gaussian_matrix(n, m, rng);
        const Matrix xu = multiply(x, synthetic::random_orthogonal(m, rng));
        worst_gbs = std::max(worst_gbs, std::abs(1.0 - gbs_lsim(build_graph(x, k), build_graph(xu, k)).value));
        worst_cka = std::max(worst_cka, std::abs(1.0 - cka(x, xu).value));
    }
    const bool ok = worst_gbs < 1e-6 && worst_cka < 1e-6;
    return {"orthogonal_invariance", ok, detail::fmt("max |1-gbs_lsim| = %.3g, max |1-cka| = %.3g", worst_gbs, worst_cka)};
}

inline CheckResult isotropic_scaling_invariance(synthetic::Rng& rng, std::size_t n = 50, std::size_t m = 30,
                                                std::size_t k = 5, double alpha = 7.3) {
    const Matrix x = synthetic::gaussian_matrix(n, m, rng);
    const Matrix y = synthetic::gaussian_matrix(n, m, rng);
    const Matrix ax = scaled(x, alpha);
    const auto g = build_graph(x, k);
    const auto ga = build_graph(ax, k);
    bool same_edges = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) same_edges &= g.has_edge(i, j) == ga.has_edge(i, j);
    const double weight_diff = max_abs_diff(g.adjacency(), ga.adjacency());
    const double cka_diff = std::abs(cka(x, y).value - cka(ax, y).value);
    const bool ok = same_edges && weight_diff < 1e-12 && cka_diff < 1e-9;
    return {"isotropic_scaling_invariance", ok,
            detail::fmt("max edge weight change = %.3g, cka change = %.3g", weight_diff, cka_diff)};
}

inline CheckResult invertible_linear_sensitivity(synthetic::Rng& rng, std::size_t trials = 10, std::size_t n = 50,
                                                 std::size_t m = 30, std::size_t k = 5, double condition = 10.0) {
    std::size_t sensitive = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const Matrix x = synthetic::gaussian_matrix(n, m, rng);
        const Matrix xb = multiply(x, synthetic::random_conditioned(m, condition, rng));
        sensitive += gbs_lsim(build_graph(x, k), build_graph(xb, k)).value < 1.0 - 1e-3;
    }
    const bool ok = sensitive * 10 >= trials * 9;
    return {"invertible_linear_sensitivity", ok,
            detail::fmt("%.0f of %.0f trials changed the score by more than 1e-3", static_cast<double>(sensitive),
                        static_cast<double>(trials))};
}

inline CheckResult sparse_cka_consistency(synthetic::Rng& rng, std::size_t trials = 20, std::size_t n = 40,
                                          std::size_t m = 20) {
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const Matrix x = synthetic::gaussian_matrix(n, m, rng);
        const Matrix y = synthetic::gaussian_matrix(n, m + 5, rng);
        worst = std::max(worst, std::abs(sparse_cka(x, y, n).value - cka(x, y).value));
    }
    return {"sparse_cka_full_m_matches_cka", worst < 1e-9, detail::fmt("max difference = %.3g", worst)};
}

inline CheckResult motif_search_matches_bruteforce(synthetic::Rng& rng, std::size_t trials = 100,
                                                   std::size_t n = 25, double p = 0.3) {
    std::size_t agree = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto g = detail::random_graph(n, p, rng);
        const auto labels = detail::random_labels(n, 3, rng);
        agree += count_motifs_bfs(g, labels) == count_motifs_bruteforce(g, labels);
    }
    return {"motif_search_matches_bruteforce", agree == trials,
            detail::fmt("%.0f of %.0f graphs agree", static_cast<double>(agree), static_cast<double>(trials))};
}

inline CheckResult twin_sanity(synthetic::Rng& rng, std::size_t threads = 1) {
    const auto base = synthetic::random_bundle("synthetic", 6, 100, 64, 10, rng);
    const auto twin = synthetic::orthogonal_twin(base, rng);
    AnalysisOptions gbs{Method::gbs_lsim, {}, threads};
    gbs.params.k = 5;
    AnalysisOptions lin{Method::cka, {}, threads};
    const double acc_gbs = sanity_accuracy(base, twin, gbs).accuracy;
    const double acc_cka = sanity_accuracy(base, twin, lin).accuracy;
    return {"orthogonal_twin_sanity", acc_gbs == 1.0 && acc_cka == 1.0,
            detail::fmt("accuracy gbs_lsim = %.3g, cka = %.3g", acc_gbs, acc_cka)};
}

inline CheckResult clustered_motif_trend(synthetic::Rng& rng, std::size_t threads = 1) {
    const auto bundle = synthetic::clustered_bundle(200, 10, 32, rng);
    const auto profile = motif_profile(bundle, 5, threads);
    const bool ok = profile[0].type1_ratio < profile[1].type1_ratio && profile[1].type1_ratio < profile[2].type1_ratio;
    char buf[160];
    std::snprintf(buf, sizeof buf, "type1 ratios %.4f < %.4f < %.4f", profile[0].type1_ratio,
                  profile[1].type1_ratio, profile[2].type1_ratio);
    return {"clustered_motif_trend", ok, buf};
}

/// Every check, each drawing from its own seeded stream so results do not
/// depend on which other checks ran.
inline std::vector<CheckResult> run_all(std::uint64_t seed, std::size_t threads = 1) {
    auto stream = [seed](std::uint64_t id) { return synthetic::Rng(seed * 1000003ULL + id); };
    std::vector<CheckResult> out;
    auto r1 = stream(1);
    out.push_back(orthogonal_invariance(r1));
    auto r2 = stream(2);
    out.push_back(isotropic_scaling_invariance(r2));
    auto r3 = stream(3);
    out.push_back(invertible_linear_sensitivity(r3));
    auto r4 = stream(4);
    out.push_back(sparse_cka_consistency(r4));
    auto r5 = stream(5);
    out.push_back(motif_search_matches_bruteforce(r5));
    auto r6 = stream(6);
    out.push_back(twin_sanity(r6, threads));
    auto r7 = stream(7);
    out.push_back(clustered_motif_trend(r7, threads));
    return out;
}

} // namespace repsim::selftest
