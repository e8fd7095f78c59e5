#pragma once

// Layer-by-layer analyses over whole bundles: confusion matrices, the
// corresponding-layer sanity check, and per-layer motif profiles.

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "repsim/bundle.hpp"
#include "repsim/error.hpp"
#include "repsim/graph.hpp"
#include "repsim/motif.hpp"
#include "repsim/parallel.hpp"
#include "repsim/similarity.hpp"

namespace repsim {

inline constexpr std::size_t default_graph_degree = 5;

struct AnalysisOptions {
    Method method = Method::gbs_lsim;
    SimilarityParams params;
    std::size_t threads = 1;

    std::size_t degree() const { return params.k.value_or(default_graph_degree); }
};

struct SimilarityMatrix {
    std::vector<std::string> row_layers;  // bundle A
    std::vector<std::string> col_layers;  // bundle B
    Matrix values;
    Method method = Method::gbs_lsim;
    SimilarityParams params;
};

namespace detail {

/// Re-throws a library error with the offending layer named.
template <class F>
auto with_layer_context(const std::string& layer, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.kind(), "layer '" + layer + "': " + e.what());
    }
}

/// Per-layer precomputation for one method; exactly one member is engaged.
struct PreparedLayer {
    std::optional<CenteredGram> centered;
    std::optional<SparseGram> sparse;
    std::optional<RepresentationGraph> graph;
};

inline PreparedLayer prepare_layer(const Layer& layer, const AnalysisOptions& opt) {
    return with_layer_context(layer.name, [&] {
        PreparedLayer p;
        const auto& prm = opt.params;
        switch (opt.method) {
        case Method::hsic:
            p.centered = prepare_cka(layer.matrix, KernelKind::linear);
            break;
        case Method::cka:
            p.centered = prepare_cka(layer.matrix, prm.kernel, prm.bandwidth_multiplier);
            break;
        case Method::sparse_cka:
            if (!prm.m) fail(ErrorKind::parameter, "sparse_cka requires m");
            p.sparse = prepare_sparse_cka(layer.matrix, *prm.m, prm.kernel, prm.bandwidth_multiplier);
            break;
        case Method::gbs_lsim:
        case Method::gbs_degree_pearson:
            p.graph = build_graph(layer.matrix, opt.degree(), layer.name);
            break;
        }
        return p;
    });
}

inline double score_pair(const PreparedLayer& a, const PreparedLayer& b, Method method) {
    switch (method) {
    case Method::hsic: return hsic(a.centered->centered, b.centered->centered);
    case Method::cka: return cka(*a.centered, *b.centered);
    case Method::sparse_cka: return sparse_cka(*a.sparse, *b.sparse);
    case Method::gbs_lsim: return gbs_lsim(*a.graph, *b.graph).value;
    case Method::gbs_degree_pearson: return gbs_degree_pearson(*a.graph, *b.graph).value;
    }
    fail(ErrorKind::parameter, "unknown method");
}

inline std::vector<PreparedLayer> prepare_bundle(const RepresentationBundle& bundle, const AnalysisOptions& opt) {
    std::vector<PreparedLayer> out(bundle.layer_count());
    parallel_for(out.size(), opt.threads,
                 [&](std::size_t i) { out[i] = prepare_layer(bundle.layers()[i], opt); });
    return out;
}

inline void require_same_sample_set(const RepresentationBundle& a, const RepresentationBundle& b) {
    if (a.sample_count() != b.sample_count())
        fail(ErrorKind::validation, "bundles '" + a.model_name() + "' and '" + b.model_name() +
                                        "' have different sample counts (" + std::to_string(a.sample_count()) +
                                        " vs " + std::to_string(b.sample_count()) + ")");
    if (a.labels() != b.labels())
        fail(ErrorKind::validation,
             "bundles '" + a.model_name() + "' and '" + b.model_name() + "' have different labels");
}

inline std::vector<std::string> layer_names(const RepresentationBundle& b) {
    std::vector<std::string> names;
    for (const auto& l : b.layers()) names.push_back(l.name);
    return names;
}

} // namespace detail

/// Similarity of every layer of `a` against every layer of `b`.
/// Per-layer Gram matrices or graphs are computed once and reused across pairs.
inline SimilarityMatrix layer_confusion(const RepresentationBundle& a, const RepresentationBundle& b,
                                        const AnalysisOptions& opt) {
    detail::require_same_sample_set(a, b);
    const auto pa = detail::prepare_bundle(a, opt);
    const auto pb = &a == &b ? pa : detail::prepare_bundle(b, opt);

    SimilarityMatrix out{detail::layer_names(a), detail::layer_names(b),
                         Matrix(a.layer_count(), b.layer_count()), opt.method, opt.params};
    const std::size_t cols = b.layer_count();
    parallel_for(a.layer_count() * cols, opt.threads, [&](std::size_t idx) {
        const std::size_t i = idx / cols;
        const std::size_t j = idx % cols;
        out.values(i, j) = detail::with_layer_context(a.layers()[i].name + "' vs '" + b.layers()[j].name, [&] {
            return detail::score_pair(pa[i], pb[j], opt.method);
        });
    });
    return out;
}

struct SanityMatch {
    std::string layer;
    std::size_t best_index = 0;
    std::string best_match;
    double score = 0.0;
    bool tie = false;  // another column reached the same maximum
};

struct SanityReport {
    std::vector<SanityMatch> matches;
    double accuracy = 0.0;
};

/// Argmax of each row (lowest column wins ties); accuracy is the fraction of rows with argmax on the diagonal.
inline SanityReport sanity_from_matrix(const SimilarityMatrix& s) {
    if (s.values.rows() != s.values.cols())
        fail(ErrorKind::validation, "sanity check needs equal layer counts (" + std::to_string(s.values.rows()) +
                                        " vs " + std::to_string(s.values.cols()) + ")");
    SanityReport r;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < s.values.rows(); ++i) {
        SanityMatch m{s.row_layers[i], 0, {}, s.values(i, 0), false};
        for (std::size_t j = 1; j < s.values.cols(); ++j) {
            const double v = s.values(i, j);
            if (v > m.score) {
                m.score = v;
                m.best_index = j;
                m.tie = false;
            } else if (v == m.score) {
                m.tie = true;
            }
        }
        m.best_match = s.col_layers[m.best_index];
        hits += m.best_index == i;
        r.matches.push_back(std::move(m));
    }
    r.accuracy = r.matches.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(r.matches.size());
    return r;
}

inline SanityReport sanity_accuracy(const RepresentationBundle& a, const RepresentationBundle& b,
                                    const AnalysisOptions& opt) {
    if (a.layer_count() != b.layer_count())
        fail(ErrorKind::validation, "sanity check needs equal layer counts (" + std::to_string(a.layer_count()) +
                                        " vs " + std::to_string(b.layer_count()) + ")");
    return sanity_from_matrix(layer_confusion(a, b, opt));
}

struct MotifProfileRow {
    std::string layer;
    MotifCensus census;
    double type1_ratio = 0.0;
    bool triangle_free = false;
};

/// Builds each layer's degree-k graph and takes its triangle census.
inline std::vector<MotifProfileRow> motif_profile(const RepresentationBundle& a, std::size_t k,
                                                  std::size_t threads = 1) {
    std::vector<MotifProfileRow> rows(a.layer_count());
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        const Layer& layer = a.layers()[i];
        rows[i] = detail::with_layer_context(layer.name, [&] {
            const auto g = build_graph(layer.matrix, k, layer.name);
            const auto c = count_motifs_bfs(g, a.labels());
            return MotifProfileRow{layer.name, c, type1_ratio(c), c.total == 0};
        });
    });
    return rows;
}

inline std::string format_score(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

/// Confusion CSV: header `layer,<B layers...>`, then one row per A layer.
inline void write_confusion_csv(std::ostream& out, const SimilarityMatrix& s) {
    out << "layer";
    for (const auto& c : s.col_layers) out << ',' << c;
    out << '\n';
    for (std::size_t i = 0; i < s.row_layers.size(); ++i) {
        out << s.row_layers[i];
        for (std::size_t j = 0; j < s.col_layers.size(); ++j) out << ',' << format_score(s.values(i, j));
        out << '\n';
    }
}

inline nlohmann::json to_json(const SanityReport& r) {
    nlohmann::json j;
    j["accuracy"] = r.accuracy;
    j["matches"] = nlohmann::json::array();
    for (const auto& m : r.matches)
        j["matches"].push_back({{"layer", m.layer}, {"best_match", m.best_match}, {"score", m.score}, {"tie", m.tie}});
    return j;
}

inline void write_motif_csv(std::ostream& out, const std::vector<MotifProfileRow>& rows) {
    out << "layer,type1,type2,type3,total,type1_ratio\n";
    for (const auto& r : rows)
        out << r.layer << ',' << r.census.type1 << ',' << r.census.type2 << ',' << r.census.type3 << ','
            << r.census.total << ',' << format_score(r.type1_ratio) << '\n';
}

} // namespace repsim
