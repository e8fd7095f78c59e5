#pragma once

// Sparse cosine-weighted representation graphs over the N input samples.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "repsim/error.hpp"
#include "repsim/kernels.hpp"
#include "repsim/matrix.hpp"
#include "repsim/parallel.hpp"

namespace repsim {

class RepresentationGraph;
inline RepresentationGraph build_graph(const Matrix& x, std::size_t k, std::string layer_name = {},
                                       std::size_t threads = 1);

/// Weighted undirected graph. Edge presence is tracked separately from the
/// weight because a selected neighbor may have cosine similarity exactly 0.
class RepresentationGraph {
public:
    RepresentationGraph() = default;

    /// Edges are exactly the nonzero off-diagonal entries of `adjacency`.
    static RepresentationGraph from_adjacency(Matrix adjacency, std::string layer_name = {}) {
        if (!adjacency.square()) fail(ErrorKind::validation, "adjacency must be square");
        const std::size_t n = adjacency.rows();
        std::vector<std::uint8_t> edges(n * n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (adjacency(i, i) != 0.0) fail(ErrorKind::validation, "adjacency diagonal must be 0");
            for (std::size_t j = 0; j < n; ++j) {
                const double w = adjacency(i, j);
                if (!std::isfinite(w)) fail(ErrorKind::validation, "non-finite edge weight");
                if (w != adjacency(j, i)) fail(ErrorKind::validation, "adjacency must be symmetric");
                edges[i * n + j] = w != 0.0;
            }
        }
        return RepresentationGraph(std::move(adjacency), std::move(edges), 0, std::move(layer_name));
    }

    /// Unit-weight graph from an undirected edge list.
    static RepresentationGraph from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& list,
                                          std::string layer_name = {}) {
        Matrix a(n, n);
        for (auto [i, j] : list) {
            if (i >= n || j >= n || i == j) fail(ErrorKind::validation, "edge endpoint out of range");
            a(i, j) = a(j, i) = 1.0;
        }
        return from_adjacency(std::move(a), std::move(layer_name));
    }

    std::size_t node_count() const noexcept { return adjacency_.rows(); }
    std::size_t requested_degree() const noexcept { return k_; }
    const std::string& layer_name() const noexcept { return layer_name_; }
    const Matrix& adjacency() const noexcept { return adjacency_; }
    double weight(std::size_t i, std::size_t j) const noexcept { return adjacency_(i, j); }
    bool has_edge(std::size_t i, std::size_t j) const noexcept { return edges_[i * node_count() + j] != 0; }

    /// Ascending neighbor indices of node i.
    std::vector<std::size_t> neighbors(std::size_t i) const {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < node_count(); ++j)
            if (has_edge(i, j)) out.push_back(j);
        return out;
    }

    std::size_t edge_count() const noexcept {
        return static_cast<std::size_t>(std::count(edges_.begin(), edges_.end(), std::uint8_t{1})) / 2;
    }

    friend bool operator==(const RepresentationGraph&, const RepresentationGraph&) = default;

private:
    friend RepresentationGraph build_graph(const Matrix&, std::size_t, std::string, std::size_t);

    RepresentationGraph(Matrix adjacency, std::vector<std::uint8_t> edges, std::size_t k, std::string name)
        : adjacency_(std::move(adjacency)), edges_(std::move(edges)), k_(k), layer_name_(std::move(name)) {}

    Matrix adjacency_;
    std::vector<std::uint8_t> edges_;  // row-major N x N presence mask
    std::size_t k_ = 0;
    std::string layer_name_;
};

/// Indices of the `count` largest entries of `row`, ties to the lower index.
/// `skip` (if < row.size()) is excluded from the candidates.
inline std::vector<std::size_t> top_indices(std::span<const double> row, std::size_t count,
                                            std::size_t skip = static_cast<std::size_t>(-1)) {
    std::vector<std::size_t> idx;
    idx.reserve(row.size());
    for (std::size_t j = 0; j < row.size(); ++j)
        if (j != skip) idx.push_back(j);
    count = std::min(count, idx.size());
    auto better = [&](std::size_t a, std::size_t b) { return row[a] > row[b] || (row[a] == row[b] && a < b); };
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(count), idx.end(), better);
    idx.resize(count);
    return idx;
}

/// Cosine-weighted k-nearest-neighbor graph with union symmetrization:
/// edge {n, m} exists if m is among n's top-k or n is among m's top-k.
inline RepresentationGraph build_graph(const Matrix& x, std::size_t k, std::string layer_name,
                                       std::size_t threads) {
    const std::size_t n = x.rows();
    if (n < 2) fail(ErrorKind::parameter, "graph construction needs at least 2 samples");
    if (k < 1 || k > n - 1)
        fail(ErrorKind::parameter,
             "degree k=" + std::to_string(k) + " out of range [1, " + std::to_string(n - 1) + "]");
    const GramMatrix cos = gram_cosine(x);

    std::vector<std::vector<std::size_t>> picks(n);
    parallel_for(n, threads, [&](std::size_t i) { picks[i] = top_indices(cos.values.row(i), k, i); });

    Matrix adjacency(n, n);
    std::vector<std::uint8_t> edges(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j : picks[i]) {
            adjacency(i, j) = adjacency(j, i) = cos.values(i, j);
            edges[i * n + j] = edges[j * n + i] = 1;
        }
    return RepresentationGraph(std::move(adjacency), std::move(edges), k, std::move(layer_name));
}

/// Keeps the m largest entries of each row of K (diagonal included), zeroing the rest.
/// The result is generally not symmetric.
inline Matrix sparsify_topm(const Matrix& k, std::size_t m) {
    if (!k.square()) fail(ErrorKind::validation, "sparsify_topm needs a square matrix");
    const std::size_t n = k.rows();
    if (m < 1 || m > n)
        fail(ErrorKind::parameter, "m=" + std::to_string(m) + " out of range [1, " + std::to_string(n) + "]");
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j : top_indices(k.row(i), m)) out(i, j) = k(i, j);
    return out;
}

using DegreeSequence = std::vector<std::size_t>;

inline DegreeSequence degree_sequence(const RepresentationGraph& g) {
    DegreeSequence d(g.node_count(), 0);
    for (std::size_t i = 0; i < g.node_count(); ++i)
        for (std::size_t j = 0; j < g.node_count(); ++j) d[i] += g.has_edge(i, j);
    return d;
}

/// Edge list CSV: header `src,dst,weight`, one row per edge with src < dst, ascending.
inline void write_edge_csv(std::ostream& out, const RepresentationGraph& g) {
    out << "src,dst,weight\n";
    char buf[64];
    for (std::size_t i = 0; i < g.node_count(); ++i)
        for (std::size_t j = i + 1; j < g.node_count(); ++j)
            if (g.has_edge(i, j)) {
                std::snprintf(buf, sizeof buf, "%.17g", g.weight(i, j));
                out << i << ',' << j << ',' << buf << '\n';
            }
}

} // namespace repsim
