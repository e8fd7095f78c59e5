#pragma once

// Triangle motif census partitioned by how many sample labels agree.

#include <array>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "repsim/bundle.hpp"
#include "repsim/error.hpp"
#include "repsim/graph.hpp"
#include "repsim/parallel.hpp"

namespace repsim {

struct MotifCensus {
    std::uint64_t type1 = 0;  // all three labels equal
    std::uint64_t type2 = 0;  // exactly two equal
    std::uint64_t type3 = 0;  // all distinct
    std::uint64_t total = 0;

    MotifCensus& operator+=(const MotifCensus& o) noexcept {
        type1 += o.type1;
        type2 += o.type2;
        type3 += o.type3;
        total += o.total;
        return *this;
    }
    friend bool operator==(const MotifCensus&, const MotifCensus&) = default;
};

/// type1 / total, or 0 when the graph has no triangles.
inline double type1_ratio(const MotifCensus& c) noexcept {
    return c.total == 0 ? 0.0 : static_cast<double>(c.type1) / static_cast<double>(c.total);
}

namespace detail {

inline void classify(MotifCensus& c, const LabelVector& labels, std::size_t a, std::size_t b, std::size_t d) {
    const bool ab = labels[a] == labels[b];
    const bool ad = labels[a] == labels[d];
    const bool bd = labels[b] == labels[d];
    const int equal_pairs = ab + ad + bd;
    if (equal_pairs == 3) ++c.type1;
    else if (equal_pairs == 1) ++c.type2;
    else ++c.type3;
    ++c.total;
}

inline void require_labels(const RepresentationGraph& g, const LabelVector& labels) {
    if (labels.size() != g.node_count())
        fail(ErrorKind::validation, "labels has " + std::to_string(labels.size()) + " entries, graph has " +
                                        std::to_string(g.node_count()) + " nodes");
}

/// Breadth-first search for triangles rooted at `root`.
///
/// Partial motifs grow only through nodes with a larger index than the last
/// one added, so each triangle {a < b < c} is found exactly once, from a.
/// A three-node candidate is a motif only if its last node links back to the root.
inline MotifCensus census_from_root(const RepresentationGraph& g, const LabelVector& labels, std::size_t root) {
    using Partial = std::array<std::size_t, 3>;
    struct Entry {
        Partial nodes;
        std::size_t size;
    };
    const std::size_t n = g.node_count();
    MotifCensus c;
    std::deque<Entry> queue;
    queue.push_back({{root, 0, 0}, 1});
    while (!queue.empty()) {
        const Entry q = queue.front();
        queue.pop_front();
        if (q.size == 3) {
            if (g.has_edge(q.nodes[2], q.nodes[0])) classify(c, labels, q.nodes[0], q.nodes[1], q.nodes[2]);
            continue;
        }
        const std::size_t current = q.nodes[q.size - 1];
        for (std::size_t j = current + 1; j < n; ++j) {
            bool visited = false;
            for (std::size_t p = 0; p < q.size; ++p) visited |= q.nodes[p] == j;
            if (visited) continue;
            if (g.has_edge(current, j)) {
                Entry next = q;
                next.nodes[next.size++] = j;
                queue.push_back(next);
            }
        }
    }
    return c;
}

} // namespace detail

inline MotifCensus count_motifs_bfs(const RepresentationGraph& g, const LabelVector& labels,
                                    std::size_t threads = 1) {
    detail::require_labels(g, labels);
    std::vector<MotifCensus> per_root(g.node_count());
    parallel_for(g.node_count(), threads,
                 [&](std::size_t root) { per_root[root] = detail::census_from_root(g, labels, root); });
    MotifCensus total;
    for (const auto& c : per_root) total += c;
    return total;
}

inline constexpr std::size_t bruteforce_node_limit = 500;

/// Checks every triple i < j < l. Cubic; refuses graphs above bruteforce_node_limit nodes.
inline MotifCensus count_motifs_bruteforce(const RepresentationGraph& g, const LabelVector& labels) {
    detail::require_labels(g, labels);
    const std::size_t n = g.node_count();
    if (n > bruteforce_node_limit)
        fail(ErrorKind::parameter, "brute-force census limited to " + std::to_string(bruteforce_node_limit) +
                                       " nodes, graph has " + std::to_string(n));
    MotifCensus c;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!g.has_edge(i, j)) continue;
            for (std::size_t l = j + 1; l < n; ++l)
                if (g.has_edge(i, l) && g.has_edge(j, l)) detail::classify(c, labels, i, j, l);
        }
    return c;
}

} // namespace repsim
