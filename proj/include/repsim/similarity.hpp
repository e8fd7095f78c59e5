#pragma once

// Scalar similarity indices: HSIC/CKA on kernel Gram matrices, their
// top-m sparsified variants, and graph-based similarity between
// representation graphs.

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "repsim/error.hpp"
#include "repsim/graph.hpp"
#include "repsim/kernels.hpp"
#include "repsim/matrix.hpp"

namespace repsim {

enum class Method { hsic, cka, sparse_cka, gbs_lsim, gbs_degree_pearson };

constexpr std::string_view to_string(Method m) noexcept {
    switch (m) {
    case Method::hsic: return "hsic";
    case Method::cka: return "cka";
    case Method::sparse_cka: return "sparse_cka";
    case Method::gbs_lsim: return "gbs_lsim";
    case Method::gbs_degree_pearson: return "gbs_degree_pearson";
    }
    return "?";
}

/// Accepts both the CLI spelling (`gbs-lsim`, `gbs-degree`) and the enum names.
inline Method parse_method(std::string_view name) {
    if (name == "hsic") return Method::hsic;
    if (name == "cka") return Method::cka;
    if (name == "sparse-cka" || name == "sparse_cka") return Method::sparse_cka;
    if (name == "gbs-lsim" || name == "gbs_lsim") return Method::gbs_lsim;
    if (name == "gbs-degree" || name == "gbs_degree_pearson") return Method::gbs_degree_pearson;
    fail(ErrorKind::parameter, "unknown method '" + std::string(name) + "'");
}

struct SimilarityParams {
    KernelKind kernel = KernelKind::linear;
    std::optional<std::size_t> k;  // graph degree for gbs_*
    std::optional<std::size_t> m;  // reserved entries per row for sparse_*
    double bandwidth_multiplier = default_bandwidth_multiplier;
};

struct SimilarityScore {
    double value = 0.0;
    Method method = Method::cka;
    SimilarityParams params;
};

namespace detail {

inline void require_same_samples(const Matrix& x, const Matrix& y) {
    if (x.rows() != y.rows())
        fail(ErrorKind::validation, "sample counts differ: " + std::to_string(x.rows()) + " vs " +
                                        std::to_string(y.rows()));
    if (x.rows() < 2) fail(ErrorKind::validation, "at least 2 samples are required");
}

inline double frobenius_inner(const Matrix& a, const Matrix& b) {
    double s = 0.0;
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t i = 0; i < av.size(); ++i) s += av[i] * bv[i];
    return s;
}

/// Normalized score; self-terms at or below `floor` count as zero.
inline double normalize(double cross, double self_x, double self_y, double floor_x, double floor_y,
                        const char* what) {
    if (!(self_x > floor_x) || !(self_y > floor_y))
        fail(ErrorKind::degenerate, std::string(what) + ": self-similarity term is zero (constant representation?)");
    return cross / std::sqrt(self_x * self_y);
}

inline double magnitude_floor(const Matrix& gram, std::size_t denom_base) {
    const double scale = detail::frobenius_inner(gram, gram);
    const double d = static_cast<double>(denom_base) * static_cast<double>(denom_base);
    return 1e-24 * scale / d;
}

} // namespace detail

/// HSIC of two centered Gram matrices: tr(Kc Lc) / (N-1)^2.
inline double hsic(const GramMatrix& kc, const GramMatrix& lc) {
    if (!kc.centered || !lc.centered) fail(ErrorKind::validation, "hsic expects centered Gram matrices");
    if (kc.size() != lc.size()) fail(ErrorKind::validation, "Gram matrix sizes differ");
    const double n1 = static_cast<double>(kc.size()) - 1.0;
    // tr(A B) = <A, B>_F for symmetric B.
    return detail::frobenius_inner(kc.values, lc.values) / (n1 * n1);
}

inline SimilarityScore hsic_linear(const Matrix& x, const Matrix& y) {
    detail::require_same_samples(x, y);
    const double v = hsic(center(gram_linear(x)), center(gram_linear(y)));
    return {v, Method::hsic, {KernelKind::linear, {}, {}, default_bandwidth_multiplier}};
}

/// Per-representation state reused across CKA evaluations.
struct CenteredGram {
    GramMatrix centered;
    double self_hsic = 0.0;
    double floor = 0.0;
};

inline CenteredGram prepare_cka(const Matrix& x, KernelKind kernel,
                                double bandwidth_multiplier = default_bandwidth_multiplier) {
    const GramMatrix k = gram(x, kernel, bandwidth_multiplier);
    CenteredGram out{center(k), 0.0, detail::magnitude_floor(k.values, x.rows() - 1)};
    out.self_hsic = hsic(out.centered, out.centered);
    return out;
}

inline double cka(const CenteredGram& a, const CenteredGram& b) {
    return detail::normalize(hsic(a.centered, b.centered), a.self_hsic, b.self_hsic, a.floor, b.floor, "cka");
}

inline SimilarityScore cka(const Matrix& x, const Matrix& y, KernelKind kernel = KernelKind::linear,
                           double bandwidth_multiplier = default_bandwidth_multiplier) {
    detail::require_same_samples(x, y);
    const double v = cka(prepare_cka(x, kernel, bandwidth_multiplier), prepare_cka(y, kernel, bandwidth_multiplier));
    return {v, Method::cka, {kernel, {}, {}, bandwidth_multiplier}};
}

/// tr(Sx Jm Sy Jm) / (m-1)^2 with Jm = I_N - (1/m) 11^T, for already sparsified Sx, Sy.
///
/// Jm is N x N but scaled by 1/m rather than 1/N. With m = N it reduces to
/// ordinary centering, so the value matches plain HSIC on the unsparsified
/// matrices.
inline double sparse_hsic_presparsified(const Matrix& sx, const Matrix& sy, std::size_t m) {
    if (!sx.square() || sx.rows() != sy.rows() || sy.cols() != sx.cols())
        fail(ErrorKind::validation, "sparse_hsic needs two N x N matrices of the same size");
    const std::size_t n = sx.rows();
    if (m < 2 || m > n)
        fail(ErrorKind::parameter, "m=" + std::to_string(m) + " out of range [2, " + std::to_string(n) + "]");
    const double inv_m = 1.0 / static_cast<double>(m);
    std::vector<double> rx(n, 0.0), ry(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            rx[i] += sx(i, j);
            ry[i] += sy(i, j);
        }
    // (S Jm)_ij = S_ij - rowsum_i(S)/m
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) t += (sx(i, j) - rx[i] * inv_m) * (sy(j, i) - ry[j] * inv_m);
    const double m1 = static_cast<double>(m) - 1.0;
    return t / (m1 * m1);
}

inline SimilarityScore sparse_hsic(const Matrix& x, const Matrix& y, std::size_t m,
                                   KernelKind kernel = KernelKind::linear,
                                   double bandwidth_multiplier = default_bandwidth_multiplier) {
    detail::require_same_samples(x, y);
    if (m == 1) fail(ErrorKind::parameter, "m=1 makes the (m-1)^2 normalizer zero");
    const Matrix sx = sparsify_topm(gram(x, kernel, bandwidth_multiplier).values, m);
    const Matrix sy = sparsify_topm(gram(y, kernel, bandwidth_multiplier).values, m);
    return {sparse_hsic_presparsified(sx, sy, m), Method::hsic, {kernel, {}, m, bandwidth_multiplier}};
}

struct SparseGram {
    Matrix sparse;
    std::size_t m = 0;
    double self_term = 0.0;
    double floor = 0.0;
};

inline SparseGram prepare_sparse_cka(const Matrix& x, std::size_t m, KernelKind kernel,
                                     double bandwidth_multiplier = default_bandwidth_multiplier) {
    if (m == 1) fail(ErrorKind::parameter, "m=1 makes the (m-1)^2 normalizer zero");
    const GramMatrix k = gram(x, kernel, bandwidth_multiplier);
    SparseGram out{sparsify_topm(k.values, m), m, 0.0, 0.0};
    out.floor = detail::magnitude_floor(out.sparse, m - 1);
    out.self_term = sparse_hsic_presparsified(out.sparse, out.sparse, m);
    return out;
}

inline double sparse_cka(const SparseGram& a, const SparseGram& b) {
    if (a.m != b.m) fail(ErrorKind::parameter, "sparse_cka operands were sparsified with different m");
    return detail::normalize(sparse_hsic_presparsified(a.sparse, b.sparse, a.m), a.self_term, b.self_term, a.floor, b.floor,
                             "sparse_cka");
}

inline SimilarityScore sparse_cka(const Matrix& x, const Matrix& y, std::size_t m,
                                  KernelKind kernel = KernelKind::linear,
                                  double bandwidth_multiplier = default_bandwidth_multiplier) {
    detail::require_same_samples(x, y);
    const double v = sparse_cka(prepare_sparse_cka(x, m, kernel, bandwidth_multiplier),
                                prepare_sparse_cka(y, m, kernel, bandwidth_multiplier));
    return {v, Method::sparse_cka, {kernel, {}, m, bandwidth_multiplier}};
}

/// Mean cosine similarity between corresponding adjacency rows.
inline SimilarityScore gbs_lsim(const RepresentationGraph& gi, const RepresentationGraph& gj) {
    const std::size_t n = gi.node_count();
    if (gj.node_count() != n)
        fail(ErrorKind::validation, "graphs have different node counts: " + std::to_string(n) + " vs " +
                                        std::to_string(gj.node_count()));
    if (n == 0) fail(ErrorKind::validation, "graphs are empty");
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const auto a = gi.adjacency().row(r);
        const auto b = gj.adjacency().row(r);
        const double na = norm(a);
        const double nb = norm(b);
        if (na == 0.0 || nb == 0.0)
            fail(ErrorKind::degenerate, "adjacency row " + std::to_string(r) + " is all zero in graph '" +
                                            (na == 0.0 ? gi.layer_name() : gj.layer_name()) + "'");
        total += dot(a, b) / (na * nb);
    }
    const std::optional<std::size_t> k =
        gi.requested_degree() ? std::optional<std::size_t>(gi.requested_degree()) : std::nullopt;
    return {total / static_cast<double>(n), Method::gbs_lsim, {KernelKind::cosine, k, {}, default_bandwidth_multiplier}};
}

/// |Pearson correlation| of two degree sequences (population moments).
inline double degree_pearson(const DegreeSequence& a, const DegreeSequence& b) {
    if (a.size() != b.size())
        fail(ErrorKind::validation, "degree sequences have different lengths");
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += static_cast<double>(a[i]);
        mb += static_cast<double>(b[i]);
    }
    ma /= n;
    mb /= n;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = static_cast<double>(a[i]) - ma;
        const double db = static_cast<double>(b[i]) - mb;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va == 0.0 || vb == 0.0)
        fail(ErrorKind::degenerate, "degree sequence is constant; Pearson correlation undefined");
    return std::min(1.0, std::abs(cov / std::sqrt(va * vb)));
}

inline SimilarityScore gbs_degree_pearson(const RepresentationGraph& gi, const RepresentationGraph& gj) {
    if (gi.node_count() != gj.node_count())
        fail(ErrorKind::validation, "graphs have different node counts");
    const double v = degree_pearson(degree_sequence(gi), degree_sequence(gj));
    const std::optional<std::size_t> k =
        gi.requested_degree() ? std::optional<std::size_t>(gi.requested_degree()) : std::nullopt;
    return {v, Method::gbs_degree_pearson, {KernelKind::cosine, k, {}, default_bandwidth_multiplier}};
}

} // namespace repsim
