#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "repsim/error.hpp"
#include "repsim/matrix.hpp"

namespace repsim {

enum class KernelKind { linear, rbf, cosine };

constexpr std::string_view to_string(KernelKind k) noexcept {
    switch (k) {
    case KernelKind::linear: return "linear";
    case KernelKind::rbf: return "rbf";
    case KernelKind::cosine: return "cosine";
    }
    return "?";
}

inline KernelKind parse_kernel(std::string_view name) {
    if (name == "linear") return KernelKind::linear;
    if (name == "rbf") return KernelKind::rbf;
    if (name == "cosine") return KernelKind::cosine;
    fail(ErrorKind::parameter, "unknown kernel '" + std::string(name) + "'");
}

inline constexpr double default_bandwidth_multiplier = 0.5;

struct GramMatrix {
    Matrix values;  // N x N
    KernelKind kind = KernelKind::linear;
    bool centered = false;

    std::size_t size() const noexcept { return values.rows(); }
};

inline GramMatrix gram_linear(const Matrix& x) {
    const std::size_t n = x.rows();
    Matrix k(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) k(i, j) = k(j, i) = dot(x.row(i), x.row(j));
    return {std::move(k), KernelKind::linear, false};
}

/// Euclidean norm of every row; a zero row is a degenerate input.
inline std::vector<double> row_norms(const Matrix& x) {
    std::vector<double> norms(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        norms[i] = norm(x.row(i));
        if (norms[i] == 0.0)
            fail(ErrorKind::degenerate, "row " + std::to_string(i) + " has zero norm");
    }
    return norms;
}

/// Pairwise cosine similarity of rows. Diagonal is exactly 1, entries clamped to [-1, 1].
inline GramMatrix gram_cosine(const Matrix& x) {
    const std::size_t n = x.rows();
    const auto norms = row_norms(x);
    Matrix k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        k(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double c = dot(x.row(i), x.row(j)) / (norms[i] * norms[j]);
            k(i, j) = k(j, i) = std::clamp(c, -1.0, 1.0);
        }
    }
    return {std::move(k), KernelKind::cosine, false};
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

/// Median of the N(N-1)/2 pairwise Euclidean distances (mean of the middle two when even).
inline double median_pairwise_distance(const Matrix& x) {
    std::vector<double> d;
    d.reserve(x.rows() * (x.rows() - 1) / 2);
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = i + 1; j < x.rows(); ++j) d.push_back(std::sqrt(squared_distance(x.row(i), x.row(j))));
    if (d.empty()) fail(ErrorKind::parameter, "median distance needs at least 2 rows");
    const std::size_t mid = d.size() / 2;
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid), d.end());
    const double upper = d[mid];
    if (d.size() % 2 == 1) return upper;
    const double lower = *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

/// Gaussian kernel with sigma = multiplier * median pairwise distance.
inline GramMatrix gram_rbf(const Matrix& x, double bandwidth_multiplier = default_bandwidth_multiplier) {
    if (!(bandwidth_multiplier > 0.0) || !std::isfinite(bandwidth_multiplier))
        fail(ErrorKind::parameter, "bandwidth multiplier must be positive");
    if (x.rows() < 2) fail(ErrorKind::parameter, "rbf kernel needs at least 2 rows");
    const double sigma = bandwidth_multiplier * median_pairwise_distance(x);
    if (sigma == 0.0)
        fail(ErrorKind::degenerate, "median pairwise distance is 0; rbf bandwidth undefined");
    const double denom = 2.0 * sigma * sigma;
    const std::size_t n = x.rows();
    Matrix k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        k(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j)
            k(i, j) = k(j, i) = std::exp(-squared_distance(x.row(i), x.row(j)) / denom);
    }
    return {std::move(k), KernelKind::rbf, false};
}

inline GramMatrix gram(const Matrix& x, KernelKind kind,
                       double bandwidth_multiplier = default_bandwidth_multiplier) {
    switch (kind) {
    case KernelKind::linear: return gram_linear(x);
    case KernelKind::cosine: return gram_cosine(x);
    case KernelKind::rbf: return gram_rbf(x, bandwidth_multiplier);
    }
    fail(ErrorKind::parameter, "unknown kernel");
}

/// J K J with J = I - (1/N) 11^T, evaluated as K - row means - column means + grand mean.
inline GramMatrix center(const GramMatrix& k) {
    const Matrix& a = k.values;
    if (!a.square()) fail(ErrorKind::validation, "centering needs a square matrix");
    const std::size_t n = a.rows();
    std::vector<double> row_mean(n, 0.0), col_mean(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            row_mean[i] += a(i, j);
            col_mean[j] += a(i, j);
        }
    for (std::size_t i = 0; i < n; ++i) {
        grand += row_mean[i];
        row_mean[i] /= static_cast<double>(n);
        col_mean[i] /= static_cast<double>(n);
    }
    grand /= static_cast<double>(n) * static_cast<double>(n);

    Matrix c(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c(i, j) = a(i, j) - row_mean[i] - col_mean[j] + grand;
    return {std::move(c), k.kind, true};
}

} // namespace repsim
