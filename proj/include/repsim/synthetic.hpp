#pragma once

// Seeded synthetic data: random layers, orthogonal and ill-conditioned
// transforms, twin bundles, and class-clustered feature bundles.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "repsim/bundle.hpp"
#include "repsim/matrix.hpp"

namespace repsim::synthetic {

/// Portable generator: uses only the raw mt19937_64 stream, so sequences do
/// not depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline Matrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng, double stddev = 1.0) {
    Matrix m(rows, cols);
    for (double& v : m.values()) v = stddev * rng.normal();
    return m;
}

/// Orthonormalizes the columns of a Gaussian matrix (Gram-Schmidt, two passes).
inline Matrix random_orthogonal(std::size_t n, Rng& rng) {
    Matrix q = gaussian_matrix(n, n, rng);
    for (std::size_t j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t p = 0; p < j; ++p) {
                double proj = 0.0;
                for (std::size_t i = 0; i < n; ++i) proj += q(i, p) * q(i, j);
                for (std::size_t i = 0; i < n; ++i) q(i, j) -= proj * q(i, p);
            }
        double len = 0.0;
        for (std::size_t i = 0; i < n; ++i) len += q(i, j) * q(i, j);
        len = std::sqrt(len);
        for (std::size_t i = 0; i < n; ++i) q(i, j) /= len;
    }
    return q;
}

/// U diag(s) V^T with singular values log-spaced over [1, condition].
inline Matrix random_conditioned(std::size_t n, double condition, Rng& rng) {
    const Matrix u = random_orthogonal(n, rng);
    const Matrix v = random_orthogonal(n, rng);
    Matrix us = u;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = n == 1 ? 0.0 : static_cast<double>(j) / static_cast<double>(n - 1);
        const double s = std::pow(condition, t);
        for (std::size_t i = 0; i < n; ++i) us(i, j) *= s;
    }
    return multiply(us, transpose(v));
}

/// Balanced labels "c0".."c{classes-1}", sample i in class i % classes.
inline LabelVector balanced_labels(std::size_t n, std::size_t classes) {
    LabelVector labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = "c" + std::to_string(i % classes);
    return labels;
}

/// Independent Gaussian layers named layer0, layer1, ...
inline RepresentationBundle random_bundle(std::string model_name, std::size_t layers, std::size_t samples,
                                          std::size_t features, std::size_t classes, Rng& rng) {
    std::vector<Layer> out;
    for (std::size_t l = 0; l < layers; ++l)
        out.push_back({"layer" + std::to_string(l), gaussian_matrix(samples, features, rng)});
    return RepresentationBundle(std::move(model_name), std::move(out), balanced_labels(samples, classes));
}

/// Same bundle with each layer multiplied by its own random orthogonal matrix.
inline RepresentationBundle orthogonal_twin(const RepresentationBundle& b, Rng& rng) {
    std::vector<Layer> out;
    for (const auto& layer : b.layers())
        out.push_back({layer.name, multiply(layer.matrix, random_orthogonal(layer.matrix.cols(), rng))});
    return RepresentationBundle(b.model_name() + "_orthogonal_twin", std::move(out), b.labels());
}

/// Three layers with growing class separation: pure noise, class centroid plus
/// large noise, class centroid plus small noise.
inline RepresentationBundle clustered_bundle(std::size_t samples, std::size_t classes, std::size_t features,
                                             Rng& rng, double large_noise = 1.5, double small_noise = 0.3) {
    const Matrix centroids = gaussian_matrix(classes, features, rng);
    const LabelVector labels = balanced_labels(samples, classes);
    auto layer = [&](double centroid_weight, double noise) {
        Matrix x(samples, features);
        for (std::size_t i = 0; i < samples; ++i)
            for (std::size_t f = 0; f < features; ++f)
                x(i, f) = centroid_weight * centroids(i % classes, f) + noise * rng.normal();
        return x;
    };
    std::vector<Layer> out;
    out.push_back({"noise", layer(0.0, 1.0)});
    out.push_back({"coarse", layer(1.0, large_noise)});
    out.push_back({"fine", layer(1.0, small_noise)});
    return RepresentationBundle("clustered", std::move(out), labels);
}

} // namespace repsim::synthetic
