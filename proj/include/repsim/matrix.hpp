#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "repsim/error.hpp"

namespace repsim {

/// Dense row-major matrix of doubles. Row n is the feature vector of sample n.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
        : rows_(rows), cols_(cols), values_(std::move(values)) {
        if (values_.size() != rows_ * cols_)
            fail(ErrorKind::validation, "matrix value count does not match its shape");
    }

    static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.front().size();
        Matrix m(r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c)
                fail(ErrorKind::validation, "ragged row list");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept {
        assert(i < rows_ && j < cols_);
        return values_[i * cols_ + j];
    }
    double operator()(std::size_t i, std::size_t j) const noexcept {
        assert(i < rows_ && j < cols_);
        return values_[i * cols_ + j];
    }

    std::span<double> row(std::size_t i) noexcept { return {values_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * cols_, cols_};
    }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> a) noexcept { return std::sqrt(dot(a, a)); }

inline Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        fail(ErrorKind::validation, "inner dimensions differ in matrix product");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto out = c.row(i);
        for (std::size_t p = 0; p < a.cols(); ++p) {
            const double aip = a(i, p);
            if (aip == 0.0) continue;
            auto brow = b.row(p);
            for (std::size_t j = 0; j < b.cols(); ++j) out[j] += aip * brow[j];
        }
    }
    return c;
}

inline Matrix scaled(Matrix a, double alpha) {
    for (double& v : a.values()) v *= alpha;
    return a;
}

inline double trace(const Matrix& a) {
    if (!a.square()) fail(ErrorKind::validation, "trace of a non-square matrix");
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, i);
    return s;
}

/// Largest absolute elementwise difference; shapes must agree.
inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        fail(ErrorKind::validation, "shape mismatch in max_abs_diff");
    double m = 0.0;
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t i = 0; i < av.size(); ++i) m = std::max(m, std::abs(av[i] - bv[i]));
    return m;
}

} // namespace repsim
