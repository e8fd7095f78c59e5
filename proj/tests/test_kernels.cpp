#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "repsim/kernels.hpp"
#include "repsim/synthetic.hpp"

using namespace repsim;

TEST(GramLinear, IdentityInput) {
    EXPECT_EQ(gram_linear(Matrix::identity(2)).values, Matrix::identity(2));
}

TEST(GramLinear, HandInnerProducts) {
    const auto k = gram_linear(Matrix::from_rows({{1, 1}, {2, 2}}));
    EXPECT_EQ(k.values, Matrix::from_rows({{2, 4}, {4, 8}}));
    EXPECT_EQ(k.kind, KernelKind::linear);
    EXPECT_FALSE(k.centered);
}

TEST(GramLinear, ExactlySymmetricAndMatchesProduct) {
    synthetic::Rng rng(1);
    const Matrix x = synthetic::gaussian_matrix(17, 9, rng);
    const auto k = gram_linear(x);
    EXPECT_EQ(k.values, transpose(k.values));
    EXPECT_LT(max_abs_diff(k.values, oracle::product(x, oracle::transposed(x))), 1e-12);
}

TEST(GramLinear, InvariantUnderOrthogonalMap) {
    synthetic::Rng rng(2);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix x = synthetic::gaussian_matrix(30, 20, rng);
        const Matrix u = synthetic::random_orthogonal(20, rng);
        EXPECT_LT(max_abs_diff(gram_linear(x).values, gram_linear(multiply(x, u)).values), 1e-8);
    }
}

TEST(GramCosine, OrthogonalRows) {
    const auto k = gram_cosine(Matrix::from_rows({{1, 0}, {0, 1}}));
    EXPECT_EQ(k.values(0, 1), 0.0);
    EXPECT_EQ(k.values(0, 0), 1.0);
}

TEST(GramCosine, ParallelRows) {
    EXPECT_NEAR(gram_cosine(Matrix::from_rows({{1, 1}, {2, 2}})).values(0, 1), 1.0, 1e-15);
}

TEST(GramCosine, FortyFiveDegrees) {
    EXPECT_NEAR(gram_cosine(Matrix::from_rows({{1, 0}, {1, 1}})).values(1, 0), 1.0 / std::sqrt(2.0), 1e-9);
}

TEST(GramCosine, ZeroRowNamesIndex) {
    try {
        gram_cosine(Matrix::from_rows({{1, 2}, {3, 4}, {0, 0}}));
        FAIL() << "expected degenerate input";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::degenerate);
        EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
    }
}

TEST(GramCosine, ScaleInvariantAndUnitDiagonal) {
    synthetic::Rng rng(3);
    const Matrix x = synthetic::gaussian_matrix(25, 12, rng);
    const auto k = gram_cosine(x);
    for (double alpha : {1e-3, 0.5, 7.3, 1e4}) {
        EXPECT_LT(max_abs_diff(k.values, gram_cosine(scaled(x, alpha)).values), 1e-12);
    }
    for (std::size_t i = 0; i < 25; ++i) {
        EXPECT_EQ(k.values(i, i), 1.0);
        for (std::size_t j = 0; j < 25; ++j)
            EXPECT_NEAR(k.values(i, j), oracle::cosine(x.row(i), x.row(j)), 1e-14);
    }
}

TEST(GramRbf, HandExampleMedianBandwidth) {
    // distances 1, 2, 3 -> median 2; sigma = 2 -> K01 = exp(-1/8)
    const auto k = gram_rbf(Matrix::from_rows({{0}, {1}, {3}}), 1.0);
    EXPECT_NEAR(k.values(0, 1), 0.8824969025845953, 1e-12);
    EXPECT_NEAR(k.values(0, 2), std::exp(-9.0 / 8.0), 1e-12);
    EXPECT_EQ(k.values(2, 2), 1.0);
    EXPECT_EQ(k.kind, KernelKind::rbf);
}

TEST(GramRbf, EvenPairCountAveragesMiddleDistances) {
    // 4 points on a line: distances 1,2,3,1,2,1 -> sorted 1,1,1,2,2,3 -> median 1.5
    EXPECT_DOUBLE_EQ(median_pairwise_distance(Matrix::from_rows({{0}, {1}, {2}, {3}})), 1.5);
}

TEST(GramRbf, DuplicateRowsGiveUnitEntry) {
    const auto k = gram_rbf(Matrix::from_rows({{1, 2}, {5, -1}, {1, 2}}));
    EXPECT_EQ(k.values(0, 2), 1.0);
}

TEST(GramRbf, DegenerateAndParameterErrors) {
    try {
        gram_rbf(Matrix::from_rows({{1, 2}, {1, 2}, {1, 2}}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::degenerate);
    }
    EXPECT_THROW(gram_rbf(Matrix::from_rows({{0}, {1}}), 0.0), Error);
    EXPECT_THROW(gram_rbf(Matrix::from_rows({{0}, {1}}), -1.0), Error);
}

TEST(Center, KillsConstants) {
    const auto c = center({Matrix(4, 4, 3.5), KernelKind::linear, false});
    EXPECT_LT(max_abs_diff(c.values, Matrix(4, 4)), 1e-15);
    EXPECT_TRUE(c.centered);
}

TEST(Center, TwoByTwoIdentity) {
    // J I J = J J = J for the idempotent J = I - (1/2) ones
    const auto c = center({Matrix::identity(2), KernelKind::linear, false});
    const Matrix expected = Matrix::from_rows({{0.5, -0.5}, {-0.5, 0.5}});
    EXPECT_LT(max_abs_diff(c.values, expected), 1e-15);
    EXPECT_LT(max_abs_diff(oracle::jkj(Matrix::identity(2)), expected), 1e-15);
}

TEST(Center, MatchesExplicitJkjRowSumsZeroAndIdempotent) {
    synthetic::Rng rng(4);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix x = synthetic::gaussian_matrix(20 + trial, 6, rng);
        const auto k = gram_rbf(x);
        const auto c = center(k);
        EXPECT_LT(max_abs_diff(c.values, oracle::jkj(k.values)), 1e-10);
        for (std::size_t i = 0; i < c.size(); ++i) {
            double s = 0.0;
            for (double v : c.values.row(i)) s += v;
            EXPECT_NEAR(s, 0.0, 1e-9);
        }
        EXPECT_LT(max_abs_diff(center(c).values, c.values), 1e-9);
    }
}
