#include <gtest/gtest.h>

#include <random>

#include "mcflab/oracle.hpp"
#include "mcflab/sampling.hpp"
#include "mcflab/svcore.hpp"
#include "oracles.hpp"

using namespace mcflab;

TEST(Spectrum, FromValuesSortsAndPads)
{
    const auto s = SingularSpectrum::from_values(4, 3, {0.5, 2.0});
    EXPECT_EQ(s.lambda(), (std::vector<double>{2.0, 0.5, 0.0, 0.0}));
    EXPECT_THROW(SingularSpectrum::from_values(3, 2, {1, 1, 1}), DomainError);
    EXPECT_THROW(SingularSpectrum::from_values(2, 2, {-1}), DomainError);
    EXPECT_THROW(SingularSpectrum::from_values(2, 2, {1, 1, 1}), DimensionError);
}

TEST(Spectrum, SingularValuesMatchJacobiSvd)
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> N(0, 1);
    for (int n = 1; n <= 6; ++n)
        for (int m = 1; m <= 6; ++m) {
            Eigen::MatrixXd df(n, m);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < m; ++j) df(i, j) = N(rng);
            const auto s = singular_values(df);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(df);
            for (int i = 0; i < std::min(n, m); ++i) EXPECT_NEAR(s[i], svd.singularValues()[i], 1e-12);
            for (int i = std::min(n, m); i < n; ++i) EXPECT_EQ(s[i], 0.0);
        }
}

TEST(Spectrum, TwoDilationAndRescaling)
{
    const auto hopf = SingularSpectrum::from_values(3, 2, {2, 2});
    EXPECT_DOUBLE_EQ(two_dilation(hopf), 4.0);
    EXPECT_FALSE(is_area_decreasing(hopf));
    const auto r = rescale_spectrum(hopf, 0.25);
    EXPECT_DOUBLE_EQ(two_dilation(r), 0.25);
    EXPECT_TRUE(is_area_decreasing(r));
    EXPECT_FALSE(is_area_decreasing(SingularSpectrum::from_values(2, 2, {1, 1})));
}

TEST(Spectrum, RestrictionEntries)
{
    const auto r = make_restriction<double>(3, 2, {2.0, 0.5});
    ASSERT_EQ(r.width(), 3);
    EXPECT_DOUBLE_EQ(r.s[0], -3.0 / 5.0);
    EXPECT_DOUBLE_EQ(r.c[0], 4.0 / 5.0);
    EXPECT_DOUBLE_EQ(r.s[2], 1.0);
    EXPECT_DOUBLE_EQ(r.c[2], 0.0);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.s[i] * r.s[i] + r.c[i] * r.c[i], 1.0, 1e-15);
    // (S_ii + S_jj) = 2 (1 - l_i^2 l_j^2) / ((1 + l_i^2)(1 + l_j^2))
    EXPECT_NEAR(r.pair_sum(0, 1), 2.0 * (1 - 4 * 0.25) / (5 * 1.25), 1e-15);
}

TEST(Spectrum, STwoMatrixOfDiagonalIsDiagonalWithPairSums)
{
    SquareArray<double> S(4);
    const double d[4] = {0.3, -0.1, 0.7, 1.0};
    for (int i = 0; i < 4; ++i) S(i, i) = d[i];
    const auto M = s_two_matrix(S);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = k + 1; l < 4; ++l) {
                    const double expect = (i == k && j == l) ? d[i] + d[j] : 0.0;
                    EXPECT_EQ(M(pair_index(i, j, 4), pair_index(k, l, 4)), expect);
                }
}

TEST(Spectrum, STwoMatrixRejectsAsymmetric)
{
    SquareArray<double> S(3);
    S(0, 1) = 1.0;
    EXPECT_THROW(s_two_matrix(S), DomainError);
}

TEST(Phi, ZeroSpectrumGivesZero)
{
    EXPECT_EQ(phi(SingularSpectrum::from_values(5, 5, {})), 0.0);
    EXPECT_NEAR(log_det_s2(SingularSpectrum::from_values(4, 4, {})), 6 * std::log(2.0), 1e-15);
}

TEST(Phi, RejectsNonAreaDecreasing)
{
    EXPECT_THROW(phi(SingularSpectrum::from_values(2, 2, {1, 1})), NotAreaDecreasingError);
    EXPECT_THROW(phi(SingularSpectrum::from_values(3, 3, {3, 0.5, 0.1})), NotAreaDecreasingError);
}

TEST(Phi, MatchesProductDefinition)
{
    SampleRng rng(11);
    for (int t = 0; t < 2000; ++t) {
        const int n = 2 + t % 6;
        const auto v = sample_area_decreasing(rng, n, n);
        const auto spec = SingularSpectrum::from_values(n, n, v);
        EXPECT_NEAR(phi(spec), oracle::phi_product(spec.lambda()), 1e-9 * (1 + std::abs(phi(spec))));
    }
}

TEST(Phi, AgreesWithRotatedCompoundEigenvalues)
{
    // log det S^[2] from the closed form against eigenvalues of the compound of a non-diagonal S.
    std::mt19937_64 rot(3);
    SampleRng rng(17);
    for (int t = 0; t < 300; ++t) {
        const int n = 2 + t % 5, m = 2 + (t / 5) % 4;
        const auto v = sample_area_decreasing(rng, n, m);
        const auto spec = SingularSpectrum::from_values(n, m, v);
        const Eigen::MatrixXd S = oracle::rotated_s(v, n, m, rot);
        const double ref = oracle::log_det_eigen(oracle::second_compound(S));
        EXPECT_NEAR(log_det_s2(spec), ref, 1e-8 * (1 + std::abs(ref))) << "n=" << n << " m=" << m;
    }
}

TEST(Phi, AgreesWithLuOfAssembledOperator)
{
    SampleRng rng(23);
    for (int t = 0; t < 500; ++t) {
        const int n = 2 + t % 7;
        const auto v = sample_area_decreasing(rng, n, n);
        const auto spec = SingularSpectrum::from_values(n, n, v);
        const auto r = s_restriction(spec);
        SquareArray<double> S(n);
        for (int i = 0; i < n; ++i) S(i, i) = r.s[i];
        EXPECT_NEAR(log_det_s2(spec), lu_log_det(s_two_matrix(S)), 1e-10);
    }
}

TEST(Phi, SingularMatrixGivesNan)
{
    SquareArray<double> Z(2);
    EXPECT_TRUE(std::isnan(lu_log_det(Z)));
}
