#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "esdlab/complex_matrix.hpp"
#include "esdlab/eigensolver.hpp"
#include "esdlab/lu.hpp"
#include "test_support.hpp"

using esdlab::Complex;
using esdlab::ComplexMatrix;
using testsupport::eigen_multiset_gap;
using testsupport::random_gaussian_matrix;
using testsupport::random_unitary;

TEST(Eigenvalues, NilpotentHasAllZeros) {
    for (int n : {1, 5, 40}) {
        const esdlab::Spectrum s = esdlab::eigenvalues(esdlab::build_Tn(n));
        ASSERT_TRUE(s.converged);
        ASSERT_EQ(static_cast<int>(s.eigenvalues.size()), n);
        for (const Complex& l : s.eigenvalues) EXPECT_LE(std::abs(l), 1e-12);
    }
}

TEST(Eigenvalues, TriangularReadsDiagonal) {
    ComplexMatrix a(3);
    a(0, 0) = Complex(1.0);
    a(1, 1) = Complex(2.0, 1.0);
    a(2, 2) = Complex(-3.0);
    a(0, 1) = Complex(5.0, -2.0);
    a(0, 2) = Complex(1.0, 1.0);
    a(1, 2) = Complex(0.5);
    const esdlab::Spectrum s = esdlab::eigenvalues(a);
    ASSERT_TRUE(s.converged);
    EXPECT_LE(eigen_multiset_gap(s.eigenvalues, {Complex(1.0), Complex(2.0, 1.0), Complex(-3.0)}),
              1e-12);
}

TEST(Eigenvalues, SwapPermutation) {
    ComplexMatrix a(2);
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    const esdlab::Spectrum s = esdlab::eigenvalues(a);
    ASSERT_TRUE(s.converged);
    EXPECT_LE(eigen_multiset_gap(s.eigenvalues, {Complex(1.0), Complex(-1.0)}), 1e-12);
}

TEST(Eigenvalues, CyclicPermutationRootsOfUnity) {
    // Classic QR stress case; needs the exceptional shift to deflate.
    const int n = 8;
    ComplexMatrix a(n);
    for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = 1.0;
    a(n - 1, 0) = 1.0;
    const esdlab::Spectrum s = esdlab::eigenvalues(a);
    ASSERT_TRUE(s.converged);
    std::vector<Complex> expect;
    for (int k = 0; k < n; ++k) {
        expect.emplace_back(std::cos(2.0 * M_PI * k / n), std::sin(2.0 * M_PI * k / n));
    }
    EXPECT_LE(eigen_multiset_gap(s.eigenvalues, expect), 1e-9);
}

TEST(Eigenvalues, TraceMatchesSum) {
    for (uint64_t seed = 1; seed <= 8; ++seed) {
        const int n = 5 + static_cast<int>(3 * seed);
        const ComplexMatrix a = random_gaussian_matrix(n, seed);
        const esdlab::Spectrum s = esdlab::eigenvalues(a);
        ASSERT_TRUE(s.converged);
        Complex sum = 0.0;
        for (const Complex& l : s.eigenvalues) sum += l;
        const double tol = 1e-6 * std::max(1.0, esdlab::frobenius_norm(a));
        EXPECT_LE(std::abs(sum - esdlab::trace(a)), tol) << "n=" << n;
    }
}

TEST(Eigenvalues, SimilarityInvariance) {
    for (uint64_t seed = 1; seed <= 4; ++seed) {
        const int n = 10 + static_cast<int>(10 * seed);  // up to 50
        const ComplexMatrix a = random_gaussian_matrix(n, seed);
        const ComplexMatrix q = random_unitary(n, seed + 77);
        const ComplexMatrix b = esdlab::multiply(esdlab::multiply(esdlab::conj_transpose(q), a), q);
        const esdlab::Spectrum sa = esdlab::eigenvalues(a);
        const esdlab::Spectrum sb = esdlab::eigenvalues(b);
        ASSERT_TRUE(sa.converged && sb.converged);
        EXPECT_LE(eigen_multiset_gap(sa.eigenvalues, sb.eigenvalues), 1e-6) << "n=" << n;
    }
}

TEST(Eigenvalues, ShiftEquivariance) {
    for (uint64_t seed = 2; seed <= 5; ++seed) {
        const int n = 12;
        const Complex z(0.7, -1.3);
        const ComplexMatrix a = random_gaussian_matrix(n, seed);
        const esdlab::Spectrum s0 = esdlab::eigenvalues(a);
        const esdlab::Spectrum s1 = esdlab::eigenvalues(esdlab::shift(a, z));
        ASSERT_TRUE(s0.converged && s1.converged);
        std::vector<Complex> shifted = s0.eigenvalues;
        for (Complex& l : shifted) l += z;
        EXPECT_LE(eigen_multiset_gap(shifted, s1.eigenvalues), 1e-6);
    }
}

TEST(Eigenvalues, ProductIdentityAgainstDeterminant) {
    for (uint64_t seed = 1; seed <= 6; ++seed) {
        const int n = 10 + static_cast<int>(seed * 6);  // up to 46
        const ComplexMatrix a = random_gaussian_matrix(n, seed + 31);
        const auto lu = esdlab::log_abs_det_lu(a);
        ASSERT_TRUE(lu.has_value());
        const esdlab::Spectrum s = esdlab::eigenvalues(a);
        ASSERT_TRUE(s.converged);
        double log_prod_eig = 0.0;
        for (const Complex& l : s.eigenvalues) log_prod_eig += std::log(std::abs(l));
        double log_prod_sv = 0.0;
        for (double sv : esdlab::singular_values(a).values) log_prod_sv += std::log(sv);
        const double scale = std::max(1.0, std::abs(*lu));
        EXPECT_LE(std::abs(log_prod_eig - *lu), 1e-8 * scale);
        EXPECT_LE(std::abs(log_prod_sv - *lu), 1e-8 * scale);
    }
}

TEST(Hessenberg, PreservesFrobeniusNorm) {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        const int n = 8 + static_cast<int>(seed * 7);
        const ComplexMatrix a = random_gaussian_matrix(n, seed + 13);
        const ComplexMatrix h = esdlab::hessenberg(a);
        const double na = esdlab::frobenius_norm(a);
        EXPECT_LE(std::abs(esdlab::frobenius_norm(h) - na), 1e-10 * na);
        for (int i = 2; i < n; ++i) {
            for (int j = 0; j < i - 1; ++j) EXPECT_EQ(h(i, j), Complex(0.0));
        }
    }
}

TEST(SingularValuesTest, DiagonalExample) {
    ComplexMatrix d(2);
    d(0, 0) = 3.0;
    d(1, 1) = 4.0;
    const auto sv = esdlab::singular_values(d).values;
    ASSERT_EQ(sv.size(), 2u);
    EXPECT_NEAR(sv[0], 4.0, 1e-12);
    EXPECT_NEAR(sv[1], 3.0, 1e-12);
}

TEST(SingularValuesTest, NilpotentProjectorSpectrum) {
    // T_n^H T_n is the 0/1 diagonal projector: n-1 ones then a zero.
    for (int n : {2, 7, 25}) {
        const auto sv = esdlab::singular_values(esdlab::build_Tn(n)).values;
        ASSERT_EQ(static_cast<int>(sv.size()), n);
        for (int i = 0; i < n - 1; ++i) EXPECT_NEAR(sv[i], 1.0, 1e-10);
        EXPECT_NEAR(sv[n - 1], 0.0, 1e-10);
    }
}

TEST(SingularValuesTest, UnitaryHasUnitSpectrum) {
    const ComplexMatrix q = random_unitary(15, 5);
    for (double s : esdlab::singular_values(q).values) EXPECT_NEAR(s, 1.0, 1e-9);
}

TEST(SingularValuesTest, SortedAndNonNegative) {
    const auto sv = esdlab::singular_values(random_gaussian_matrix(20, 9)).values;
    for (std::size_t i = 0; i + 1 < sv.size(); ++i) EXPECT_GE(sv[i], sv[i + 1]);
    EXPECT_GE(sv.back(), 0.0);
}

TEST(SmallestSingularValue, Examples) {
    ComplexMatrix eye(3);
    for (int i = 0; i < 3; ++i) eye(i, i) = 1.0;
    EXPECT_NEAR(esdlab::smallest_singular_value(eye), 1.0, 1e-12);
    EXPECT_NEAR(esdlab::smallest_singular_value(esdlab::build_Tn(6)), 0.0, 1e-10);

    ComplexMatrix d(2);
    d(0, 0) = 1.0;
    d(1, 1) = 1e-6;
    EXPECT_NEAR(esdlab::smallest_singular_value(d), 1e-6, 1e-12);
}
