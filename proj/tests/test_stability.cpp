#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "esdlab/complex_matrix.hpp"
#include "esdlab/ortho_bases.hpp"
#include "esdlab/stability.hpp"
#include "test_support.hpp"

using esdlab::Complex;
using esdlab::ComplexMatrix;
using esdlab::CVec;
using esdlab::RowSet;

namespace {

CVec unit_vec(int n, int i, Complex scale = Complex(1.0)) {
    CVec v(n, Complex(0.0));
    v[i] = scale;
    return v;
}

// Superdiagonal rows z e_i + e_{i+1}, i = 1..m, as vectors in C^{m+1}.
std::vector<CVec> superdiag_rows(Complex z, int m) {
    std::vector<CVec> rows;
    for (int i = 0; i < m; ++i) {
        CVec v(m + 1, Complex(0.0));
        v[i] = z;
        v[i + 1] = 1.0;
        rows.push_back(std::move(v));
    }
    return rows;
}

// Exact minimum distance for the superdiagonal row set {z e_i + e_{i+1} :
// 1 <= i <= m}: end rows have squared distance S(m+1)/S(m) and middle row
// l has (1-q)(-1 + 1/(1-q^l) + 1/(1-q^{m-l+1})), q = |z|^2. Derived by
// evaluating the explicit orthogonal bases; independent of the library's
// Gram-Schmidt path.
double exact_superdiag_min(Complex z, int m) {
    const double q = std::norm(z);
    const auto geom = [&](int k) { return esdlab::geometric_sum_abs2(z, k); };
    double best = std::sqrt(geom(m + 1) / geom(m));  // l = 1 and l = m
    for (int l = 2; l <= m - 1; ++l) {
        const double val =
            (1.0 - q) * (-1.0 + 1.0 / (1.0 - std::pow(q, l)) + 1.0 / (1.0 - std::pow(q, m - l + 1)));
        best = std::min(best, std::sqrt(val));
    }
    return best;
}

// Exact minimum distance over all rows of a single shifted block
// T_{b,b+1} + zI: row l has squared distance q^l / S(l) for l = 1..b+1
// (the last row being z e_{b+1}), which is strictly decreasing in l, so
// the minimum is at l = b+1.
double exact_single_block_min(Complex z, int b) {
    const double q = std::norm(z);
    return std::sqrt(std::pow(q, b + 1) / esdlab::geometric_sum_abs2(z, b + 1));
}

}  // namespace

// ---------------------------------------------------------------------
// dist_to_span

TEST(DistToSpan, OrthogonalExample) {
    EXPECT_NEAR(esdlab::dist_to_span(unit_vec(3, 0), {unit_vec(3, 1)}), 1.0, 1e-14);
}

TEST(DistToSpan, ProjectionExample) {
    CVec diag(2);
    diag[0] = diag[1] = Complex(1.0 / std::sqrt(2.0));
    EXPECT_NEAR(esdlab::dist_to_span(unit_vec(2, 0), {diag}), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(DistToSpan, VectorInsideSpanIsZero) {
    esdlab::CounterGen g = esdlab::stream_gen(42);
    const auto s1 = testsupport::random_gaussian_vector(6, g);
    const auto s2 = testsupport::random_gaussian_vector(6, g);
    CVec combo(6, Complex(0.0));
    esdlab::vaxpy(Complex(0.3, -1.2), s1, combo);
    esdlab::vaxpy(Complex(-2.0, 0.7), s2, combo);
    EXPECT_LE(esdlab::dist_to_span(combo, {s1, s2}), 1e-10);
}

TEST(DistToSpan, EmptySpanGivesNorm) {
    CVec v = unit_vec(4, 2, Complex(3.0, 4.0));
    EXPECT_NEAR(esdlab::dist_to_span(v, {}), 5.0, 1e-14);
}

TEST(DistToSpan, InvariantUnderReorderingAndRotation) {
    esdlab::CounterGen g = esdlab::stream_gen(7);
    const int n = 8;
    std::vector<CVec> s;
    for (int i = 0; i < 4; ++i) s.push_back(testsupport::random_gaussian_vector(n, g));
    const CVec v = testsupport::random_gaussian_vector(n, g);
    const double d0 = esdlab::dist_to_span(v, s);

    std::vector<CVec> reordered = {s[2], s[0], s[3], s[1]};
    EXPECT_NEAR(esdlab::dist_to_span(v, reordered), d0, 1e-10);

    const ComplexMatrix q = testsupport::random_unitary(n, 99);
    const auto rotate = [&](const CVec& x) {
        CVec y(n, Complex(0.0));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) y[i] += q(i, j) * x[j];
        }
        return y;
    };
    std::vector<CVec> rs;
    for (const CVec& x : s) rs.push_back(rotate(x));
    EXPECT_NEAR(esdlab::dist_to_span(rotate(v), rs), d0, 1e-10);
}

// ---------------------------------------------------------------------
// epsilon_stability

TEST(EpsilonStability, OrthonormalSet) {
    std::vector<CVec> s = {unit_vec(4, 0), unit_vec(4, 1), unit_vec(4, 3)};
    const esdlab::StabilityReport rep = esdlab::epsilon_stability(RowSet{s, {}});
    for (double d : rep.per_row_distance) EXPECT_NEAR(d, 1.0, 1e-12);
    EXPECT_NEAR(rep.epsilon, 1.0, 1e-12);
}

TEST(EpsilonStability, RepeatedVectorCollapses) {
    esdlab::CounterGen g = esdlab::stream_gen(3);
    const CVec v = testsupport::random_gaussian_vector(5, g);
    const CVec w = testsupport::random_gaussian_vector(5, g);
    const esdlab::StabilityReport rep = esdlab::epsilon_stability(RowSet{{v, w, v}, {}});
    EXPECT_LE(rep.epsilon, 1e-10);
}

TEST(EpsilonStability, LongSuperdiagChainReachesClosedForm) {
    // For a long chain the middle-row distance approaches the
    // min{1, |1-|z|^2|^{1/2}} level from above.
    const Complex z(0.5, 0.0);
    const esdlab::StabilityReport rep = esdlab::epsilon_stability(RowSet{superdiag_rows(z, 60), {}});
    EXPECT_NEAR(rep.epsilon, esdlab::closed_form_superdiag(z), 1e-9);
}

TEST(EpsilonStability, MatchesExactSuperdiagMinimum) {
    for (int m : {3, 4, 8, 12}) {
        for (const Complex z : {Complex(0.5, 0.0), Complex(0.3, 0.4), Complex(2.0, 0.0),
                                Complex(0.0, 1.5)}) {
            const esdlab::StabilityReport rep =
                esdlab::epsilon_stability(RowSet{superdiag_rows(z, m), {}});
            EXPECT_NEAR(rep.epsilon, exact_superdiag_min(z, m), 1e-9)
                << "m=" << m << " z=" << esdlab::format_complex_token(z);
            EXPECT_GE(rep.epsilon, esdlab::closed_form_superdiag(z) - 1e-9);
        }
    }
}

TEST(EpsilonStability, SpotCheckAgainstHandValues) {
    // m=3, z=1/2: middle row distance sqrt(0.75 * (-1 + 2/(1 - 1/16))).
    const esdlab::StabilityReport rep =
        esdlab::epsilon_stability(RowSet{superdiag_rows(Complex(0.5, 0.0), 3), {}});
    EXPECT_NEAR(rep.epsilon, 0.92195444572928871, 1e-12);
}

TEST(EpsilonStability, SubsetIsAtLeastAsStable) {
    esdlab::CounterGen g = esdlab::stream_gen(17);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 6 + static_cast<int>(g.next_u64() % 6);
        std::vector<CVec> full;
        for (int i = 0; i < n - 1; ++i) full.push_back(testsupport::random_gaussian_vector(n, g));
        std::vector<CVec> subset(full.begin(), full.begin() + (full.size() + 1) / 2);
        const double eps_full = esdlab::epsilon_stability(RowSet{full, {}}).epsilon;
        const double eps_sub = esdlab::epsilon_stability(RowSet{subset, {}}).epsilon;
        EXPECT_GE(eps_sub, eps_full - 1e-12);
    }
}

// ---------------------------------------------------------------------
// closed forms

TEST(ClosedFormSuperdiag, Values) {
    EXPECT_DOUBLE_EQ(esdlab::closed_form_superdiag(Complex(0.0)), 1.0);
    EXPECT_NEAR(esdlab::closed_form_superdiag(Complex(0.5, 0.0)), std::sqrt(3.0) / 2.0, 1e-15);
    EXPECT_DOUBLE_EQ(esdlab::closed_form_superdiag(Complex(2.0, 0.0)), 1.0);
    EXPECT_THROW(esdlab::closed_form_superdiag(Complex(0.0, 1.0)), std::invalid_argument);
}

TEST(ClosedFormAllRows, Values) {
    EXPECT_NEAR(esdlab::closed_form_all_rows(Complex(0.5, 0.0), 2), 0.125 * std::sqrt(0.75), 1e-15);
    EXPECT_NEAR(esdlab::closed_form_all_rows(Complex(2.0, 0.0), 3), std::sqrt(3.0), 1e-15);
    EXPECT_DOUBLE_EQ(esdlab::closed_form_all_rows(Complex(0.0), 5), 0.0);
    EXPECT_THROW(esdlab::closed_form_all_rows(Complex(-1.0, 0.0), 2), std::invalid_argument);
    EXPECT_THROW(esdlab::closed_form_all_rows(Complex(0.5, 0.0), 0), std::invalid_argument);
}

TEST(ClosedFormAllRows, NumericAgreementOnBlocks) {
    // The numeric epsilon of all rows of T_{b,b+1}+zI equals the exact
    // last-row distance and dominates the closed-form lower bound.
    const std::vector<double> moduli = {0.1, 0.3, 0.5, 0.9, 1.5, 3.0};
    const std::vector<double> angles = {0.0, M_PI / 4.0, M_PI / 2.0};
    for (int b : {1, 2, 3, 8, 12}) {
        for (double r : moduli) {
            for (double th : angles) {
                const Complex z(r * std::cos(th), r * std::sin(th));
                const ComplexMatrix block = esdlab::shift(esdlab::build_Tbn(esdlab::BlockSpec(b + 1, b)), z);
                const double eps = esdlab::epsilon_stability(esdlab::all_rows(block)).epsilon;
                EXPECT_NEAR(eps, exact_single_block_min(z, b), 1e-9)
                    << "b=" << b << " z=" << esdlab::format_complex_token(z);
                EXPECT_GE(eps, esdlab::closed_form_all_rows(z, b) - 1e-9);
            }
        }
    }
}

TEST(GeometricSum, ClosedFormAndDirectAgree) {
    for (double r : {0.2, 0.9995, 1.0, 1.0005, 2.5}) {
        const Complex z(r, 0.0);
        for (int k : {1, 2, 7, 20}) {
            double direct = 0.0;
            for (int i = 0; i < k; ++i) direct += std::pow(r * r, i);
            EXPECT_NEAR(esdlab::geometric_sum_abs2(z, k), direct, 1e-9 * direct);
        }
    }
    EXPECT_DOUBLE_EQ(esdlab::geometric_sum_abs2(Complex(0.5, 0.0), 0), 0.0);
}

// ---------------------------------------------------------------------
// orthogonal bases

TEST(OrthobasisTopdown, BaseCase) {
    const auto basis = esdlab::orthobasis_topdown(Complex(0.3, -0.7), 1, 4);
    ASSERT_EQ(basis.size(), 1u);
    EXPECT_EQ(basis[0][0], Complex(0.3, -0.7));
    EXPECT_EQ(basis[0][1], Complex(1.0));
    EXPECT_EQ(basis[0][2], Complex(0.0));
}

TEST(OrthobasisTopdown, OrthogonalityAndNorms) {
    const Complex z(0.7, 0.1);
    const int count = 8, n = 12;
    const auto basis = esdlab::orthobasis_topdown(z, count, n);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
            EXPECT_LE(std::abs(esdlab::vdot(basis[i], basis[j])), 1e-10);
        }
    }
    for (int k = 1; k <= count; ++k) {
        const double expected =
            esdlab::geometric_sum_abs2(z, k + 1) / esdlab::geometric_sum_abs2(z, k);
        EXPECT_NEAR(esdlab::vnorm(basis[k - 1]) * esdlab::vnorm(basis[k - 1]), expected, 1e-10);
    }
}

TEST(OrthobasisTopdown, SpansTheSuperdiagRows) {
    const Complex z(1.4, 0.2);
    const int count = 6, n = 8;
    const auto basis = esdlab::orthobasis_topdown(z, count, n);
    std::vector<CVec> rows;
    for (int i = 0; i < count; ++i) {
        CVec v(n, Complex(0.0));
        v[i] = z;
        v[i + 1] = 1.0;
        rows.push_back(std::move(v));
    }
    for (const CVec& w : basis) EXPECT_LE(esdlab::dist_to_span(w, rows), 1e-9);
    for (const CVec& v : rows) EXPECT_LE(esdlab::dist_to_span(v, basis), 1e-9);
}

TEST(OrthobasisBotup, BaseCase) {
    const Complex z(0.4, 0.4);
    const auto basis = esdlab::orthobasis_botup(z, 4, 5, 7);  // single vector w_5
    ASSERT_EQ(basis.size(), 1u);
    EXPECT_EQ(basis[0][4], z);
    EXPECT_EQ(basis[0][5], Complex(1.0));
}

TEST(OrthobasisBotup, NormsAndSpan) {
    const Complex z(0.6, -0.3);
    const int ell = 2, m = 9, n = 11;
    const auto basis = esdlab::orthobasis_botup(z, ell, m, n);
    ASSERT_EQ(static_cast<int>(basis.size()), m - ell);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
            EXPECT_LE(std::abs(esdlab::vdot(basis[i], basis[j])), 1e-10);
        }
    }
    for (int k = ell + 1; k <= m; ++k) {
        const double expected =
            esdlab::geometric_sum_abs2(z, m - k + 2) / esdlab::geometric_sum_abs2(z, m - k + 1);
        const double got = esdlab::vnorm(basis[k - ell - 1]);
        EXPECT_NEAR(got * got, expected, 1e-10) << "k=" << k;
    }
    std::vector<CVec> rows;
    for (int i = ell + 1; i <= m; ++i) {
        CVec v(n, Complex(0.0));
        v[i - 1] = z;
        v[i] = 1.0;
        rows.push_back(std::move(v));
    }
    for (const CVec& w : basis) EXPECT_LE(esdlab::dist_to_span(w, rows), 1e-9);
    for (const CVec& v : rows) EXPECT_LE(esdlab::dist_to_span(v, basis), 1e-9);
}

TEST(OrthobasisBotstan, ExactlyOrthogonalRescaledBasis) {
    const Complex z(0.8, 0.3);
    const int ell = 1, b = 5;
    const auto basis = esdlab::orthobasis_botstan(z, ell, b);
    ASSERT_EQ(static_cast<int>(basis.size()), b + 1 - ell);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
            EXPECT_EQ(esdlab::vdot(basis[i], basis[j]), Complex(0.0));
        }
    }
}

TEST(OrthobasisBotstan, SingleVectorCase) {
    const auto basis = esdlab::orthobasis_botstan(Complex(0.0, 2.0), 3, 3);
    ASSERT_EQ(basis.size(), 1u);
    EXPECT_EQ(basis[0][3], Complex(0.0, 2.0));
}

TEST(OrthobasisBotstan, MatchesBottomUpGramSchmidt) {
    const Complex z(0.9, -0.2);
    const int ell = 1, b = 6;
    // Source rows processed bottom-up: z e_{b+1} first, then
    // z e_i + e_{i+1} for i = b down to ell+1.
    std::vector<CVec> reversed;
    reversed.push_back(unit_vec(b + 1, b, z));
    for (int i = b; i >= ell + 1; --i) {
        CVec v(b + 1, Complex(0.0));
        v[i - 1] = z;
        v[i] = 1.0;
        reversed.push_back(std::move(v));
    }
    const auto gs = esdlab::orthonormal_basis(reversed);
    const auto expected = esdlab::orthobasis_botstan(z, ell, b);
    ASSERT_EQ(gs.size(), expected.size());
    for (std::size_t t = 0; t < gs.size(); ++t) {
        // gs[t] should be the unit vector e_{b+1-t} up to phase.
        const int idx = b - static_cast<int>(t);
        EXPECT_NEAR(std::abs(gs[t][idx]), 1.0, 1e-10);
        for (int j = 0; j <= b; ++j) {
            if (j != idx) EXPECT_LE(std::abs(gs[t][j]), 1e-10);
        }
    }
}

TEST(OrthobasisRejections, Preconditions) {
    EXPECT_THROW(esdlab::orthobasis_topdown(Complex(0.5, 0.0), 5, 5), std::invalid_argument);
    EXPECT_THROW(esdlab::orthobasis_topdown(Complex(1.0, 0.0), 2, 5), std::invalid_argument);
    EXPECT_THROW(esdlab::orthobasis_botup(Complex(0.5, 0.0), 3, 3, 5), std::invalid_argument);
    EXPECT_THROW(esdlab::orthobasis_botstan(Complex(0.0), 1, 3), std::invalid_argument);
}

// ---------------------------------------------------------------------
// delta_{n,eps} and the main-theorem checker

TEST(DeltaNEps, Values) {
    EXPECT_NEAR(esdlab::delta_n_eps(10000, 2.0, 1.0, 1.0), 0.17420834, 1e-7);
    EXPECT_LE(esdlab::delta_n_eps(10000, 2.0, 1e12, 1.0), 1e-12);
    EXPECT_THROW(esdlab::delta_n_eps(1, 2.0, 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(esdlab::delta_n_eps(100, 2.0, 0.0, 1.0), std::invalid_argument);
}

TEST(DeltaNEps, AdmissibilityProxyMonotoneBeyond55) {
    const auto proxy = [](int n) {
        return std::pow(static_cast<double>(n), -0.25) * std::log(static_cast<double>(n));
    };
    for (int n = 55; n < 2000; ++n) EXPECT_LT(proxy(n + 1), proxy(n)) << n;
    EXPECT_GT(proxy(51), proxy(50));  // still increasing below the knee
}

TEST(CheckMainthm, RejectsSmallGamma) {
    EXPECT_THROW(esdlab::check_mainthm_hypotheses(esdlab::build_Tn(8), 1.5, {Complex(0.5, 0.0)}),
                 std::invalid_argument);
}

TEST(CheckMainthm, DiagonalMatrixSatisfiesAtFullSet) {
    const int n = 48;
    ComplexMatrix d(n);
    for (int i = 0; i < n; ++i) d(i, i) = Complex(static_cast<double>(i + 1) / n, 0.0);
    const auto reports = esdlab::check_mainthm_hypotheses(d, 3.0, {Complex(2.5, 0.0)});
    ASSERT_EQ(reports.size(), 1u);
    EXPECT_EQ(reports[0].full_rows, n);
    EXPECT_NEAR(reports[0].full_epsilon, 2.5 + 1.0 / n, 1e-9);
    EXPECT_LT(reports[0].full_ratio, 1.0);
    EXPECT_TRUE(reports[0].satisfied);
}

TEST(CheckMainthm, JordanBlockNeedsLastRowDropped) {
    const int n = 24;
    const Complex z(0.5, 0.0);
    const auto reports = esdlab::check_mainthm_hypotheses(esdlab::build_Tn(n), 3.0, {z});
    ASSERT_EQ(reports.size(), 1u);
    // Full set is ruined by the last row (distance ~ |z|^n).
    EXPECT_LE(reports[0].full_epsilon, 1e-4);
    EXPECT_GT(reports[0].full_ratio, 1.0);
    // After dropping it, the superdiagonal rows carry the constant level.
    EXPECT_GE(reports[0].best_epsilon, esdlab::closed_form_superdiag(z) - 1e-9);
    EXPECT_LE(reports[0].best_epsilon, 0.95);
    EXPECT_TRUE(reports[0].satisfied);
    EXPECT_LT(reports[0].best_rows, n);
}

TEST(CheckMainthm, HalfSizeBlocksCollapseWithoutDrops) {
    const int n = 32, b = 16;
    const Complex z(0.5, 0.0);
    const ComplexMatrix m = esdlab::build_Tbn(esdlab::BlockSpec(n, b));
    const auto reports = esdlab::check_mainthm_hypotheses(m, 3.0, {z});
    ASSERT_EQ(reports.size(), 1u);
    const double closed = esdlab::closed_form_all_rows(z, b);
    EXPECT_GE(reports[0].full_epsilon, closed - 1e-9);
    EXPECT_LE(reports[0].full_epsilon, closed * 1.0 + 1e-6);
    EXPECT_GT(reports[0].full_ratio, 1.0);   // collapses like |z|^{b+1}
    EXPECT_TRUE(reports[0].satisfied);        // recoverable by dropping block ends
}

// ---------------------------------------------------------------------
// many stable rows

TEST(VerifyManystable, SmokeCaseSixteen) {
    const auto rep = esdlab::verify_manystable(16, esdlab::NoiseEnsemble::complex_gaussian,
                                               Complex(0.0), 5);
    EXPECT_EQ(rep.n, 16);
    EXPECT_EQ(rep.tested_rows, 5);  // floor(16 - 16^{5/6})
    EXPECT_EQ(static_cast<int>(rep.distances.size()), rep.tested_rows);
    EXPECT_GT(rep.min_distance, 0.0);
}

TEST(VerifyManystable, ShiftedMatrixPasses) {
    const auto rep =
        esdlab::verify_manystable(64, esdlab::NoiseEnsemble::complex_gaussian, Complex(5.0, 0.0), 2);
    EXPECT_TRUE(rep.pass);
}

TEST(VerifyManystable, GaussianAtDeskScale) {
    const auto rep =
        esdlab::verify_manystable(256, esdlab::NoiseEnsemble::complex_gaussian, Complex(0.0), 1);
    EXPECT_EQ(rep.tested_rows, 154);
    EXPECT_NEAR(rep.threshold, std::pow(256.0, -1.0 / 12.0) / 2.0, 1e-15);
    EXPECT_TRUE(rep.pass);
}

TEST(VerifyManystable, RejectsTinyDimension) {
    EXPECT_THROW(esdlab::verify_manystable(8, esdlab::NoiseEnsemble::complex_gaussian, Complex(0.0), 1),
                 std::invalid_argument);
}

// ---------------------------------------------------------------------
// report serialization

TEST(StabilityReportCsv, Format) {
    esdlab::StabilityReport rep;
    rep.per_row_distance = {1.0, 0.5};
    rep.source_indices = {1, 2};
    rep.epsilon = 0.5;
    rep.method = esdlab::StabilityMethod::numeric;
    EXPECT_EQ(esdlab::stability_report_to_csv(rep),
              "row_index,distance\n1,1\n2,0.5\nepsilon,0.5,method,numeric\n");
}
