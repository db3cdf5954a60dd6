#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "esdlab/complex_matrix.hpp"
#include "esdlab/ensembles.hpp"
#include "esdlab/gram_schmidt.hpp"

namespace testsupport {

using esdlab::Complex;
using esdlab::ComplexMatrix;
using esdlab::CounterGen;
using esdlab::CVec;

inline ComplexMatrix random_gaussian_matrix(int n, uint64_t seed) {
    ComplexMatrix a(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            CounterGen g = esdlab::entry_gen(seed, i, j);
            a(i, j) = esdlab::sample_scalar(esdlab::NoiseEnsemble::complex_gaussian, g);
        }
    }
    return a;
}

inline CVec random_gaussian_vector(int n, CounterGen& g) {
    CVec v(n);
    for (int i = 0; i < n; ++i) v[i] = esdlab::sample_scalar(esdlab::NoiseEnsemble::complex_gaussian, g);
    return v;
}

/// Unitary from orthonormalized random rows.
inline ComplexMatrix random_unitary(int n, uint64_t seed) {
    CounterGen g = esdlab::stream_gen(seed);
    std::vector<CVec> rows;
    while (static_cast<int>(rows.size()) < n) {
        const std::vector<CVec> basis = esdlab::orthonormal_basis({random_gaussian_vector(n, g)});
        if (basis.empty()) continue;
        CVec r = basis.front();
        esdlab::detail::project_out(rows, r);
        const double nrm = esdlab::vnorm(r);
        if (nrm < 0.5) continue;  // essentially dependent draw, retry
        for (Complex& c : r) c /= nrm;
        rows.push_back(std::move(r));
    }
    ComplexMatrix q(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) q(i, j) = rows[i][j];
    }
    return q;
}

/// Multiset comparison: sort by (re, im) lexicographically, compare
/// pairwise.
inline double eigen_multiset_gap(std::vector<Complex> a, std::vector<Complex> b) {
    const auto lex = [](const Complex& x, const Complex& y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    };
    std::sort(a.begin(), a.end(), lex);
    std::sort(b.begin(), b.end(), lex);
    if (a.size() != b.size()) return 1e300;
    double gap = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
    return gap;
}

}  // namespace testsupport
