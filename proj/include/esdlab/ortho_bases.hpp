#pragma once

#include <stdexcept>
#include <vector>

#include "esdlab/complex_matrix.hpp"
#include "esdlab/stability.hpp"

namespace esdlab {

/// Explicit orthogonal basis {w_1, ..., w_count} of
/// Span{z e_i + e_{i+1} : 1 <= i <= count}, built top-down:
///   w_k = e_{k+1} + z / (sum_{i<k} |z|^{2i}) * sum_{j<k} (-z)^{k-1-j} |z|^{2j} e_{j+1}.
/// Vectors live in C^n (1-based e_i). Not normalized.
inline std::vector<CVec> orthobasis_topdown(Complex z, int count, int n) {
    if (count < 0 || count > n - 1) throw std::invalid_argument("orthobasis_topdown: need count <= n-1");
    if (detail::on_unit_circle(z)) throw std::invalid_argument("orthobasis_topdown: |z| = 1 excluded");
    const double q = std::norm(z);
    std::vector<CVec> basis;
    basis.reserve(count);
    for (int k = 1; k <= count; ++k) {
        CVec w(n, Complex(0.0));
        w[k] = 1.0;  // e_{k+1}
        const double denom = geometric_sum_abs2(z, k);
        // coefficient of e_{j+1}: (-z)^{k-1-j} |z|^{2j}, j = 0..k-1
        std::vector<Complex> neg_pow(k);
        neg_pow[k - 1] = 1.0;
        for (int j = k - 2; j >= 0; --j) neg_pow[j] = neg_pow[j + 1] * (-z);
        double qj = 1.0;
        for (int j = 0; j < k; ++j) {
            w[j] = (z / denom) * neg_pow[j] * qj;
            qj *= q;
        }
        basis.push_back(std::move(w));
    }
    return basis;
}

/// Explicit orthogonal basis {w_{ell+1}, ..., w_m} of
/// Span{z e_i + e_{i+1} : ell+1 <= i <= m}, built bottom-up:
///   w_k = z e_k + (1 / sum_{i=0}^{m-k} |z|^{2i}) * sum_{j=k+1}^{m+1} (-conj(z))^{j-k-1} e_j.
inline std::vector<CVec> orthobasis_botup(Complex z, int ell, int m, int n) {
    if (ell + 1 > m || m > n - 1) throw std::invalid_argument("orthobasis_botup: need ell+1 <= m <= n-1");
    if (detail::on_unit_circle(z)) throw std::invalid_argument("orthobasis_botup: |z| = 1 excluded");
    std::vector<CVec> basis;
    basis.reserve(m - ell);
    for (int k = ell + 1; k <= m; ++k) {
        CVec w(n, Complex(0.0));
        w[k - 1] = z;  // z e_k
        const double denom = geometric_sum_abs2(z, m - k + 1);
        Complex pow = 1.0;  // (-conj z)^{j-k-1}
        for (int j = k + 1; j <= m + 1; ++j) {
            w[j - 1] = pow / denom;
            pow *= -std::conj(z);
        }
        basis.push_back(std::move(w));
    }
    return basis;
}

/// Orthogonal basis of Span({z e_i + e_{i+1} : ell+1 <= i <= b} u {z e_{b+1}}),
/// which collapses to the re-scaled standard basis {z e_i : ell+1 <= i <= b+1}
/// when orthogonalized bottom-up. Vectors live in C^{b+1}.
inline std::vector<CVec> orthobasis_botstan(Complex z, int ell, int b) {
    if (z == Complex(0.0)) throw std::invalid_argument("orthobasis_botstan: z = 0 collapses the basis");
    if (ell < 0 || ell + 1 > b + 1) throw std::invalid_argument("orthobasis_botstan: need ell+1 <= b+1");
    std::vector<CVec> basis;
    basis.reserve(b + 1 - ell);
    for (int i = ell + 1; i <= b + 1; ++i) {
        CVec w(b + 1, Complex(0.0));
        w[i - 1] = z;
        basis.push_back(std::move(w));
    }
    return basis;
}

}  // namespace esdlab
