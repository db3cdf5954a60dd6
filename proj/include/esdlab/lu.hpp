#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "esdlab/complex_matrix.hpp"

namespace esdlab {

/// log|det A| via row-pivoted LU. Returns nullopt (the singular flag)
/// when a pivot modulus falls below n * eps * max-row-norm, the usual
/// backward-error scale for partial pivoting.
inline std::optional<double> log_abs_det_lu(const ComplexMatrix& a) {
    const int n = a.dim();
    ComplexMatrix u = a;

    double max_row_norm = 0.0;
    for (int i = 0; i < n; ++i) {
        double r = 0.0;
        for (int j = 0; j < n; ++j) r += std::abs(u(i, j));
        max_row_norm = std::max(max_row_norm, r);
    }
    const double tol = n * std::numeric_limits<double>::epsilon() * max_row_norm;

    double log_det = 0.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double piv_mag = std::abs(u(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double m = std::abs(u(i, k));
            if (m > piv_mag) {
                piv_mag = m;
                piv = i;
            }
        }
        if (piv_mag <= tol || piv_mag == 0.0) return std::nullopt;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(u(k, j), u(piv, j));
        }
        log_det += std::log(piv_mag);
        const Complex inv_piv = 1.0 / u(k, k);
        for (int i = k + 1; i < n; ++i) {
            const Complex f = u(i, k) * inv_piv;
            if (f == Complex(0.0)) continue;
            u(i, k) = 0.0;
            for (int j = k + 1; j < n; ++j) u(i, j) -= f * u(k, j);
        }
    }
    return log_det;
}

}  // namespace esdlab
