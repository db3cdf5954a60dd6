#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "esdlab/complex_matrix.hpp"

namespace esdlab {

/// All n eigenvalues with multiplicity plus solver accounting. When the
/// iteration cap is hit, converged is false and the eigenvalues are a
/// best-effort read of the partially reduced matrix; callers decide what
/// to do with that.
struct Spectrum {
    std::vector<Complex> eigenvalues;
    int iterations = 0;
    bool converged = true;
    double residual_estimate = 0.0;
};

struct SingularValues {
    std::vector<double> values;  // sorted descending, non-negative
};

/// Unitary similarity reduction to upper Hessenberg form (Householder).
inline ComplexMatrix hessenberg(const ComplexMatrix& a) {
    const int n = a.dim();
    ComplexMatrix h = a;
    std::vector<Complex> v(n), s(n);

    for (int k = 0; k + 2 < n; ++k) {
        double xnorm2 = 0.0;
        for (int i = k + 1; i < n; ++i) xnorm2 += std::norm(h(i, k));
        const double xnorm = std::sqrt(xnorm2);
        if (xnorm == 0.0) continue;

        const Complex x0 = h(k + 1, k);
        const Complex phase = (x0 == Complex(0.0)) ? Complex(1.0) : x0 / std::abs(x0);
        const Complex alpha = -phase * xnorm;

        double vnorm2 = 0.0;
        for (int i = k + 1; i < n; ++i) v[i] = h(i, k);
        v[k + 1] -= alpha;
        for (int i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
        if (vnorm2 == 0.0) continue;
        const double inv = 1.0 / std::sqrt(vnorm2);
        for (int i = k + 1; i < n; ++i) v[i] *= inv;

        // Left reflection on rows k+1..n-1: H -= 2 v (v^H H).
        for (int j = k; j < n; ++j) s[j] = 0.0;
        for (int i = k + 1; i < n; ++i) {
            const Complex cv = std::conj(v[i]);
            for (int j = k; j < n; ++j) s[j] += cv * h(i, j);
        }
        for (int i = k + 1; i < n; ++i) {
            const Complex vi2 = 2.0 * v[i];
            for (int j = k; j < n; ++j) h(i, j) -= vi2 * s[j];
        }

        // Right reflection on columns k+1..n-1: H -= 2 (H v) v^H.
        for (int i = 0; i < n; ++i) {
            Complex t = 0.0;
            for (int j = k + 1; j < n; ++j) t += h(i, j) * v[j];
            t *= 2.0;
            for (int j = k + 1; j < n; ++j) h(i, j) -= t * std::conj(v[j]);
        }

        h(k + 1, k) = alpha;
        for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
    return h;
}

namespace detail {

// G = [[c, s], [-conj(s), c]] with G [f; g]^T = [r; 0]^T, c real.
struct Givens {
    double c;
    Complex s;
};

inline Givens make_givens(Complex f, Complex g) {
    const double af = std::abs(f);
    const double ag = std::abs(g);
    if (ag == 0.0) return {1.0, Complex(0.0)};
    if (af == 0.0) return {0.0, std::conj(g) / ag};
    const double h = std::hypot(af, ag);
    const Complex fphase = f / af;
    return {af / h, fphase * std::conj(g) / h};
}

inline std::pair<Complex, Complex> eig2x2(Complex a, Complex b, Complex c, Complex d) {
    const Complex t = 0.5 * (a + d);
    const Complex det = a * d - b * c;
    const Complex disc = std::sqrt(t * t - det);
    Complex l1 = t + disc;
    Complex l2 = t - disc;
    // Recover the smaller root from the product to dodge cancellation.
    if (std::abs(l1) >= std::abs(l2)) {
        if (l1 != Complex(0.0)) l2 = det / l1;
    } else {
        if (l2 != Complex(0.0)) l1 = det / l2;
    }
    return {l1, l2};
}

inline Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
    const auto [l1, l2] = eig2x2(a, b, c, d);
    return (std::abs(l1 - d) <= std::abs(l2 - d)) ? l1 : l2;
}

// One implicit single-shift QR sweep (bulge chase) on the irreducible
// window [l, hi]. Rows/columns outside the window are not updated; only
// eigenvalues are wanted, and the matrix stays block upper triangular.
inline void qr_sweep(ComplexMatrix& h, int l, int hi, Complex mu) {
    Complex x = h(l, l) - mu;
    Complex z = h(l + 1, l);
    for (int k = l; k <= hi - 1; ++k) {
        const Givens g = make_givens(x, z);
        const Complex cs = std::conj(g.s);

        const int jmin = (k == l) ? l : k - 1;
        for (int j = jmin; j <= hi; ++j) {
            const Complex t0 = h(k, j);
            const Complex t1 = h(k + 1, j);
            h(k, j) = g.c * t0 + g.s * t1;
            h(k + 1, j) = -cs * t0 + g.c * t1;
        }
        if (k > l) h(k + 1, k - 1) = 0.0;

        const int imax = std::min(hi, k + 2);
        for (int i = l; i <= imax; ++i) {
            const Complex t0 = h(i, k);
            const Complex t1 = h(i, k + 1);
            h(i, k) = t0 * g.c + t1 * cs;
            h(i, k + 1) = -t0 * g.s + t1 * g.c;
        }

        if (k < hi - 1) {
            x = h(k + 1, k);
            z = h(k + 2, k);
        }
    }
}

}  // namespace detail

/// Eigenvalues via Hessenberg reduction then shifted QR with deflation.
/// Deflation drops a subdiagonal when |h(k+1,k)| <= eps*(|h(k,k)| +
/// |h(k+1,k+1)|). Iteration cap is 40n sweeps; hitting it reports
/// converged=false instead of failing, since highly non-normal inputs
/// are the expected stress case.
inline Spectrum eigenvalues(const ComplexMatrix& a) {
    const int n = a.dim();
    const double eps = std::numeric_limits<double>::epsilon();
    const double anorm = frobenius_norm(a);

    Spectrum out;
    out.eigenvalues.assign(n, Complex(0.0));

    ComplexMatrix h = hessenberg(a);
    const int cap = 40 * n;
    int hi = n - 1;
    int since_deflation = 0;
    double max_neglected = 0.0;

    while (hi >= 0) {
        int l = hi;
        while (l > 0) {
            double sc = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
            if (sc == 0.0) sc = anorm;
            if (std::abs(h(l, l - 1)) <= eps * sc) {
                max_neglected = std::max(max_neglected, std::abs(h(l, l - 1)));
                h(l, l - 1) = 0.0;
                break;
            }
            --l;
        }

        if (l == hi) {
            out.eigenvalues[hi] = h(hi, hi);
            --hi;
            since_deflation = 0;
            continue;
        }
        if (l == hi - 1) {
            const auto [e1, e2] = detail::eig2x2(h(l, l), h(l, hi), h(hi, l), h(hi, hi));
            out.eigenvalues[hi] = e1;
            out.eigenvalues[l] = e2;
            hi = l - 1;
            since_deflation = 0;
            continue;
        }
        if (out.iterations >= cap) {
            for (int k = 0; k <= hi; ++k) out.eigenvalues[k] = h(k, k);
            for (int k = 0; k < hi; ++k) {
                max_neglected = std::max(max_neglected, std::abs(h(k + 1, k)));
            }
            out.converged = false;
            break;
        }

        Complex mu = detail::wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
        ++since_deflation;
        if (since_deflation % 12 == 0) {
            // Ad-hoc exceptional shift; breaks the rare cycling patterns
            // (cyclic permutations and friends).
            mu = h(hi, hi) + Complex(1.5 * (std::abs(h(hi, hi - 1)) + std::abs(h(hi - 1, hi - 2))), 0.0);
        }
        detail::qr_sweep(h, l, hi, mu);
        ++out.iterations;
    }

    out.residual_estimate = max_neglected / std::max(1.0, anorm);
    return out;
}

namespace detail {

// Implicit-shift QL on a real symmetric tridiagonal; eigenvalues only.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
    const int n = static_cast<int>(d.size());
    const double eps = std::numeric_limits<double>::epsilon();
    if (n == 1) return;
    e[n - 1] = 0.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = 0;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (iter++ >= 64) break;  // accept what we have

            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }
}

}  // namespace detail

/// Eigenvalues of a Hermitian matrix. Hessenberg form of a Hermitian
/// matrix is tridiagonal, so the general reduction is reused and the
/// subdiagonal phases are absorbed.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& b) {
    const int n = b.dim();
    const ComplexMatrix h = hessenberg(b);
    std::vector<double> d(n), e(n, 0.0);
    for (int i = 0; i < n; ++i) d[i] = h(i, i).real();
    for (int i = 0; i + 1 < n; ++i) e[i] = std::abs(h(i + 1, i));
    detail::tridiagonal_ql(d, e);
    return d;
}

/// Singular values as square roots of the Hermitian eigenvalues of A^H A
/// (tiny negatives clamped). Accepts the sqrt(eps) accuracy floor on the
/// smallest value; the experiments only need polynomial-in-n resolution.
inline SingularValues singular_values(const ComplexMatrix& a) {
    const int n = a.dim();
    ComplexMatrix b = multiply(conj_transpose(a), a);
    // Symmetrize against rounding before the Hermitian solve.
    for (int i = 0; i < n; ++i) {
        b(i, i) = Complex(b(i, i).real(), 0.0);
        for (int j = i + 1; j < n; ++j) {
            const Complex avg = 0.5 * (b(i, j) + std::conj(b(j, i)));
            b(i, j) = avg;
            b(j, i) = std::conj(avg);
        }
    }
    std::vector<double> ev = hermitian_eigenvalues(b);
    SingularValues out;
    out.values.reserve(ev.size());
    for (double v : ev) out.values.push_back(std::sqrt(std::max(0.0, v)));
    std::sort(out.values.begin(), out.values.end(), std::greater<double>());
    return out;
}

inline double smallest_singular_value(const ComplexMatrix& a) {
    return singular_values(a).values.back();
}

}  // namespace esdlab
