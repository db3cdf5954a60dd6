#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "esdlab/complex_matrix.hpp"

namespace esdlab {

inline Complex vdot(const CVec& a, const CVec& b) {
    // <a, b> = sum conj(a_i) b_i
    Complex s = 0.0;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline double vnorm(const CVec& a) {
    double s = 0.0;
    for (const Complex& v : a) s += std::norm(v);
    return std::sqrt(s);
}

inline void vaxpy(Complex alpha, const CVec& x, CVec& y) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

namespace detail {

// Subtract the projection of r onto each basis vector; one pass.
inline void project_out(const std::vector<CVec>& basis, CVec& r) {
    for (const CVec& q : basis) vaxpy(-vdot(q, r), q, r);
}

// Relative residual below this is treated as "in the span" when
// building a basis; the direction left over is rounding noise.
constexpr double kDependentTol = 1e-13;

}  // namespace detail

/// Orthonormal basis of Span(S) by modified Gram-Schmidt with one
/// reorthogonalization pass (twice is enough). Numerically dependent
/// vectors are dropped.
inline std::vector<CVec> orthonormal_basis(const std::vector<CVec>& s) {
    std::vector<CVec> basis;
    basis.reserve(s.size());
    for (const CVec& v : s) {
        const double orig = vnorm(v);
        if (orig == 0.0) continue;
        CVec r = v;
        detail::project_out(basis, r);
        detail::project_out(basis, r);
        const double rn = vnorm(r);
        if (rn <= detail::kDependentTol * orig) continue;
        const double inv = 1.0 / rn;
        for (Complex& c : r) c *= inv;
        basis.push_back(std::move(r));
    }
    return basis;
}

/// Euclidean distance from v to Span(S). Span of the empty set is {0},
/// so the answer is then ||v||.
inline double dist_to_span(const CVec& v, const std::vector<CVec>& s) {
    for (const CVec& w : s) {
        if (w.size() != v.size()) throw std::invalid_argument("dist_to_span: dimension mismatch");
    }
    const std::vector<CVec> basis = orthonormal_basis(s);
    CVec r = v;
    detail::project_out(basis, r);
    detail::project_out(basis, r);
    return vnorm(r);
}

/// Distance of v to the span of an already-orthonormal basis.
inline double dist_to_basis(const CVec& v, const std::vector<CVec>& basis) {
    CVec r = v;
    detail::project_out(basis, r);
    detail::project_out(basis, r);
    return vnorm(r);
}

}  // namespace esdlab
