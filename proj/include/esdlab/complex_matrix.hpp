#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace esdlab {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

/// Dense n-by-n complex matrix, row-major. Values are immutable by
/// convention once built; all constructors and arithmetic helpers
/// reject non-finite entries.
class ComplexMatrix {
  public:
    explicit ComplexMatrix(int n) : n_(check_dim(n)), a_(static_cast<std::size_t>(n) * n) {}

    ComplexMatrix(int n, std::vector<Complex> entries) : n_(check_dim(n)), a_(std::move(entries)) {
        if (a_.size() != static_cast<std::size_t>(n_) * n_) {
            throw std::invalid_argument("ComplexMatrix: entry count must be n^2");
        }
        require_finite();
    }

    int dim() const { return n_; }

    Complex& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const Complex& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    const std::vector<Complex>& entries() const { return a_; }

    CVec row(int i) const {
        CVec r(n_);
        for (int j = 0; j < n_; ++j) r[j] = (*this)(i, j);
        return r;
    }

    void require_finite() const {
        for (const Complex& v : a_) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                throw std::domain_error("ComplexMatrix: non-finite entry");
            }
        }
    }

  private:
    static int check_dim(int n) {
        if (n < 1) throw std::invalid_argument("ComplexMatrix: dimension must be >= 1");
        return n;
    }

    int n_;
    std::vector<Complex> a_;
};

/// Nilpotent matrix with ones on the superdiagonal and zeros elsewhere.
inline ComplexMatrix build_Tn(int n) {
    ComplexMatrix t(n);
    for (int i = 0; i + 1 < n; ++i) t(i, i + 1) = 1.0;
    return t;
}

/// Block layout for the block-diagonal nilpotent family: T_{b+1} blocks
/// down the diagonal plus one trailing T_k block when b+1 does not
/// divide n evenly.
struct BlockSpec {
    int n = 0;
    int b = 0;

    BlockSpec(int n_in, int b_in) : n(n_in), b(b_in) {
        if (n < 1) throw std::invalid_argument("BlockSpec: n must be >= 1");
        if (b < 1 || b >= n) throw std::invalid_argument("BlockSpec: need 1 <= b <= n-1");
    }

    int trailing_block_size() const { return n - (n / (b + 1)) * (b + 1); }

    /// Superdiagonal as 0/1 values at positions (i, i+1), i = 1..n-1.
    /// Runs of b ones separated by single zeros; the trailing run has
    /// length k-1 when the trailing block is non-empty.
    std::vector<int> superdiagonal_pattern() const {
        std::vector<int> p(static_cast<std::size_t>(n) - 1);
        for (int i = 1; i <= n - 1; ++i) p[i - 1] = (i % (b + 1) != 0) ? 1 : 0;
        return p;
    }
};

inline ComplexMatrix build_Tbn(const BlockSpec& spec) {
    ComplexMatrix t(spec.n);
    const std::vector<int> pattern = spec.superdiagonal_pattern();
    for (int i = 0; i + 1 < spec.n; ++i) {
        if (pattern[i]) t(i, i + 1) = 1.0;
    }
    return t;
}

/// A + zI.
inline ComplexMatrix shift(const ComplexMatrix& a, Complex z) {
    ComplexMatrix out = a;
    for (int i = 0; i < a.dim(); ++i) out(i, i) += z;
    out.require_finite();
    return out;
}

/// A + s*X entrywise.
inline ComplexMatrix add_scaled(const ComplexMatrix& a, const ComplexMatrix& x, double s) {
    if (a.dim() != x.dim()) throw std::invalid_argument("add_scaled: dimension mismatch");
    ComplexMatrix out = a;
    for (int i = 0; i < a.dim(); ++i) {
        for (int j = 0; j < a.dim(); ++j) out(i, j) += s * x(i, j);
    }
    out.require_finite();
    return out;
}

/// (1/n) * sum |a_ij|^2, i.e. the squared Frobenius norm over n.
inline double frobenius_norm_sq_over_n(const ComplexMatrix& a) {
    double s = 0.0;
    for (const Complex& v : a.entries()) s += std::norm(v);
    return s / a.dim();
}

inline double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (const Complex& v : a.entries()) s += std::norm(v);
    return std::sqrt(s);
}

inline Complex trace(const ComplexMatrix& a) {
    Complex t = 0.0;
    for (int i = 0; i < a.dim(); ++i) t += a(i, i);
    return t;
}

inline ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("multiply: dimension mismatch");
    const int n = a.dim();
    ComplexMatrix out(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex(0.0)) continue;
            for (int j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
        }
    }
    out.require_finite();
    return out;
}

inline ComplexMatrix conj_transpose(const ComplexMatrix& a) {
    const int n = a.dim();
    ComplexMatrix out(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) out(i, j) = std::conj(a(j, i));
    }
    return out;
}

/// Formats a complex scalar as "re+imi" / "re-imi", round-trippable.
inline std::string format_complex_token(Complex v) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", v.real(), v.imag());
    return std::string(buf);
}

inline Complex parse_complex_token(const std::string& tok) {
    // Split at the sign of the imaginary part: the last '+'/'-' that is
    // not an exponent sign and not the leading sign.
    if (tok.empty() || tok.back() != 'i') {
        throw std::invalid_argument("parse_complex_token: expected trailing 'i' in '" + tok + "'");
    }
    std::size_t split = std::string::npos;
    for (std::size_t p = tok.size() - 1; p > 0; --p) {
        const char c = tok[p];
        if ((c == '+' || c == '-') && tok[p - 1] != 'e' && tok[p - 1] != 'E') {
            split = p;
            break;
        }
    }
    if (split == std::string::npos) {
        throw std::invalid_argument("parse_complex_token: malformed token '" + tok + "'");
    }
    const std::string re_part = tok.substr(0, split);
    const std::string im_part = tok.substr(split, tok.size() - 1 - split);
    std::size_t used = 0;
    const double re = std::stod(re_part, &used);
    if (used != re_part.size()) throw std::invalid_argument("parse_complex_token: bad real part");
    const double im = (im_part == "+" || im_part == "-") ? (im_part == "+" ? 1.0 : -1.0)
                                                         : std::stod(im_part);
    return Complex(re, im);
}

/// Plain-text serialization: `n` on line 1, then n lines of n
/// whitespace-separated re+imi tokens.
inline std::string matrix_to_text(const ComplexMatrix& a) {
    std::ostringstream out;
    out << a.dim() << '\n';
    for (int i = 0; i < a.dim(); ++i) {
        for (int j = 0; j < a.dim(); ++j) {
            if (j > 0) out << ' ';
            out << format_complex_token(a(i, j));
        }
        out << '\n';
    }
    return out.str();
}

inline ComplexMatrix matrix_from_text(std::istream& in) {
    int n = 0;
    if (!(in >> n)) throw std::invalid_argument("matrix_from_text: missing dimension");
    if (n < 1) throw std::invalid_argument("matrix_from_text: dimension must be >= 1");
    ComplexMatrix a(n);
    std::string tok;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (!(in >> tok)) throw std::invalid_argument("matrix_from_text: truncated input");
            a(i, j) = parse_complex_token(tok);
        }
    }
    a.require_finite();
    return a;
}

inline ComplexMatrix matrix_from_text(const std::string& text) {
    std::istringstream in(text);
    return matrix_from_text(in);
}

inline void write_matrix_file(const ComplexMatrix& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_matrix_file: cannot open " + path);
    out << matrix_to_text(a);
}

}  // namespace esdlab
