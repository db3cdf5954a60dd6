#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "esdlab/complex_matrix.hpp"
#include "esdlab/ensembles.hpp"
#include "esdlab/gram_schmidt.hpp"

namespace esdlab {

namespace detail {
// The closed forms assume |z| != 1; treat anything this close as on the
// unit circle and reject it.
constexpr double kUnitCircleTol = 1e-9;

inline bool on_unit_circle(Complex z) { return std::abs(std::abs(z) - 1.0) <= kUnitCircleTol; }
}  // namespace detail

/// sum_{i=0}^{k-1} |z|^{2i}. Closed form away from |z| = 1, direct
/// summation near it (the closed form cancels catastrophically there).
inline double geometric_sum_abs2(Complex z, int k) {
    if (k <= 0) return 0.0;
    const double q = std::norm(z);
    if (std::abs(std::abs(z) - 1.0) > 1e-3) {
        return (1.0 - std::pow(q, k)) / (1.0 - q);
    }
    double s = 0.0;
    double term = 1.0;
    for (int i = 0; i < k; ++i) {
        s += term;
        term *= q;
    }
    return s;
}

/// Stability level of the superdiagonal rows {z e_i + e_{i+1}}:
/// min{1, |1 - |z|^2|^{1/2}}. A guaranteed lower bound on every row's
/// distance to the span of the others, for any subset of such rows.
inline double closed_form_superdiag(Complex z) {
    if (detail::on_unit_circle(z)) {
        throw std::invalid_argument("closed_form_superdiag: formula degenerates at |z| = 1");
    }
    return std::min(1.0, std::sqrt(std::abs(1.0 - std::norm(z))));
}

/// Stability level of the full row set of T_{b,n} + zI:
/// ||z|^2 - 1|^{1/2} if |z| > 1, |z|^{b+1} |1 - |z|^2|^{1/2} if |z| < 1.
inline double closed_form_all_rows(Complex z, int b) {
    if (b < 1) throw std::invalid_argument("closed_form_all_rows: b must be >= 1");
    if (detail::on_unit_circle(z)) {
        throw std::invalid_argument("closed_form_all_rows: formula degenerates at |z| = 1");
    }
    const double az = std::abs(z);
    if (az > 1.0) return std::sqrt(az * az - 1.0);
    return std::pow(az, b + 1) * std::sqrt(1.0 - az * az);
}

struct RowSet {
    std::vector<CVec> vectors;
    std::vector<int> source_indices;  // 1-based rows in the parent matrix
};

inline RowSet all_rows(const ComplexMatrix& a) {
    RowSet s;
    s.vectors.reserve(a.dim());
    s.source_indices.reserve(a.dim());
    for (int i = 0; i < a.dim(); ++i) {
        s.vectors.push_back(a.row(i));
        s.source_indices.push_back(i + 1);
    }
    return s;
}

inline RowSet rows_subset(const ComplexMatrix& a, const std::vector<int>& one_based_rows) {
    RowSet s;
    for (int i : one_based_rows) {
        if (i < 1 || i > a.dim()) throw std::invalid_argument("rows_subset: row index out of range");
        s.vectors.push_back(a.row(i - 1));
        s.source_indices.push_back(i);
    }
    return s;
}

enum class StabilityMethod { numeric, closed_form_superdiag, closed_form_all_rows };

inline const char* stability_method_name(StabilityMethod m) {
    switch (m) {
        case StabilityMethod::numeric: return "numeric";
        case StabilityMethod::closed_form_superdiag: return "closed-form-superdiag";
        case StabilityMethod::closed_form_all_rows: return "closed-form-all-rows";
    }
    return "?";
}

struct StabilityReport {
    std::vector<double> per_row_distance;
    std::vector<int> source_indices;
    double epsilon = 0.0;
    StabilityMethod method = StabilityMethod::numeric;
};

namespace detail {

inline double dist_to_others(const std::vector<CVec>& vecs, std::size_t skip) {
    std::vector<CVec> basis;
    basis.reserve(vecs.size());
    for (std::size_t i = 0; i < vecs.size(); ++i) {
        if (i == skip) continue;
        const double orig = vnorm(vecs[i]);
        if (orig == 0.0) continue;
        CVec r = vecs[i];
        project_out(basis, r);
        project_out(basis, r);
        const double rn = vnorm(r);
        if (rn <= kDependentTol * orig) continue;
        const double inv = 1.0 / rn;
        for (Complex& c : r) c *= inv;
        basis.push_back(std::move(r));
    }
    return dist_to_basis(vecs[skip], basis);
}

}  // namespace detail

/// Per-row distances to the span of the other rows; epsilon is the
/// minimum. Cost O(m^3 n); fine at desk scale.
inline StabilityReport epsilon_stability(const RowSet& s) {
    const std::size_t m = s.vectors.size();
    if (m < 1) throw std::invalid_argument("epsilon_stability: need at least one vector");
    StabilityReport rep;
    rep.per_row_distance.resize(m);
    rep.source_indices = s.source_indices;
    if (rep.source_indices.empty()) {
        for (std::size_t j = 0; j < m; ++j) rep.source_indices.push_back(static_cast<int>(j) + 1);
    }
    for (std::size_t j = 0; j < m; ++j) {
        rep.per_row_distance[j] = detail::dist_to_others(s.vectors, j);
    }
    rep.epsilon = *std::min_element(rep.per_row_distance.begin(), rep.per_row_distance.end());
    rep.method = StabilityMethod::numeric;
    return rep;
}

/// CSV: header, one `row_index,distance` line per row, then the trailer
/// `epsilon,<value>,method,<name>`.
inline std::string stability_report_to_csv(const StabilityReport& rep) {
    std::ostringstream out;
    out << "row_index,distance\n";
    char buf[64];
    for (std::size_t j = 0; j < rep.per_row_distance.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.12g", rep.per_row_distance[j]);
        out << rep.source_indices[j] << ',' << buf << '\n';
    }
    std::snprintf(buf, sizeof(buf), "%.12g", rep.epsilon);
    out << "epsilon," << buf << ",method," << stability_method_name(rep.method) << '\n';
    return out.str();
}

// ---------------------------------------------------------------------
// Perturbation budgets and bounds.

struct PerturbationBudget {
    double epsilon = 0.0;    // stability of the unperturbed set
    int k = 1;               // number of perturbed vectors
    double f_phi_max = 0.0;  // max_i f_i(n) ||phi_i||
    double z_max_norm = 1.0; // max_i max(1, ||Z_i||)
};

/// Bound on |dist(Z_i, S) - dist(Z_i + f phi, S)|: the triangle
/// inequality gives exactly f ||phi||.
inline double bound_perturbed_target(double f_phi_norm) {
    if (f_phi_norm < 0.0) throw std::invalid_argument("bound_perturbed_target: negative norm");
    return f_phi_norm;
}

/// Bound on the distance change when one spanning vector is perturbed:
/// ||Z_i|| f||phi|| (4 d1 + 2 f||phi||) / (d1 - f||phi||)^2, with the
/// simplified 20/eps form when d1 >= eps > 2 f||phi|| is also known.
/// Returns nullopt when the hypotheses fail (no bound available).
inline std::optional<double> bound_perturbed_spanning(double z_norm, double f_phi_norm, double d1,
                                                      std::optional<double> epsilon = std::nullopt) {
    if (z_norm < 0.0 || f_phi_norm < 0.0) {
        throw std::invalid_argument("bound_perturbed_spanning: negative norm");
    }
    if (!(d1 > f_phi_norm)) return std::nullopt;
    const double exact =
        z_norm * f_phi_norm * (4.0 * d1 + 2.0 * f_phi_norm) / ((d1 - f_phi_norm) * (d1 - f_phi_norm));
    if (!epsilon) return exact;
    if (!(*epsilon > 2.0 * f_phi_norm) || !(d1 >= *epsilon)) return std::nullopt;
    const double simplified = z_norm * f_phi_norm * (20.0 / *epsilon);
    return std::min(exact, simplified);
}

struct ContinuedStabilityCheck {
    bool holds = false;
    double threshold = 0.0;
};

/// Hypothesis gate for "perturb the vectors one at a time and stay
/// (eps/2)-stable": needs 20 >= eps > sqrt(40 k fmax (zmax + fmax)).
inline ContinuedStabilityCheck continued_stability_check(const PerturbationBudget& b) {
    ContinuedStabilityCheck out;
    out.threshold = std::sqrt(40.0 * b.k * b.f_phi_max * (b.z_max_norm + b.f_phi_max));
    out.holds = (20.0 >= b.epsilon) && (b.epsilon > out.threshold);
    return out;
}

struct SpanPerturbationBound {
    double bound = 0.0;            // (40/eps) k ||v|| fmax
    double alternative = 0.0;      // ||v|| sqrt(10 k fmax / zmax)
};

/// Bound on |dist(v, Span Z) - dist(v, Span Z~)| when all k spanning
/// vectors are perturbed. Hypothesis: eps/2 passes the continued
/// stability gate. nullopt when it does not.
inline std::optional<SpanPerturbationBound> span_perturbation_bound(const PerturbationBudget& b,
                                                                    double v_norm) {
    if (v_norm < 0.0) throw std::invalid_argument("span_perturbation_bound: negative norm");
    PerturbationBudget half = b;
    half.epsilon = b.epsilon / 2.0;
    if (!continued_stability_check(half).holds) return std::nullopt;
    SpanPerturbationBound out;
    out.bound = (40.0 / b.epsilon) * b.k * v_norm * b.f_phi_max;
    out.alternative = v_norm * std::sqrt(10.0 * b.k * b.f_phi_max / b.z_max_norm);
    return out;
}

/// delta_{n,eps} = n^{-gamma/2 + 3/4} log^{1/4}(n) sqrt(zmax) / eps.
inline double delta_n_eps(int n, double gamma, double epsilon, double z_max_norm) {
    if (n < 2) throw std::invalid_argument("delta_n_eps: n must be >= 2");
    if (!(epsilon > 0.0)) throw std::invalid_argument("delta_n_eps: epsilon must be positive");
    const double nn = static_cast<double>(n);
    return std::pow(nn, -gamma / 2.0 + 0.75) * std::pow(std::log(nn), 0.25) * std::sqrt(z_max_norm) /
           epsilon;
}

// ---------------------------------------------------------------------
// Main-theorem hypothesis checking.

struct MainthmZReport {
    Complex z;
    int full_rows = 0;
    double full_epsilon = 0.0;
    double full_ratio = 0.0;
    int best_rows = 0;
    double best_epsilon = 0.0;
    double best_ratio = 0.0;  // n^{3/4 - gamma/2} log n / epsilon, smaller is better
    bool satisfied = false;   // best_ratio < 1; a quantity that must tend to 0
};

/// For each z, greedily searches for a large row subset of M + zI whose
/// stability makes n^{3/4-gamma/2} log n / eps small: repeatedly drop
/// the row with minimal distance-to-others, up to floor(n / log^{1.1} n)
/// drops, and keep the largest subset attaining the smallest ratio.
/// This is a heuristic; the true optimum may be better.
inline std::vector<MainthmZReport> check_mainthm_hypotheses(const ComplexMatrix& m, double gamma,
                                                            const std::vector<Complex>& z_grid) {
    if (!(gamma > 1.5)) throw std::invalid_argument("check_mainthm_hypotheses: gamma must be > 1.5");
    const int n = m.dim();
    if (n < 2) throw std::invalid_argument("check_mainthm_hypotheses: n must be >= 2");
    const double nn = static_cast<double>(n);
    const double scale = std::pow(nn, 0.75 - gamma / 2.0) * std::log(nn);
    int max_drops = static_cast<int>(nn / std::pow(std::log(nn), 1.1));
    max_drops = std::min(max_drops, n - 1);

    std::vector<MainthmZReport> reports;
    reports.reserve(z_grid.size());
    for (const Complex z : z_grid) {
        const ComplexMatrix shifted = shift(m, z);
        RowSet current = all_rows(shifted);

        MainthmZReport rep;
        rep.z = z;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int drops = 0; drops <= max_drops; ++drops) {
            const StabilityReport st = epsilon_stability(current);
            const double ratio =
                st.epsilon > 0.0 ? scale / st.epsilon : std::numeric_limits<double>::infinity();
            if (drops == 0) {
                rep.full_rows = static_cast<int>(current.vectors.size());
                rep.full_epsilon = st.epsilon;
                rep.full_ratio = ratio;
            }
            // Strictly-better only: ties keep the earlier (larger) subset.
            if (ratio < best_ratio * (1.0 - 1e-12)) {
                best_ratio = ratio;
                rep.best_rows = static_cast<int>(current.vectors.size());
                rep.best_epsilon = st.epsilon;
                rep.best_ratio = ratio;
            }
            if (drops == max_drops || current.vectors.size() <= 1) break;
            const std::size_t worst = static_cast<std::size_t>(
                std::min_element(st.per_row_distance.begin(), st.per_row_distance.end()) -
                st.per_row_distance.begin());
            current.vectors.erase(current.vectors.begin() + worst);
            current.source_indices.erase(current.source_indices.begin() + worst);
        }
        rep.satisfied = rep.best_ratio < 1.0;
        reports.push_back(std::move(rep));
    }
    return reports;
}

// ---------------------------------------------------------------------
// Many stable rows of a random matrix.

struct ManystableReport {
    int n = 0;
    Complex z;
    uint64_t seed = 0;
    int tested_rows = 0;
    double threshold = 0.0;
    std::vector<double> distances;
    double min_distance = 0.0;
    bool pass = false;
};

/// Samples R_n + zI with iid x/sqrt(n) entries and tests whether the
/// first floor(n - n^{5/6}) rows each sit at distance >= n^{-1/12}/2
/// from the span of the others in that set.
inline ManystableReport verify_manystable(int n, NoiseEnsemble ensemble, Complex z, uint64_t seed) {
    if (n < 16) throw std::invalid_argument("verify_manystable: n must be >= 16");
    ManystableReport rep;
    rep.n = n;
    rep.z = z;
    rep.seed = seed;
    const double nn = static_cast<double>(n);
    rep.tested_rows = static_cast<int>(nn - std::pow(nn, 5.0 / 6.0));
    rep.threshold = std::pow(nn, -1.0 / 12.0) / 2.0;

    const ComplexMatrix r = sample_noise_matrix({n, 0.0, ensemble, seed});
    const ComplexMatrix a = shift(r, z);
    std::vector<CVec> rows;
    rows.reserve(rep.tested_rows);
    for (int i = 0; i < rep.tested_rows; ++i) rows.push_back(a.row(i));

    rep.distances.resize(rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j) {
        rep.distances[j] = detail::dist_to_others(rows, j);
    }
    rep.min_distance = *std::min_element(rep.distances.begin(), rep.distances.end());
    rep.pass = rep.min_distance >= rep.threshold;
    return rep;
}

}  // namespace esdlab
