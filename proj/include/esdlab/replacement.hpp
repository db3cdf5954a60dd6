#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "esdlab/complex_matrix.hpp"
#include "esdlab/eigensolver.hpp"
#include "esdlab/ensembles.hpp"
#include "esdlab/gram_schmidt.hpp"
#include "esdlab/lu.hpp"
#include "esdlab/stability.hpp"
#include "esdlab/util.hpp"

namespace esdlab {

/// d_i = distance from row i to the span of rows 1..i-1 (d_1 = ||row 1||),
/// with log distances carrying -inf for exactly dependent rows.
struct RowDistanceProfile {
    std::vector<double> distances;
    std::vector<double> log_distances;
};

inline RowDistanceProfile row_distance_profile(const ComplexMatrix& a) {
    const int n = a.dim();
    RowDistanceProfile p;
    p.distances.reserve(n);
    p.log_distances.reserve(n);
    std::vector<CVec> basis;
    basis.reserve(n);
    for (int i = 0; i < n; ++i) {
        CVec r = a.row(i);
        const double orig = vnorm(r);
        detail::project_out(basis, r);
        detail::project_out(basis, r);
        const double d = vnorm(r);
        p.distances.push_back(d);
        p.log_distances.push_back(d > 0.0 ? std::log(d) : -std::numeric_limits<double>::infinity());
        if (orig > 0.0 && d > detail::kDependentTol * orig) {
            const double inv = 1.0 / d;
            for (Complex& c : r) c *= inv;
            basis.push_back(std::move(r));
        }
    }
    return p;
}

// ---------------------------------------------------------------------
// Replacement-principle diagnostic: compare (1/n) log|det(. + zI)| for
// the same base matrix perturbed from two ensembles.

struct ReplacementTrial {
    Complex z;
    uint64_t seed = 0;
    std::optional<double> logdet_a;  // nullopt = singular flag
    std::optional<double> logdet_b;
    std::optional<double> gap;       // (1/n)|logdet_a - logdet_b|
};

struct ReplacementDiagnostic {
    int n = 0;
    std::vector<Complex> z_grid;
    std::vector<uint64_t> seeds;
    std::vector<ReplacementTrial> trials;  // seed-major, z-minor
    double cond_frob_a = 0.0;              // max over trials of (1/n)||A||_F^2
    double cond_frob_b = 0.0;
    int singular_trials = 0;
};

/// The two perturbations share the seed: with identical ensembles the
/// matrices coincide and the gap is exactly zero; with different
/// ensembles the coupling just reduces Monte Carlo variance.
inline ReplacementDiagnostic replacement_diagnostic(const ComplexMatrix& m, double gamma,
                                                    NoiseEnsemble ens_a, NoiseEnsemble ens_b,
                                                    const std::vector<Complex>& z_grid,
                                                    const std::vector<uint64_t>& seeds) {
    if (!(gamma > 0.0)) throw std::invalid_argument("replacement_diagnostic: gamma must be > 0");
    for (Complex z : z_grid) {
        if (detail::on_unit_circle(z)) {
            throw std::invalid_argument("replacement_diagnostic: z grid must avoid |z| = 1");
        }
    }
    const int n = m.dim();
    ReplacementDiagnostic out;
    out.n = n;
    out.z_grid = z_grid;
    out.seeds = seeds;
    for (const uint64_t seed : seeds) {
        const ComplexMatrix base_a = add_scaled(m, sample_noise_matrix({n, gamma, ens_a, seed}), 1.0);
        const ComplexMatrix base_b = add_scaled(m, sample_noise_matrix({n, gamma, ens_b, seed}), 1.0);
        for (const Complex z : z_grid) {
            const ComplexMatrix a = shift(base_a, z);
            const ComplexMatrix b = shift(base_b, z);
            out.cond_frob_a = std::max(out.cond_frob_a, frobenius_norm_sq_over_n(a));
            out.cond_frob_b = std::max(out.cond_frob_b, frobenius_norm_sq_over_n(b));
            ReplacementTrial t;
            t.z = z;
            t.seed = seed;
            t.logdet_a = log_abs_det_lu(a);
            t.logdet_b = log_abs_det_lu(b);
            if (t.logdet_a && t.logdet_b) {
                t.gap = std::abs(*t.logdet_a - *t.logdet_b) / n;
            } else {
                ++out.singular_trials;
            }
            out.trials.push_back(t);
        }
    }
    return out;
}

/// Per-z median of the gap, skipping singular trials.
inline std::vector<double> per_z_median_gap(const ReplacementDiagnostic& d) {
    std::vector<double> medians;
    medians.reserve(d.z_grid.size());
    for (std::size_t zi = 0; zi < d.z_grid.size(); ++zi) {
        std::vector<double> gaps;
        for (std::size_t t = zi; t < d.trials.size(); t += d.z_grid.size()) {
            if (d.trials[t].gap) gaps.push_back(*d.trials[t].gap);
        }
        medians.push_back(gaps.empty() ? std::numeric_limits<double>::quiet_NaN() : median(gaps));
    }
    return medians;
}

inline std::string replacement_trials_to_csv(const ReplacementDiagnostic& d) {
    std::ostringstream out;
    out << "z_re,z_im,seed,logdet_a,logdet_b,gap\n";
    const auto field = [](const std::optional<double>& v) {
        return v ? fmt_double(*v) : std::string("nan");
    };
    for (const ReplacementTrial& t : d.trials) {
        out << fmt_double(t.z.real()) << ',' << fmt_double(t.z.imag()) << ',' << t.seed << ','
            << field(t.logdet_a) << ',' << field(t.logdet_b) << ',' << field(t.gap) << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------
// Row-distance log bounds (how many rows can be ignored).

struct LogDistanceBound {
    double max_abs_log = 0.0;  // max over i >= start_row of |log d_i|
    double ratio = 0.0;        // max_abs_log / log n
    bool infinite = false;     // some d_i was exactly 0
};

inline LogDistanceBound log_distance_bound_check(const ComplexMatrix& a, int start_row) {
    const int n = a.dim();
    if (start_row < 1 || start_row > n) {
        throw std::invalid_argument("log_distance_bound_check: start_row out of range");
    }
    const RowDistanceProfile p = row_distance_profile(a);
    LogDistanceBound out;
    for (int i = start_row - 1; i < n; ++i) {
        if (p.distances[i] == 0.0) {
            out.infinite = true;
            out.max_abs_log = std::numeric_limits<double>::infinity();
            break;
        }
        out.max_abs_log = std::max(out.max_abs_log, std::abs(p.log_distances[i]));
    }
    const double logn = std::log(static_cast<double>(n));
    out.ratio = (logn > 0.0 && !out.infinite) ? out.max_abs_log / logn
                                              : std::numeric_limits<double>::infinity();
    if (n > 1 && out.max_abs_log == 0.0 && !out.infinite) out.ratio = 0.0;
    return out;
}

// ---------------------------------------------------------------------
// Least singular value experiment.

struct LeastSingularReport {
    std::vector<double> sigma_n;  // per seed
    double c_hat = 0.0;           // max over seeds of -log(sigma_n)/log(n)
};

inline LeastSingularReport least_singular_experiment(const ComplexMatrix& m, double gamma,
                                                     NoiseEnsemble ens,
                                                     const std::vector<uint64_t>& seeds) {
    const int n = m.dim();
    if (frobenius_norm(m) > std::pow(static_cast<double>(n), 10.0)) {
        throw std::invalid_argument("least_singular_experiment: ||M||_F exceeds polynomial bound n^10");
    }
    LeastSingularReport out;
    const double logn = std::log(static_cast<double>(n));
    for (const uint64_t seed : seeds) {
        const ComplexMatrix a = add_scaled(m, sample_noise_matrix({n, gamma, ens, seed}), 1.0);
        const double s = smallest_singular_value(a);
        out.sigma_n.push_back(s);
        const double exponent =
            s > 0.0 ? -std::log(s) / logn : std::numeric_limits<double>::infinity();
        out.c_hat = std::max(out.c_hat, exponent);
    }
    return out;
}

}  // namespace esdlab
