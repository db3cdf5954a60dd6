#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "esdlab/complex_matrix.hpp"
#include "esdlab/eigensolver.hpp"

namespace esdlab {

/// Empirical spectral distribution: uniform measure on the atoms.
struct ESD {
    std::vector<Complex> atoms;
};

inline ESD esd_from_spectrum(const Spectrum& s) {
    if (!s.converged) throw std::invalid_argument("esd_from_spectrum: spectrum did not converge");
    return ESD{s.eigenvalues};
}

/// Radially symmetric reference measures, each with an exact radial CDF:
/// dirac_zero F(r) = 1 for r >= 0; unit_circle_uniform F(r) = [r >= 1];
/// unit_disk_uniform F(r) = min(1, r^2).
enum class ReferenceMeasure { dirac_zero, unit_circle_uniform, unit_disk_uniform };

inline const char* reference_name(ReferenceMeasure r) {
    switch (r) {
        case ReferenceMeasure::dirac_zero: return "dirac0";
        case ReferenceMeasure::unit_circle_uniform: return "circle";
        case ReferenceMeasure::unit_disk_uniform: return "disk";
    }
    return "?";
}

namespace detail {

// Radial CDF: either a right-continuous step function or the analytic
// disk CDF min(1, r^2).
struct RadialCdf {
    bool analytic_disk = false;
    std::vector<double> jump_r;  // ascending
    std::vector<double> cum;     // value at and after jump_r[i]

    double value(double r) const {
        if (analytic_disk) return r <= 0.0 ? 0.0 : std::min(1.0, r * r);
        const auto it = std::upper_bound(jump_r.begin(), jump_r.end(), r);
        if (it == jump_r.begin()) return 0.0;
        return cum[static_cast<std::size_t>(it - jump_r.begin()) - 1];
    }

    double value_left(double r) const {
        if (analytic_disk) return value(r);
        const auto it = std::lower_bound(jump_r.begin(), jump_r.end(), r);
        if (it == jump_r.begin()) return 0.0;
        return cum[static_cast<std::size_t>(it - jump_r.begin()) - 1];
    }
};

inline RadialCdf radial_cdf(const ESD& mu) {
    if (mu.atoms.empty()) throw std::invalid_argument("radial_cdf: empty ESD");
    std::vector<double> radii;
    radii.reserve(mu.atoms.size());
    for (const Complex& a : mu.atoms) radii.push_back(std::abs(a));
    std::sort(radii.begin(), radii.end());
    RadialCdf f;
    const double w = 1.0 / static_cast<double>(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!f.jump_r.empty() && radii[i] == f.jump_r.back()) {
            f.cum.back() += w;
        } else {
            f.jump_r.push_back(radii[i]);
            f.cum.push_back((f.cum.empty() ? 0.0 : f.cum.back()) + w);
        }
    }
    f.cum.back() = 1.0;  // tie off accumulated rounding
    return f;
}

inline RadialCdf radial_cdf(ReferenceMeasure ref) {
    RadialCdf f;
    switch (ref) {
        case ReferenceMeasure::dirac_zero:
            f.jump_r = {0.0};
            f.cum = {1.0};
            break;
        case ReferenceMeasure::unit_circle_uniform:
            f.jump_r = {1.0};
            f.cum = {1.0};
            break;
        case ReferenceMeasure::unit_disk_uniform:
            f.analytic_disk = true;
            break;
    }
    return f;
}

// forall r: F(r - delta) - delta <= G(r)?
inline bool levy_one_sided(const RadialCdf& f, const RadialCdf& g, double delta) {
    constexpr double slack = 1e-15;
    if (!f.analytic_disk) {
        for (std::size_t i = 0; i < f.jump_r.size(); ++i) {
            if (f.cum[i] - delta > g.value(f.jump_r[i] + delta) + slack) return false;
        }
        return true;
    }
    if (g.analytic_disk) return true;  // identical analytic CDFs
    for (std::size_t j = 0; j < g.jump_r.size(); ++j) {
        if (f.value(g.jump_r[j] - delta) - delta > g.value_left(g.jump_r[j]) + slack) return false;
    }
    return true;
}

inline double levy_distance(const RadialCdf& f, const RadialCdf& g) {
    const auto feasible = [&](double d) { return levy_one_sided(f, g, d) && levy_one_sided(g, f, d); };
    if (feasible(0.0)) return 0.0;
    double lo = 0.0, hi = 1.0;  // delta = 1 is always feasible
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace detail

/// Distance between the radial CDFs of eigenvalue moduli, in the Levy
/// metric: the smallest delta such that F(r-delta)-delta <= G(r) <=
/// F(r+delta)+delta for all r. The limits in play are singular (a point
/// mass, the unit circle), so this is the sup-CDF comparison slackened
/// along the diagonal; it converges exactly when the measures converge
/// weakly, while the raw sup saturates at 1 for e.g. a ring of radius
/// 1 - o(1) against the unit circle.
inline double radial_cdf_distance(const ESD& mu, ReferenceMeasure ref) {
    return detail::levy_distance(detail::radial_cdf(mu), detail::radial_cdf(ref));
}

inline double radial_cdf_distance(const ESD& mu1, const ESD& mu2) {
    return detail::levy_distance(detail::radial_cdf(mu1), detail::radial_cdf(mu2));
}

// ---------------------------------------------------------------------
// Smooth compactly supported test functions.

/// Bump profile (1 - (r/h)^2)^3 on r < h; C^2, supported on the h-disk,
/// bounded by 1.
inline double bump(Complex x, Complex center, double h) {
    const double t = 1.0 - std::norm(x - center) / (h * h);
    return t > 0.0 ? t * t * t : 0.0;
}

struct TestFunctionFamily {
    std::vector<Complex> centers;
    std::vector<double> bandwidths;

    /// 9x9 center grid on [-2,2]^2 with bandwidths {0.5, 0.25}; 162
    /// functions total.
    static TestFunctionFamily default_family() {
        TestFunctionFamily fam;
        for (int i = 0; i < 9; ++i) {
            for (int j = 0; j < 9; ++j) {
                fam.centers.emplace_back(-2.0 + 0.5 * i, -2.0 + 0.5 * j);
            }
        }
        fam.bandwidths = {0.5, 0.25};
        return fam;
    }
};

namespace detail {

inline double integrate_esd(const ESD& mu, Complex c, double h) {
    if (mu.atoms.empty()) throw std::invalid_argument("integrate_esd: empty ESD");
    double s = 0.0;
    for (const Complex& a : mu.atoms) s += bump(a, c, h);
    return s / static_cast<double>(mu.atoms.size());
}

// 4096-node angular quadrature on the unit circle (trapezoid on a
// periodic C^2 integrand: spectrally accurate).
inline double integrate_circle(Complex c, double h) {
    constexpr int kNodes = 4096;
    double s = 0.0;
    for (int k = 0; k < kNodes; ++k) {
        const double th = 2.0 * M_PI * k / kNodes;
        s += bump(Complex(std::cos(th), std::sin(th)), c, h);
    }
    return s / kNodes;
}

// Midpoint quadrature for the uniform disk measure on a 512^2 grid over
// [-1,1]^2. Cell inclusion weights (subsampled at the rim) are computed
// once and cached.
struct DiskGrid {
    static constexpr int kCells = 512;
    std::vector<double> weight;  // inclusion fraction, kCells^2 entries
    double cell_area = 0.0;
};

inline const DiskGrid& disk_grid() {
    static const DiskGrid grid = [] {
        DiskGrid g;
        const int n = DiskGrid::kCells;
        const double hcell = 2.0 / n;
        g.cell_area = hcell * hcell;
        g.weight.assign(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) {
            const double x0 = -1.0 + i * hcell;
            const double x1 = x0 + hcell;
            for (int j = 0; j < n; ++j) {
                const double y0 = -1.0 + j * hcell;
                const double y1 = y0 + hcell;
                const double far = std::hypot(std::max(std::abs(x0), std::abs(x1)),
                                              std::max(std::abs(y0), std::abs(y1)));
                const double near = std::hypot(std::max({x0, -x1, 0.0}), std::max({y0, -y1, 0.0}));
                double w;
                if (far <= 1.0) {
                    w = 1.0;
                } else if (near >= 1.0) {
                    w = 0.0;
                } else {
                    int inside = 0;
                    for (int a = 0; a < 8; ++a) {
                        for (int b = 0; b < 8; ++b) {
                            const double x = x0 + (a + 0.5) * hcell / 8.0;
                            const double y = y0 + (b + 0.5) * hcell / 8.0;
                            if (x * x + y * y <= 1.0) ++inside;
                        }
                    }
                    w = inside / 64.0;
                }
                g.weight[static_cast<std::size_t>(i) * n + j] = w;
            }
        }
        return g;
    }();
    return grid;
}

inline double integrate_disk(Complex c, double h) {
    const DiskGrid& g = disk_grid();
    const int n = DiskGrid::kCells;
    const double hcell = 2.0 / n;
    double s = 0.0;
    // restrict to the bump's support box
    const int imin = std::max(0, static_cast<int>((c.real() - h + 1.0) / hcell) - 1);
    const int imax = std::min(n - 1, static_cast<int>((c.real() + h + 1.0) / hcell) + 1);
    const int jmin = std::max(0, static_cast<int>((c.imag() - h + 1.0) / hcell) - 1);
    const int jmax = std::min(n - 1, static_cast<int>((c.imag() + h + 1.0) / hcell) + 1);
    for (int i = imin; i <= imax; ++i) {
        const double x = -1.0 + (i + 0.5) * hcell;
        for (int j = jmin; j <= jmax; ++j) {
            const double w = g.weight[static_cast<std::size_t>(i) * n + j];
            if (w == 0.0) continue;
            const double y = -1.0 + (j + 0.5) * hcell;
            s += w * bump(Complex(x, y), c, h);
        }
    }
    return s * g.cell_area / M_PI;
}

inline double integrate_reference(ReferenceMeasure ref, Complex c, double h) {
    switch (ref) {
        case ReferenceMeasure::dirac_zero: return bump(Complex(0.0, 0.0), c, h);
        case ReferenceMeasure::unit_circle_uniform: return integrate_circle(c, h);
        case ReferenceMeasure::unit_disk_uniform: return integrate_disk(c, h);
    }
    throw std::logic_error("integrate_reference: bad reference");
}

}  // namespace detail

/// max over the family of |int g dmu1 - int g dmu2|.
inline double testfn_distance(const ESD& mu1, const ESD& mu2, const TestFunctionFamily& fam) {
    double d = 0.0;
    for (double h : fam.bandwidths) {
        for (const Complex& c : fam.centers) {
            d = std::max(d, std::abs(detail::integrate_esd(mu1, c, h) - detail::integrate_esd(mu2, c, h)));
        }
    }
    return d;
}

inline double testfn_distance(const ESD& mu, ReferenceMeasure ref, const TestFunctionFamily& fam) {
    double d = 0.0;
    for (double h : fam.bandwidths) {
        for (const Complex& c : fam.centers) {
            d = std::max(d, std::abs(detail::integrate_esd(mu, c, h) - detail::integrate_reference(ref, c, h)));
        }
    }
    return d;
}

/// One distance report row in the `metric,reference,value` format.
inline std::string distance_csv_row(const std::string& metric, const std::string& reference,
                                    double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return metric + "," + reference + "," + buf + "\n";
}

/// CSV: one `re,im` line per atom.
inline std::string esd_to_csv(const ESD& mu) {
    std::ostringstream out;
    out << "re,im\n";
    char buf[80];
    for (const Complex& a : mu.atoms) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g", a.real(), a.imag());
        out << buf << '\n';
    }
    return out.str();
}

}  // namespace esdlab
