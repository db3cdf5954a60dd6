#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "esdlab/complex_matrix.hpp"

namespace esdlab {

/// The iid scalar laws, all normalized to mean 0 and E|x|^2 = 1.
enum class NoiseEnsemble {
    complex_gaussian,   // (g1 + i g2)/sqrt(2)
    real_gaussian,      // g
    bernoulli_pm1,      // +1 or -1
    complex_bernoulli4, // uniform on {1, -1, i, -i}
    uniform_sym,        // uniform on [-sqrt(3), sqrt(3)]
};

inline const char* ensemble_name(NoiseEnsemble e) {
    switch (e) {
        case NoiseEnsemble::complex_gaussian: return "cgauss";
        case NoiseEnsemble::real_gaussian: return "rgauss";
        case NoiseEnsemble::bernoulli_pm1: return "bern";
        case NoiseEnsemble::complex_bernoulli4: return "cbern4";
        case NoiseEnsemble::uniform_sym: return "usym";
    }
    return "?";
}

inline NoiseEnsemble parse_ensemble(const std::string& name) {
    if (name == "cgauss") return NoiseEnsemble::complex_gaussian;
    if (name == "rgauss") return NoiseEnsemble::real_gaussian;
    if (name == "bern") return NoiseEnsemble::bernoulli_pm1;
    if (name == "cbern4") return NoiseEnsemble::complex_bernoulli4;
    if (name == "usym") return NoiseEnsemble::uniform_sym;
    throw std::invalid_argument("unknown ensemble '" + name + "' (want cgauss|rgauss|bern|cbern4|usym)");
}

inline uint64_t splitmix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: a keyed splitmix64 stream. Value type, no
/// shared state; the key for matrix entry (i, j) is derived from
/// (seed, i, j) so any entry is reproducible on its own, independent of
/// fill order or thread count.
struct CounterGen {
    uint64_t key = 0;
    uint64_t counter = 0;

    uint64_t next_u64() { return splitmix64(key + 0x9e3779b97f4a7c15ULL * ++counter); }

    /// Uniform in (0, 1]; never returns 0, safe under log.
    double next_unit() {
        const uint64_t bits = next_u64() >> 11;  // 53 bits
        return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
    }
};

inline CounterGen stream_gen(uint64_t seed) { return CounterGen{splitmix64(seed), 0}; }

inline CounterGen entry_gen(uint64_t seed, uint64_t row, uint64_t col) {
    uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ (row + 0x510e527fade682d1ULL));
    k = splitmix64(k ^ (col + 0x6a09e667f3bcc908ULL));
    return CounterGen{k, 0};
}

/// One draw of the unscaled scalar x (mean 0, E|x|^2 = 1).
inline Complex sample_scalar(NoiseEnsemble e, CounterGen& g) {
    switch (e) {
        case NoiseEnsemble::complex_gaussian: {
            // Box-Muller pair; |x|^2 = -ln(u1), so E|x|^2 = 1 exactly.
            const double u1 = g.next_unit();
            const double u2 = g.next_unit();
            const double r = std::sqrt(-std::log(u1));
            const double th = 2.0 * M_PI * u2;
            return Complex(r * std::cos(th), r * std::sin(th));
        }
        case NoiseEnsemble::real_gaussian: {
            const double u1 = g.next_unit();
            const double u2 = g.next_unit();
            return Complex(std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2), 0.0);
        }
        case NoiseEnsemble::bernoulli_pm1:
            return Complex(g.next_unit() <= 0.5 ? -1.0 : 1.0, 0.0);
        case NoiseEnsemble::complex_bernoulli4: {
            switch (g.next_u64() & 3u) {
                case 0: return Complex(1.0, 0.0);
                case 1: return Complex(-1.0, 0.0);
                case 2: return Complex(0.0, 1.0);
                default: return Complex(0.0, -1.0);
            }
        }
        case NoiseEnsemble::uniform_sym:
            return Complex(std::sqrt(3.0) * (2.0 * g.next_unit() - 1.0), 0.0);
    }
    throw std::logic_error("sample_scalar: bad ensemble");
}

/// Recipe for one noise matrix n^{-gamma} * X, X having iid entries
/// x/sqrt(n). Same spec => bitwise-identical matrix.
struct NoiseMatrixSpec {
    int n = 0;
    double gamma = 0.0;  // +inf disables the noise entirely
    NoiseEnsemble ensemble = NoiseEnsemble::complex_gaussian;
    uint64_t seed = 0;
};

inline ComplexMatrix sample_noise_matrix(const NoiseMatrixSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("sample_noise_matrix: n must be >= 1");
    ComplexMatrix x(spec.n);
    if (std::isinf(spec.gamma) && spec.gamma > 0.0) return x;  // noise disabled
    const double scale = std::pow(static_cast<double>(spec.n), -spec.gamma) / std::sqrt(static_cast<double>(spec.n));
    if (scale == 0.0) return x;
    for (int i = 0; i < spec.n; ++i) {
        for (int j = 0; j < spec.n; ++j) {
            CounterGen g = entry_gen(spec.seed, static_cast<uint64_t>(i), static_cast<uint64_t>(j));
            x(i, j) = scale * sample_scalar(spec.ensemble, g);
        }
    }
    x.require_finite();
    return x;
}

}  // namespace esdlab
