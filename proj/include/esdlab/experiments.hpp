#pragma once

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "esdlab/complex_matrix.hpp"
#include "esdlab/eigensolver.hpp"
#include "esdlab/ensembles.hpp"
#include "esdlab/esd.hpp"
#include "esdlab/replacement.hpp"
#include "esdlab/stability.hpp"
#include "esdlab/svg.hpp"
#include "esdlab/util.hpp"

namespace esdlab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string experiment;
    std::vector<int> n_ladder;
    std::string b_rule;  // n-minus-1 | sqrt-n | loglog-n | fixed:<k> | <k>
    double gamma = 2.0;  // +inf disables the noise
    std::vector<std::string> ensembles;
    int seed_count = 20;
    uint64_t seed_base = 1;
    std::vector<Complex> z_grid;  // empty = experiment default
    std::string out_dir = "out";
    int jobs = 0;  // 0 = hardware concurrency
    std::string dump_matrix_path;
};

// ---------------------------------------------------------------------
// Parsing helpers.

inline std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            std::size_t used = 0;
            const int v = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("bad integer list entry '" + tok + "'");
        }
    }
    if (out.empty()) throw ConfigError("empty integer list");
    return out;
}

inline std::vector<std::string> parse_name_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

inline std::vector<Complex> parse_z_list(const std::string& s) {
    std::vector<Complex> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            out.push_back(parse_complex_token(tok));
        } catch (const std::exception& e) {
            throw ConfigError(std::string("bad z token '") + tok + "': " + e.what());
        }
    }
    return out;
}

inline double parse_gamma(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad gamma '" + s + "'");
    }
}

/// Flat key=value config file; '#' starts a comment.
inline std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto notspace = [](unsigned char c) { return !std::isspace(c); };
        line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
        line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

inline void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "experiment") cfg.experiment = value;
    else if (key == "n") cfg.n_ladder = parse_int_list(value);
    else if (key == "b") cfg.b_rule = value;
    else if (key == "gamma") cfg.gamma = parse_gamma(value);
    else if (key == "ensembles") cfg.ensembles = parse_name_list(value);
    else if (key == "seeds") cfg.seed_count = std::stoi(value);
    else if (key == "seed_base") cfg.seed_base = std::stoull(value);
    else if (key == "z_grid") cfg.z_grid = parse_z_list(value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "jobs") cfg.jobs = std::stoi(value);
    else throw ConfigError("unknown config key '" + key + "'");
}

inline int resolve_b(const std::string& rule, int n) {
    int b = 0;
    if (rule == "n-minus-1") {
        b = n - 1;
    } else if (rule == "sqrt-n") {
        b = static_cast<int>(std::sqrt(static_cast<double>(n)));
    } else if (rule == "loglog-n") {
        b = std::max(1, static_cast<int>(std::log(std::log(static_cast<double>(n)))));
    } else {
        std::string digits = rule;
        if (rule.rfind("fixed:", 0) == 0) digits = rule.substr(6);
        try {
            std::size_t used = 0;
            b = std::stoi(digits, &used);
            if (used != digits.size()) throw std::invalid_argument(digits);
        } catch (const std::exception&) {
            throw ConfigError("bad b rule '" + rule + "' (want n-minus-1|sqrt-n|loglog-n|fixed:<k>)");
        }
    }
    if (b < 1 || b >= n) throw ConfigError("b rule '" + rule + "' gives b=" + std::to_string(b) +
                                           " outside [1, n-1] for n=" + std::to_string(n));
    return b;
}

/// 12 points: moduli {0.3, 0.7, 1.3} x angles {0, pi/3, 2pi/3, pi},
/// straddling the unit circle without touching it.
inline std::vector<Complex> default_z_grid() {
    std::vector<Complex> zs;
    for (double r : {0.3, 0.7, 1.3}) {
        for (double th : {0.0, M_PI / 3.0, 2.0 * M_PI / 3.0, M_PI}) {
            zs.emplace_back(r * std::cos(th), r * std::sin(th));
        }
    }
    return zs;
}

inline std::vector<uint64_t> seed_list(const ExperimentConfig& cfg) {
    std::vector<uint64_t> seeds;
    for (int i = 0; i < cfg.seed_count; ++i) seeds.push_back(cfg.seed_base + static_cast<uint64_t>(i));
    return seeds;
}

inline void validate_common(const ExperimentConfig& cfg) {
    if (cfg.n_ladder.empty()) throw ConfigError("no n values configured");
    for (int n : cfg.n_ladder) {
        if (n < 1) throw ConfigError("n must be >= 1");
    }
    for (std::size_t i = 1; i < cfg.n_ladder.size(); ++i) {
        if (cfg.n_ladder[i] <= cfg.n_ladder[i - 1]) {
            throw ConfigError("n ladder must be strictly increasing");
        }
    }
    for (const std::string& e : cfg.ensembles) {
        try {
            parse_ensemble(e);
        } catch (const std::exception& ex) {
            throw ConfigError(ex.what());
        }
    }
    if (cfg.seed_count < 1) throw ConfigError("need at least one seed");
}

/// Hash of the result-affecting config fields; out/jobs do not change
/// the numbers and stay out of the hash.
inline std::string config_hash(const ExperimentConfig& cfg) {
    std::ostringstream s;
    s << "experiment=" << cfg.experiment << '\n';
    s << "n=";
    for (std::size_t i = 0; i < cfg.n_ladder.size(); ++i) s << (i ? "," : "") << cfg.n_ladder[i];
    s << '\n';
    s << "b=" << cfg.b_rule << '\n';
    s << "gamma=" << (std::isinf(cfg.gamma) ? std::string("inf") : fmt_double(cfg.gamma, "%.17g")) << '\n';
    s << "ensembles=";
    for (std::size_t i = 0; i < cfg.ensembles.size(); ++i) s << (i ? "," : "") << cfg.ensembles[i];
    s << '\n';
    s << "seeds=" << cfg.seed_count << '\n';
    s << "seed_base=" << cfg.seed_base << '\n';
    s << "z_grid=";
    for (std::size_t i = 0; i < cfg.z_grid.size(); ++i) {
        s << (i ? "," : "") << format_complex_token(cfg.z_grid[i]);
    }
    s << '\n';
    return hex64(fnv1a64(s.str()));
}

/// Spectrum of base + n^{-gamma} X for one seed; gamma = inf runs the
/// unperturbed matrix.
inline Spectrum add_noise_and_solve(const ComplexMatrix& base, double gamma, NoiseEnsemble ens,
                                    uint64_t seed) {
    if (std::isinf(gamma) && gamma > 0.0) return eigenvalues(base);
    return eigenvalues(add_scaled(base, sample_noise_matrix({base.dim(), gamma, ens, seed}), 1.0));
}

namespace detail {

inline std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

inline std::string config_comment(const ExperimentConfig& cfg) {
    return "# config " + config_hash(cfg) + "\n";
}

inline void reject_unit_circle_z(const std::vector<Complex>& zs) {
    for (Complex z : zs) {
        if (on_unit_circle(z)) {
            throw ConfigError("z grid entry " + format_complex_token(z) + " lies on |z| = 1");
        }
    }
}

inline void maybe_dump_base(const ExperimentConfig& cfg, const ComplexMatrix& base) {
    if (!cfg.dump_matrix_path.empty()) write_matrix_file(base, cfg.dump_matrix_path);
}

}  // namespace detail

// ---------------------------------------------------------------------
// figure1: eigenvalue scatters of T_n plus tiny noise, unit circle
// overlaid, plus the median | |lambda| - 1 | statistic per (n, ensemble).

struct Figure1Stat {
    int n = 0;
    std::string ensemble;
    double median_abs_radius_minus_1 = 0.0;
    int converged_trials = 0;
    int total_trials = 0;
};

inline std::vector<Figure1Stat> run_figure1(const ExperimentConfig& cfg) {
    validate_common(cfg);
    if (cfg.ensembles.empty()) throw ConfigError("figure1 needs at least one ensemble");
    const std::vector<uint64_t> seeds = seed_list(cfg);
    const int jobs = cfg.jobs > 0 ? cfg.jobs : default_jobs();

    std::vector<Figure1Stat> stats;
    bool dumped = false;
    for (const int n : cfg.n_ladder) {
        const ComplexMatrix base = build_Tn(n);
        if (!dumped) {
            detail::maybe_dump_base(cfg, base);
            dumped = true;
        }
        for (const std::string& ens_name : cfg.ensembles) {
            const NoiseEnsemble ens = parse_ensemble(ens_name);
            std::vector<Spectrum> specs(seeds.size());
            parallel_for(static_cast<int>(seeds.size()), jobs, [&](int i) {
                specs[i] = add_noise_and_solve(base, cfg.gamma, ens, seeds[i]);
            });

            ESD pooled;
            int converged = 0;
            for (const Spectrum& s : specs) {
                if (!s.converged) continue;
                ++converged;
                pooled.atoms.insert(pooled.atoms.end(), s.eigenvalues.begin(), s.eigenvalues.end());
            }
            Figure1Stat st;
            st.n = n;
            st.ensemble = ens_name;
            st.converged_trials = converged;
            st.total_trials = static_cast<int>(seeds.size());
            if (!pooled.atoms.empty()) {
                std::vector<double> dev;
                dev.reserve(pooled.atoms.size());
                for (const Complex& a : pooled.atoms) dev.push_back(std::abs(std::abs(a) - 1.0));
                st.median_abs_radius_minus_1 = median(dev);
            }
            stats.push_back(st);

            const std::string tag = "figure1_scatter_n" + std::to_string(n) + "_" + ens_name;
            write_text_file(detail::out_path(cfg, tag + ".csv"),
                            detail::config_comment(cfg) + esd_to_csv(pooled));
            write_text_file(detail::out_path(cfg, tag + ".svg"), scatter_svg(pooled, true));
        }
    }

    std::ostringstream sum;
    sum << detail::config_comment(cfg);
    sum << "n,ensemble,median_abs_radius_minus_1,converged_trials,total_trials\n";
    for (const Figure1Stat& st : stats) {
        sum << st.n << ',' << st.ensemble << ',' << fmt_double(st.median_abs_radius_minus_1) << ','
            << st.converged_trials << ',' << st.total_trials << '\n';
    }
    write_text_file(detail::out_path(cfg, "figure1_summary.csv"), sum.str());
    return stats;
}

// ---------------------------------------------------------------------
// small-blocks / large-blocks: radial distance of the perturbed ESD to
// the experiment's limiting reference measure.

struct BlockTrial {
    int n = 0;
    int b = 0;
    std::string ensemble;
    uint64_t seed = 0;
    double distance = 0.0;
    bool converged = true;
};

struct BlockSummary {
    int n = 0;
    int b = 0;
    std::string ensemble;
    double median_distance = 0.0;
    int converged_trials = 0;
    int total_trials = 0;
    double chi2_angular = 0.0;  // large-blocks only
    bool chi2_pass = true;
};

namespace detail {

inline std::vector<BlockSummary> run_block_experiment(const ExperimentConfig& cfg,
                                                      ReferenceMeasure ref, bool angular_check,
                                                      const std::string& prefix) {
    const std::string trials_file = prefix + "_trials.csv";
    const std::string summary_file = prefix + "_summary.csv";
    validate_common(cfg);
    if (cfg.ensembles.empty()) throw ConfigError("block experiment needs at least one ensemble");
    const std::vector<uint64_t> seeds = seed_list(cfg);
    const int jobs = cfg.jobs > 0 ? cfg.jobs : default_jobs();

    std::vector<BlockTrial> trials;
    std::vector<BlockSummary> summaries;
    bool dumped = false;
    for (const int n : cfg.n_ladder) {
        const int b = resolve_b(cfg.b_rule, n);
        const ComplexMatrix base = (b == n - 1) ? build_Tn(n) : build_Tbn(BlockSpec(n, b));
        if (!dumped) {
            maybe_dump_base(cfg, base);
            dumped = true;
        }
        for (const std::string& ens_name : cfg.ensembles) {
            const NoiseEnsemble ens = parse_ensemble(ens_name);
            std::vector<Spectrum> specs(seeds.size());
            parallel_for(static_cast<int>(seeds.size()), jobs, [&](int i) {
                specs[i] = add_noise_and_solve(base, cfg.gamma, ens, seeds[i]);
            });

            BlockSummary sum;
            sum.n = n;
            sum.b = b;
            sum.ensemble = ens_name;
            sum.total_trials = static_cast<int>(seeds.size());
            std::vector<double> dists;
            ESD pooled;
            for (std::size_t i = 0; i < specs.size(); ++i) {
                BlockTrial t;
                t.n = n;
                t.b = b;
                t.ensemble = ens_name;
                t.seed = seeds[i];
                t.converged = specs[i].converged;
                if (t.converged) {
                    const ESD mu = esd_from_spectrum(specs[i]);
                    t.distance = radial_cdf_distance(mu, ref);
                    dists.push_back(t.distance);
                    pooled.atoms.insert(pooled.atoms.end(), mu.atoms.begin(), mu.atoms.end());
                    ++sum.converged_trials;
                } else {
                    t.distance = std::numeric_limits<double>::quiet_NaN();
                }
                trials.push_back(t);
            }
            sum.median_distance =
                dists.empty() ? std::numeric_limits<double>::quiet_NaN() : median(dists);
            if (angular_check && !pooled.atoms.empty()) {
                // 8-bin chi-square on the atom arguments; gate at the
                // 0.99 quantile of chi2 with 7 dof.
                int counts[8] = {0};
                for (const Complex& a : pooled.atoms) {
                    int k = static_cast<int>((std::arg(a) + M_PI) / (2.0 * M_PI) * 8.0);
                    k = std::clamp(k, 0, 7);
                    ++counts[k];
                }
                const double expect = pooled.atoms.size() / 8.0;
                double chi2 = 0.0;
                for (int k = 0; k < 8; ++k) {
                    const double d = counts[k] - expect;
                    chi2 += d * d / expect;
                }
                sum.chi2_angular = chi2;
                sum.chi2_pass = chi2 <= 18.475;
            }
            summaries.push_back(sum);
        }
    }

    std::ostringstream tcsv;
    tcsv << config_comment(cfg);
    tcsv << "n,b,ensemble,seed,distance,converged\n";
    for (const BlockTrial& t : trials) {
        tcsv << t.n << ',' << t.b << ',' << t.ensemble << ',' << t.seed << ','
             << fmt_double(t.distance) << ',' << (t.converged ? 1 : 0) << '\n';
    }
    write_text_file(out_path(cfg, trials_file), tcsv.str());

    std::ostringstream scsv;
    scsv << config_comment(cfg);
    scsv << "n,b,ensemble,median_distance,converged_trials,total_trials";
    if (angular_check) scsv << ",chi2_angular_8bin,chi2_pass";
    scsv << '\n';
    for (const BlockSummary& s : summaries) {
        scsv << s.n << ',' << s.b << ',' << s.ensemble << ',' << fmt_double(s.median_distance) << ','
             << s.converged_trials << ',' << s.total_trials;
        if (angular_check) scsv << ',' << fmt_double(s.chi2_angular) << ',' << (s.chi2_pass ? 1 : 0);
        scsv << '\n';
    }
    write_text_file(out_path(cfg, summary_file), scsv.str());

    // Per-(n, ensemble) distance report in the metric,reference,value format.
    for (const BlockSummary& s : summaries) {
        std::ostringstream d;
        d << config_comment(cfg) << "metric,reference,value\n"
          << distance_csv_row("radial_cdf", reference_name(ref), s.median_distance);
        write_text_file(out_path(cfg, prefix + "_distances_n" + std::to_string(s.n) + "_" + s.ensemble +
                                          ".csv"),
                        d.str());
    }
    return summaries;
}

}  // namespace detail

inline std::vector<BlockSummary> run_small_blocks(ExperimentConfig cfg) {
    if (cfg.b_rule.empty()) cfg.b_rule = "fixed:2";
    if (cfg.b_rule.rfind("fixed:", 0) == 0 || cfg.b_rule.find_first_not_of("0123456789") == std::string::npos) {
        std::cerr << "note: fixed b accepted for small-blocks; any fixed b is o(log n)\n";
    } else if (cfg.b_rule != "loglog-n") {
        std::cerr << "warning: b rule '" << cfg.b_rule << "' is outside the small-block regime\n";
    }
    return detail::run_block_experiment(cfg, ReferenceMeasure::dirac_zero, false, "small_blocks");
}

inline std::vector<BlockSummary> run_large_blocks(ExperimentConfig cfg) {
    if (cfg.b_rule.empty()) cfg.b_rule = "n-minus-1";
    if (cfg.b_rule == "loglog-n" || cfg.b_rule.rfind("fixed:", 0) == 0) {
        std::cerr << "warning: b rule '" << cfg.b_rule << "' is outside the large-block regime\n";
    }
    return detail::run_block_experiment(cfg, ReferenceMeasure::unit_circle_uniform, true,
                                        "large_blocks");
}

// ---------------------------------------------------------------------
// stability: numeric vs closed-form stability of T_{b,n} + zI row sets,
// plus the main-theorem hypothesis check. Deterministic.

struct StabilityRow {
    Complex z;
    double eps_superdiag = 0.0;
    double closed_superdiag = 0.0;
    double eps_all_rows = 0.0;
    double closed_all_rows = 0.0;
    MainthmZReport mainthm;
};

inline std::vector<StabilityRow> run_stability_report(ExperimentConfig cfg) {
    if (cfg.b_rule.empty()) cfg.b_rule = "fixed:4";
    if (cfg.z_grid.empty()) cfg.z_grid = default_z_grid();
    validate_common(cfg);
    detail::reject_unit_circle_z(cfg.z_grid);

    const int n = cfg.n_ladder.front();
    const int b = resolve_b(cfg.b_rule, n);
    const BlockSpec spec(n, b);
    const ComplexMatrix base = build_Tbn(spec);
    detail::maybe_dump_base(cfg, base);

    std::vector<int> superdiag_rows;  // 1-based rows of the form z e_i + e_{i+1}
    const std::vector<int> pattern = spec.superdiagonal_pattern();
    for (int i = 1; i <= n - 1; ++i) {
        if (pattern[i - 1]) superdiag_rows.push_back(i);
    }

    const std::vector<MainthmZReport> mainthm = check_mainthm_hypotheses(base, cfg.gamma, cfg.z_grid);

    std::vector<StabilityRow> rows;
    for (std::size_t zi = 0; zi < cfg.z_grid.size(); ++zi) {
        const Complex z = cfg.z_grid[zi];
        const ComplexMatrix shifted = shift(base, z);

        StabilityRow row;
        row.z = z;
        const StabilityReport rep_super = epsilon_stability(rows_subset(shifted, superdiag_rows));
        const StabilityReport rep_all = epsilon_stability(all_rows(shifted));
        row.eps_superdiag = rep_super.epsilon;
        row.closed_superdiag = closed_form_superdiag(z);
        row.eps_all_rows = rep_all.epsilon;
        row.closed_all_rows = closed_form_all_rows(z, b);
        row.mainthm = mainthm[zi];
        rows.push_back(row);

        write_text_file(detail::out_path(cfg, "stability_superdiag_z" + std::to_string(zi) + ".csv"),
                        detail::config_comment(cfg) + stability_report_to_csv(rep_super));
        write_text_file(detail::out_path(cfg, "stability_allrows_z" + std::to_string(zi) + ".csv"),
                        detail::config_comment(cfg) + stability_report_to_csv(rep_all));
    }

    std::ostringstream sum;
    sum << detail::config_comment(cfg);
    sum << "z_re,z_im,eps_superdiag,closedform_superdiag,eps_allrows,closedform_allrows,"
           "mainthm_full_eps,mainthm_full_ratio,mainthm_best_rows,mainthm_best_eps,"
           "mainthm_best_ratio,mainthm_satisfied\n";
    for (const StabilityRow& r : rows) {
        sum << fmt_double(r.z.real()) << ',' << fmt_double(r.z.imag()) << ','
            << fmt_double(r.eps_superdiag) << ',' << fmt_double(r.closed_superdiag) << ','
            << fmt_double(r.eps_all_rows) << ',' << fmt_double(r.closed_all_rows) << ','
            << fmt_double(r.mainthm.full_epsilon) << ',' << fmt_double(r.mainthm.full_ratio) << ','
            << r.mainthm.best_rows << ',' << fmt_double(r.mainthm.best_epsilon) << ','
            << fmt_double(r.mainthm.best_ratio) << ',' << (r.mainthm.satisfied ? 1 : 0) << '\n';
    }
    write_text_file(detail::out_path(cfg, "stability_summary.csv"), sum.str());
    return rows;
}

// ---------------------------------------------------------------------
// replacement: log-determinant gap diagnostic between two ensembles.

struct ReplacementSummaryRow {
    int n = 0;
    Complex z;
    double median_gap = 0.0;
    int trials = 0;
    int singular_trials = 0;
};

inline std::vector<ReplacementSummaryRow> run_replacement(ExperimentConfig cfg) {
    if (cfg.b_rule.empty()) cfg.b_rule = "n-minus-1";
    if (cfg.z_grid.empty()) cfg.z_grid = default_z_grid();
    validate_common(cfg);
    detail::reject_unit_circle_z(cfg.z_grid);
    if (cfg.ensembles.size() != 2) throw ConfigError("replacement needs exactly two ensembles");
    const NoiseEnsemble ens_a = parse_ensemble(cfg.ensembles[0]);
    const NoiseEnsemble ens_b = parse_ensemble(cfg.ensembles[1]);
    const std::vector<uint64_t> seeds = seed_list(cfg);
    const int jobs = cfg.jobs > 0 ? cfg.jobs : default_jobs();
    const bool in_regime = cfg.gamma > 1.5;
    if (!in_regime) std::cerr << "note: gamma=" << cfg.gamma << " is outside theorem hypotheses\n";

    std::vector<ReplacementSummaryRow> summary;
    bool dumped = false;
    for (const int n : cfg.n_ladder) {
        const int b = resolve_b(cfg.b_rule, n);
        const ComplexMatrix base = (b == n - 1) ? build_Tn(n) : build_Tbn(BlockSpec(n, b));
        if (!dumped) {
            detail::maybe_dump_base(cfg, base);
            dumped = true;
        }

        // One diagnostic per seed, merged in seed order.
        std::vector<ReplacementDiagnostic> parts(seeds.size());
        parallel_for(static_cast<int>(seeds.size()), jobs, [&](int i) {
            parts[i] = replacement_diagnostic(base, cfg.gamma, ens_a, ens_b, cfg.z_grid, {seeds[i]});
        });
        ReplacementDiagnostic diag;
        diag.n = n;
        diag.z_grid = cfg.z_grid;
        diag.seeds = seeds;
        for (const ReplacementDiagnostic& p : parts) {
            diag.trials.insert(diag.trials.end(), p.trials.begin(), p.trials.end());
            diag.cond_frob_a = std::max(diag.cond_frob_a, p.cond_frob_a);
            diag.cond_frob_b = std::max(diag.cond_frob_b, p.cond_frob_b);
            diag.singular_trials += p.singular_trials;
        }

        write_text_file(detail::out_path(cfg, "replacement_trials_n" + std::to_string(n) + ".csv"),
                        detail::config_comment(cfg) + replacement_trials_to_csv(diag));

        const std::vector<double> medians = per_z_median_gap(diag);
        for (std::size_t zi = 0; zi < cfg.z_grid.size(); ++zi) {
            ReplacementSummaryRow row;
            row.n = n;
            row.z = cfg.z_grid[zi];
            row.median_gap = medians[zi];
            int singular = 0;
            for (std::size_t t = zi; t < diag.trials.size(); t += cfg.z_grid.size()) {
                if (!diag.trials[t].gap) ++singular;
            }
            row.trials = static_cast<int>(seeds.size());
            row.singular_trials = singular;
            summary.push_back(row);
        }

        std::ostringstream cond;
        cond << detail::config_comment(cfg);
        cond << "n,cond_frob_a,cond_frob_b\n"
             << n << ',' << fmt_double(diag.cond_frob_a) << ',' << fmt_double(diag.cond_frob_b) << '\n';
        write_text_file(detail::out_path(cfg, "replacement_cond_n" + std::to_string(n) + ".csv"),
                        cond.str());
    }

    std::ostringstream sum;
    sum << detail::config_comment(cfg);
    sum << "n,z_re,z_im,median_gap,trials,singular_trials,gamma_regime\n";
    for (const ReplacementSummaryRow& r : summary) {
        sum << r.n << ',' << fmt_double(r.z.real()) << ',' << fmt_double(r.z.imag()) << ','
            << fmt_double(r.median_gap) << ',' << r.trials << ',' << r.singular_trials << ','
            << (in_regime ? "ok" : "outside theorem hypotheses") << '\n';
    }
    write_text_file(detail::out_path(cfg, "replacement_summary.csv"), sum.str());
    return summary;
}

// ---------------------------------------------------------------------
// manystable: Monte Carlo check that most rows of a random matrix are
// well separated from the span of the others.

struct ManystableSummaryRow {
    Complex z;
    int pass_count = 0;
    int total = 0;
};

inline std::vector<ManystableSummaryRow> run_manystable(ExperimentConfig cfg) {
    if (cfg.z_grid.empty()) cfg.z_grid = {Complex(0.0, 0.0), Complex(2.0, 0.0)};
    if (cfg.ensembles.empty()) cfg.ensembles = {"cgauss"};
    validate_common(cfg);
    if (!cfg.dump_matrix_path.empty()) {
        throw ConfigError("--dump-matrix is not available for manystable (the base is random)");
    }
    const int n = cfg.n_ladder.front();
    const NoiseEnsemble ens = parse_ensemble(cfg.ensembles.front());
    const std::vector<uint64_t> seeds = seed_list(cfg);
    const int jobs = cfg.jobs > 0 ? cfg.jobs : default_jobs();

    const int trials_count = static_cast<int>(cfg.z_grid.size() * seeds.size());
    std::vector<ManystableReport> reports(trials_count);
    parallel_for(trials_count, jobs, [&](int t) {
        const std::size_t zi = t / seeds.size();
        const std::size_t si = t % seeds.size();
        reports[t] = verify_manystable(n, ens, cfg.z_grid[zi], seeds[si]);
    });

    std::ostringstream tcsv;
    tcsv << detail::config_comment(cfg);
    tcsv << "z_re,z_im,seed,tested_rows,threshold,min_distance,pass\n";
    std::vector<ManystableSummaryRow> summary(cfg.z_grid.size());
    for (int t = 0; t < trials_count; ++t) {
        const ManystableReport& r = reports[t];
        const std::size_t zi = t / seeds.size();
        summary[zi].z = r.z;
        summary[zi].total += 1;
        summary[zi].pass_count += r.pass ? 1 : 0;
        tcsv << fmt_double(r.z.real()) << ',' << fmt_double(r.z.imag()) << ',' << r.seed << ','
             << r.tested_rows << ',' << fmt_double(r.threshold) << ',' << fmt_double(r.min_distance)
             << ',' << (r.pass ? 1 : 0) << '\n';
    }
    write_text_file(detail::out_path(cfg, "manystable_trials.csv"), tcsv.str());

    std::ostringstream sum;
    sum << detail::config_comment(cfg);
    sum << "z_re,z_im,pass_count,total\n";
    for (const ManystableSummaryRow& r : summary) {
        sum << fmt_double(r.z.real()) << ',' << fmt_double(r.z.imag()) << ',' << r.pass_count << ','
            << r.total << '\n';
    }
    write_text_file(detail::out_path(cfg, "manystable_summary.csv"), sum.str());
    return summary;
}

}  // namespace esdlab
